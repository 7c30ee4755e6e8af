#include <fstream>

#include "revpipe/error.hpp"
#include "revpipe/keywords.hpp"
#include "revpipe/rubric.hpp"
#include "revpipe/text.hpp"

namespace revpipe {

namespace {

// Shipped marker lexicons. data/lexicons/*.txt carries the same bytes; a test
// keeps the two in sync so audits can diff the files.

constexpr const char* kEndorsement = R"(# Pure-endorsement markers. A comment classifies as Accept only when at least
# one of these matches and no criticism marker matches.
well written
well-written
well executed
excellent
outstanding
impressive
convincing
compelling
elegant
important contribution
valuable contribution
significant advance
timely
no further comments
no additional comments
no major concerns
no concerns
congratulate
congratulations
recommend publication
recommend acceptance
suitable for publication
happy to recommend
satisfied with the revisions
addressed all my comments
)";

constexpr const char* kCriticism = R"(# Criticism markers: any match vetoes the Accept classification.
however
unfortunately
concern
issue
problem
weak
unclear
confus
error
mistake
flaw
lack
missing
should
must
need to
needs to
fail
cannot
can not
question
doubt
not convincing
unconvincing
insufficient
incorrect
wrong
limitation
overstate
)";

constexpr const char* kCitation = R"(# Regular expressions (ECMAScript, case-insensitive) matched against
# whitespace-collapsed comment text. Any match means the reviewer named a
# specific reference (author-year, bracketed citation, or quoted title).
[a-z'-]+ et al\.?,? ?\(?(19|20)\d{2}\)?
[a-z'-]+ (and|&) [a-z'-]+,? ?\(?(19|20)\d{2}\)?
[a-z'-]+,? \((19|20)\d{2}\)
\[\d+([,; -]*\d+)*\]
"[^"]{12,}"
)";

constexpr const char* kConceptual = R"(# Conceptual: challenges to the premise or theoretical framing.
premise
conceptual
framework
theoretical
theory
assumption
assumes
framing
foundational
paradigm
underlying concept
)";

constexpr const char* kMethodology = R"(# Methodology: data collection and design.
method
sample
sampling
design
protocol
data collection
experiment
procedure
apparatus
instrument
calibration
control group
randomization
cohort
survey
)";

constexpr const char* kAnalysis = R"(# Analysis/Interpretation: statistical analysis and reading of results.
analysis
analyses
statistic
interpret
p-value
p value
regression
correlation
significance
estimate
estimation
confidence interval
effect size
endogeneity
causal
)";

constexpr const char* kLogic = R"(# Logic: inferential reasoning problems.
does not follow
do not follow
non sequitur
conclusion not supported
does not support the conclusion
do not support the conclusion
not support the conclusions
unsupported conclusion
circular argument
circular reasoning
contradict
inconsistent
logical
logically
cannot conclude
)";

constexpr const char* kNovelty = R"(# Novelty/Contribution: claimed novelty relative to prior work.
novel
novelty
originality
contribution
incremental
already known
already been shown
not new
prior work
previous work
differs from
advance over
what is new
)";

constexpr const char* kScope = R"(# Scope: generalizability and boundary conditions.
scope
generaliz
boundary
applicability
applies only
limited to
too broad
too narrow
restrict
)";

constexpr const char* kRebut = R"(# Rebut/Disagree: explicit disagreement while maintaining the position.
we disagree
we respectfully disagree
we respectfully maintain
we do not agree
cannot agree
we maintain our position
we maintain that
we stand by
the reviewer is mistaken
we must disagree
disagree with the reviewer
)";

constexpr const char* kClarify = R"(# Clarify Misunderstanding: the material was already in the manuscript.
already in the manuscript
already described
already stated
already discussed
already provided
already included
already present
already reported
already contains
as stated in
as described in
as noted in
as explained in
misunderstand
misunderstanding
misread
we had already
this is described in
)";

constexpr const char* kPartial = R"(# Partially Accept: one part accepted, another disputed.
partly agree
partially agree
agree in part
agree in principle
while we agree
although we agree
however we
however, we
we accept part
agree with some of
agree to some extent
)";

constexpr const char* kFuture = R"(# Promise for Future Work: change deferred beyond the current paper.
future work
future studies
future study
future research
in a future version
beyond the scope
outside the scope
defer
subsequent work
follow-up work
as a next step
)";

constexpr const char* kDissatisfaction = R"(# Later-round markers of continued dissatisfaction (unresolved issue).
does not address
do not address
did not address
issue persists
still not
still unclear
still unresolved
still missing
remain concerned
remains concerned
remains unaddressed
not been addressed
has not addressed
unresolved
my concern remains
same concern
not satisfied
unsatisfied
insufficiently addressed
fails to address
)";

std::string stopwords_file_content() {
  std::string out = "# Stopwords excluded from the content-word overlap rule.\n";
  for (const auto& w : text::stopwords()) out += w + "\n";
  return out;
}

// Supplementary keyword table, verbatim.

constexpr const char* kKeywordsOpinionStrength = R"(# High-value keywords: opinion strength.
reject
flaw
unsupported
defective
fatal
major concern
not convincing
cannot recommend
cannot support
cannot justify
serious concern
critical weakness
not valid
)";

constexpr const char* kKeywordsConstructiveness = R"(# High-value keywords: constructiveness.
specify
please clarify
please compare
should clarify
should be compared
please specify
should be specified
should be described
should be addressed
should be discussed
should be provided
should be shown
should be included
should be clarified
would be helpful to
)";

constexpr const char* kKeywordsCommentQuality = R"(# High-value keywords: comment quality.
confounding
mechanism
generalize
generalizability
reproduce
reproducibility
endogeneity
alternative explanation
causal claim
confounding factor
measurement error
robustness check
omitted variable
)";

constexpr const char* kKeywordsRevisionCost = R"(# High-value keywords: revision cost.
reanalyze
rebuild
recompute
additional experiments
new data
new experiments
major revision
conducted additional experiment
performed additional experiment
reanalyzed the data
collected new data
)";

void write_files(const std::filesystem::path& dir,
                 const std::map<std::string, std::string>& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw PipelineError(ErrorKind::MissingFile, "cannot write " + (dir / name).string());
    out << content;
  }
}

}  // namespace

const std::map<std::string, std::string>& builtin_lexicon_files() {
  static const std::map<std::string, std::string> kFiles = {
      {"opinion_endorsement.txt", kEndorsement},
      {"opinion_criticism.txt", kCriticism},
      {"opinion_citation.txt", kCitation},
      {"opinion_conceptual.txt", kConceptual},
      {"opinion_methodology.txt", kMethodology},
      {"opinion_analysis.txt", kAnalysis},
      {"opinion_logic.txt", kLogic},
      {"opinion_novelty.txt", kNovelty},
      {"opinion_scope.txt", kScope},
      {"response_rebut.txt", kRebut},
      {"response_clarify.txt", kClarify},
      {"response_partial.txt", kPartial},
      {"response_future.txt", kFuture},
      {"dissatisfaction.txt", kDissatisfaction},
      {"stopwords.txt", stopwords_file_content()},
  };
  return kFiles;
}

const Lexicons& Lexicons::builtin() {
  static const Lexicons kBuiltin = [] {
    Lexicons lex;
    lex.endorsement = parse_lexicon_text(kEndorsement);
    lex.criticism = parse_lexicon_text(kCriticism);
    lex.citation_patterns = parse_lexicon_text(kCitation);
    lex.conceptual = parse_lexicon_text(kConceptual);
    lex.methodology = parse_lexicon_text(kMethodology);
    lex.analysis = parse_lexicon_text(kAnalysis);
    lex.logic = parse_lexicon_text(kLogic);
    lex.novelty = parse_lexicon_text(kNovelty);
    lex.scope = parse_lexicon_text(kScope);
    lex.rebut = parse_lexicon_text(kRebut);
    lex.clarify = parse_lexicon_text(kClarify);
    lex.partial = parse_lexicon_text(kPartial);
    lex.future = parse_lexicon_text(kFuture);
    lex.dissatisfaction = parse_lexicon_text(kDissatisfaction);
    lex.compile();
    return lex;
  }();
  return kBuiltin;
}

void write_builtin_lexicons(const std::filesystem::path& dir) {
  write_files(dir, builtin_lexicon_files());
}

const std::map<std::string, std::string>& builtin_keyword_files() {
  static const std::map<std::string, std::string> kFiles = {
      {"opinion_strength.txt", kKeywordsOpinionStrength},
      {"constructiveness.txt", kKeywordsConstructiveness},
      {"comment_quality.txt", kKeywordsCommentQuality},
      {"revision_cost.txt", kKeywordsRevisionCost},
  };
  return kFiles;
}

const KeywordRuleSet& KeywordRuleSet::builtin() {
  static const KeywordRuleSet kBuiltin = [] {
    KeywordRuleSet rules;
    rules.patterns[Metric::OpinionStrength] = parse_lexicon_text(kKeywordsOpinionStrength);
    rules.patterns[Metric::Constructiveness] = parse_lexicon_text(kKeywordsConstructiveness);
    rules.patterns[Metric::CommentQuality] = parse_lexicon_text(kKeywordsCommentQuality);
    rules.patterns[Metric::RevisionCost] = parse_lexicon_text(kKeywordsRevisionCost);
    return rules;
  }();
  return kBuiltin;
}

KeywordRuleSet KeywordRuleSet::load_dir(const std::filesystem::path& dir) {
  KeywordRuleSet rules;
  for (Metric metric : kAllMetrics) {
    const auto path = dir / (std::string(metric_name(metric)) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError(ErrorKind::MissingFile, path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    rules.patterns[metric] = parse_lexicon_text(content);
  }
  return rules;
}

void write_builtin_keywords(const std::filesystem::path& dir) {
  write_files(dir, builtin_keyword_files());
}

}  // namespace revpipe
