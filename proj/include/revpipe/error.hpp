#pragma once

#include <stdexcept>
#include <string>

namespace revpipe {

// Every declared failure mode of the pipeline. Exit-code mapping for the CLI
// lives in exit_code_for().
enum class ErrorKind {
  // corpus
  MissingFile,
  SchemaViolation,
  DuplicatePaperId,
  NoRoundsDetected,
  NoReviewersDetected,
  MalformedCsv,
  NegativeC3,
  // rubric
  OutOfRangeScore,
  UnknownRound,
  // extraction
  NoJsonFound,
  ParseError,
  RangeError,
  UnknownEnum,
  UnknownReviewer,
  BackendError,
  ExhaustedRetries,
  // metrics
  EmptyPairSet,
  NoResponses,
  EmptyField,
  MismatchedPaperId,
  // consensus
  NoRoundOnePairs,
  WrongReviewerCount,
  NoEligiblePapers,
  // stats
  LengthMismatch,
  TooFewPoints,
  ZeroVariance,
  RankZeroDesign,
  RowMismatch,
  NegativeInput,
  EmptyInput,
  EmptyGroup,
  OutOfRange,
  NoPairsOfType,
  // validation
  PaperSetMismatch,
  FewerThanTwoRuns,
  EmptyCorpus,
  TooFewPapers,
  EmptyTasks,
  InvalidTruthConfig,
  // report
  MissingImpact,
};

const char* error_kind_name(ErrorKind kind);

class PipelineError : public std::runtime_error {
 public:
  PipelineError(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        detail_(std::move(message)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// 2 = input error, 3 = empty-result error, 4 = backend error.
int exit_code_for(ErrorKind kind);

}  // namespace revpipe
