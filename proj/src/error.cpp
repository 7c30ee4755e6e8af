#include "revpipe/error.hpp"

namespace revpipe {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::DuplicatePaperId: return "DuplicatePaperId";
    case ErrorKind::NoRoundsDetected: return "NoRoundsDetected";
    case ErrorKind::NoReviewersDetected: return "NoReviewersDetected";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::NegativeC3: return "NegativeC3";
    case ErrorKind::OutOfRangeScore: return "OutOfRangeScore";
    case ErrorKind::UnknownRound: return "UnknownRound";
    case ErrorKind::NoJsonFound: return "NoJsonFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::UnknownEnum: return "UnknownEnum";
    case ErrorKind::UnknownReviewer: return "UnknownReviewer";
    case ErrorKind::BackendError: return "BackendError";
    case ErrorKind::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorKind::EmptyPairSet: return "EmptyPairSet";
    case ErrorKind::NoResponses: return "NoResponses";
    case ErrorKind::EmptyField: return "EmptyField";
    case ErrorKind::MismatchedPaperId: return "MismatchedPaperId";
    case ErrorKind::NoRoundOnePairs: return "NoRoundOnePairs";
    case ErrorKind::WrongReviewerCount: return "WrongReviewerCount";
    case ErrorKind::NoEligiblePapers: return "NoEligiblePapers";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::RankZeroDesign: return "RankZeroDesign";
    case ErrorKind::RowMismatch: return "RowMismatch";
    case ErrorKind::NegativeInput: return "NegativeInput";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoPairsOfType: return "NoPairsOfType";
    case ErrorKind::PaperSetMismatch: return "PaperSetMismatch";
    case ErrorKind::FewerThanTwoRuns: return "FewerThanTwoRuns";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::TooFewPapers: return "TooFewPapers";
    case ErrorKind::EmptyTasks: return "EmptyTasks";
    case ErrorKind::InvalidTruthConfig: return "InvalidTruthConfig";
    case ErrorKind::MissingImpact: return "MissingImpact";
  }
  return "UnknownError";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BackendError:
    case ErrorKind::ExhaustedRetries:
      return 4;
    case ErrorKind::EmptyPairSet:
    case ErrorKind::NoResponses:
    case ErrorKind::EmptyField:
    case ErrorKind::NoRoundOnePairs:
    case ErrorKind::NoEligiblePapers:
    case ErrorKind::EmptyInput:
    case ErrorKind::EmptyGroup:
    case ErrorKind::NoPairsOfType:
    case ErrorKind::FewerThanTwoRuns:
    case ErrorKind::EmptyCorpus:
    case ErrorKind::TooFewPapers:
    case ErrorKind::EmptyTasks:
      return 3;
    default:
      return 2;
  }
}

}  // namespace revpipe
