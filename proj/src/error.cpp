#include "kgvec/error.hpp"

namespace kgvec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::NumericalDivergence: return "NumericalDivergence";
    case ErrorCode::VocabularyTooLarge: return "VocabularyTooLarge";
    case ErrorCode::Format: return "FormatError";
    case ErrorCode::EmptyPredicate: return "EmptyPredicate";
    case ErrorCode::DegenerateVocabulary: return "DegenerateVocabulary";
    case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::SkippedTriple: return "SkippedTriple";
    case ErrorCode::Flag: return "FlagError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace kgvec
