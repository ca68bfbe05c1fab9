#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgvec {

enum class ErrorCode {
  Io,
  EmptyCorpus,
  NumericalDivergence,
  VocabularyTooLarge,
  Format,
  EmptyPredicate,
  DegenerateVocabulary,
  InsufficientCandidates,
  DegenerateSplit,
  SkippedTriple,
  Flag,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kgvec
