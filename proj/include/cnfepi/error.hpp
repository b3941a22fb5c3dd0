#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cnfepi {

enum class ErrorCode {
  // ontology
  SyntaxError,
  DuplicateConcept,
  DuplicateWord,
  EmptyOntology,
  NameCollision,
  // tagger / cnf / vectorize
  EmptyCorpus,
  UnknownTag,
  LengthMismatch,
  UnknownSymbol,
  // embed
  EmptyDocument,
  // learn
  DimensionMismatch,
  WrongLossKind,
  FingerprintMismatch,
  // eval
  EmptyInput,
  BadK,
  TooFewDatasets,
  NoPositives,
  UnlabeledData,
  // corpus
  ParseError,
  DuplicateId,
  MissingText,
  BadLabel,
  // generic
  InvalidArgument,
  ModelFormat,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// Input/usage errors (exit status 2 at the command line) as opposed to
// runtime failures such as unreadable files.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cnfepi
