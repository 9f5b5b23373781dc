#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace stocksel {

enum class ErrorKind {
  // data ingestion
  MalformedRow,
  NonMonotonicTime,
  FrequencyMismatch,
  IncompleteSession,
  EmptyInput,
  // featurization
  ZeroOpen,
  TooFewSamples,
  DegenerateSample,
  TooFewDates,
  NonFiniteInput,
  // tensor / training
  ShapeMismatch,
  GraphNotRecorded,
  InvalidConfig,
  EmptyDataset,
  DivergedLoss,
  // scoring / backtest
  InconsistentKeys,
  DuplicateInstrument,
  EmptyRange,
  EmptyCurve,
  MisalignedDates,
  // cli
  UnknownSuite,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Exit-code class for the CLI and C API: 1 data, 2 config, 3 runtime.
int status_class(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  Error(ErrorKind kind, std::size_t row, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
};

}  // namespace stocksel
