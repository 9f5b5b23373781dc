#include "error.hpp"

namespace stocksel {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::FrequencyMismatch: return "FrequencyMismatch";
    case ErrorKind::IncompleteSession: return "IncompleteSession";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroOpen: return "ZeroOpen";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::DegenerateSample: return "DegenerateSample";
    case ErrorKind::TooFewDates: return "TooFewDates";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::GraphNotRecorded: return "GraphNotRecorded";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::InconsistentKeys: return "InconsistentKeys";
    case ErrorKind::DuplicateInstrument: return "DuplicateInstrument";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::MisalignedDates: return "MisalignedDates";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

int status_class(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::UnknownSuite:
      return 2;
    case ErrorKind::ShapeMismatch:
    case ErrorKind::GraphNotRecorded:
    case ErrorKind::DivergedLoss:
    case ErrorKind::IoError:
      return 3;
    default:
      return 1;
  }
}

namespace {
std::string compose(ErrorKind kind, const std::string& message) {
  std::string s = to_string(kind);
  if (!message.empty()) {
    s += ": ";
    s += message;
  }
  return s;
}

std::string compose_row(ErrorKind kind, std::size_t row, const std::string& message) {
  std::string s = to_string(kind);
  s += ": row ";
  s += std::to_string(row);
  if (!message.empty()) {
    s += ": ";
    s += message;
  }
  return s;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(compose(kind, message)), kind_(kind) {}

Error::Error(ErrorKind kind, std::size_t row, const std::string& message)
    : std::runtime_error(compose_row(kind, row, message)), kind_(kind), row_(row) {}

}  // namespace stocksel
