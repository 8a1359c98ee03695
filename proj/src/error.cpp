#include "pcmclust/error.hpp"

namespace pcmclust {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::Io: return "Io";
    case Errc::NotSquare: return "NotSquare";
    case Errc::BadDiagonal: return "BadDiagonal";
    case Errc::NonPositiveEntry: return "NonPositiveEntry";
    case Errc::NonReciprocal: return "NonReciprocal";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::IncompleteMatrix: return "IncompleteMatrix";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::NoCommonComparisons: return "NoCommonComparisons";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::Infeasible: return "Infeasible";
    case Errc::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case Errc::SingleCluster: return "SingleCluster";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::MissingRandomIndex: return "MissingRandomIndex";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError:
    case Errc::Io:
      return 2;
    case Errc::NotSquare:
    case Errc::BadDiagonal:
    case Errc::NonPositiveEntry:
    case Errc::NonReciprocal:
    case Errc::DisconnectedGraph:
    case Errc::IncompleteMatrix:
    case Errc::OrderMismatch:
    case Errc::NoCommonComparisons:
    case Errc::EmptyInput:
    case Errc::LengthMismatch:
    case Errc::DuplicateLabel:
      return 3;
    case Errc::NoConvergence:
    case Errc::Infeasible:
    case Errc::SearchBudgetExceeded:
    case Errc::SingleCluster:
    case Errc::DegenerateInput:
      return 4;
    case Errc::MissingRandomIndex:
    case Errc::InvalidArgument:
      return 5;
  }
  return 1;
}

}  // namespace pcmclust
