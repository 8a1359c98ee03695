#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcmclust {

/// Failure categories raised by the library. Each category maps onto one of
/// the CLI exit codes through `exit_code()`.
enum class Errc {
  // ingestion
  ParseError,
  Io,
  // matrix validation
  NotSquare,
  BadDiagonal,
  NonPositiveEntry,
  NonReciprocal,
  DisconnectedGraph,
  IncompleteMatrix,
  OrderMismatch,
  NoCommonComparisons,
  EmptyInput,
  LengthMismatch,
  DuplicateLabel,
  // numerical / solver
  NoConvergence,
  Infeasible,
  SearchBudgetExceeded,
  SingleCluster,
  DegenerateInput,
  // configuration
  MissingRandomIndex,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Process exit code for an error category: 2 parse, 3 validation, 4 solver, 5 config.
int exit_code(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pcmclust
