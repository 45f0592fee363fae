#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stressmat {

enum class ErrorKind {
  // malformed input or a violated precondition
  Parse,
  InvalidArgument,
  IdenticalLines,
  NotCollinear,
  NotDistinct,
  LengthMismatch,
  SingularMatrix,
  NotEquilibrium,
  ShapeMismatch,
  NotGeneric,
  SizeMismatch,
  ArityMismatch,
  CovectorsMissing,
  NotInPoset,
  ChainNotCollinear,
  SeedDegenerate,
  DegenerateEdge,
  // a structural verification did not hold
  ClassificationFailed,
  // budget or construction exhausted
  CapExceeded,
  TooLarge,
  ConstructionFailed,
  RetryBudgetExceeded,
  PlacementFailed,
};

std::string_view to_string(ErrorKind kind);

/// Exit status class used by the command line front end.
enum class ErrorClass { Validation = 1, Verification = 2, Budget = 3 };

ErrorClass classify(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stressmat
