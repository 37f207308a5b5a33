#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace drselect {

// Error groups; the CLI maps each group to a process exit code.
enum class ErrorCode : int {
  Parse = 2,                // malformed input file
  Schema = 3,               // structurally valid file, invalid content/columns
  Solver = 4,               // numerical failure in a fit
  SingularInformation = 5,  // analytic variance unavailable
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(ErrorCode::Parse, msg) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& msg) : Error(ErrorCode::Schema, msg) {}
};

struct NonFiniteError : Error {
  explicit NonFiniteError(const std::string& msg) : Error(ErrorCode::Solver, msg) {}
};

struct ConstantColumnError : Error {
  explicit ConstantColumnError(int column, const std::string& name = "")
      : Error(ErrorCode::Schema,
              "column " + std::to_string(column) +
                  (name.empty() ? "" : " (" + name + ")") +
                  " has zero sample variance"),
        column(column) {}
  int column;
};

struct EmptyArmError : Error {
  explicit EmptyArmError(int arm)
      : Error(ErrorCode::Schema,
              "treatment arm " + std::to_string(arm) + " has no observations"),
        arm(arm) {}
  int arm;
};

struct NotConvergedError : Error {
  explicit NotConvergedError(int max_iter)
      : Error(ErrorCode::Solver, "coordinate descent did not converge within " +
                                     std::to_string(max_iter) + " sweeps"),
        max_iter(max_iter) {}
  int max_iter;
};

struct EmptyGridError : Error {
  explicit EmptyGridError(const std::string& msg)
      : Error(ErrorCode::Solver, "invalid lambda grid: " + msg) {}
};

struct TooFewRowsError : Error {
  TooFewRowsError(long n, int folds)
      : Error(ErrorCode::Solver, "need at least " + std::to_string(folds) +
                                     " rows for " + std::to_string(folds) +
                                     "-fold cross-validation, got " +
                                     std::to_string(n)) {}
};

struct RankDeficientError : Error {
  explicit RankDeficientError(std::vector<int> cols)
      : Error(ErrorCode::Solver, describe(cols)), columns(std::move(cols)) {}
  std::vector<int> columns;

private:
  static std::string describe(const std::vector<int>& cols) {
    std::string s = "restricted design is rank deficient; collinear columns:";
    for (int c : cols) s += " " + std::to_string(c);
    return s;
  }
};

struct SingularInformationError : Error {
  explicit SingularInformationError(const std::string& msg)
      : Error(ErrorCode::SingularInformation, msg) {}
};

struct EmptyCellError : Error {
  explicit EmptyCellError(const std::string& cells)
      : Error(ErrorCode::Solver,
              "no successful replicate in cell(s): " + cells) {}
};

}  // namespace drselect
