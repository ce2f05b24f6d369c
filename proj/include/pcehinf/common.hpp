#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pcehinf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  InvalidArgument = 2,
  DimensionMismatch = 3,
  DegreeOverflow = 4,
  UnsupportedDistribution = 5,
  QuadratureTooSmall = 6,
  UnstableSystem = 7,
  SolverFailure = 8,
  NoFeasibleStart = 9,
  InfeasibleAtHi = 10,
  Schema = 11,
  Io = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

/// I_n ⊗ M.
inline Matrix kron_identity(int n, const Matrix& m) {
  Matrix out = Matrix::Zero(n * m.rows(), n * m.cols());
  for (int i = 0; i < n; ++i) out.block(i * m.rows(), i * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

}  // namespace pcehinf
