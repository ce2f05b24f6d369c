#pragma once

#include <map>
#include <span>
#include <vector>

#include "pcehinf/common.hpp"

namespace pcehinf {

/// Matrix-valued affine function of scalar decision variables:
/// E(x) = E_0 + Σ_v x_v E_v.
class AffineExpr {
 public:
  using Terms = std::map<int, Matrix>;

  AffineExpr() = default;
  AffineExpr(int rows, int cols) : constant_(Matrix::Zero(rows, cols)) {}
  explicit AffineExpr(const Matrix& constant) : constant_(constant) {}
  /// 1×1 constant.
  static AffineExpr scalar(double v) { return AffineExpr(Matrix::Constant(1, 1, v)); }

  /// Single variable times a fixed coefficient matrix.
  static AffineExpr term(int var, const Matrix& coeff);

  int rows() const { return static_cast<int>(constant_.rows()); }
  int cols() const { return static_cast<int>(constant_.cols()); }
  const Matrix& constant() const { return constant_; }
  const Terms& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  Matrix value(std::span<const double> x) const;
  AffineExpr transpose() const;

  AffineExpr& operator+=(const AffineExpr& o);
  AffineExpr& operator-=(const AffineExpr& o);
  AffineExpr& operator*=(double s);
  AffineExpr operator-() const;

  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }
  friend AffineExpr operator*(const Matrix& m, const AffineExpr& a);
  friend AffineExpr operator*(const AffineExpr& a, const Matrix& m);

  /// Block matrix from a grid of expressions; row heights and column widths
  /// must agree across the grid.
  static AffineExpr blocks(const std::vector<std::vector<AffineExpr>>& grid);

 private:
  Matrix constant_;
  Terms terms_;
};

/// E + Eᵀ.
AffineExpr herm(const AffineExpr& e);

}  // namespace pcehinf
