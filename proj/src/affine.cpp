#include "pcehinf/affine.hpp"

namespace pcehinf {

AffineExpr AffineExpr::term(int var, const Matrix& coeff) {
  AffineExpr e(static_cast<int>(coeff.rows()), static_cast<int>(coeff.cols()));
  e.terms_.emplace(var, coeff);
  return e;
}

Matrix AffineExpr::value(std::span<const double> x) const {
  Matrix out = constant_;
  for (const auto& [v, m] : terms_) {
    require(v < static_cast<int>(x.size()), ErrorKind::DimensionMismatch,
            "variable vector too short for expression");
    out += x[v] * m;
  }
  return out;
}

AffineExpr AffineExpr::transpose() const {
  AffineExpr e(constant_.transpose());
  for (const auto& [v, m] : terms_) e.terms_.emplace(v, m.transpose());
  return e;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
  require(rows() == o.rows() && cols() == o.cols(), ErrorKind::DimensionMismatch,
          "affine expression sum shape mismatch");
  constant_ += o.constant_;
  for (const auto& [v, m] : o.terms_) {
    auto it = terms_.find(v);
    if (it == terms_.end())
      terms_.emplace(v, m);
    else
      it->second += m;
  }
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) { return *this += -o; }

AffineExpr& AffineExpr::operator*=(double s) {
  constant_ *= s;
  for (auto& [v, m] : terms_) m *= s;
  return *this;
}

AffineExpr AffineExpr::operator-() const {
  AffineExpr e = *this;
  return e *= -1.0;
}

AffineExpr operator*(const Matrix& m, const AffineExpr& a) {
  require(m.cols() == a.rows(), ErrorKind::DimensionMismatch, "affine product shape mismatch");
  AffineExpr e(m * a.constant_);
  for (const auto& [v, c] : a.terms_) e.terms_.emplace(v, m * c);
  return e;
}

AffineExpr operator*(const AffineExpr& a, const Matrix& m) {
  require(a.cols() == m.rows(), ErrorKind::DimensionMismatch, "affine product shape mismatch");
  AffineExpr e(a.constant_ * m);
  for (const auto& [v, c] : a.terms_) e.terms_.emplace(v, c * m);
  return e;
}

AffineExpr AffineExpr::blocks(const std::vector<std::vector<AffineExpr>>& grid) {
  require(!grid.empty() && !grid[0].empty(), ErrorKind::DimensionMismatch, "empty block grid");
  const size_t nr = grid.size(), nc = grid[0].size();
  std::vector<int> heights(nr), widths(nc), row0(nr + 1, 0), col0(nc + 1, 0);
  for (size_t r = 0; r < nr; ++r) {
    require(grid[r].size() == nc, ErrorKind::DimensionMismatch, "ragged block grid");
    heights[r] = grid[r][0].rows();
    row0[r + 1] = row0[r] + heights[r];
  }
  for (size_t c = 0; c < nc; ++c) {
    widths[c] = grid[0][c].cols();
    col0[c + 1] = col0[c] + widths[c];
  }
  AffineExpr out(row0[nr], col0[nc]);
  for (size_t r = 0; r < nr; ++r)
    for (size_t c = 0; c < nc; ++c) {
      const AffineExpr& b = grid[r][c];
      require(b.rows() == heights[r] && b.cols() == widths[c], ErrorKind::DimensionMismatch,
              "block grid entry has inconsistent shape");
      out.constant_.block(row0[r], col0[c], heights[r], widths[c]) = b.constant_;
      for (const auto& [v, m] : b.terms_) {
        auto it = out.terms_.find(v);
        if (it == out.terms_.end())
          it = out.terms_.emplace(v, Matrix::Zero(row0[nr], col0[nc])).first;
        it->second.block(row0[r], col0[c], heights[r], widths[c]) += m;
      }
    }
  return out;
}

AffineExpr herm(const AffineExpr& e) { return e + e.transpose(); }

}  // namespace pcehinf
