#include "pcehinf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pcehinf {

int MultiIndex::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

double MultiIndex::eval(std::span<const double> xi) const {
  require(static_cast<int>(xi.size()) == dim(), ErrorKind::DimensionMismatch,
          "monomial evaluated at point of wrong dimension");
  double v = 1.0;
  for (int i = 0; i < dim(); ++i)
    for (int k = 0; k < exponents[i]; ++k) v *= xi[i];
  return v;
}

bool GradedLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(),
                                      a.exponents.begin(), a.exponents.end());
}

std::vector<MultiIndex> graded_multi_indices(int n, int p) {
  require(n >= 1 && p >= 0, ErrorKind::InvalidArgument, "graded_multi_indices: need n>=1, p>=0");
  std::vector<MultiIndex> out;
  std::vector<int> e(n, 0);
  // Enumerate compositions of each total degree d in descending-lex order.
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n - 1) {
      e[pos] = remaining;
      out.emplace_back(e);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      e[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  for (int d = 0; d <= p; ++d) rec(0, d);
  return out;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "multi-index dimension mismatch");
  MultiIndex r = a;
  for (int i = 0; i < a.dim(); ++i) r.exponents[i] += b.exponents[i];
  return r;
}

// ---- Polynomial -------------------------------------------------------------

Polynomial Polynomial::constant(int n_vars, double c) {
  Polynomial p(n_vars);
  p.add_term(MultiIndex::zero(n_vars), c);
  return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
  require(index >= 0 && index < n_vars, ErrorKind::InvalidArgument, "variable index out of range");
  Polynomial p(n_vars);
  MultiIndex s = MultiIndex::zero(n_vars);
  s.exponents[index] = 1;
  p.add_term(s, 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [s, c] : terms_) d = std::max(d, s.degree());
  return d;
}

void Polynomial::add_term(const MultiIndex& s, double c) {
  require(s.dim() == n_vars_, ErrorKind::DimensionMismatch, "polynomial term has wrong dimension");
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(s, c);
    return;
  }
  it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

double Polynomial::coefficient(const MultiIndex& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::eval(std::span<const double> xi) const {
  double v = 0.0;
  for (const auto& [s, c] : terms_) v += c * s.eval(xi);
  return v;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require(n_vars_ == o.n_vars_, ErrorKind::DimensionMismatch, "polynomial dimension mismatch");
  for (const auto& [s, c] : o.terms_) add_term(s, c);
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, v] : terms_) v *= c;
  return *this;
}

Polynomial operator-(Polynomial a, const Polynomial& b) {
  Polynomial nb = b;
  nb *= -1.0;
  return a += nb;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require(a.n_vars_ == b.n_vars_, ErrorKind::DimensionMismatch, "polynomial dimension mismatch");
  Polynomial r(a.n_vars_);
  for (const auto& [sa, ca] : a.terms_)
    for (const auto& [sb, cb] : b.terms_) r.add_term(sa + sb, ca * cb);
  return r;
}

Polynomial Polynomial::pow(int e) const {
  require(e >= 0, ErrorKind::InvalidArgument, "negative polynomial exponent");
  Polynomial r = constant(n_vars_, 1.0);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

// ---- PolynomialMatrix -------------------------------------------------------

PolynomialMatrix PolynomialMatrix::constant(const Matrix& m, int n_xi) {
  PolynomialMatrix pm(static_cast<int>(m.rows()), static_cast<int>(m.cols()), n_xi);
  if (m.size() > 0) pm.add_term(MultiIndex::zero(n_xi), m);
  return pm;
}

PolynomialMatrix PolynomialMatrix::from_entries(const std::vector<std::vector<Polynomial>>& entries,
                                                int n_xi) {
  const int rows = static_cast<int>(entries.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(entries[0].size());
  PolynomialMatrix pm(rows, cols, n_xi);
  for (int r = 0; r < rows; ++r) {
    require(static_cast<int>(entries[r].size()) == cols, ErrorKind::DimensionMismatch,
            "ragged polynomial matrix rows");
    for (int c = 0; c < cols; ++c) {
      require(entries[r][c].n_vars() == n_xi, ErrorKind::DimensionMismatch,
              "polynomial entry has wrong parameter dimension");
      for (const auto& [s, v] : entries[r][c].terms()) {
        Matrix unit = Matrix::Zero(rows, cols);
        unit(r, c) = v;
        pm.add_term(s, unit);
      }
    }
  }
  return pm;
}

int PolynomialMatrix::degree() const {
  int d = 0;
  for (const auto& [s, m] : terms_) d = std::max(d, s.degree());
  return d;
}

void PolynomialMatrix::add_term(const MultiIndex& s, const Matrix& coeff) {
  require(s.dim() == n_xi_, ErrorKind::DimensionMismatch, "matrix term has wrong dimension");
  require(coeff.rows() == rows_ && coeff.cols() == cols_, ErrorKind::DimensionMismatch,
          "matrix coefficient shape differs from polynomial matrix shape");
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    if (!coeff.isZero(0.0)) terms_.emplace(s, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.isZero(0.0)) terms_.erase(it);
}

Matrix PolynomialMatrix::eval(std::span<const double> xi) const {
  require(static_cast<int>(xi.size()) == n_xi_, ErrorKind::DimensionMismatch,
          "polynomial matrix evaluated at point of wrong dimension");
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& [s, m] : terms_) out += s.eval(xi) * m;
  return out;
}

Polynomial PolynomialMatrix::entry(int r, int c) const {
  Polynomial p(n_xi_);
  for (const auto& [s, m] : terms_) p.add_term(s, m(r, c));
  return p;
}

PolynomialMatrix& PolynomialMatrix::operator+=(const PolynomialMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_ && n_xi_ == o.n_xi_, ErrorKind::DimensionMismatch,
          "polynomial matrix sum shape mismatch");
  for (const auto& [s, m] : o.terms_) add_term(s, m);
  return *this;
}

PolynomialMatrix operator*(const PolynomialMatrix& a, const PolynomialMatrix& b) {
  require(a.cols_ == b.rows_ && a.n_xi_ == b.n_xi_, ErrorKind::DimensionMismatch,
          "polynomial matrix product shape mismatch");
  PolynomialMatrix r(a.rows_, b.cols_, a.n_xi_);
  for (const auto& [sa, ma] : a.terms_)
    for (const auto& [sb, mb] : b.terms_) r.add_term(sa + sb, ma * mb);
  return r;
}

PolynomialMatrix operator*(const Matrix& a, const PolynomialMatrix& b) {
  return PolynomialMatrix::constant(a, b.n_xi_) * b;
}

PolynomialMatrix operator*(const PolynomialMatrix& a, const Matrix& b) {
  return a * PolynomialMatrix::constant(b, a.n_xi_);
}

}  // namespace pcehinf
