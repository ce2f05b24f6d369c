#include "pcehinf/polychaos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pcehinf/kernels.hpp"

namespace pcehinf {
namespace {

// Three-term recurrence of the orthonormal family in the standardized
// variable t: t·φ_k = b_{k+1}φ_{k+1} + a_k φ_k + b_k φ_{k-1}. Both supported
// families are symmetric, so a_k = 0.
double recurrence_b(DistKind kind, int k) {
  if (kind == DistKind::Uniform) return k / std::sqrt(4.0 * k * k - 1.0);
  return std::sqrt(static_cast<double>(k));
}

// φ_0..φ_d at a standardized point.
void eval_1d(DistKind kind, int d, double t, double* out) {
  out[0] = 1.0;
  if (d == 0) return;
  out[1] = t / recurrence_b(kind, 1);
  for (int k = 1; k < d; ++k)
    out[k + 1] = (t * out[k] - recurrence_b(kind, k) * out[k - 1]) / recurrence_b(kind, k + 1);
}

// Maps ξ to the standardized variable: t = scale·ξ + shift.
std::pair<double, double> standardize(const ParamDist& p) {
  if (p.kind == DistKind::Uniform) {
    const double width = p.hi - p.lo;
    return {2.0 / width, -(p.lo + p.hi) / width};
  }
  return {1.0 / p.hi, -p.lo / p.hi};
}

// Monomial coefficients (in t) of φ_0..φ_d.
std::vector<std::vector<double>> coeffs_1d(DistKind kind, int d) {
  std::vector<std::vector<double>> c(d + 1, std::vector<double>(d + 1, 0.0));
  c[0][0] = 1.0;
  if (d == 0) return c;
  c[1][1] = 1.0 / recurrence_b(kind, 1);
  for (int k = 1; k < d; ++k) {
    const double bk = recurrence_b(kind, k);
    const double bn = recurrence_b(kind, k + 1);
    for (int m = 0; m <= d; ++m) {
      double v = -bk * c[k - 1][m];
      if (m > 0) v += c[k][m - 1];
      c[k + 1][m] = v / bn;
    }
  }
  return c;
}

}  // namespace

ParamDist ParamDist::uniform(double a, double b) { return {DistKind::Uniform, a, b}; }
ParamDist ParamDist::gaussian(double mean, double stddev) {
  return {DistKind::Gaussian, mean, stddev};
}

Distribution Distribution::uniform(int n, double a, double b) {
  Distribution d;
  d.params.assign(n, ParamDist::uniform(a, b));
  return d;
}

void Distribution::validate() const {
  require(!params.empty(), ErrorKind::InvalidArgument, "distribution has no parameters");
  require(independent, ErrorKind::UnsupportedDistribution,
          "only independent parameter distributions are supported");
  for (const auto& p : params) {
    if (p.kind == DistKind::Uniform)
      require(p.lo < p.hi, ErrorKind::InvalidArgument, "uniform bounds must satisfy a < b");
    else
      require(p.hi > 0.0, ErrorKind::InvalidArgument, "gaussian standard deviation must be > 0");
  }
}

Quadrature gauss_rule_1d(const ParamDist& param, int n) {
  require(n >= 1, ErrorKind::QuadratureTooSmall, "quadrature needs at least one node");
  Vector diag = Vector::Zero(n);
  Vector sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = recurrence_b(param.kind, k);
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::SolverFailure, "Golub-Welsch eigensolve failed");

  std::vector<double> phi(n + 1);
  Quadrature q;
  q.nodes.resize(1, n);
  q.weights.resize(n);
  q.exact_degree = 2 * n - 1;
  const auto [scale, shift] = standardize(param);
  for (int i = 0; i < n; ++i) {
    double t = es.eigenvalues()(i);
    // Newton polish on φ_n; the derivative follows from differentiating the
    // recurrence.
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, d0 = 0.0;
      double p1 = t / recurrence_b(param.kind, 1), d1 = 1.0 / recurrence_b(param.kind, 1);
      for (int k = 1; k < n; ++k) {
        const double bk = recurrence_b(param.kind, k);
        const double bn = recurrence_b(param.kind, k + 1);
        const double p2 = (t * p1 - bk * p0) / bn;
        const double d2 = (p1 + t * d1 - bk * d0) / bn;
        p0 = p1, d0 = d1, p1 = p2, d1 = d2;
      }
      if (n == 1 || d1 == 0.0) break;
      t -= p1 / d1;
    }
    eval_1d(param.kind, n - 1, t, phi.data());
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += phi[k] * phi[k];
    q.weights(i) = 1.0 / s;
    q.nodes(0, i) = (t - shift) / scale;
  }
  return q;
}

int basis_size(int n_xi, int p) {
  require(n_xi >= 1 && p >= 0, ErrorKind::InvalidArgument, "basis_size: need n_xi>=1, p>=0");
  // C(n+p, p) computed incrementally; each partial product is an integer.
  long long r = 1;
  for (int k = 1; k <= p; ++k) {
    r = r * (n_xi + k) / k;
    require(r < std::numeric_limits<int>::max() / 4, ErrorKind::DegreeOverflow,
            "basis size overflows");
  }
  return static_cast<int>(r);
}

int OrthonormalBasis::default_quad_nodes(int working_degree) {
  return (3 * working_degree + 3) / 2 + 1;
}

OrthonormalBasis OrthonormalBasis::build(const Distribution& dist, int p, int working_degree,
                                         int quad_nodes) {
  dist.validate();
  require(p >= 0, ErrorKind::InvalidArgument, "basis degree must be >= 0");
  if (working_degree < 0) working_degree = p;
  require(working_degree >= p, ErrorKind::InvalidArgument,
          "working degree must be at least the basis degree");
  if (quad_nodes <= 0) quad_nodes = default_quad_nodes(working_degree);

  OrthonormalBasis b;
  b.dist_ = dist;
  b.p_ = p;
  b.working_ = working_degree;
  const int n = dist.dim();
  b.indices_ = graded_multi_indices(n, working_degree);
  const int m = static_cast<int>(b.indices_.size());

  // Basis polynomials in monomial form.
  std::vector<std::vector<Polynomial>> per_dim(n);
  for (int d = 0; d < n; ++d) {
    const auto c = coeffs_1d(dist.params[d].kind, working_degree);
    const auto [scale, shift] = standardize(dist.params[d]);
    const Polynomial t = scale * Polynomial::variable(n, d) + Polynomial::constant(n, shift);
    std::vector<Polynomial> tpow{Polynomial::constant(n, 1.0)};
    for (int k = 1; k <= working_degree; ++k) tpow.push_back(tpow.back() * t);
    for (int k = 0; k <= working_degree; ++k) {
      Polynomial poly(n);
      for (int j = 0; j <= k; ++j)
        if (c[k][j] != 0.0) poly += c[k][j] * tpow[j];
      per_dim[d].push_back(poly);
    }
  }
  b.polys_.reserve(m);
  for (const auto& s : b.indices_) {
    Polynomial poly = Polynomial::constant(n, 1.0);
    for (int d = 0; d < n; ++d)
      if (s.exponents[d] > 0) poly = poly * per_dim[d][s.exponents[d]];
    b.polys_.push_back(std::move(poly));
  }

  // Tensor quadrature.
  std::vector<Quadrature> rules;
  for (int d = 0; d < n; ++d) rules.push_back(gauss_rule_1d(dist.params[d], quad_nodes));
  long long total = 1;
  for (int d = 0; d < n; ++d) total *= quad_nodes;
  require(total <= 50'000'000LL / std::max(m, 1), ErrorKind::DegreeOverflow,
          "tensor quadrature too large for this basis");
  const int qn = static_cast<int>(total);
  b.quad_.nodes.resize(n, qn);
  b.quad_.weights.resize(qn);
  b.quad_.exact_degree = 2 * quad_nodes - 1;
  std::vector<int> digit(n, 0);
  for (int q = 0; q < qn; ++q) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      b.quad_.nodes(d, q) = rules[d].nodes(0, digit[d]);
      w *= rules[d].weights(digit[d]);
    }
    b.quad_.weights(q) = w;
    for (int d = n - 1; d >= 0; --d) {
      if (++digit[d] < quad_nodes) break;
      digit[d] = 0;
    }
  }

  b.values_.resize(qn, m);
  for (int q = 0; q < qn; ++q) {
    const Vector v = b.evaluate(std::span<const double>(&b.quad_.nodes(0, q), n), m);
    b.values_.row(q) = v.transpose();
  }

  const double err = b.orthonormality_error();
  require(err < 1e-8, ErrorKind::QuadratureTooSmall,
          "orthonormality self-check failed (error " + std::to_string(err) + ")");

  // β rows: projections of each stored monomial.
  b.beta_.resize(m, m);
  Vector fv(qn);
  for (int r = 0; r < m; ++r) {
    const MultiIndex& s = b.indices_[r];
    for (int q = 0; q < qn; ++q) {
      fv(q) = b.quad_.weights(q) * s.eval(std::span<const double>(&b.quad_.nodes(0, q), n));
    }
    b.beta_.row(r) = (b.values_.transpose() * fv).transpose();
    // Coefficients past the monomial's degree vanish exactly.
    for (int k = basis_size(n, s.degree()); k < m; ++k) b.beta_(r, k) = 0.0;
  }
  return b;
}

int OrthonormalBasis::size_for_degree(int d) const {
  require(d >= 0 && d <= working_, ErrorKind::DegreeOverflow,
          "requested degree exceeds basis working degree");
  return basis_size(dim(), d);
}

int OrthonormalBasis::index_of(const MultiIndex& s) const {
  require(s.dim() == dim(), ErrorKind::DimensionMismatch, "multi-index has wrong dimension");
  require(s.degree() <= working_, ErrorKind::DegreeOverflow,
          "monomial degree exceeds basis working degree");
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), s, GradedLess{});
  return static_cast<int>(it - indices_.begin());
}

Vector OrthonormalBasis::evaluate(std::span<const double> xi, int n) const {
  require(static_cast<int>(xi.size()) == dim(), ErrorKind::DimensionMismatch,
          "basis evaluated at point of wrong dimension");
  if (n < 0) n = size();
  require(n <= table_size(), ErrorKind::DegreeOverflow, "too many basis functions requested");
  const int w = working_;
  std::vector<double> vals(static_cast<size_t>(dim()) * (w + 1));
  for (int d = 0; d < dim(); ++d) {
    const auto [scale, shift] = standardize(dist_.params[d]);
    eval_1d(dist_.params[d].kind, w, scale * xi[d] + shift, vals.data() + d * (w + 1));
  }
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    double v = 1.0;
    const auto& e = indices_[i].exponents;
    for (int d = 0; d < dim(); ++d) v *= vals[d * (w + 1) + e[d]];
    out(i) = v;
  }
  return out;
}

Vector OrthonormalBasis::monomial_pce(const MultiIndex& s, int length) const {
  if (length < 0) length = size();
  const int r = index_of(s);
  Vector out = Vector::Zero(length);
  const int n = std::min(length, table_size());
  out.head(n) = beta_.row(r).head(n).transpose();
  return out;
}

Vector OrthonormalBasis::project(const std::function<double(std::span<const double>)>& f,
                                 int length) const {
  if (length < 0) length = size();
  require(length <= table_size(), ErrorKind::DegreeOverflow, "projection length exceeds table");
  const int qn = quad_.size();
  Vector fw(qn);
  for (int q = 0; q < qn; ++q)
    fw(q) = quad_.weights(q) * f(std::span<const double>(&quad_.nodes(0, q), dim()));
  return values_.leftCols(length).transpose() * fw;
}

double OrthonormalBasis::expectation(
    const std::function<double(std::span<const double>)>& f) const {
  double acc = 0.0;
  for (int q = 0; q < quad_.size(); ++q)
    acc += quad_.weights(q) * f(std::span<const double>(&quad_.nodes(0, q), dim()));
  return acc;
}

double OrthonormalBasis::triple_product(int i, int j, int k) const {
  const int m = table_size();
  require(i >= 0 && j >= 0 && k >= 0 && i < m && j < m && k < m, ErrorKind::DegreeOverflow,
          "triple product index outside table");
  const auto n = static_cast<size_t>(quad_.size());
  return kernels::weighted_dot3({quad_.weights.data(), n}, {values_.col(i).data(), n},
                                {values_.col(j).data(), n}, {values_.col(k).data(), n});
}

double OrthonormalBasis::inner(int i, int j) const {
  const auto n = static_cast<size_t>(quad_.size());
  return kernels::weighted_dot({quad_.weights.data(), n}, {values_.col(i).data(), n},
                               {values_.col(j).data(), n});
}

double OrthonormalBasis::orthonormality_error() const {
  const Matrix gram = values_.transpose() * quad_.weights.asDiagonal() * values_;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

MeanVar mean_var(std::span<const double> coeffs) {
  require(!coeffs.empty(), ErrorKind::InvalidArgument, "mean_var needs at least one coefficient");
  MeanVar mv{coeffs[0], 0.0};
  for (size_t i = 1; i < coeffs.size(); ++i) mv.variance += coeffs[i] * coeffs[i];
  return mv;
}

std::vector<Matrix> polymat_pce(const OrthonormalBasis& basis, const PolynomialMatrix& m, int q) {
  require(m.n_xi() == basis.dim(), ErrorKind::DimensionMismatch,
          "polynomial matrix and basis have different parameter dimension");
  require(m.degree() <= q, ErrorKind::DegreeOverflow, "matrix degree exceeds requested order");
  const int n = basis.size_for_degree(q);
  std::vector<Matrix> out(n, Matrix::Zero(m.rows(), m.cols()));
  for (const auto& [s, coeff] : m.terms()) {
    const int r = basis.index_of(s);
    for (int i = 0; i < n; ++i) {
      const double b = basis.monomial_table()(r, i);
      if (b != 0.0) out[i] += b * coeff;
    }
  }
  return out;
}

Matrix reconstruct(const OrthonormalBasis& basis, std::span<const Matrix> coeffs,
                   std::span<const double> xi) {
  require(!coeffs.empty(), ErrorKind::InvalidArgument, "reconstruct needs coefficients");
  const Vector phi = basis.evaluate(xi, static_cast<int>(coeffs.size()));
  Matrix out = Matrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  for (size_t i = 0; i < coeffs.size(); ++i) out += phi(static_cast<int>(i)) * coeffs[i];
  return out;
}

}  // namespace pcehinf
