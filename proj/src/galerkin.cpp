#include "pcehinf/galerkin.hpp"

#include <algorithm>

namespace pcehinf {

int expansion_order(const UncertainPlant& plant, int p) {
  require(p >= 0, ErrorKind::InvalidArgument, "PCE degree must be >= 0");
  return std::max({p + plant.B.degree(), p + plant.C.degree(), plant.Dw.degree()});
}

OrthonormalBasis basis_for(const UncertainPlant& plant, int p) {
  const int q = expansion_order(plant, p);
  const int plant_degree = std::max({plant.A.degree(), plant.Bw.degree(), q});
  return OrthonormalBasis::build(plant.dist, p, plant_degree);
}

ExpandedBlocks expand_blocks(const UncertainPlant& plant, const OrthonormalBasis& basis, int p) {
  plant.validate();
  require(basis.dim() == plant.n_xi(), ErrorKind::DimensionMismatch,
          "basis and plant have different parameter dimension");
  ExpandedBlocks eb;
  eb.p = p;
  eb.q = expansion_order(plant, p);
  require(eb.q <= basis.working_degree() && plant.A.degree() <= basis.working_degree() &&
              plant.Bw.degree() <= basis.working_degree(),
          ErrorKind::DegreeOverflow, "basis working degree too small for this plant and degree");
  eb.np = basis.size_for_degree(p);
  eb.nq = basis.size_for_degree(eb.q);
  eb.nx = plant.nx();
  eb.nu = plant.nu();
  eb.nw = plant.nw();
  eb.ny = plant.ny();
  eb.nz = plant.nz();
  const int nx = eb.nx, nu = eb.nu, nw = eb.nw, ny = eb.ny, nz = eb.nz;
  const int np = eb.np, nq = eb.nq;

  const auto a_hat = polymat_pce(basis, plant.A, plant.A.degree());
  const auto b_hat = polymat_pce(basis, plant.B, plant.B.degree());
  const auto c_hat = polymat_pce(basis, plant.C, plant.C.degree());
  const auto bw_hat = polymat_pce(basis, plant.Bw, plant.Bw.degree());
  const auto dw_hat = polymat_pce(basis, plant.Dw, plant.Dw.degree());

  // E{φ_i φ_j M(ξ)} = Σ_k M̂_k E{φ_i φ_j φ_k}.
  auto sandwich = [&](const std::vector<Matrix>& m_hat, int i, int j) {
    Matrix out = Matrix::Zero(m_hat[0].rows(), m_hat[0].cols());
    for (size_t k = 0; k < m_hat.size(); ++k) {
      if (m_hat[k].isZero(0.0)) continue;
      const double e = basis.triple_product(i, j, static_cast<int>(k));
      if (e != 0.0) out += e * m_hat[k];
    }
    return out;
  };

  eb.A.setZero(nx * np, nx * np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) eb.A.block(i * nx, j * nx, nx, nx) = sandwich(a_hat, i, j);

  eb.Bw.setZero(nx * np, nw);
  for (int j = 0; j < np && j < static_cast<int>(bw_hat.size()); ++j)
    eb.Bw.block(j * nx, 0, nx, nw) = bw_hat[j];

  eb.Bbar.setZero(nx * np, nu * nq);
  eb.Cbar.setZero(ny * nq, nx * np);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) {
      eb.Bbar.block(j * nx, i * nu, nx, nu) = sandwich(b_hat, i, j);
      eb.Cbar.block(i * ny, j * nx, ny, nx) = sandwich(c_hat, i, j);
    }

  eb.Dwbar.setZero(ny * nq, nw);
  for (int i = 0; i < nq && i < static_cast<int>(dw_hat.size()); ++i)
    eb.Dwbar.block(i * ny, 0, ny, nw) = dw_hat[i];

  eb.CZbar.setZero(nz * nq, nx * np);
  eb.CZbar.topRows(nz * np) = kron_identity(np, plant.Cz);
  eb.DZwbar.setZero(nz * nq, nw);
  eb.DZwbar.topRows(nz) = plant.Dzw;
  eb.DZbar = kron_identity(nq, plant.Dz);
  return eb;
}

BlockPartitions partition(const ExpandedBlocks& eb) {
  const int top_u = eb.nu * eb.np, top_y = eb.ny * eb.np;
  BlockPartitions bp;
  bp.B0 = eb.Bbar.leftCols(top_u);
  bp.B1 = eb.Bbar.rightCols(eb.Bbar.cols() - top_u);
  bp.C0 = eb.Cbar.topRows(top_y);
  bp.C1 = eb.Cbar.bottomRows(eb.Cbar.rows() - top_y);
  bp.Dw0 = eb.Dwbar.topRows(top_y);
  bp.Dw1 = eb.Dwbar.bottomRows(eb.Dwbar.rows() - top_y);
  return bp;
}

ExpandedClosedLoop assemble_closed_loop(const ExpandedBlocks& eb, const Gain& K) {
  require(K.rows() == eb.nu && K.cols() == eb.ny, ErrorKind::DimensionMismatch,
          "gain must be n_u x n_y");
  const Matrix Kbar = kron_identity(eb.nq, K);
  const Matrix BK = eb.Bbar * Kbar;
  const Matrix DK = eb.DZbar * Kbar;
  return {eb.A + BK * eb.Cbar, eb.Bw + BK * eb.Dwbar, eb.CZbar + DK * eb.Cbar,
          eb.DZwbar + DK * eb.Dwbar, Transform::Proposed};
}

ExpandedClosedLoop assemble_legacy(const ExpandedBlocks& eb, const Gain& K) {
  require(K.rows() == eb.nu && K.cols() == eb.ny, ErrorKind::DimensionMismatch,
          "gain must be n_u x n_y");
  const BlockPartitions bp = partition(eb);
  const Matrix Kcal = kron_identity(eb.np, K);
  const Matrix BK = bp.B0 * Kcal;
  const Matrix DK = kron_identity(eb.np, Matrix(eb.DZbar.topLeftCorner(eb.nz, eb.nu))) * Kcal;
  const Matrix CZ = eb.CZbar.topRows(eb.nz * eb.np);
  const Matrix DZw = eb.DZwbar.topRows(eb.nz * eb.np);
  return {eb.A + BK * bp.C0, eb.Bw + BK * bp.Dw0, CZ + DK * bp.C0, DZw + DK * bp.Dw0,
          Transform::Legacy};
}

Matrix phi_x_transpose(const OrthonormalBasis& basis, int np, int nx,
                       std::span<const double> xi) {
  const Vector phi = basis.evaluate(xi, np);
  Matrix out(nx, nx * np);
  for (int j = 0; j < np; ++j) out.block(0, j * nx, nx, nx) = phi(j) * Matrix::Identity(nx, nx);
  return out;
}

IdentityPair znorm_identity_check(const UncertainPlant& plant, const OrthonormalBasis& basis,
                                  const ExpandedBlocks& eb, const Gain& K, const Vector& X,
                                  const Vector& w) {
  require(X.size() == eb.nx * eb.np && w.size() == eb.nw, ErrorKind::DimensionMismatch,
          "identity check vectors have wrong size");
  const ExpandedClosedLoop cl = assemble_closed_loop(eb, K);
  IdentityPair r;
  r.lhs = (cl.C * X + cl.D * w).squaredNorm();
  const Quadrature& quad = basis.quadrature();
  for (int q = 0; q < quad.size(); ++q) {
    const std::span<const double> xi(&quad.nodes(0, q), basis.dim());
    const ClosedLoopSample s = close_loop(plant, K, xi);
    const Vector x = phi_x_transpose(basis, eb.np, eb.nx, xi) * X;
    r.rhs += quad.weights(q) * (s.C * x + s.D * w).squaredNorm();
  }
  return r;
}

double GammaIdentities::max_error() const {
  return std::max({(gram_xx - gram_xx_quad).cwiseAbs().maxCoeff(),
                   (gram_wx - gram_wx_quad).cwiseAbs().maxCoeff(),
                   (gram_ww - gram_ww_quad).cwiseAbs().maxCoeff()});
}

GammaIdentities gamma_identities(const UncertainPlant& plant, const OrthonormalBasis& basis,
                                 const ExpandedBlocks& eb, const Gain& K) {
  const ExpandedClosedLoop cl = assemble_closed_loop(eb, K);
  GammaIdentities g;
  g.gram_xx = cl.C.transpose() * cl.C;
  g.gram_wx = cl.D.transpose() * cl.C;
  g.gram_ww = cl.D.transpose() * cl.D;
  g.gram_xx_quad = Matrix::Zero(g.gram_xx.rows(), g.gram_xx.cols());
  g.gram_wx_quad = Matrix::Zero(g.gram_wx.rows(), g.gram_wx.cols());
  g.gram_ww_quad = Matrix::Zero(g.gram_ww.rows(), g.gram_ww.cols());
  const Quadrature& quad = basis.quadrature();
  for (int q = 0; q < quad.size(); ++q) {
    const std::span<const double> xi(&quad.nodes(0, q), basis.dim());
    const ClosedLoopSample s = close_loop(plant, K, xi);
    const Matrix cphi = s.C * phi_x_transpose(basis, eb.np, eb.nx, xi);
    const double wq = quad.weights(q);
    g.gram_xx_quad += wq * cphi.transpose() * cphi;
    g.gram_wx_quad += wq * s.D.transpose() * cphi;
    g.gram_ww_quad += wq * s.D.transpose() * s.D;
  }
  return g;
}

double kron_orthonormality_error(const OrthonormalBasis& basis, int np, int nx) {
  const Quadrature& quad = basis.quadrature();
  Matrix acc = Matrix::Zero(nx * np, nx * np);
  for (int q = 0; q < quad.size(); ++q) {
    const Matrix phi_t = phi_x_transpose(basis, np, nx, {&quad.nodes(0, q), size_t(basis.dim())});
    acc += quad.weights(q) * phi_t.transpose() * phi_t;
  }
  return (acc - Matrix::Identity(nx * np, nx * np)).cwiseAbs().maxCoeff();
}

}  // namespace pcehinf
