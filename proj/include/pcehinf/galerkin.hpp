#pragma once

#include "pcehinf/common.hpp"
#include "pcehinf/plant.hpp"
#include "pcehinf/polychaos.hpp"

namespace pcehinf {

/// Highest basis degree appearing in the projected input/output operators:
/// max(p + deg B, p + deg C, deg D_w).
int expansion_order(const UncertainPlant& plant, int p);

/// Basis of degree p whose table and quadrature cover the expansion order.
OrthonormalBasis basis_for(const UncertainPlant& plant, int p);

/// Galerkin-projected building blocks. The coefficient vector is stacked
/// coefficient-major: block k holds the n_x states' k-th PCE coefficients.
struct ExpandedBlocks {
  int p = 0, q = 0;
  int np = 0;  // number of state coefficients, N_p + 1
  int nq = 0;  // number of input/output coefficients, N_q + 1
  int nx = 0, nu = 0, nw = 0, ny = 0, nz = 0;

  Matrix A;     // E{Φ_x A Φ_xᵀ}, nx·np square
  Matrix Bw;    // E{Φ_x B_w}, nx·np × nw
  Matrix Bbar;  // [B̂_0 … B̂_{N_q}], nx·np × nu·nq
  Matrix Cbar;  // [Ĉ_0; …; Ĉ_{N_q}], ny·nq × nx·np
  Matrix Dwbar; // [D̂_w,0; …], ny·nq × nw
  Matrix CZbar; // [I_np ⊗ C_z; 0], nz·nq × nx·np
  Matrix DZwbar;// [D_zw; 0], nz·nq × nw
  Matrix DZbar; // I_nq ⊗ D_z
};

/// Top (first np coefficient blocks) and remainder partitions of the
/// input/output operators. The top parts are the operators of the open-loop
/// transformation.
struct BlockPartitions {
  Matrix B0, B1;    // columns of Bbar
  Matrix C0, C1;    // rows of Cbar
  Matrix Dw0, Dw1;  // rows of Dwbar
};

enum class Transform { Proposed, Legacy };

/// PCE-transformed closed loop Ẋ = A X + B w, Z = C X + D w.
struct ExpandedClosedLoop {
  Matrix A, B, C, D;
  Transform kind = Transform::Proposed;
};

ExpandedBlocks expand_blocks(const UncertainPlant& plant, const OrthonormalBasis& basis, int p);
BlockPartitions partition(const ExpandedBlocks& blocks);

ExpandedClosedLoop assemble_closed_loop(const ExpandedBlocks& blocks, const Gain& K);
ExpandedClosedLoop assemble_legacy(const ExpandedBlocks& blocks, const Gain& K);

struct IdentityPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// ‖C̄_cl X + D̄_cl w‖² against E_ξ‖C_cl(ξ)Φ_xᵀ(ξ)X + D_cl(ξ)w‖² by quadrature.
IdentityPair znorm_identity_check(const UncertainPlant& plant, const OrthonormalBasis& basis,
                                  const ExpandedBlocks& blocks, const Gain& K, const Vector& X,
                                  const Vector& w);

/// Expanded-side and quadrature-side forms of the output Gram blocks.
struct GammaIdentities {
  Matrix gram_xx, gram_xx_quad;  // C̄_clᵀC̄_cl vs E{Φ_x C_clᵀ C_cl Φ_xᵀ}
  Matrix gram_wx, gram_wx_quad;  // D̄_clᵀC̄_cl vs E{D_clᵀ C_cl Φ_xᵀ}
  Matrix gram_ww, gram_ww_quad;  // D̄_clᵀD̄_cl vs E{D_clᵀ D_cl}
  double max_error() const;
};
GammaIdentities gamma_identities(const UncertainPlant& plant, const OrthonormalBasis& basis,
                                 const ExpandedBlocks& blocks, const Gain& K);

/// Φ_xᵀ(ξ) = φᵀ(ξ) ⊗ I_nx for the first np basis functions.
Matrix phi_x_transpose(const OrthonormalBasis& basis, int np, int nx,
                       std::span<const double> xi);

/// ‖E{Φ_x Φ_xᵀ} − I‖_max by quadrature.
double kron_orthonormality_error(const OrthonormalBasis& basis, int np, int nx);

}  // namespace pcehinf
