#pragma once

#include "hgbs/common.hpp"
#include "hgbs/graph.hpp"

namespace hgbs {

// Mode operators are ordered ξ = (a₁ … a_M, a₁† … a_M†) everywhere. A
// covariance matrix therefore has the block form
//
//   σ = [ B   G  ]     B_ij = ½⟨{a_i, a_j†}⟩  (Hermitian)
//       [ G*  B* ]     G_ij = ½⟨{a_i, a_j}⟩   (symmetric)
//
// and the kernel K = X(I − σ_Q⁻¹) with X = [[0, I], [I, 0]].

/// 2M×2M kernel matrix K.
struct KernelMatrix {
  CMatrix entries;
  int mode_count() const { return static_cast<int>(entries.rows() / 2); }
};

/// Zero-mean M-mode Gaussian state described by its covariance matrix.
struct GaussianState {
  CMatrix sigma;
  CVector displacement;  // always zero here; kept for the state's full description

  int mode_count() const { return static_cast<int>(sigma.rows() / 2); }
  CMatrix sigma_q() const;
  CMatrix b_block() const { return sigma.topLeftCorner(mode_count(), mode_count()); }
  CMatrix g_block() const { return sigma.topRightCorner(mode_count(), mode_count()); }

  /// Largest deviation from the [[B, G], [G*, B*]] structure with B
  /// Hermitian and G symmetric.
  double structure_residual() const;
  /// Smallest eigenvalue of the Hermitian part of σ_Q.
  double min_sigma_q_eigenvalue() const;
  /// Throws InputError if structure or positivity fails.
  void validate(double tol = 1e-10) const;

  static GaussianState from_sigma(CMatrix sigma);
  static GaussianState vacuum(int mode_count);
};

/// Takagi factors of a real symmetric matrix S = U diag(λ) Uᵀ.
struct TakagiFactors {
  CMatrix unitary;
  RVector singular_values;  // descending
  RVector squeeze_params;   // r_j = artanh(c λ_j)
  /// artanh(c λ_j) carrying the sign of the eigenvalue. Squeezing these into
  /// the real eigenbasis gives the same state without the factors of i.
  RVector signed_squeeze_params;
  double c = 1.0;
};

KernelMatrix kernel_from_graph(const WeightedEncoding& encoding);

/// Block-diagonal kernel diag(conj(block), block) for a complex symmetric
/// kernel block; for real blocks this is block ⊕ block.
KernelMatrix kernel_from_block(const CMatrix& block);

/// K = X(I − σ_Q⁻¹).
KernelMatrix kernel_of(const GaussianState& state);

/// Lower-right M×M block of K. For a pure state with K = B* ⊕ B the output
/// statistics are governed by this block alone.
CMatrix kernel_block_of(const GaussianState& state);

/// σ = (I − XK)⁻¹ − I/2.
GaussianState covariance_from_kernel(const KernelMatrix& kernel);

GaussianState squeezed_vacuum_covariance(const RVector& squeeze_params);

/// σ' = diag(U, U*) σ diag(U*, U)ᵀ, i.e. B' = U B U†, G' = U G Uᵀ.
GaussianState apply_interferometer(const GaussianState& state, const CMatrix& unitary);

/// Takagi factorization of a real symmetric matrix via its eigendecomposition.
/// Columns belonging to negative eigenvalues pick up a factor i. Squeeze
/// parameters use r = artanh(c λ) and are +∞ when c λ ≥ 1; consumers of
/// squeeze parameters reject non-finite values.
TakagiFactors takagi(const RMatrix& symmetric, double c = 1.0);

/// Squeezed vacuum with r_j, then the interferometer U.
GaussianState state_from_takagi(const TakagiFactors& factors);

/// Husimi Q function exp(−½ α†σ_Q⁻¹α) / (π^M √det σ_Q) at
/// α = (α₁ … α_M, α₁* … α_M*).
double husimi_q(const GaussianState& state, const CVector& alpha);

/// ‖U†U − I‖_max.
double unitarity_residual(const CMatrix& u);

}  // namespace hgbs
