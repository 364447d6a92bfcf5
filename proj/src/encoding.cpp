#include "hgbs/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hgbs {

namespace {

CMatrix x_matrix(int m) {
  CMatrix x = CMatrix::Zero(2 * m, 2 * m);
  x.topRightCorner(m, m).setIdentity();
  x.bottomLeftCorner(m, m).setIdentity();
  return x;
}

}  // namespace

CMatrix GaussianState::sigma_q() const {
  return sigma + 0.5 * CMatrix::Identity(sigma.rows(), sigma.cols());
}

double GaussianState::structure_residual() const {
  const int m = mode_count();
  const CMatrix b = b_block();
  const CMatrix g = g_block();
  double r = 0.0;
  r = std::max(r, (b - b.adjoint()).cwiseAbs().maxCoeff());
  r = std::max(r, (g - g.transpose()).cwiseAbs().maxCoeff());
  r = std::max(r, (sigma.bottomLeftCorner(m, m) - g.conjugate()).cwiseAbs().maxCoeff());
  r = std::max(r, (sigma.bottomRightCorner(m, m) - b.conjugate()).cwiseAbs().maxCoeff());
  return r;
}

double GaussianState::min_sigma_q_eigenvalue() const {
  const CMatrix q = sigma_q();
  const CMatrix herm = 0.5 * (q + q.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void GaussianState::validate(double tol) const {
  if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0 || sigma.rows() == 0)
    throw InputError("covariance must be a non-empty 2M x 2M matrix");
  if (!sigma.allFinite()) throw InputError("covariance has non-finite entries");
  const double s = structure_residual();
  if (s > tol) throw InputError("covariance violates [[B,G],[G*,B*]] block structure");
  if (!(min_sigma_q_eigenvalue() > 0.0)) throw InputError("sigma_Q is not positive definite");
}

GaussianState GaussianState::from_sigma(CMatrix sigma) {
  GaussianState s;
  s.displacement = CVector::Zero(sigma.rows());
  s.sigma = std::move(sigma);
  return s;
}

GaussianState GaussianState::vacuum(int mode_count) {
  return from_sigma(0.5 * CMatrix::Identity(2 * mode_count, 2 * mode_count));
}

KernelMatrix kernel_from_block(const CMatrix& block) {
  const int m = static_cast<int>(block.rows());
  KernelMatrix k;
  k.entries = CMatrix::Zero(2 * m, 2 * m);
  k.entries.topLeftCorner(m, m) = block.conjugate();
  k.entries.bottomRightCorner(m, m) = block;
  return k;
}

KernelMatrix kernel_from_graph(const WeightedEncoding& encoding) {
  const RMatrix block = encoding.kernel_block();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(block, Eigen::EigenvaluesOnly);
  if (block.size() > 0 && es.eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
    throw InputError("invalid encoding: kernel spectral radius >= 1");
  return kernel_from_block(block.cast<cplx>());
}

KernelMatrix kernel_of(const GaussianState& state) {
  const int n = static_cast<int>(state.sigma.rows());
  const CMatrix inv = state.sigma_q().inverse();
  KernelMatrix k;
  k.entries = x_matrix(n / 2) * (CMatrix::Identity(n, n) - inv);
  return k;
}

CMatrix kernel_block_of(const GaussianState& state) {
  const int m = state.mode_count();
  return kernel_of(state).entries.bottomRightCorner(m, m);
}

GaussianState covariance_from_kernel(const KernelMatrix& kernel) {
  const int n = static_cast<int>(kernel.entries.rows());
  const int m = n / 2;
  const CMatrix lhs = CMatrix::Identity(n, n) - x_matrix(m) * kernel.entries;
  Eigen::PartialPivLU<CMatrix> lu(lhs);
  if (!(lu.rcond() > 1e-13)) throw NumericalError("kernel at or beyond squeezing limit");
  CMatrix sigma = lu.inverse() - 0.5 * CMatrix::Identity(n, n);
  if (!sigma.allFinite()) throw NumericalError("kernel at or beyond squeezing limit");
  return GaussianState::from_sigma(std::move(sigma));
}

GaussianState squeezed_vacuum_covariance(const RVector& squeeze_params) {
  const int m = static_cast<int>(squeeze_params.size());
  if (!squeeze_params.allFinite()) throw InputError("squeeze parameters must be finite");
  CMatrix sigma = CMatrix::Zero(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const double ch = std::cosh(squeeze_params(j));
    const double sh = std::sinh(squeeze_params(j));
    const double diag = 0.5 * (ch * ch + sh * sh);
    const double off = ch * sh;
    sigma(j, j) = diag;
    sigma(m + j, m + j) = diag;
    sigma(j, m + j) = off;
    sigma(m + j, j) = off;
  }
  return GaussianState::from_sigma(std::move(sigma));
}

double unitarity_residual(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

GaussianState apply_interferometer(const GaussianState& state, const CMatrix& unitary) {
  const int m = state.mode_count();
  if (unitary.rows() != m || unitary.cols() != m)
    throw InputError("interferometer size does not match mode count");
  if (unitarity_residual(unitary) > 1e-10) throw InputError("interferometer is not unitary");
  CMatrix w = CMatrix::Zero(2 * m, 2 * m);
  w.topLeftCorner(m, m) = unitary;
  w.bottomRightCorner(m, m) = unitary.conjugate();
  return GaussianState::from_sigma(w * state.sigma * w.adjoint());
}

TakagiFactors takagi(const RMatrix& symmetric, double c) {
  const int m = static_cast<int>(symmetric.rows());
  if (symmetric.cols() != m) throw InputError("takagi input must be square");
  if (m > 0 && (symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("takagi input is not symmetric");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(symmetric);
  const RVector& evals = es.eigenvalues();
  RMatrix q = es.eigenvectors();
  // Deterministic sign: largest-magnitude component of each column positive.
  for (int j = 0; j < m; ++j) {
    Eigen::Index idx;
    q.col(j).cwiseAbs().maxCoeff(&idx);
    if (q(idx, j) < 0.0) q.col(j) *= -1.0;
  }

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(evals(a)) > std::abs(evals(b)); });

  TakagiFactors f;
  f.c = c;
  f.unitary = CMatrix::Zero(m, m);
  f.singular_values = RVector::Zero(m);
  f.squeeze_params = RVector::Zero(m);
  f.signed_squeeze_params = RVector::Zero(m);
  for (int k = 0; k < m; ++k) {
    const int j = order[k];
    const double lambda = evals(j);
    f.singular_values(k) = std::abs(lambda);
    const cplx phase = lambda < 0.0 ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
    f.unitary.col(k) = phase * q.col(j).cast<cplx>();
    const double t = c * f.singular_values(k);
    f.squeeze_params(k) = t < 1.0 - 1e-12 ? std::atanh(t) : std::numeric_limits<double>::infinity();
    f.signed_squeeze_params(k) = lambda < 0.0 ? -f.squeeze_params(k) : f.squeeze_params(k);
  }
  return f;
}

GaussianState state_from_takagi(const TakagiFactors& factors) {
  return apply_interferometer(squeezed_vacuum_covariance(factors.squeeze_params),
                              factors.unitary);
}

double husimi_q(const GaussianState& state, const CVector& alpha) {
  const int m = state.mode_count();
  if (alpha.size() != 2 * m) throw InputError("husimi point must have length 2M");
  const CMatrix q = state.sigma_q();
  Eigen::PartialPivLU<CMatrix> lu(q);
  const cplx quad = alpha.adjoint() * lu.solve(alpha);
  const double det = std::abs(lu.determinant());
  return std::pow(kPi, -m) * std::exp(-0.5 * quad.real()) / std::sqrt(det);
}

}  // namespace hgbs
