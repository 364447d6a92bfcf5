#include "hgbs/mps.hpp"

#include <cmath>
#include <sstream>

#include "hgbs/rng.hpp"

namespace hgbs {

namespace {

// Rows a, a+1 of m ← block · rows.
void left_apply(CMatrix& m, int a, const Eigen::Matrix2cd& block) {
  for (int c = 0; c < m.cols(); ++c) {
    const cplx x = m(a, c);
    const cplx y = m(a + 1, c);
    m(a, c) = block(0, 0) * x + block(0, 1) * y;
    m(a + 1, c) = block(1, 0) * x + block(1, 1) * y;
  }
}

// Columns a, a+1 of m ← cols · block.
void right_apply(CMatrix& m, int a, const Eigen::Matrix2cd& block) {
  for (int r = 0; r < m.rows(); ++r) {
    const cplx x = m(r, a);
    const cplx y = m(r, a + 1);
    m(r, a) = x * block(0, 0) + y * block(1, 0);
    m(r, a + 1) = x * block(0, 1) + y * block(1, 1);
  }
}

Eigen::Matrix2cd d_theta_block(double theta, double phi) {
  const cplx e = std::polar(1.0, phi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd d;
  d << -s * e, c * e, -c, -s;
  return d;
}

Eigen::Matrix2cd d_phi_block(double theta, double phi) {
  const cplx ie = cplx(0.0, 1.0) * std::polar(1.0, phi);
  Eigen::Matrix2cd d;
  d << std::cos(theta) * ie, std::sin(theta) * ie, 0.0, 0.0;
  return d;
}

double wrap_angle(double x) {
  const double two_pi = 2.0 * kPi;
  double y = std::fmod(x, two_pi);
  if (y < 0.0) y += two_pi;
  if (y >= two_pi) y = 0.0;
  return y;
}

}  // namespace

Eigen::Matrix2cd beam_splitter_block(double theta, double phi) {
  const cplx e = std::polar(1.0, phi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd u;
  u << c * e, s * e, -s, c;
  return u;
}

int MpsCircuit::gate_count() const {
  int n = 0;
  for (const auto& l : layers) n += static_cast<int>(l.size());
  return n;
}

std::vector<BeamSplitterGate> MpsCircuit::bind(const RVector& theta, const RVector& phi) const {
  if (theta.size() != gate_count() || phi.size() != gate_count())
    throw InputError("parameter vectors must have one entry per beam-splitter (" +
                     std::to_string(gate_count()) + ")");
  std::vector<BeamSplitterGate> out;
  out.reserve(gate_count());
  int k = 0;
  for (const auto& layer : layers)
    for (int a : layer) {
      out.push_back({a, a + 1, theta(k), phi(k)});
      ++k;
    }
  return out;
}

MpsCircuit build_circuit(int mode_count, int layers, const RVector& squeeze) {
  if (mode_count < 2) throw InputError("an MPS circuit needs at least 2 modes");
  if (layers != 1 && layers != 2) throw InputError("layer count must be 1 or 2");
  if (squeeze.size() != mode_count) throw InputError("need one squeeze parameter per mode");
  if (!squeeze.allFinite()) throw InputError("squeeze parameters must be finite");
  MpsCircuit c;
  c.mode_count = mode_count;
  c.layer_count = layers;
  c.squeeze = squeeze;
  for (int l = 0; l < layers; ++l) {
    std::vector<int> layer;
    for (int a = 0; a + 1 < mode_count; ++a) layer.push_back(a);
    c.layers.push_back(std::move(layer));
  }
  return c;
}

CMatrix circuit_unitary(const MpsCircuit& circuit, const RVector& theta, const RVector& phi) {
  CMatrix u = CMatrix::Identity(circuit.mode_count, circuit.mode_count);
  for (const auto& g : circuit.bind(theta, phi))
    left_apply(u, g.mode_a, beam_splitter_block(g.theta, g.phi));
  return u;
}

GaussianState forward_covariance(const MpsCircuit& circuit, const RVector& theta,
                                 const RVector& phi) {
  return apply_interferometer(squeezed_vacuum_covariance(circuit.squeeze),
                              circuit_unitary(circuit, theta, phi));
}

double frobenius_distance(const GaussianState& a, const GaussianState& b) {
  if (a.sigma.rows() != b.sigma.rows()) throw InputError("covariance sizes differ");
  return (a.sigma - b.sigma).norm();
}

CovarianceFitObjective::CovarianceFitObjective(const MpsCircuit& circuit,
                                               const GaussianState& target)
    : modes_(circuit.mode_count) {
  if (target.mode_count() != modes_) throw InputError("target covariance has wrong mode count");
  for (const auto& layer : circuit.layers)
    for (int a : layer) gate_modes_.push_back(a);
  b_diag_.resize(modes_);
  g_diag_.resize(modes_);
  for (int j = 0; j < modes_; ++j) {
    const double r = circuit.squeeze(j);
    b_diag_(j) = 0.5 * std::cosh(2.0 * r);
    g_diag_(j) = 0.5 * std::sinh(2.0 * r);
  }
  b_ref_ = target.b_block();
  g_ref_ = target.g_block();
  target_norm_ = target.sigma.norm();
}

// With σ = [[B, G], [G*, B*]], ‖σ − σ_ref‖² = 2‖ΔB‖² + 2‖ΔG‖² where
// B = U diag(b) U† and G = U diag(g) Uᵀ. Its differential is
// 8 Re tr(Y dU) with Y = diag(b) U† ΔB + diag(g) Uᵀ conj(ΔG).
double CovarianceFitObjective::operator()(const RVector& x, RVector* grad) const {
  const int k_gates = static_cast<int>(gate_modes_.size());
  if (x.size() != 2 * k_gates) throw InputError("parameter vector has wrong length");
  std::vector<Eigen::Matrix2cd> blocks(k_gates);
  CMatrix u = CMatrix::Identity(modes_, modes_);
  for (int k = 0; k < k_gates; ++k) {
    blocks[k] = beam_splitter_block(x(k), x(k_gates + k));
    left_apply(u, gate_modes_[k], blocks[k]);
  }
  const CMatrix ub = u * b_diag_.asDiagonal();
  const CMatrix ug = u * g_diag_.asDiagonal();
  const CMatrix delta_b = ub * u.adjoint() - b_ref_;
  const CMatrix delta_g = ug * u.transpose() - g_ref_;
  const double value = 2.0 * delta_b.squaredNorm() + 2.0 * delta_g.squaredNorm();
  if (grad == nullptr) return value;

  grad->resize(2 * k_gates);
  const CMatrix y = ub.adjoint() * delta_b + ug.transpose() * delta_g.conjugate();
  // W_k = P_k Y S_k, swept from the last gate backwards.
  CMatrix w = u * y;
  for (int k = k_gates - 1; k >= 0; --k) {
    const int a = gate_modes_[k];
    if (k < k_gates - 1) right_apply(w, gate_modes_[k + 1], blocks[k + 1]);
    left_apply(w, a, blocks[k].adjoint());
    const Eigen::Matrix2cd wk = w.block(a, a, 2, 2);
    const double th = x(k);
    const double ph = x(k_gates + k);
    const Eigen::Matrix2cd dt = d_theta_block(th, ph);
    const Eigen::Matrix2cd dp = d_phi_block(th, ph);
    // tr(W dG) over the 2×2 block = Σ_ij W_ji dG_ij.
    (*grad)(k) = 8.0 * (wk.transpose().cwiseProduct(dt)).sum().real();
    (*grad)(k_gates + k) = 8.0 * (wk.transpose().cwiseProduct(dp)).sum().real();
  }
  return value;
}

FitResult fit_parameters(const MpsCircuit& circuit, const GaussianState& sigma_ref,
                         const FitConfig& config) {
  if (sigma_ref.mode_count() != circuit.mode_count)
    throw InputError("reference covariance has wrong mode count");
  const CovarianceFitObjective objective(circuit, sigma_ref);
  const int k_gates = circuit.gate_count();
  const int n = 2 * k_gates;

  Objective f;
  if (config.gradient == GradientMode::analytic) {
    f = [&objective](const RVector& x, RVector* g) { return objective(x, g); };
  } else {
    const double h = config.fd_step;
    f = [&objective, h](const RVector& x, RVector* g) {
      const double v = objective(x, nullptr);
      if (g != nullptr) {
        const Objective plain = [&objective](const RVector& y, RVector*) {
          return objective(y, nullptr);
        };
        *g = central_difference_gradient(plain, x, h);
      }
      return v;
    };
  }

  std::vector<RVector> starts;
  if (config.zero_start) starts.push_back(RVector::Zero(n));
  for (int i = 0; i < config.restarts; ++i) {
    SplitMix64 rng(derive_seed(config.seed, "fit_restart_" + std::to_string(i)));
    RVector x(n);
    for (int j = 0; j < n; ++j) x(j) = rng.uniform(-config.init_range, config.init_range);
    starts.push_back(std::move(x));
  }
  for (const auto& s : config.extra_starts) {
    if (s.size() != n) throw InputError("extra start has wrong parameter count");
    starts.push_back(s);
  }
  if (starts.empty()) throw InputError("fit needs at least one start");

  FitResult best;
  best.seed = config.seed;
  double best_value = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  std::vector<double> start_distances;
  RVector best_x;
  std::size_t best_trace = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const CgResult r = minimize_cg(f, starts[i], config.cg);
    if (!std::isfinite(r.value)) {
      std::ostringstream msg;
      msg << "fit objective non-finite at start " << i << " after " << r.iterations
          << " iterations";
      throw NumericalError(msg.str());
    }
    total_iterations += r.iterations;
    start_distances.push_back(std::sqrt(std::max(r.value, 0.0)));
    if (r.value < best_value) {
      best_value = r.value;
      best_x = r.x;
      best.best_start = static_cast<int>(i);
      best_trace = r.trace.size();
    }
  }
  best.theta = best_x.head(k_gates).unaryExpr([](double v) { return wrap_angle(v); });
  best.phi = best_x.tail(k_gates).unaryExpr([](double v) { return wrap_angle(v); });
  RVector wrapped(n);
  wrapped << best.theta, best.phi;
  best.final_distance = std::sqrt(std::max(objective(wrapped, nullptr), 0.0));
  best.relative_distance = best.final_distance / objective.target_norm();
  best.iterations = total_iterations;
  best.restarts_used = static_cast<int>(starts.size());
  best.trace_length = best_trace;
  best.start_distances = std::move(start_distances);
  return best;
}

RVector embed_one_layer_start(const FitResult& one_layer, int gates_per_layer) {
  if (one_layer.theta.size() != gates_per_layer)
    throw InputError("one-layer fit has wrong gate count");
  RVector x = RVector::Zero(4 * gates_per_layer);
  x.segment(0, gates_per_layer) = one_layer.theta;
  x.segment(2 * gates_per_layer, gates_per_layer) = one_layer.phi;
  return x;
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  auto vec = [](const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {{"theta", vec(fit.theta)},
          {"phi", vec(fit.phi)},
          {"final_distance", fit.final_distance},
          {"relative_distance", fit.relative_distance},
          {"iterations", fit.iterations},
          {"restarts_used", fit.restarts_used},
          {"best_start", fit.best_start},
          {"seed", fit.seed},
          {"trace_length", fit.trace_length},
          {"start_distances", fit.start_distances}};
}

}  // namespace hgbs
