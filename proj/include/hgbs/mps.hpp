#pragma once

#include <cstdint>
#include <vector>

#include "hgbs/encoding.hpp"
#include "hgbs/optimizer.hpp"

namespace hgbs {

/// Beam-splitter B(θ) on adjacent modes (a, a+1) followed by a phase e^{iφ}
/// on mode a. Its mode transformation a' = U a uses
///
///   U(θ, φ) = [ cos θ·e^{iφ}   sin θ·e^{iφ} ]
///             [ −sin θ         cos θ        ]
struct BeamSplitterGate {
  int mode_a = 0;
  int mode_b = 1;
  double theta = 0.0;
  double phi = 0.0;
};

Eigen::Matrix2cd beam_splitter_block(double theta, double phi);

/// Nearest-neighbour chain of beam-splitters, one or two layers deep, fed by
/// single-mode squeezers with fixed r.
struct MpsCircuit {
  int mode_count = 0;
  int layer_count = 0;
  RVector squeeze;
  /// layers[l][k] is the lower mode of gate k in layer l; gate k couples
  /// (k, k+1) and gates run in this order.
  std::vector<std::vector<int>> layers;

  int gate_count() const;
  int parameter_count() const { return 2 * gate_count(); }
  /// Gates in application order with parameters bound.
  std::vector<BeamSplitterGate> bind(const RVector& theta, const RVector& phi) const;
};

MpsCircuit build_circuit(int mode_count, int layers, const RVector& squeeze);

/// Product of embedded gate blocks, later gates on the left.
CMatrix circuit_unitary(const MpsCircuit& circuit, const RVector& theta, const RVector& phi);

GaussianState forward_covariance(const MpsCircuit& circuit, const RVector& theta,
                                 const RVector& phi);

double frobenius_distance(const GaussianState& a, const GaussianState& b);

/// Squared Frobenius distance between the circuit covariance and a target,
/// over x = (θ₁ … θ_K, φ₁ … φ_K), with an exact adjoint-mode gradient.
class CovarianceFitObjective {
 public:
  CovarianceFitObjective(const MpsCircuit& circuit, const GaussianState& target);

  double operator()(const RVector& x, RVector* grad) const;
  double target_norm() const { return target_norm_; }

 private:
  int modes_;
  std::vector<int> gate_modes_;
  RVector b_diag_;
  RVector g_diag_;
  CMatrix b_ref_;
  CMatrix g_ref_;
  double target_norm_;
};

enum class GradientMode { analytic, central_difference };

struct FitConfig {
  int restarts = 8;
  bool zero_start = true;
  double init_range = kPi / 4.0;  // random starts uniform in [−range, range]
  std::uint64_t seed = 0;
  GradientMode gradient = GradientMode::analytic;
  double fd_step = 1e-6;
  CgOptions cg;
  /// Additional starting points (θ then φ), run after the built-in ones.
  std::vector<RVector> extra_starts;
};

struct FitResult {
  RVector theta;
  RVector phi;
  double final_distance = 0.0;
  double relative_distance = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  int best_start = 0;
  std::uint64_t seed = 0;
  std::size_t trace_length = 0;
  std::vector<double> start_distances;
};

/// Multi-start conjugate-gradient fit of (θ, φ) to σ_ref; the best start is
/// chosen by (distance, start index). Parameters are wrapped to [0, 2π).
FitResult fit_parameters(const MpsCircuit& circuit, const GaussianState& sigma_ref,
                         const FitConfig& config);

/// Extend 1-layer parameters to a 2-layer circuit whose second layer is the
/// identity (θ = φ = 0).
RVector embed_one_layer_start(const FitResult& one_layer, int gates_per_layer);

nlohmann::json fit_result_to_json(const FitResult& fit);

}  // namespace hgbs
