#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hgbs/common.hpp"
#include "hgbs/encoding.hpp"
#include "hgbs/holo.hpp"
#include "hgbs/mps.hpp"
#include "hgbs/rng.hpp"
#include "hgbs/sampler.hpp"

namespace hgbs {

/// Pure state of m bosonic modes truncated to levels 0..d−1 per mode.
///
/// Amplitudes are stored densely with mode 0 as the most significant digit.
/// Probability that left the truncated space is accumulated in
/// `norm_deficit`, so ‖ψ‖² + norm_deficit stays at 1.
class FockState {
 public:
  FockState(int mode_count, int cutoff);

  static FockState vacuum(int mode_count, int cutoff) { return FockState(mode_count, cutoff); }
  /// Product of number states |n₀, n₁, …⟩.
  static FockState number_state(int cutoff, const std::vector<int>& occupation);

  int mode_count() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return amps_.size(); }

  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }
  cplx amplitude(const std::vector<int>& occupation) const;

  double norm_squared() const;
  double norm_deficit() const { return deficit_; }
  void add_deficit(double d) { deficit_ += d; }
  void set_deficit(double d) { deficit_ = d; }

  std::vector<int> occupation(std::size_t index) const;
  std::size_t index(const std::vector<int>& occupation) const;
  std::size_t stride(int mode) const;

  /// Photon-number marginal of one mode (unnormalized).
  std::vector<double> marginal(int mode) const;

 private:
  int modes_;
  int cutoff_;
  std::vector<cplx> amps_;
  double deficit_ = 0.0;
};

/// exp((−r a² + r a†²)/2), computed on an enlarged space and cut back to
/// d levels. Entry (n, k) = ⟨n|S(r)|k⟩.
RMatrix squeeze_matrix(double r, int cutoff);

/// exp(θ(a†b − ab†)) followed by e^{iφ n_a}, as a d²×d² matrix over
/// index n_a·d + n_b, exponentiated block-by-block in total photon number.
CMatrix beamsplitter_matrix(double theta, double phi, int cutoff);

FockState apply_squeeze(const FockState& state, int mode, double r);
FockState apply_beamsplitter(const FockState& state, int mode_a, int mode_b, double theta,
                             double phi);
FockState apply_phase(const FockState& state, int mode, double phi);

/// Passive linear-optics transformation with a' = U a. Exact on every
/// total-photon sector below the cutoff; higher sectors are discarded into
/// the norm deficit.
FockState apply_interferometer(const FockState& state, const CMatrix& unitary);

/// Zero every component whose `mode` occupation differs from `n`.
FockState project_mode(const FockState& state, int mode, int n);

struct MeasureOutcome {
  int outcome = 0;
  FockState state;
  double renormalized_deficit = 0.0;  // deficit dropped when normalizing the input
};

/// Samples the mode's photon number from its marginal; the input is
/// renormalized first and the collapsed state is returned normalized.
MeasureOutcome measure_mode(const FockState& state, int mode, SplitMix64& rng);

/// Maps a mode that holds a definite photon number back to vacuum.
FockState reset_mode(const FockState& state, int mode);

/// ⟨a_i a_j⟩ and ⟨a_i† a_j⟩.
cplx expect_aa(const FockState& state, int i, int j);
cplx expect_adag_a(const FockState& state, int i, int j);

/// Photon-number tuple distribution plus mass lost to truncation.
struct FockDistribution {
  int mode_count = 0;
  int cutoff = 0;
  std::map<std::vector<int>, double> probabilities;
  double deficit = 0.0;

  double total() const;
  double probability(const std::vector<int>& n) const;
};

FockDistribution photon_distribution(const FockState& state);
double total_variation_distance(const FockDistribution& a, const FockDistribution& b);

/// Binary patterns with N ≤ max_photons (even N only) with leakage.
PatternDistribution to_binary_distribution(const FockDistribution& dist, int max_photons);

struct FockLimits {
  int max_static_modes = 4;
  int max_slots = 3;
  int max_cutoff = 10;
};

/// Squeezed vacuum with Takagi r_j followed by the Takagi interferometer.
FockState gbs_state(const TakagiFactors& factors, int cutoff, const FockLimits& limits = {});

/// Static MPS circuit run gate by gate on all modes at once.
FockDistribution joint_distribution(const MpsCircuit& circuit, const RVector& theta,
                                    const RVector& phi, int cutoff,
                                    const FockLimits& limits = {});

/// Schedule run on its physical slots, enumerating every measurement branch
/// exactly. Outcomes are recorded per logical mode.
FockDistribution joint_distribution(const HolographicSchedule& schedule, int cutoff,
                                    const FockLimits& limits = {});

}  // namespace hgbs
