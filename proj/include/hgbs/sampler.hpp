#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "hgbs/encoding.hpp"
#include "hgbs/graph.hpp"
#include "hgbs/hafnian.hpp"

namespace hgbs {

GraphBundle make_graph_bundle(const WeightedEncoding& encoding);
StateBundle make_state_bundle(const GaussianState& state);

/// Truncated output distribution over binary patterns with N ≤ max_photons.
/// Odd-N patterns have identically zero probability and are not stored;
/// `probability` returns 0 for them.
struct PatternDistribution {
  int mode_count = 0;
  int max_photons = 0;
  std::map<PhotonPattern, double> entries;
  double leakage = 0.0;  // 1 − Σ entries

  double enumerated_mass() const;
  double probability(const PhotonPattern& p) const;
};

struct EnumerationOptions {
  int max_photons = 8;
  /// Upper bound on Σ_k C(M,k)·(k−1)!! summed over even k ≤ max_photons.
  double work_budget = 2e9;
};

/// Matching-tree leaves needed to enumerate every even pattern up to N_max.
double enumeration_work(int mode_count, int max_photons);

PatternDistribution enumerate_distribution(const GraphBundle& bundle,
                                           const EnumerationOptions& options = {});
PatternDistribution enumerate_distribution(const StateBundle& bundle,
                                           const EnumerationOptions& options = {});

struct SampleHistogram {
  std::map<PhotonPattern, std::uint64_t> counts;
  std::uint64_t total_draws = 0;
  std::uint64_t seed = 0;
};

/// Multinomial draws from the renormalized enumerated entries.
SampleHistogram draw_samples(const PatternDistribution& dist, std::uint64_t count,
                             std::uint64_t seed);

/// CSV: `pattern,count,probability` after `#`-prefixed metadata lines.
void write_histogram_csv(std::ostream& out, const SampleHistogram& hist,
                         const PatternDistribution& dist, const std::string& meta_comment);
nlohmann::json histogram_to_json(const SampleHistogram& hist, const PatternDistribution& dist);
nlohmann::json distribution_to_json(const PatternDistribution& dist);

}  // namespace hgbs
