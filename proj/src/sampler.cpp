#include "hgbs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "hgbs/rng.hpp"

namespace hgbs {

GraphBundle make_graph_bundle(const WeightedEncoding& encoding) {
  const GaussianState state = covariance_from_kernel(kernel_from_graph(encoding));
  GraphBundle b;
  b.adjacency = encoding.adjacency;
  b.node_scale = encoding.node_scale();
  b.c = encoding.c;
  b.log_sqrt_det_sigma_q = log_sqrt_det(state.sigma_q());
  return b;
}

StateBundle make_state_bundle(const GaussianState& state) {
  StateBundle b;
  b.kernel_block = kernel_block_of(state);
  b.log_sqrt_det_sigma_q = log_sqrt_det(state.sigma_q());
  return b;
}

double PatternDistribution::enumerated_mass() const {
  double s = 0.0;
  for (const auto& [_, p] : entries) s += p;
  return s;
}

double PatternDistribution::probability(const PhotonPattern& p) const {
  auto it = entries.find(p);
  return it == entries.end() ? 0.0 : it->second;
}

double enumeration_work(int mode_count, int max_photons) {
  double total = 0.0;
  for (int k = 0; k <= max_photons && k <= mode_count; k += 2) {
    // C(M, k) in floating point; exact enough for a budget check.
    double binom = 1.0;
    for (int i = 0; i < k; ++i) binom = binom * (mode_count - i) / (i + 1);
    double dfact = 1.0;
    for (int i = k - 1; i > 1; i -= 2) dfact *= i;
    total += binom * dfact;
  }
  return total;
}

namespace {

// Visits every subset of {0..M-1} of size k in lexicographic order.
template <typename Visit>
void for_each_subset(int m, int k, Visit&& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

template <typename Bundle>
PatternDistribution enumerate_impl(const Bundle& bundle, int m, const EnumerationOptions& opt) {
  if (opt.max_photons < 0 || opt.max_photons % 2 != 0)
    throw InputError("max photon number must be even and non-negative");
  if (opt.max_photons > m) throw InputError("max photon number exceeds mode count");
  const double work = enumeration_work(m, opt.max_photons);
  if (work > opt.work_budget) {
    std::ostringstream msg;
    msg << "work budget exceeded: sum_k C(" << m << ",k)(k-1)!! up to k=" << opt.max_photons
        << " is " << work << " > budget " << opt.work_budget;
    throw InputError(msg.str());
  }
  PatternDistribution dist;
  dist.mode_count = m;
  dist.max_photons = opt.max_photons;
  double mass = 0.0;
  for (int k = 0; k <= opt.max_photons; k += 2) {
    for_each_subset(m, k, [&](const std::vector<int>& idx) {
      const PhotonPattern p = PhotonPattern::from_modes(m, idx);
      const double prob = pattern_probability(bundle, p);
      dist.entries.emplace(p, prob);
      mass += prob;
    });
  }
  dist.leakage = 1.0 - mass;
  return dist;
}

}  // namespace

PatternDistribution enumerate_distribution(const GraphBundle& bundle,
                                           const EnumerationOptions& options) {
  return enumerate_impl(bundle, static_cast<int>(bundle.adjacency.rows()), options);
}

PatternDistribution enumerate_distribution(const StateBundle& bundle,
                                           const EnumerationOptions& options) {
  return enumerate_impl(bundle, static_cast<int>(bundle.kernel_block.rows()), options);
}

SampleHistogram draw_samples(const PatternDistribution& dist, std::uint64_t count,
                             std::uint64_t seed) {
  if (dist.entries.empty()) throw InputError("cannot sample from an empty distribution");
  std::vector<const PhotonPattern*> keys;
  std::vector<double> cdf;
  keys.reserve(dist.entries.size());
  cdf.reserve(dist.entries.size());
  double acc = 0.0;
  for (const auto& [p, prob] : dist.entries) {
    if (prob <= 0.0) continue;
    acc += prob;
    keys.push_back(&p);
    cdf.push_back(acc);
  }
  if (!(acc > 0.0)) throw InputError("distribution has zero total mass");

  SampleHistogram hist;
  hist.seed = seed;
  hist.total_draws = count;
  SplitMix64 rng(derive_seed(seed, "draw_samples"));
  std::vector<std::uint64_t> tally(keys.size(), 0);
  for (std::uint64_t n = 0; n < count; ++n) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t pos = static_cast<std::size_t>(it - cdf.begin());
    if (pos >= keys.size()) pos = keys.size() - 1;
    ++tally[pos];
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (tally[i] > 0) hist.counts.emplace(*keys[i], tally[i]);
  return hist;
}

void write_histogram_csv(std::ostream& out, const SampleHistogram& hist,
                         const PatternDistribution& dist, const std::string& meta_comment) {
  if (!meta_comment.empty()) out << "# " << meta_comment << "\n";
  out << "# seed=" << hist.seed << " draws=" << hist.total_draws
      << " leakage=" << std::setprecision(17) << dist.leakage << "\n";
  out << "pattern,count,probability\n";
  for (const auto& [p, n] : hist.counts)
    out << p.to_string() << "," << n << "," << std::setprecision(17) << dist.probability(p)
        << "\n";
}

nlohmann::json histogram_to_json(const SampleHistogram& hist, const PatternDistribution& dist) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [p, n] : hist.counts)
    rows.push_back({{"pattern", p.to_string()}, {"count", n}, {"probability", dist.probability(p)}});
  return {{"seed", hist.seed},
          {"total_draws", hist.total_draws},
          {"leakage", dist.leakage},
          {"max_photons", dist.max_photons},
          {"rng", std::string(SplitMix64::kAlgorithm)},
          {"counts", rows}};
}

nlohmann::json distribution_to_json(const PatternDistribution& dist) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [p, prob] : dist.entries)
    rows.push_back({{"pattern", p.to_string()}, {"probability", prob}});
  return {{"mode_count", dist.mode_count},
          {"max_photons", dist.max_photons},
          {"leakage", dist.leakage},
          {"entries", rows}};
}

}  // namespace hgbs
