#include <gtest/gtest.h>

#include <cmath>

#include "hgbs/fock.hpp"
#include "hgbs/pipeline.hpp"

using namespace hgbs;

namespace {

// ⟨2k|S(r)|0⟩² = (2k)! / (4^k (k!)²) · tanhᵏ... squared: tanh^{2k} r / cosh r · C(2k,k)/4^k.
double squeezed_even_probability(double r, int k) {
  double binom = 1.0;  // C(2k, k) / 4^k
  for (int i = 1; i <= k; ++i) binom *= (2.0 * i - 1.0) / (2.0 * i);
  return binom * std::pow(std::tanh(r), 2 * k) / std::cosh(r);
}

double amp2(const FockState& s, std::vector<int> occ) { return std::norm(s.amplitude(occ)); }

FockState random_state(int modes, int cutoff, int max_total, std::uint64_t seed) {
  SplitMix64 rng(seed);
  FockState s(modes, cutoff);
  double norm = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const auto occ = s.occupation(i);
    int total = 0;
    for (int n : occ) total += n;
    if (total > max_total) continue;
    s.amplitudes()[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    norm += std::norm(s.amplitudes()[i]);
  }
  for (auto& a : s.amplitudes()) a /= std::sqrt(norm);
  return s;
}

}  // namespace

TEST(Fock, IndexingAndNumberStates) {
  const auto s = FockState::number_state(5, {1, 2, 3});
  EXPECT_EQ(s.dimension(), 125u);
  EXPECT_EQ(s.index({1, 2, 3}), 38u);
  EXPECT_EQ(s.occupation(38), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(amp2(s, {1, 2, 3}), 1.0);
  EXPECT_EQ(FockState::vacuum(2, 4).amplitude({0, 0}), cplx(1.0));
  EXPECT_THROW(FockState(30, 10), InputError);
}

TEST(Fock, SqueezeSingleMode) {
  const auto vac = FockState::vacuum(1, 20);
  EXPECT_LT(std::abs(apply_squeeze(vac, 0, 0.0).amplitude({0}) - 1.0), 1e-15);

  const auto s = apply_squeeze(vac, 0, 0.5);
  EXPECT_NEAR(amp2(s, {0}), 1.0 / std::cosh(0.5), 1e-12);
  for (int n = 1; n < 20; n += 2) EXPECT_LT(amp2(s, {n}), 1e-24);
  for (int k = 0; 2 * k < 20; ++k) EXPECT_NEAR(amp2(s, {2 * k}), squeezed_even_probability(0.5, k), 1e-12);
  EXPECT_NEAR(s.norm_squared() + s.norm_deficit(), 1.0, 1e-12);
  EXPECT_GT(s.norm_deficit(), 0.0);
}

TEST(Fock, SqueezeIsUndoneByItsInverse) {
  // Cutoff 30 keeps the intermediate tail (≈ tanh^30) below the tolerance.
  const auto s = apply_squeeze(apply_squeeze(FockState::vacuum(1, 30), 0, 0.5), 0, -0.5);
  EXPECT_NEAR(amp2(s, {0}), 1.0, 1e-8);
}

TEST(Fock, SqueezeMatrixIsNearlyUnitaryOnLowLevels) {
  const RMatrix s = squeeze_matrix(0.3, 40);
  const RMatrix g = s.transpose() * s;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(g(i, j), i == j ? 1.0 : 0.0, 1e-10);
}

TEST(Fock, BeamSplitterExamples) {
  const auto s10 = FockState::number_state(4, {1, 0});
  const auto same = apply_beamsplitter(s10, 0, 1, 0.0, 0.0);
  EXPECT_NEAR(amp2(same, {1, 0}), 1.0, 1e-15);

  const auto swapped = apply_beamsplitter(s10, 0, 1, kPi / 2, 0.0);
  EXPECT_NEAR(amp2(swapped, {0, 1}), 1.0, 1e-14);

  const auto half = apply_beamsplitter(s10, 0, 1, kPi / 4, 0.3);
  EXPECT_NEAR(amp2(half, {1, 0}), 0.5, 1e-14);
  EXPECT_NEAR(amp2(half, {0, 1}), 0.5, 1e-14);

  // Hong–Ou–Mandel: |1,1⟩ through a balanced splitter never leaves one photon per port.
  const auto hom = apply_beamsplitter(FockState::number_state(4, {1, 1}), 0, 1, kPi / 4, 0.0);
  EXPECT_LT(amp2(hom, {1, 1}), 1e-28);
  EXPECT_NEAR(amp2(hom, {2, 0}), 0.5, 1e-14);
}

TEST(Fock, BeamSplitterMatrixIsUnitaryAndConservesPhotons) {
  const int d = 6;
  const CMatrix u = beamsplitter_matrix(0.7, 1.3, d);
  EXPECT_LT((u.adjoint() * u - CMatrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff(), 1e-12);
  for (int i = 0; i < d * d; ++i)
    for (int j = 0; j < d * d; ++j)
      if (i / d + i % d != j / d + j % d) {
        EXPECT_EQ(u(i, j), cplx(0.0));
      }
}

TEST(Fock, SectorMassIsInvariantUnderBeamSplitters) {
  const auto s = random_state(3, 6, 5, 2);
  const auto t = apply_beamsplitter(apply_beamsplitter(s, 0, 1, 0.4, 0.2), 1, 2, 1.1, -0.5);
  std::vector<double> before(16, 0.0), after(16, 0.0);
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const auto occ = s.occupation(i);
    const int total = occ[0] + occ[1] + occ[2];
    before[total] += std::norm(s.amplitudes()[i]);
    after[total] += std::norm(t.amplitudes()[i]);
  }
  for (int n = 0; n < 16; ++n) EXPECT_NEAR(before[n], after[n], 1e-12);
}

TEST(Fock, PassiveInterferometerMatchesBeamSplitter) {
  const auto s = random_state(3, 6, 5, 3);
  CMatrix u = CMatrix::Identity(3, 3);
  u.block(1, 1, 2, 2) = beam_splitter_block(0.9, 0.4);
  const auto a = apply_interferometer(s, u);
  const auto b = apply_beamsplitter(s, 1, 2, 0.9, 0.4);
  double diff = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i) diff = std::max(diff, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  EXPECT_LT(diff, 1e-12);
  EXPECT_THROW(apply_interferometer(s, 2.0 * CMatrix::Identity(3, 3)), InputError);
}

TEST(Fock, MeasurementExamples) {
  SplitMix64 rng(1);
  const auto vac = measure_mode(FockState::vacuum(2, 4), 0, rng);
  EXPECT_EQ(vac.outcome, 0);
  EXPECT_NEAR(amp2(vac.state, {0, 0}), 1.0, 1e-15);

  const auto one = measure_mode(FockState::number_state(4, {1}), 0, rng);
  EXPECT_EQ(one.outcome, 1);

  const auto squeezed = apply_squeeze(FockState::vacuum(1, 12), 0, 0.6);
  int even = 0;
  for (int draw = 0; draw < 10000; ++draw) even += measure_mode(squeezed, 0, rng).outcome % 2 == 0;
  EXPECT_EQ(even, 10000);

  SplitMix64 a(99), b(99);
  for (int draw = 0; draw < 100; ++draw)
    EXPECT_EQ(measure_mode(squeezed, 0, a).outcome, measure_mode(squeezed, 0, b).outcome);
}

TEST(Fock, MeasurementFrequenciesFollowTheMarginal) {
  const auto half = apply_beamsplitter(FockState::number_state(4, {1, 0}), 0, 1, kPi / 3, 0.0);
  SplitMix64 rng(4);
  const int n = 20000;
  int ones = 0;
  for (int draw = 0; draw < n; ++draw) ones += measure_mode(half, 0, rng).outcome;
  const double p = 0.25;  // cos²(π/3)
  EXPECT_LT(std::abs(static_cast<double>(ones) / n - p), 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Fock, ResetExamples) {
  const auto vac = FockState::vacuum(2, 4);
  EXPECT_EQ(reset_mode(vac, 0).amplitudes(), vac.amplitudes());

  const auto r = reset_mode(FockState::number_state(4, {1, 2}), 0);
  EXPECT_NEAR(amp2(r, {0, 2}), 1.0, 1e-15);

  const auto superposed = apply_beamsplitter(FockState::number_state(4, {1, 0}), 0, 1, kPi / 4, 0.0);
  EXPECT_THROW(reset_mode(superposed, 0), InputError);
}

TEST(Fock, MeasureThenResetLeavesTheConditionalState) {
  FockState s = apply_squeeze(FockState::vacuum(2, 8), 0, 0.4);
  s = apply_squeeze(s, 1, -0.3);
  s = apply_beamsplitter(s, 0, 1, 0.6, 0.8);
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = measure_mode(s, 0, rng);
    const auto after = reset_mode(m.state, 0);
    double norm = 0.0;
    for (int k = 0; k < 8; ++k) norm += amp2(s, {m.outcome, k});
    for (int k = 0; k < 8; ++k) {
      const cplx expect = s.amplitude({m.outcome, k}) / std::sqrt(norm);
      EXPECT_LT(std::abs(after.amplitude({0, k}) - expect), 1e-12);
    }
    EXPECT_NEAR(after.norm_squared(), 1.0, 1e-12);
  }
}

TEST(Fock, SingleModeMomentsMatchGaussian) {
  for (double r : {0.3, 0.6}) {
    const auto s = apply_squeeze(FockState::vacuum(1, 20), 0, r);
    RVector rv(1);
    rv << r;
    const auto g = squeezed_vacuum_covariance(rv);
    const double aa = expect_aa(s, 0, 0).real();
    const double nn = expect_adag_a(s, 0, 0).real();
    // The truncated state misses Σ_{n≥20} terms; bound them analytically.
    double tail_aa = 0.0, tail_nn = 0.0;
    for (int k = 10; k < 200; ++k) {
      const double p = squeezed_even_probability(r, k);
      tail_nn += 2.0 * k * p;
      const double ratio = std::sqrt(squeezed_even_probability(r, k + 1) / p);
      tail_aa += std::sqrt((2.0 * k + 1) * (2.0 * k + 2)) * p * ratio;
    }
    tail_aa += std::sqrt(19.0 * 20.0) * std::sqrt(squeezed_even_probability(r, 9) * squeezed_even_probability(r, 10));
    EXPECT_NEAR(aa, g.sigma(0, 1).real(), tail_aa + 1e-12) << "r=" << r;
    EXPECT_NEAR(nn + 0.5, g.sigma(0, 0).real(), tail_nn + 1e-12) << "r=" << r;
    if (r == 0.3) {
      EXPECT_NEAR(aa, g.sigma(0, 1).real(), 1e-8);
      EXPECT_NEAR(nn + 0.5, g.sigma(0, 0).real(), 1e-8);
    }
  }
}

TEST(Fock, MultimodeMomentsMatchForwardCovariance) {
  RVector r(3);
  r << 0.25, -0.2, 0.15;
  const auto c = build_circuit(3, 2, r);
  RVector th(4), ph(4);
  th << 0.3, 1.0, -0.6, 2.2;
  ph << 0.5, -1.2, 0.8, 0.1;
  const auto g = forward_covariance(c, th, ph);
  FockState s = FockState::vacuum(3, 16);
  for (int j = 0; j < 3; ++j) s = apply_squeeze(s, j, r(j));
  for (const auto& gate : c.bind(th, ph)) s = apply_beamsplitter(s, gate.mode_a, gate.mode_b, gate.theta, gate.phi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_LT(std::abs(expect_aa(s, i, j) - g.sigma(i, 3 + j)), 1e-6);
      EXPECT_LT(std::abs(expect_adag_a(s, j, i) + (i == j ? 0.5 : 0.0) - g.sigma(i, j)), 1e-6);
    }
}

TEST(Fock, TwoModeGbsDistribution) {
  auto graph = InteractionGraph::empty(2);
  graph.adjacency << 0, 1, 1, 0;
  const auto e = encode_graph(graph, 0.5);
  const auto dist = photon_distribution(gbs_state(e.takagi, 10));
  EXPECT_NEAR(dist.probability({0, 0}), 0.75, 1e-12);
  EXPECT_NEAR(dist.probability({1, 1}), 0.1875, 1e-12);
  EXPECT_LT(dist.probability({1, 0}), 1e-24);
  const auto binary = to_binary_distribution(dist, 2);
  EXPECT_NEAR(binary.leakage, 0.0625, 1e-10);
}

TEST(Fock, StaticCircuitWithoutSqueezingIsVacuum) {
  const auto c = build_circuit(3, 1, RVector::Zero(3));
  RVector th(2), ph(2);
  th << 0.4, 0.9;
  ph << 0.1, 0.2;
  const auto dist = joint_distribution(c, th, ph, 6);
  EXPECT_NEAR(dist.probability({0, 0, 0}), 1.0, 1e-14);
}

TEST(Fock, ScheduleMatchesStaticCircuit) {
  for (int layers : {1, 2}) {
    RVector r(4);
    r << 0.4, 0.3, 0.35, 0.2;
    const auto c = build_circuit(4, layers, r);
    const int k = c.gate_count();
    SplitMix64 rng(layers);
    RVector th(k), ph(k);
    for (int i = 0; i < k; ++i) {
      th(i) = rng.uniform(0, 2 * kPi);
      ph(i) = rng.uniform(0, 2 * kPi);
    }
    const auto stat = joint_distribution(c, th, ph, 6);
    const auto holo = joint_distribution(compile_schedule(c, th, ph), 6);
    EXPECT_LT(total_variation_distance(stat, holo), 1e-6) << layers << " layers";
  }
}

TEST(Fock, ResourceBounds) {
  const auto c = build_circuit(5, 1, RVector::Zero(5));
  EXPECT_THROW(joint_distribution(c, RVector::Zero(4), RVector::Zero(4), 4), InputError);
  const auto c4 = build_circuit(4, 1, RVector::Zero(4));
  EXPECT_THROW(joint_distribution(c4, RVector::Zero(3), RVector::Zero(3), 11), InputError);
}
