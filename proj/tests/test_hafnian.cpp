#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "hgbs/hafnian.hpp"
#include "hgbs/rng.hpp"
#include "hgbs/sampler.hpp"

using namespace hgbs;

namespace {

RMatrix random_symmetric(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s(i, j) = s(j, i) = rng.uniform(-1, 1);
  return s;
}

// Haf(A) = (1 / (2^n n!)) Σ_{π ∈ S_2n} ∏_i A_{π(2i), π(2i+1)}.
double permutation_hafnian(const RMatrix& a) {
  const int size = static_cast<int>(a.rows());
  std::vector<int> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < size; i += 2) prod *= a(perm[i], perm[i + 1]);
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  double norm = 1.0;
  for (int i = 1; i <= size / 2; ++i) norm *= 2.0 * i;
  return sum / norm;
}

InteractionGraph two_mode_graph() {
  auto g = InteractionGraph::empty(2);
  g.adjacency << 0, 1, 1, 0;
  return g;
}

}  // namespace

TEST(Hafnian, SmallExamples) {
  RMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_EQ(hafnian(swap).value, 1.0);

  const auto ones = hafnian(RMatrix(RMatrix::Ones(4, 4)));
  EXPECT_EQ(ones.value, 3.0);
  EXPECT_EQ(ones.matchings_enumerated, 3u);

  RMatrix c4 = RMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) c4(i, (i + 1) % 4) = c4((i + 1) % 4, i) = 1.0;
  EXPECT_EQ(hafnian(c4).value, 2.0);
  EXPECT_EQ(hafnian(c4).matchings_enumerated, 3u);
}

TEST(Hafnian, EmptyAndOdd) {
  const auto empty = hafnian(RMatrix(0, 0));
  EXPECT_EQ(empty.value, 1.0);
  const auto odd = hafnian(RMatrix(RMatrix::Ones(3, 3)));
  EXPECT_EQ(odd.value, 0.0);
  EXPECT_EQ(odd.matchings_enumerated, 0u);
}

TEST(Hafnian, RejectsAsymmetric) {
  RMatrix a(2, 2);
  a << 0, 1, 2, 0;
  EXPECT_THROW(hafnian(a), InputError);
}

TEST(Hafnian, MatchesPermutationSum) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (int n : {2, 4, 6, 8}) {
      const RMatrix a = random_symmetric(n, seed * 10 + n);
      EXPECT_NEAR(hafnian(a).value, permutation_hafnian(a), 1e-12) << "n=" << n;
    }
  }
}

TEST(Hafnian, ComplexAgreesWithReal) {
  const RMatrix a = random_symmetric(8, 77);
  const auto c = hafnian(CMatrix(a.cast<cplx>()));
  EXPECT_NEAR(c.value.real(), hafnian(a).value, 1e-12);
  EXPECT_NEAR(c.value.imag(), 0.0, 1e-14);
  CMatrix ia = cplx(0, 1) * a.cast<cplx>();  // Haf(iA) = i^n Haf(A), n = 4
  EXPECT_NEAR(hafnian(ia).value.real(), hafnian(a).value, 1e-12);
}

TEST(Hafnian, PermutationInvariance) {
  const RMatrix a = random_symmetric(8, 5);
  const double base = hafnian(a).value;
  SplitMix64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> p(8);
    std::iota(p.begin(), p.end(), 0);
    for (int i = 7; i > 0; --i) std::swap(p[i], p[rng.next() % (i + 1)]);
    EXPECT_NEAR(hafnian(restrict_to(a, p)).value, base, 1e-12);
  }
}

TEST(Hafnian, EnumeratesEveryMatching) {
  std::uint64_t double_factorial = 1;
  for (int n = 1; n <= 6; ++n) {
    double_factorial *= 2 * n - 1;
    const RMatrix zero = RMatrix::Zero(2 * n, 2 * n);
    EXPECT_EQ(hafnian(zero).matchings_enumerated, double_factorial);
    EXPECT_EQ(hafnian(RMatrix(RMatrix::Ones(2 * n, 2 * n))).value, static_cast<double>(double_factorial));
  }
}

TEST(Hafnian, PerfectMatchingCounts) {
  EXPECT_EQ(perfect_matchings(0), 1u);
  EXPECT_EQ(perfect_matchings(2), 1u);
  EXPECT_EQ(perfect_matchings(4), 3u);
  EXPECT_EQ(perfect_matchings(10), 945u);
  EXPECT_EQ(perfect_matchings(34), 6332659870762850625ull);
  EXPECT_THROW(perfect_matchings(3), InputError);
  EXPECT_THROW(perfect_matchings(-2), InputError);
  EXPECT_THROW(perfect_matchings(36), InputError);
}

TEST(Hafnian, EdgeMonotonicity) {
  SplitMix64 rng(4);
  RMatrix a = RMatrix::Zero(8, 8);
  double previous = hafnian(a).value;
  for (int step = 0; step < 28; ++step) {
    int i = static_cast<int>(rng.next() % 8), j = static_cast<int>(rng.next() % 8);
    if (i == j) continue;
    a(i, j) = a(j, i) = 1.0;
    const double now = hafnian(a).value;
    EXPECT_GE(now, previous);
    previous = now;
  }
}

TEST(Hafnian, PatternParsing) {
  const auto p = PhotonPattern::from_string("0110");
  EXPECT_EQ(p.mode_count(), 4);
  EXPECT_EQ(p.total(), 2);
  EXPECT_EQ(p.occupied(), (std::vector<int>{1, 2}));
  EXPECT_EQ(p.to_string(), "0110");
  EXPECT_EQ(PhotonPattern::from_modes(4, {1, 2}), p);
  EXPECT_THROW(PhotonPattern::from_string("0120"), InputError);
}

TEST(Hafnian, TwoModeProbabilities) {
  const auto bundle = make_graph_bundle(weighted_encoding(two_mode_graph(), 0.5));
  EXPECT_NEAR(pattern_probability(bundle, PhotonPattern::from_string("00")), 0.75, 1e-15);
  EXPECT_EQ(pattern_probability(bundle, PhotonPattern::from_string("10")), 0.0);
  EXPECT_NEAR(pattern_probability(bundle, PhotonPattern::from_string("11")), 0.1875, 1e-15);
  EXPECT_THROW(pattern_probability(bundle, PhotonPattern::from_string("111")), InputError);
}

TEST(Hafnian, GraphAndStateBundlesAgree) {
  auto g = random_graph(10, 0.5, 31);
  for (int i = 0; i < 10; ++i) g.weights(i) = 0.05 * i;
  const auto enc = weighted_encoding(g, choose_c_weighted(g, 0.5));
  const auto gb = make_graph_bundle(enc);
  const auto sb = make_state_bundle(covariance_from_kernel(kernel_from_graph(enc)));
  EXPECT_NEAR(gb.vacuum_probability(), sb.vacuum_probability(), 1e-13);
  for (const std::string bits : {"1100000000", "1111000000", "0101010101", "1111111100", "1111111111"}) {
    const auto p = PhotonPattern::from_string(bits);
    EXPECT_NEAR(pattern_probability(gb, p), pattern_probability(sb, p),
                1e-12 * std::max(1e-300, pattern_probability(gb, p)) + 1e-18)
        << bits;
  }
}

TEST(Hafnian, LargePatternMatchesDirectFormula) {
  auto g = random_graph(10, 0.7, 8);
  const double c = choose_c(g, 0.5);
  const auto bundle = make_graph_bundle(weighted_encoding(g, c));
  const std::vector<int> occ{0, 1, 2, 3, 4, 5, 6, 7};
  const double haf = hafnian(restrict_to(g.adjacency, occ)).value;
  const double direct = std::pow(c, 8) * haf * haf * bundle.vacuum_probability();
  EXPECT_NEAR(pattern_probability(bundle, PhotonPattern::from_modes(10, occ)), direct, 1e-12 * direct);
}
