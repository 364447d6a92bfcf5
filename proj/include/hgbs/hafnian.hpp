#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "hgbs/common.hpp"

namespace hgbs {

/// Binary photon-detection pattern: n_j ∈ {0, 1} per mode.
class PhotonPattern {
 public:
  PhotonPattern() = default;
  explicit PhotonPattern(std::vector<std::uint8_t> bits);
  /// Parses "0110"; anything other than '0'/'1' is rejected.
  static PhotonPattern from_string(const std::string& bits);
  static PhotonPattern zeros(int mode_count);
  static PhotonPattern from_modes(int mode_count, const std::vector<int>& occupied);

  int mode_count() const { return static_cast<int>(bits_.size()); }
  int total() const;
  bool operator[](int j) const { return bits_[j] != 0; }
  std::vector<int> occupied() const;
  std::string to_string() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  auto operator<=>(const PhotonPattern&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

template <typename Scalar>
struct MatchingSum {
  Scalar value{};
  std::uint64_t matchings_enumerated = 0;
};

/// Hafnian by enumerating all perfect matchings: the lowest unmatched index
/// is paired with every other unmatched index in turn. Every matching is
/// visited, including those whose product vanishes.
MatchingSum<double> hafnian(const RMatrix& symmetric);
MatchingSum<cplx> hafnian(const CMatrix& symmetric);

/// (2k−1)!! pairings of 2k items; throws on odd or out-of-range input.
std::uint64_t perfect_matchings(int node_set_size);

/// Sub-matrix on the given indices.
template <typename Derived>
auto restrict_to(const Eigen::MatrixBase<Derived>& m, const std::vector<int>& idx) {
  using Plain = typename Derived::PlainObject;
  const int n = static_cast<int>(idx.size());
  Plain out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = m(idx[a], idx[b]);
  return out;
}

/// Everything needed to score a binary pattern of a graph-encoded state:
/// Pr(S) = c^N [det(D_S) Haf(A_S)]² / √|det σ_Q| with D = diag(1+w).
struct GraphBundle {
  RMatrix adjacency;
  RVector node_scale;  // 1 + w_i
  double c = 0.0;
  double log_sqrt_det_sigma_q = 0.0;  // ½ log|det σ_Q|

  double vacuum_probability() const { return std::exp(-log_sqrt_det_sigma_q); }
};

/// Any pure zero-mean Gaussian state: Pr(S) = |Haf(B_S)|² / √|det σ_Q| with
/// B the lower-right kernel block.
struct StateBundle {
  CMatrix kernel_block;
  double log_sqrt_det_sigma_q = 0.0;

  double vacuum_probability() const { return std::exp(-log_sqrt_det_sigma_q); }
};

/// ½ log|det σ_Q|.
double log_sqrt_det(const CMatrix& sigma_q);

double pattern_probability(const GraphBundle& bundle, const PhotonPattern& pattern);
double pattern_probability(const StateBundle& bundle, const PhotonPattern& pattern);

}  // namespace hgbs
