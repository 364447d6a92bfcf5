#include "hgbs/hafnian.hpp"

#include <cmath>
#include <utility>

namespace hgbs {

PhotonPattern::PhotonPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::size_t j = 0; j < bits_.size(); ++j)
    if (bits_[j] > 1)
      throw InputError("pattern entry " + std::to_string(j) +
                       " exceeds one photon; only binary patterns are supported");
}

PhotonPattern PhotonPattern::from_string(const std::string& bits) {
  std::vector<std::uint8_t> b;
  b.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw InputError("pattern must be a 0/1 string: '" + bits + "'");
    b.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return PhotonPattern(std::move(b));
}

PhotonPattern PhotonPattern::zeros(int mode_count) {
  return PhotonPattern(std::vector<std::uint8_t>(mode_count, 0));
}

PhotonPattern PhotonPattern::from_modes(int mode_count, const std::vector<int>& occupied) {
  std::vector<std::uint8_t> b(mode_count, 0);
  for (int j : occupied) {
    if (j < 0 || j >= mode_count) throw InputError("mode index out of range");
    b[j] = 1;
  }
  return PhotonPattern(std::move(b));
}

int PhotonPattern::total() const {
  int n = 0;
  for (auto b : bits_) n += b;
  return n;
}

std::vector<int> PhotonPattern::occupied() const {
  std::vector<int> out;
  for (int j = 0; j < mode_count(); ++j)
    if (bits_[j]) out.push_back(j);
  return out;
}

std::string PhotonPattern::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

namespace {

// `free[0..n)` holds the unmatched indices. The first is paired with each
// other one, which is swapped into slot 1 so the remainder stays contiguous.
template <typename Matrix, typename Scalar>
void match(const Matrix& s, int* free, int n, Scalar partial, MatchingSum<Scalar>& acc) {
  if (n == 0) {
    acc.value += partial;
    ++acc.matchings_enumerated;
    return;
  }
  const int first = free[0];
  for (int k = 1; k < n; ++k) {
    std::swap(free[1], free[k]);
    match(s, free + 2, n - 2, partial * s(first, free[1]), acc);
    std::swap(free[1], free[k]);
  }
}

template <typename Matrix>
auto hafnian_impl(const Matrix& s) {
  using Scalar = typename Matrix::Scalar;
  if (s.rows() != s.cols()) throw InputError("hafnian input must be square");
  if (s.size() > 0 && (s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("hafnian input is not symmetric");
  MatchingSum<Scalar> acc;
  if (s.rows() % 2 != 0) return acc;  // no perfect matching
  std::vector<int> free(s.rows());
  for (int i = 0; i < s.rows(); ++i) free[i] = i;
  match(s, free.data(), static_cast<int>(free.size()), Scalar(1), acc);
  return acc;
}

}  // namespace

MatchingSum<double> hafnian(const RMatrix& symmetric) { return hafnian_impl(symmetric); }
MatchingSum<cplx> hafnian(const CMatrix& symmetric) { return hafnian_impl(symmetric); }

std::uint64_t perfect_matchings(int node_set_size) {
  if (node_set_size < 0 || node_set_size % 2 != 0)
    throw InputError("perfect matchings need an even, non-negative set size");
  if (node_set_size > 34) throw InputError("set size too large for 64-bit matching count");  // 35!! overflows
  std::uint64_t count = 1;
  for (int k = node_set_size - 1; k > 1; k -= 2) count *= static_cast<std::uint64_t>(k);
  return count;
}

double log_sqrt_det(const CMatrix& sigma_q) {
  Eigen::PartialPivLU<CMatrix> lu(sigma_q);
  // Sum of log|U_ii| avoids overflow in the determinant for large M.
  const CMatrix& lu_mat = lu.matrixLU();
  double s = 0.0;
  for (int i = 0; i < lu_mat.rows(); ++i) s += std::log(std::abs(lu_mat(i, i)));
  return 0.5 * s;
}

namespace {

// Above this photon number probabilities are assembled in log space.
constexpr int kLogSpaceThreshold = 6;

void check_pattern(int modes, const PhotonPattern& pattern) {
  if (pattern.mode_count() != modes)
    throw InputError("pattern length " + std::to_string(pattern.mode_count()) +
                     " does not match mode count " + std::to_string(modes));
}

}  // namespace

double pattern_probability(const GraphBundle& bundle, const PhotonPattern& pattern) {
  check_pattern(static_cast<int>(bundle.adjacency.rows()), pattern);
  const auto idx = pattern.occupied();
  const int n = static_cast<int>(idx.size());
  if (n % 2 != 0) return 0.0;
  const double haf = hafnian(restrict_to(bundle.adjacency, idx)).value;
  if (haf == 0.0) return 0.0;
  double det_d = 1.0;
  double log_det_d = 0.0;
  for (int i : idx) {
    det_d *= bundle.node_scale(i);
    log_det_d += std::log(bundle.node_scale(i));
  }
  if (n > kLogSpaceThreshold) {
    const double log_p = n * std::log(bundle.c) + 2.0 * (log_det_d + std::log(std::abs(haf))) -
                         bundle.log_sqrt_det_sigma_q;
    return std::exp(log_p);
  }
  const double amp = det_d * haf;
  return std::pow(bundle.c, n) * amp * amp * std::exp(-bundle.log_sqrt_det_sigma_q);
}

double pattern_probability(const StateBundle& bundle, const PhotonPattern& pattern) {
  check_pattern(static_cast<int>(bundle.kernel_block.rows()), pattern);
  const auto idx = pattern.occupied();
  if (idx.size() % 2 != 0) return 0.0;
  const double h = std::abs(hafnian(restrict_to(bundle.kernel_block, idx)).value);
  if (h == 0.0) return 0.0;
  if (static_cast<int>(idx.size()) > kLogSpaceThreshold)
    return std::exp(2.0 * std::log(h) - bundle.log_sqrt_det_sigma_q);
  return h * h * std::exp(-bundle.log_sqrt_det_sigma_q);
}

}  // namespace hgbs
