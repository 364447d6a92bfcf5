#include "hgbs/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace hgbs {

namespace {

constexpr std::size_t kMaxDimension = std::size_t{1} << 22;

void check_mode(const FockState& s, int mode) {
  if (mode < 0 || mode >= s.mode_count()) throw InputError("mode index out of range");
}

// Applies a d×d matrix to one mode.
template <typename Matrix>
FockState apply_single(const FockState& state, int mode, const Matrix& op) {
  check_mode(state, mode);
  const int d = state.cutoff();
  const std::size_t stride = state.stride(mode);
  const std::size_t block = stride * d;
  FockState out = state;
  auto& dst = out.amplitudes();
  const auto& src = state.amplitudes();
  std::vector<cplx> col(d);
  for (std::size_t outer = 0; outer < src.size(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      for (int k = 0; k < d; ++k) col[k] = src[base + k * stride];
      for (int n = 0; n < d; ++n) {
        cplx acc = 0.0;
        for (int k = 0; k < d; ++k) acc += op(n, k) * col[k];
        dst[base + n * stride] = acc;
      }
    }
  }
  return out;
}

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

FockState::FockState(int mode_count, int cutoff) : modes_(mode_count), cutoff_(cutoff) {
  if (mode_count < 1) throw InputError("Fock state needs at least one mode");
  if (cutoff < 1) throw InputError("Fock cutoff must be positive");
  double dim = std::pow(static_cast<double>(cutoff), mode_count);
  if (dim > static_cast<double>(kMaxDimension))
    throw InputError("Fock space too large: resource bound exceeded");
  amps_.assign(ipow(cutoff, mode_count), cplx(0.0));
  amps_[0] = 1.0;
}

FockState FockState::number_state(int cutoff, const std::vector<int>& occupation) {
  FockState s(static_cast<int>(occupation.size()), cutoff);
  s.amps_[0] = 0.0;
  s.amps_[s.index(occupation)] = 1.0;
  return s;
}

std::size_t FockState::stride(int mode) const { return ipow(cutoff_, modes_ - 1 - mode); }

std::vector<int> FockState::occupation(std::size_t index) const {
  std::vector<int> n(modes_);
  for (int k = modes_ - 1; k >= 0; --k) {
    n[k] = static_cast<int>(index % cutoff_);
    index /= cutoff_;
  }
  return n;
}

std::size_t FockState::index(const std::vector<int>& occupation) const {
  if (static_cast<int>(occupation.size()) != modes_) throw InputError("occupation length mismatch");
  std::size_t idx = 0;
  for (int k = 0; k < modes_; ++k) {
    if (occupation[k] < 0 || occupation[k] >= cutoff_)
      throw InputError("occupation outside cutoff");
    idx = idx * cutoff_ + occupation[k];
  }
  return idx;
}

cplx FockState::amplitude(const std::vector<int>& occupation) const {
  return amps_[index(occupation)];
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> FockState::marginal(int mode) const {
  std::vector<double> p(cutoff_, 0.0);
  const std::size_t st = stride(mode);
  for (std::size_t i = 0; i < amps_.size(); ++i) p[(i / st) % cutoff_] += std::norm(amps_[i]);
  return p;
}

RMatrix squeeze_matrix(double r, int cutoff) {
  if (!std::isfinite(r)) throw InputError("squeeze parameter must be finite");
  if (cutoff < 1) throw InputError("cutoff must be positive");
  if (r == 0.0) return RMatrix::Identity(cutoff, cutoff);
  // Pad so the generator's own truncation is far below double precision
  // for the retained levels.
  const double t = std::tanh(std::abs(r));
  const int pad = std::clamp(static_cast<int>(2.0 * 36.0 / std::max(-std::log(t), 1e-3)), 40, 800);
  const int big = cutoff + pad;
  RMatrix gen = RMatrix::Zero(big, big);
  for (int n = 0; n + 2 < big; ++n) {
    const double amp = std::sqrt(static_cast<double>(n + 1) * (n + 2));
    gen(n + 2, n) += 0.5 * r * amp;  // r a†² / 2
    gen(n, n + 2) -= 0.5 * r * amp;  // −r a² / 2
  }
  const RMatrix full = gen.exp();
  return full.topLeftCorner(cutoff, cutoff);
}

CMatrix beamsplitter_matrix(double theta, double phi, int cutoff) {
  const int d = cutoff;
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (int total = 0; total <= 2 * (d - 1); ++total) {
    std::vector<int> na;  // n_a values in this sector
    for (int a = std::max(0, total - (d - 1)); a <= std::min(total, d - 1); ++a) na.push_back(a);
    const int size = static_cast<int>(na.size());
    RMatrix gen = RMatrix::Zero(size, size);
    for (int i = 0; i < size; ++i) {
      const int a = na[i];
      const int b = total - a;
      // a†b: (a, b) → (a+1, b−1)
      if (i + 1 < size && b > 0)
        gen(i + 1, i) += theta * std::sqrt(static_cast<double>(a + 1) * b);
      // −ab†: (a, b) → (a−1, b+1)
      if (i > 0 && a > 0) gen(i - 1, i) -= theta * std::sqrt(static_cast<double>(a) * (b + 1));
    }
    const RMatrix blk = gen.exp();
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        const int ai = na[i];
        const int aj = na[j];
        const cplx phase = std::polar(1.0, phi * ai);
        out(ai * d + (total - ai), aj * d + (total - aj)) = phase * blk(i, j);
      }
  }
  return out;
}

FockState apply_squeeze(const FockState& state, int mode, double r) {
  const double before = state.norm_squared();
  FockState out = apply_single(state, mode, squeeze_matrix(r, state.cutoff()));
  out.add_deficit(std::max(0.0, before - out.norm_squared()));
  return out;
}

FockState apply_phase(const FockState& state, int mode, double phi) {
  const int d = state.cutoff();
  CMatrix op = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) op(n, n) = std::polar(1.0, phi * n);
  return apply_single(state, mode, op);
}

FockState apply_beamsplitter(const FockState& state, int mode_a, int mode_b, double theta,
                             double phi) {
  check_mode(state, mode_a);
  check_mode(state, mode_b);
  if (mode_a == mode_b) throw InputError("beam-splitter modes must differ");
  const int d = state.cutoff();
  const CMatrix op = beamsplitter_matrix(theta, phi, d);
  const std::size_t sa = state.stride(mode_a);
  const std::size_t sb = state.stride(mode_b);
  FockState out = state;
  auto& dst = out.amplitudes();
  const auto& src = state.amplitudes();
  std::vector<cplx> in(d * d);
  for (std::size_t i = 0; i < src.size(); ++i) {
    // Visit each (mode_a, mode_b) fibre once, from its (0, 0) corner.
    if ((i / sa) % d != 0 || (i / sb) % d != 0) continue;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) in[a * d + b] = src[i + a * sa + b * sb];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        cplx acc = 0.0;
        const int row = a * d + b;
        for (int k = 0; k < d * d; ++k)
          if (in[k] != 0.0) acc += op(row, k) * in[k];
        dst[i + a * sa + b * sb] = acc;
      }
  }
  return out;
}

// V|n⟩ = Π_j (Σ_k U_kj a_k†)^{n_j} / √(n_j!) |0⟩ realizes V† a V = U a.
FockState apply_interferometer(const FockState& state, const CMatrix& unitary) {
  const int m = state.mode_count();
  const int d = state.cutoff();
  if (unitary.rows() != m || unitary.cols() != m)
    throw InputError("interferometer size does not match mode count");
  if (unitarity_residual(unitary) > 1e-10) throw InputError("interferometer is not unitary");

  // Monomials in creation operators keyed by occupation.
  using Poly = std::map<std::vector<int>, cplx>;
  std::vector<double> sqrt_fact(d * m + 1, 1.0);
  for (std::size_t k = 1; k < sqrt_fact.size(); ++k)
    sqrt_fact[k] = sqrt_fact[k - 1] * std::sqrt(static_cast<double>(k));

  FockState out(m, d);
  out.amplitudes()[0] = 0.0;
  out.set_deficit(state.norm_deficit());
  double dropped = 0.0;
  const auto& src = state.amplitudes();
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    const cplx amp = src[idx];
    if (amp == 0.0) continue;
    const auto n = state.occupation(idx);
    const int total = std::accumulate(n.begin(), n.end(), 0);
    if (total >= d) {
      dropped += std::norm(amp);
      continue;
    }
    Poly poly{{std::vector<int>(m, 0), cplx(1.0)}};
    double norm_in = 1.0;
    for (int j = 0; j < m; ++j) {
      norm_in *= sqrt_fact[n[j]];
      for (int rep = 0; rep < n[j]; ++rep) {
        Poly next;
        for (const auto& [mono, coef] : poly)
          for (int k = 0; k < m; ++k) {
            if (unitary(k, j) == 0.0) continue;
            auto key = mono;
            ++key[k];
            next[key] += coef * unitary(k, j);
          }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, coef] : poly) {
      double norm_out = 1.0;
      for (int k = 0; k < m; ++k) norm_out *= sqrt_fact[mono[k]];
      out.amplitudes()[out.index(mono)] += amp * coef * norm_out / norm_in;
    }
  }
  out.add_deficit(dropped);
  return out;
}

FockState project_mode(const FockState& state, int mode, int n) {
  check_mode(state, mode);
  if (n < 0 || n >= state.cutoff()) throw InputError("projection level outside cutoff");
  FockState out = state;
  const std::size_t st = state.stride(mode);
  auto& a = out.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (static_cast<int>((i / st) % state.cutoff()) != n) a[i] = 0.0;
  return out;
}

MeasureOutcome measure_mode(const FockState& state, int mode, SplitMix64& rng) {
  check_mode(state, mode);
  const double norm = state.norm_squared();
  if (!(norm > 0.0)) throw NumericalError("cannot measure a zero state");
  const auto p = state.marginal(mode);
  const double u = rng.uniform() * norm;
  double acc = 0.0;
  int outcome = static_cast<int>(p.size()) - 1;
  for (int n = 0; n < static_cast<int>(p.size()); ++n) {
    acc += p[n];
    if (u < acc) {
      outcome = n;
      break;
    }
  }
  while (p[outcome] <= 0.0 && outcome > 0) --outcome;
  if (!(p[outcome] > 0.0)) throw NumericalError("all-zero marginal");
  FockState collapsed = project_mode(state, mode, outcome);
  const double scale = 1.0 / std::sqrt(p[outcome]);
  for (auto& a : collapsed.amplitudes()) a *= scale;
  collapsed.set_deficit(0.0);
  return {outcome, std::move(collapsed), state.norm_deficit()};
}

FockState reset_mode(const FockState& state, int mode) {
  check_mode(state, mode);
  const auto p = state.marginal(mode);
  int level = -1;
  for (int n = 0; n < static_cast<int>(p.size()); ++n) {
    if (p[n] == 0.0) continue;
    if (level >= 0) throw InputError("reset requires a mode with a definite photon number");
    level = n;
  }
  if (level <= 0) return state;
  FockState out = state;
  const std::size_t st = state.stride(mode);
  auto& a = out.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (static_cast<int>((i / st) % state.cutoff()) != level) continue;
    a[i - level * st] = a[i];
    a[i] = 0.0;
  }
  return out;
}

namespace {

// a_mode applied to the amplitude vector (no truncation issue: lowers n).
std::vector<cplx> lower(const FockState& s, int mode) {
  const std::size_t st = s.stride(mode);
  const int d = s.cutoff();
  const auto& a = s.amplitudes();
  std::vector<cplx> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int n = static_cast<int>((i / st) % d);
    if (n > 0) out[i - st] += std::sqrt(static_cast<double>(n)) * a[i];
  }
  return out;
}

cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

}  // namespace

cplx expect_aa(const FockState& state, int i, int j) {
  check_mode(state, i);
  check_mode(state, j);
  FockState tmp = state;
  tmp.amplitudes() = lower(state, j);
  return inner(state.amplitudes(), lower(tmp, i));
}

cplx expect_adag_a(const FockState& state, int i, int j) {
  check_mode(state, i);
  check_mode(state, j);
  return inner(lower(state, i), lower(state, j));
}

double FockDistribution::total() const {
  double s = 0.0;
  for (const auto& [_, p] : probabilities) s += p;
  return s;
}

double FockDistribution::probability(const std::vector<int>& n) const {
  auto it = probabilities.find(n);
  return it == probabilities.end() ? 0.0 : it->second;
}

FockDistribution photon_distribution(const FockState& state) {
  FockDistribution dist;
  dist.mode_count = state.mode_count();
  dist.cutoff = state.cutoff();
  const auto& a = state.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = std::norm(a[i]);
    if (p > 0.0) dist.probabilities[state.occupation(i)] += p;
  }
  dist.deficit = 1.0 - dist.total();
  return dist;
}

double total_variation_distance(const FockDistribution& a, const FockDistribution& b) {
  double s = 0.0;
  for (const auto& [n, p] : a.probabilities) s += std::abs(p - b.probability(n));
  for (const auto& [n, q] : b.probabilities)
    if (!a.probabilities.count(n)) s += std::abs(q);
  return 0.5 * s;
}

PatternDistribution to_binary_distribution(const FockDistribution& dist, int max_photons) {
  PatternDistribution out;
  out.mode_count = dist.mode_count;
  out.max_photons = max_photons;
  double mass = 0.0;
  for (const auto& [n, p] : dist.probabilities) {
    if (std::any_of(n.begin(), n.end(), [](int k) { return k > 1; })) continue;
    const int total = std::accumulate(n.begin(), n.end(), 0);
    if (total > max_photons || total % 2 != 0) continue;
    std::vector<std::uint8_t> bits(n.begin(), n.end());
    out.entries[PhotonPattern(std::move(bits))] = p;
    mass += p;
  }
  out.leakage = 1.0 - mass;
  return out;
}

FockState gbs_state(const TakagiFactors& factors, int cutoff, const FockLimits& limits) {
  const int m = static_cast<int>(factors.squeeze_params.size());
  if (m > limits.max_static_modes || cutoff > limits.max_cutoff)
    throw InputError("Fock oracle resource bound exceeded");
  FockState s = FockState::vacuum(m, cutoff);
  for (int j = 0; j < m; ++j) s = apply_squeeze(s, j, factors.squeeze_params(j));
  return apply_interferometer(s, factors.unitary);
}

FockDistribution joint_distribution(const MpsCircuit& circuit, const RVector& theta,
                                    const RVector& phi, int cutoff, const FockLimits& limits) {
  if (circuit.mode_count > limits.max_static_modes || cutoff > limits.max_cutoff)
    throw InputError("Fock oracle resource bound exceeded");
  FockState s = FockState::vacuum(circuit.mode_count, cutoff);
  for (int j = 0; j < circuit.mode_count; ++j) s = apply_squeeze(s, j, circuit.squeeze(j));
  for (const auto& g : circuit.bind(theta, phi))
    s = apply_beamsplitter(s, g.mode_a, g.mode_b, g.theta, g.phi);
  return photon_distribution(s);
}

FockDistribution joint_distribution(const HolographicSchedule& schedule, int cutoff,
                                    const FockLimits& limits) {
  if (schedule.slot_count > limits.max_slots || cutoff > limits.max_cutoff)
    throw InputError("Fock oracle resource bound exceeded");
  check_schedule(schedule);
  FockDistribution dist;
  dist.mode_count = schedule.logical_mode_count;
  dist.cutoff = cutoff;
  std::vector<int> outcome(schedule.logical_mode_count, 0);
  const auto& prog = schedule.instructions;

  std::function<void(std::size_t, FockState)> run = [&](std::size_t pc, FockState s) {
    for (; pc < prog.size(); ++pc) {
      const auto& ins = prog[pc];
      if (const auto* sq = std::get_if<instr::Squeeze>(&ins)) {
        s = apply_squeeze(s, sq->slot, sq->r);
      } else if (const auto* bs = std::get_if<instr::BeamSplit>(&ins)) {
        s = apply_beamsplitter(s, bs->slot_a, bs->slot_b, bs->theta, bs->phi);
      } else if (const auto* rs = std::get_if<instr::Reset>(&ins)) {
        s = reset_mode(s, rs->slot);
      } else if (const auto* ms = std::get_if<instr::Measure>(&ins)) {
        for (int n = 0; n < cutoff; ++n) {
          FockState branch = project_mode(s, ms->slot, n);
          if (!(branch.norm_squared() > 0.0)) continue;
          outcome[ms->logical_mode] = n;
          run(pc + 1, std::move(branch));
        }
        return;
      }
    }
    dist.probabilities[outcome] += s.norm_squared();
  };
  run(0, FockState::vacuum(schedule.slot_count, cutoff));
  dist.deficit = 1.0 - dist.total();
  return dist;
}

}  // namespace hgbs
