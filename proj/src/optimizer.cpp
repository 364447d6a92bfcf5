#include "hgbs/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace hgbs {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr int kMaxExpansions = 30;

struct LineSearchResult {
  bool ok = false;
  double step = 0.0;
  double value = 0.0;
};

// Armijo backtracking from `step`; on first-try success keeps doubling while
// the value keeps dropping.
LineSearchResult line_search(const Objective& f, const RVector& x, double fx, double slope,
                             const RVector& dir, double step) {
  auto eval = [&](double a) { return f(x + a * dir, nullptr); };
  double a = step;
  double fa = eval(a);
  int tries = 0;
  while (!(std::isfinite(fa) && fa <= fx + kArmijo * a * slope)) {
    if (++tries > kMaxBacktracks) return {};
    a *= 0.5;
    fa = eval(a);
  }
  if (tries == 0) {
    for (int k = 0; k < kMaxExpansions; ++k) {
      const double b = 2.0 * a;
      const double fb = eval(b);
      if (!(std::isfinite(fb) && fb < fa && fb <= fx + kArmijo * b * slope)) break;
      a = b;
      fa = fb;
    }
  }
  if (!(fa < fx)) return {};
  return {true, a, fa};
}

}  // namespace

CgResult minimize_cg(const Objective& f, RVector x0, const CgOptions& options) {
  const int n = static_cast<int>(x0.size());
  const int restart_every = options.restart_every > 0 ? options.restart_every : std::max(n, 1);
  CgResult res;
  res.x = std::move(x0);
  RVector g(n);
  res.value = f(res.x, &g);
  if (!std::isfinite(res.value)) throw NumericalError("objective is not finite at start point");
  res.trace.push_back(res.value);
  if (n == 0) {
    res.converged = true;
    return res;
  }

  RVector d = -g;
  double step = 1.0 / std::max(d.norm(), 1e-12);
  int since_restart = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (g.norm() == 0.0) {
      res.converged = true;
      break;
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      d = -g;
      slope = g.dot(d);
      since_restart = 0;
    }
    LineSearchResult ls = line_search(f, res.x, res.value, slope, d, step);
    if (!ls.ok && since_restart > 0) {
      // Retry along steepest descent before giving up.
      d = -g;
      slope = g.dot(d);
      since_restart = 0;
      ls = line_search(f, res.x, res.value, slope, d, 1.0 / std::max(d.norm(), 1e-12));
    }
    if (!ls.ok) {
      res.converged = true;  // no further decrease representable
      break;
    }
    res.x += ls.step * d;
    RVector g_new(n);
    const double value = f(res.x, &g_new);
    if (!std::isfinite(value)) throw NumericalError("objective became non-finite");
    res.value = value;
    res.trace.push_back(value);
    res.iterations = it + 1;

    const double beta_pr = g_new.dot(g_new - g) / std::max(g.squaredNorm(), 1e-300);
    const double beta = std::max(0.0, beta_pr);
    g = std::move(g_new);
    ++since_restart;
    if (since_restart >= restart_every) {
      d = -g;
      since_restart = 0;
    } else {
      d = -g + beta * d;
    }
    step = ls.step * 2.0;

    const int w = options.stall_window;
    const int t = static_cast<int>(res.trace.size());
    if (t > w) {
      const double before = res.trace[t - 1 - w];
      if (before - res.value <= options.relative_tolerance * std::max(std::abs(res.value), 1e-300)) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

RVector central_difference_gradient(const Objective& f, const RVector& x, double h) {
  RVector g(x.size());
  RVector xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    xp(i) = xi + h;
    const double fp = f(xp, nullptr);
    xp(i) = xi - h;
    const double fm = f(xp, nullptr);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace hgbs
