#pragma once

#include <functional>
#include <vector>

#include "hgbs/common.hpp"

namespace hgbs {

/// Objective returning f(x) and, when `grad` is non-null, writing ∇f(x).
using Objective = std::function<double(const RVector& x, RVector* grad)>;

struct CgOptions {
  int max_iterations = 2000;
  /// Stop once f improved by less than tolerance·|f| over `stall_window` iterations.
  double relative_tolerance = 1e-10;
  int stall_window = 10;
  /// Restart along −∇f every this many iterations (0 = problem dimension).
  int restart_every = 0;
};

struct CgResult {
  RVector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // objective after each accepted step, non-increasing
};

/// Polak–Ribière (PR+) nonlinear conjugate gradient with a backtracking /
/// expanding Armijo line search. Every accepted step lowers f.
CgResult minimize_cg(const Objective& f, RVector x0, const CgOptions& options = {});

/// Central-difference gradient with step h.
RVector central_difference_gradient(const Objective& f, const RVector& x, double h = 1e-6);

}  // namespace hgbs
