#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace gls {

enum class ExtremizeMode { Sup, Inf };

struct OptConfig {
  int grid_size = 512;
  int refine_iters = 60;
  double p_max = 65536.0;        // probe cap when the interval is unbounded
  int refine_brackets = 3;       // local extrema refined per call
  double value_tie_tol = 1e-12;  // ties resolved toward the smallest argument
};

struct ScalarOptResult {
  double value = 0.0;
  double arg = 0.0;
  bool converged = true;
  bool tail_dominated = false;
  long probes = 0;
};

// Grid scan plus golden-section refinement of the best brackets.
//
// The objective must be evaluable on the closure [lo, hi]: endpoint calls mean
// one-sided limit values, supplied by the caller. +-inf objective values are
// tolerated (they simply never win); NaN is rejected. For hi == +inf the grid
// is log-spaced from lo to cfg.p_max and `tail_value` (the p -> inf limit, if
// given) competes as a candidate at arg = +inf. A custom grid overrides the
// default spacing; it must be sorted and contained in [lo, hi].
ScalarOptResult scalar_extremize(const std::function<double(double)>& objective,
                                 double lo, double hi, ExtremizeMode mode,
                                 const OptConfig& cfg = {},
                                 std::optional<double> tail_value = std::nullopt,
                                 const std::vector<double>* custom_grid = nullptr);

// Uniform grid on [lo, hi] including both endpoints.
std::vector<double> uniform_grid(double lo, double hi, int n);
// Log-spaced grid on [lo, hi], both endpoints included; requires 0 < lo < hi.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace gls
