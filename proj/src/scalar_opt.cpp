#include "gls/scalar_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  double value;
  double arg;
};

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 2) return {lo};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  if (n < 2) return {lo};
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ScalarOptResult scalar_extremize(const std::function<double(double)>& objective,
                                 double lo, double hi, ExtremizeMode mode,
                                 const OptConfig& cfg,
                                 std::optional<double> tail_value,
                                 const std::vector<double>* custom_grid) {
  if (!(lo < hi)) throw std::invalid_argument("scalar_extremize: need lo < hi");

  const double sign = (mode == ExtremizeMode::Sup) ? 1.0 : -1.0;
  long probes = 0;
  auto h = [&](double x) {  // maximized internally
    ++probes;
    const double v = objective(x);
    if (std::isnan(v)) throw std::domain_error("scalar_extremize: objective returned NaN");
    return sign * v;
  };

  std::vector<double> grid;
  if (custom_grid != nullptr) {
    grid = *custom_grid;
    if (grid.size() < 2) throw std::invalid_argument("scalar_extremize: grid too small");
  } else if (std::isinf(hi)) {
    grid = log_grid(lo, std::max(cfg.p_max, 2.0 * lo), std::max(cfg.grid_size, 8));
  } else {
    grid = uniform_grid(lo, hi, std::max(cfg.grid_size, 8));
  }

  std::vector<double> gv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) gv[i] = h(grid[i]);

  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < grid.size(); ++i) candidates.push_back({gv[i], grid[i]});

  // Interior local maxima (plus the two ends), best first.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool left_ok = (i == 0) || gv[i] >= gv[i - 1];
    const bool right_ok = (i + 1 == grid.size()) || gv[i] >= gv[i + 1];
    if (left_ok && right_ok && std::isfinite(gv[i])) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return gv[a] > gv[b]; });
  if (peaks.size() > static_cast<std::size_t>(std::max(cfg.refine_brackets, 1)))
    peaks.resize(static_cast<std::size_t>(std::max(cfg.refine_brackets, 1)));

  const double span = grid.back() - grid.front();
  const double shrink_target = 1e-10 * span;
  bool converged = true;

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t pk : peaks) {
    double xl = (pk == 0) ? grid[0] : grid[pk - 1];
    double xr = (pk + 1 == grid.size()) ? grid.back() : grid[pk + 1];
    if (!(xr > xl)) continue;
    double x1 = xr - gr * (xr - xl);
    double x2 = xl + gr * (xr - xl);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < cfg.refine_iters; ++it) {
      if (xr - xl <= std::max(shrink_target, 4.0 * 1e-16 * (std::abs(xl) + std::abs(xr))))
        break;
      if (f1 < f2) {
        xl = x1;
        x1 = x2;
        f1 = f2;
        x2 = xl + gr * (xr - xl);
        f2 = h(x2);
      } else {
        xr = x2;
        x2 = x1;
        f2 = f1;
        x1 = xr - gr * (xr - xl);
        f1 = h(x1);
      }
    }
    if (xr - xl > std::max(shrink_target, 4.0 * 1e-16 * (std::abs(xl) + std::abs(xr))))
      converged = false;
    candidates.push_back(f1 >= f2 ? Candidate{f1, x1} : Candidate{f2, x2});
  }

  bool tail_is_best = false;
  if (tail_value.has_value()) {
    const double tv = sign * *tail_value;
    if (!std::isnan(tv)) candidates.push_back({tv, kInf});
  }

  double best = -kInf;
  for (const auto& c : candidates) best = std::max(best, c.value);
  // Smallest argument among near-ties; the reported value stays the extremum.
  double arg = kInf;
  for (const auto& c : candidates) {
    if (c.value >= best - cfg.value_tie_tol && c.arg < arg) arg = c.arg;
  }
  if (std::isinf(arg) && tail_value.has_value()) tail_is_best = true;

  ScalarOptResult out;
  out.value = sign * best;
  out.arg = arg;
  out.converged = converged;
  out.tail_dominated = tail_is_best;
  out.probes = probes;
  return out;
}

}  // namespace gls
