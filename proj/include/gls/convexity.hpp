#pragma once

#include <cstdint>
#include <optional>

#include "gls/gls_norm.hpp"
#include "gls/sampling.hpp"

namespace gls {

enum class MocMethod { ClosedForm, ImplicitRoot, EmpiricalRandom, EmpiricalTwoAtom };
const char* moc_method_name(MocMethod m);

struct MocResult {
  double epsilon = 0.0;
  double p = 0.0;  // NaN for GLS-space empirical estimates
  double delta = 0.0;
  MocMethod method = MocMethod::ClosedForm;
  int iterations = 0;
  double residual = 0.0;
};

// Modulus of convexity of L_p. p > 2: closed form 1 - (1 - (eps/2)^p)^(1/p);
// p in (1,2]: root of (1-d+eps/2)^p + |1-d-eps/2|^p = 2 on d in [0,1], found by
// bracketed bisection with Newton polish (residual <= 1e-12). L_1 is excluded.
MocResult delta_lp_exact(double p, double eps);

// (p-1) eps^2 / 8 for p in (1,2]; eps^p / (p 2^p) for p in (2,inf).
double delta_lp_lower_bound(double p, double eps);

struct TriangleCheck {
  double slack = 0.0;  // 2 - 2 delta_p(||x-y||) - ||x+y||; >= 0 when the bound holds
  double dist = 0.0;
  double delta = 0.0;
};

// Both functions must lie in the unit ball of L_p (tolerance 1e-12).
TriangleCheck refined_triangle_check(const SimpleFunction& x, const SimpleFunction& y,
                                     double p);

enum class WcocKind { Thm21, Thm31 };

struct WcocBound {
  WcocKind kind = WcocKind::Thm21;
  double bound_value = 0.0;       // right side of the conclusion: 2 - 2*delta_component
  double delta_component = 0.0;   // (a-1)/8 * kappa, resp. theta/2
  double functional_value = 0.0;  // kappa or theta at x - y
  double arg_p = 0.0;
};

struct WcocCheck {
  WcocBound bound;
  double slack = 0.0;     // bound_value - ||x+y||_Gpsi
  double sum_norm = 0.0;  // ||x+y||_Gpsi
  double dist_gls = 0.0;  // ||x-y||_Gpsi
  // Proof-chain intermediate: inf_p delta_{L_p}(||x-y||_p / psi(p)) and the
  // slack of 2 - 2 inf delta >= ||x+y||.
  double proof_inf_delta = 0.0;
  double proof_slack = 0.0;
  bool vacuous_bound = false;
  bool tail_dominated = false;
  bool converged = true;
};

// ||x+y|| <= 2 - (a-1)/4 kappa(x-y) on intervals with 1 < a < b <= 2.
// Ball norms may be passed in when the caller already knows them.
WcocCheck wcoc_bound_thm21(const SimpleFunction& x, const SimpleFunction& y,
                           const GLSpace& space,
                           std::optional<double> norm_x = std::nullopt,
                           std::optional<double> norm_y = std::nullopt);

// ||x+y|| <= 2 - theta(x-y) on intervals with 2 < a < b < inf.
WcocCheck wcoc_bound_thm31(const SimpleFunction& x, const SimpleFunction& y,
                           const GLSpace& space,
                           std::optional<double> norm_x = std::nullopt,
                           std::optional<double> norm_y = std::nullopt);

// One pass over u = x - y shared by the WCOC checks; the three results equal
// separate gls_norm / kappa-or-theta calls bit for bit.
struct DifferenceAnalysis {
  GlsResult norm;
  GlsResult functional;
  GlsResult proof_inf_delta;
};
DifferenceAnalysis analyze_difference(const SimpleFunction& u, const GLSpace& space,
                                      bool use_theta);

struct EmpiricalMoc {
  MocResult result;
  long feasible = 0;
  long rejected = 0;
  long best_trial = -1;
  std::optional<SimpleFunction> best_x, best_y;
  double best_dist = 0.0;
  double best_sum_norm = 0.0;

  bool infeasible() const { return feasible == 0; }
};

// Minimum of 1 - ||x+y||/2 over sampled ball pairs with ||x-y|| >= eps: an
// upper estimate of the modulus. Pairs failing the distance constraint are
// reflected (y -> -y) first, then rejected; rejections are reported. When no
// pair is feasible the result carries delta = NaN and feasible = 0.
EmpiricalMoc empirical_moc_random(const SpaceDesc& space, double eps, long trials,
                                  std::uint64_t seed,
                                  const PairSampleConfig& pairs = {},
                                  std::uint64_t stream_salt = 0, int threads = 1);

// Directed two-atom search in L_p: x = (alpha, beta), y = (alpha, -beta) on
// weights (w, 1-w), beta fixed by ||x-y||_p = eps and alpha by ||x||_p = 1,
// minimized over w. Reproduces the closed form exactly for p >= 2.
MocResult empirical_moc_two_atom(double p, double eps);

struct ExampleCheck {
  double slack = 0.0;
  double dist_a = 0.0;   // ||x-y||_a
  double sum_norm = 0.0;
  bool reporting_only = false;
};

// Section-4 style bounds under mu(Z) = 1 and psi <= d on the probe grid.
// Example 1 (1 < a < b <= 2): slack of ||x+y|| <= 2 - (a-1)/4 ||x-y||_a^2 / d^2.
ExampleCheck example1_check(const SimpleFunction& x, const SimpleFunction& y,
                            const GLSpace& space, double d,
                            std::optional<double> norm_x = std::nullopt,
                            std::optional<double> norm_y = std::nullopt);
// Example 2 (2 <= a < b < inf): slack of ||x+y|| <= 2 - ||x-y||_a^a / (b 2^b d^b),
// reporting mode only: violations are counted, never asserted.
ExampleCheck example2_check(const SimpleFunction& x, const SimpleFunction& y,
                            const GLSpace& space, double d,
                            std::optional<double> norm_x = std::nullopt,
                            std::optional<double> norm_y = std::nullopt);

}  // namespace gls
