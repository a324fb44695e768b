#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gls/measure.hpp"

namespace gls {

enum class PsiKind { PowerRoot, EndpointSingular, Extremal, Constant, Natural, Tabulated };

// Generating function psi on an interval (a,b), 1 <= a < b <= inf.
// Strictly positive on the open interval; may diverge at the endpoints.
// Construction validates positivity on a 1000-point probe grid. For tabulated
// data this is heuristic: positivity between probes is inherited from the
// log-linear interpolation, not proven for the underlying function.
class Psi {
public:
  static Psi power_root(double m, double a, double b);           // p^(1/m)
  static Psi endpoint_singular(double beta1, double beta2, double a, double b);
  static Psi extremal(double r, double a, double b);             // 1 at r, +inf elsewhere
  static Psi constant(double c, double a, double b);
  static Psi natural(SimpleFunction f, double a, double b);      // p -> |f|_p
  static Psi tabulated(std::vector<std::pair<double, double>> table, double a, double b);

  PsiKind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  bool unbounded() const;  // b == +inf

  // Strict evaluation on the open interval (a,b); throws outside.
  // Returns +inf only for the Extremal kind at p != r.
  double eval(double p) const;

  // Continuous one-sided limit extension onto the closure [a,b] (b finite);
  // +inf where psi diverges. No domain check beyond clamping to [a,b].
  double eval_closure(double p) const;

  // Limit of psi(p) as p -> +inf; meaningful for unbounded intervals.
  double limit_at_sup() const;

  bool is_extremal() const { return kind_ == PsiKind::Extremal; }
  double extremal_r() const { return r_; }

  std::string describe() const;

private:
  Psi() = default;
  double raw_eval(double p) const;
  void validate_probe_grid() const;

  PsiKind kind_ = PsiKind::Constant;
  double a_ = 1.0, b_ = 2.0;
  double m_ = 0.0, beta1_ = 0.0, beta2_ = 0.0, r_ = 0.0, c_ = 1.0;
  std::optional<LpEvaluator> natural_eval_;
  std::vector<double> tab_p_, tab_log_psi_;
};

// CLI grammar: power_root:m=2 | endpoint:beta1=1,beta2=0.5 | const:c=1 |
// extremal:r=3 | natural:file=<path> | table:file=<path>
Psi parse_psi_spec(const std::string& spec, double a, double b);

// sup_{0 < eps <= b-1} eps^(theta/(b-eps)) |f|_{b-eps}, b > 1 finite, theta >= 0.
// Claimed equivalent (up to constants) to the GLS norm with an endpoint-singular
// psi, beta2 = theta/b; the equivalence constants are measured, never asserted.
struct BThetaResult {
  double value = 0.0;
  double arg_eps = 0.0;
  bool converged = true;
};
BThetaResult btheta_norm(const SimpleFunction& f, double b, double theta);

// max over a 1000-point probe grid; +inf when psi diverges inside (a,b).
double psi_probe_max(const Psi& psi, int n = 1000);

}  // namespace gls
