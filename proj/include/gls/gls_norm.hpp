#pragma once

#include <unordered_map>
#include <variant>

#include "gls/measure.hpp"
#include "gls/psi.hpp"
#include "gls/scalar_opt.hpp"

namespace gls {

struct GLSpace {
  Psi psi;
  OptConfig opt{};

  double a() const { return psi.a(); }
  double b() const { return psi.b(); }
};

struct GlsResult {
  double value = 0.0;
  double arg_p = 0.0;
  bool converged = true;
  bool tail_dominated = false;
  // kappa/theta only: the infimum vanished for a nonzero argument (singular psi);
  // the theorem bound then degenerates to the plain triangle inequality.
  bool vacuous_bound = false;
  // kappa/theta evaluated outside the interval range their theorem assumes.
  bool outside_nominal_interval = false;
  long probes = 0;
};

// sup_{p in (a,b)} |f|_p / psi(p), realized as a max over the closure.
// Extremal psi short-circuits to the classical L_r norm.
GlsResult gls_norm(const SimpleFunction& f, const GLSpace& space);

// kappa(u) = inf_p (|u|_p / psi(p))^2; nominal interval range 1 < a < b <= 2.
GlsResult kappa(const SimpleFunction& u, const GLSpace& space);

// theta(u) = inf_p |u|_p^p / (p 2^p psi(p)^p), in log space; nominal 2 < a < b < inf.
GlsResult theta(const SimpleFunction& u, const GLSpace& space);

struct LpSpace {
  double p;
};
using SpaceDesc = std::variant<LpSpace, GLSpace>;

double space_norm(const SpaceDesc& space, const SimpleFunction& f);

// Memoizing lp_norm wrapper: several extremizations over one function probe the
// same grid of p values, so repeated evaluations are served from a cache.
// Call-local, not thread-safe.
class CachedLp {
public:
  explicit CachedLp(const SimpleFunction& f);
  double operator()(double p) const;
  double sup() const { return eval_.sup(); }
  bool is_zero() const { return zero_; }

private:
  LpEvaluator eval_;
  bool zero_;
  mutable std::unordered_map<double, double> cache_;
};

// Cores shared by the plain entry points and the campaign's cached path; the
// lp callback must behave exactly like lp_norm(f, .).
GlsResult gls_norm_core(const std::function<double(double)>& lp_at, double lp_sup,
                        const GLSpace& space);
GlsResult kappa_core(const std::function<double(double)>& lp_at, double lp_sup,
                     bool u_is_zero, const GLSpace& space);
GlsResult theta_core(const std::function<double(double)>& lp_at, double lp_sup,
                     bool u_is_zero, const GLSpace& space);

}  // namespace gls
