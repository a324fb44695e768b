#include "gls/gls_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2 = 0.69314718055994530942;

double ratio_or_zero(double lp, double psi) {
  // C/inf := 0, matching the extremal-psi convention.
  if (std::isinf(psi)) return 0.0;
  return lp / psi;
}

GlsResult from_opt(const ScalarOptResult& r) {
  GlsResult out;
  out.value = r.value;
  out.arg_p = r.arg;
  out.converged = r.converged;
  out.tail_dominated = r.tail_dominated;
  out.probes = r.probes;
  return out;
}

}  // namespace

CachedLp::CachedLp(const SimpleFunction& f) : eval_(f), zero_(f.is_zero()) {
  cache_.reserve(2048);
}

double CachedLp::operator()(double p) const {
  auto it = cache_.find(p);
  if (it != cache_.end()) return it->second;
  const double v = eval_(p);
  cache_.emplace(p, v);
  return v;
}

GlsResult gls_norm_core(const std::function<double(double)>& lp_at, double lp_sup,
                        const GLSpace& space) {
  const Psi& psi = space.psi;
  if (psi.is_extremal()) {
    GlsResult out;
    out.value = lp_at(psi.extremal_r());
    out.arg_p = psi.extremal_r();
    out.probes = 1;
    return out;
  }
  auto objective = [&](double p) {
    return ratio_or_zero(std::isinf(p) ? lp_sup : lp_at(p), psi.eval_closure(p));
  };
  std::optional<double> tail;
  if (psi.unbounded()) tail = ratio_or_zero(lp_sup, psi.limit_at_sup());
  ScalarOptResult r = scalar_extremize(objective, psi.a(), psi.b(), ExtremizeMode::Sup,
                                       space.opt, tail);
  return from_opt(r);
}

GlsResult kappa_core(const std::function<double(double)>& lp_at, double lp_sup,
                     bool u_is_zero, const GLSpace& space) {
  const Psi& psi = space.psi;
  auto objective = [&](double p) {
    const double r = ratio_or_zero(std::isinf(p) ? lp_sup : lp_at(p), psi.eval_closure(p));
    return r * r;
  };
  std::optional<double> tail;
  if (psi.unbounded()) {
    const double r = ratio_or_zero(lp_sup, psi.limit_at_sup());
    tail = r * r;
  }
  ScalarOptResult r = scalar_extremize(objective, psi.a(), psi.b(), ExtremizeMode::Inf,
                                       space.opt, tail);
  GlsResult out = from_opt(r);
  out.vacuous_bound = (out.value <= 0.0) && !u_is_zero;
  out.outside_nominal_interval = !(psi.a() > 1.0 && psi.b() <= 2.0);
  return out;
}

GlsResult theta_core(const std::function<double(double)>& lp_at, double lp_sup,
                     bool u_is_zero, const GLSpace& space) {
  const Psi& psi = space.psi;
  auto objective = [&](double p) {
    if (std::isinf(p)) {
      const double r = ratio_or_zero(lp_sup, psi.limit_at_sup());
      return (r <= 1.0) ? 0.0 : kInf;
    }
    const double lp = lp_at(p);
    if (lp == 0.0) return 0.0;
    const double psv = psi.eval_closure(p);
    if (std::isinf(psv)) return 0.0;
    // |u|_p^p / (p 2^p psi^p) evaluated in log space
    return std::exp(p * (std::log(lp) - kLog2 - std::log(psv)) - std::log(p));
  };
  std::optional<double> tail;
  if (psi.unbounded()) tail = objective(kInf);
  ScalarOptResult r = scalar_extremize(objective, psi.a(), psi.b(), ExtremizeMode::Inf,
                                       space.opt, tail);
  GlsResult out = from_opt(r);
  out.vacuous_bound = (out.value <= 0.0) && !u_is_zero;
  out.outside_nominal_interval = !(psi.a() > 2.0 && !psi.unbounded());
  return out;
}

GlsResult gls_norm(const SimpleFunction& f, const GLSpace& space) {
  LpEvaluator lp(f);
  return gls_norm_core([&](double p) { return lp(p); }, lp.sup(), space);
}

GlsResult kappa(const SimpleFunction& u, const GLSpace& space) {
  LpEvaluator lp(u);
  return kappa_core([&](double p) { return lp(p); }, lp.sup(), u.is_zero(), space);
}

GlsResult theta(const SimpleFunction& u, const GLSpace& space) {
  LpEvaluator lp(u);
  return theta_core([&](double p) { return lp(p); }, lp.sup(), u.is_zero(), space);
}

double space_norm(const SpaceDesc& space, const SimpleFunction& f) {
  if (std::holds_alternative<LpSpace>(space)) {
    return lp_norm(f, std::get<LpSpace>(space).p);
  }
  return gls_norm(f, std::get<GLSpace>(space)).value;
}

}  // namespace gls
