#include "gls/psi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gls/io.hpp"
#include "gls/scalar_opt.hpp"

namespace gls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_interval(double a, double b) {
  require(std::isfinite(a) && a >= 1.0, "psi: need a >= 1");
  require(b > a, "psi: need a < b");
}

}  // namespace

Psi Psi::power_root(double m, double a, double b) {
  check_interval(a, b);
  require(std::isfinite(m) && m > 0.0, "psi power_root: need m > 0");
  Psi psi;
  psi.kind_ = PsiKind::PowerRoot;
  psi.a_ = a;
  psi.b_ = b;
  psi.m_ = m;
  psi.validate_probe_grid();
  return psi;
}

Psi Psi::endpoint_singular(double beta1, double beta2, double a, double b) {
  check_interval(a, b);
  require(std::isfinite(b), "psi endpoint: requires a finite interval");
  require(beta1 >= 0.0 && beta2 >= 0.0 && std::isfinite(beta1) && std::isfinite(beta2),
          "psi endpoint: need beta1, beta2 >= 0");
  Psi psi;
  psi.kind_ = PsiKind::EndpointSingular;
  psi.a_ = a;
  psi.b_ = b;
  psi.beta1_ = beta1;
  psi.beta2_ = beta2;
  psi.validate_probe_grid();
  return psi;
}

Psi Psi::extremal(double r, double a, double b) {
  check_interval(a, b);
  require(std::isfinite(r) && r > a && r < b,
          "psi extremal: need a < r < b, else the space degenerates");
  Psi psi;
  psi.kind_ = PsiKind::Extremal;
  psi.a_ = a;
  psi.b_ = b;
  psi.r_ = r;
  return psi;
}

Psi Psi::constant(double c, double a, double b) {
  check_interval(a, b);
  require(std::isfinite(c) && c > 0.0, "psi const: need c > 0");
  Psi psi;
  psi.kind_ = PsiKind::Constant;
  psi.a_ = a;
  psi.b_ = b;
  psi.c_ = c;
  return psi;
}

Psi Psi::natural(SimpleFunction f, double a, double b) {
  check_interval(a, b);
  require(!f.is_zero(), "psi natural: the zero function has no natural generating function");
  Psi psi;
  psi.kind_ = PsiKind::Natural;
  psi.a_ = a;
  psi.b_ = b;
  psi.natural_eval_.emplace(f);
  return psi;
}

Psi Psi::tabulated(std::vector<std::pair<double, double>> table, double a, double b) {
  check_interval(a, b);
  require(!table.empty(), "psi table: empty");
  std::sort(table.begin(), table.end());
  Psi psi;
  psi.kind_ = PsiKind::Tabulated;
  psi.a_ = a;
  psi.b_ = b;
  for (auto& [p, v] : table) {
    require(std::isfinite(p), "psi table: non-finite p");
    require(std::isfinite(v) && v > 0.0, "psi table: psi values must be finite and > 0");
    require(psi.tab_p_.empty() || p > psi.tab_p_.back(), "psi table: duplicate p entry");
    psi.tab_p_.push_back(p);
    psi.tab_log_psi_.push_back(std::log(v));
  }
  psi.validate_probe_grid();
  return psi;
}

bool Psi::unbounded() const { return std::isinf(b_); }

double Psi::raw_eval(double p) const {
  switch (kind_) {
    case PsiKind::PowerRoot:
      return std::exp(std::log(p) / m_);
    case PsiKind::EndpointSingular: {
      double v = 1.0;
      if (beta1_ > 0.0) {
        const double d = p - a_;
        if (d <= 0.0) return kInf;
        v *= std::exp(-beta1_ * std::log(d));
      }
      if (beta2_ > 0.0) {
        const double d = b_ - p;
        if (d <= 0.0) return kInf;
        v *= std::exp(-beta2_ * std::log(d));
      }
      return v;
    }
    case PsiKind::Extremal:
      return (p == r_) ? 1.0 : kInf;
    case PsiKind::Constant:
      return c_;
    case PsiKind::Natural:
      return (*natural_eval_)(p);
    case PsiKind::Tabulated: {
      // log psi interpolated linearly in p; constant beyond the tabulated range.
      if (p <= tab_p_.front()) return std::exp(tab_log_psi_.front());
      if (p >= tab_p_.back()) return std::exp(tab_log_psi_.back());
      auto it = std::upper_bound(tab_p_.begin(), tab_p_.end(), p);
      const std::size_t hi = static_cast<std::size_t>(it - tab_p_.begin());
      const std::size_t lo = hi - 1;
      const double t = (p - tab_p_[lo]) / (tab_p_[hi] - tab_p_[lo]);
      return std::exp(tab_log_psi_[lo] + t * (tab_log_psi_[hi] - tab_log_psi_[lo]));
    }
  }
  return kInf;
}

double Psi::eval(double p) const {
  require(p > a_ && p < b_, "psi: p outside the open interval (a,b)");
  return raw_eval(p);
}

double Psi::eval_closure(double p) const {
  if (std::isinf(p)) return limit_at_sup();
  const double q = std::clamp(p, a_, std::isinf(b_) ? p : b_);
  return raw_eval(q);
}

double Psi::limit_at_sup() const {
  switch (kind_) {
    case PsiKind::PowerRoot:
      return kInf;
    case PsiKind::Constant:
      return c_;
    case PsiKind::Natural:
      return natural_eval_->sup();
    case PsiKind::Tabulated:
      return std::exp(tab_log_psi_.back());
    case PsiKind::Extremal:
      return kInf;
    case PsiKind::EndpointSingular:
      return kInf;  // unreachable: interval is finite
  }
  return kInf;
}

void Psi::validate_probe_grid() const {
  const int n = 1000;
  const double hi = std::isinf(b_) ? std::max(65536.0, 2.0 * a_) : b_;
  double min_seen = kInf;
  for (int i = 0; i < n; ++i) {
    // interior probes only
    const double t = (i + 0.5) / n;
    const double p = std::isinf(b_) ? a_ * std::exp(t * std::log(hi / a_))
                                    : a_ + (b_ - a_) * t;
    const double v = raw_eval(p);
    if (!(v > 0.0) || std::isnan(v) || std::isinf(v)) {
      throw std::invalid_argument("psi: not strictly positive and finite at probe p=" +
                                  format17(p));
    }
    min_seen = std::min(min_seen, v);
  }
  if (!(min_seen > 0.0)) throw std::invalid_argument("psi: probe-grid infimum is 0");
}

double psi_probe_max(const Psi& psi, int n) {
  const double hi = psi.unbounded() ? std::max(65536.0, 2.0 * psi.a()) : psi.b();
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    const double p = psi.a() + (hi - psi.a()) * t;
    m = std::max(m, psi.eval_closure(p));
  }
  return m;
}

std::string Psi::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case PsiKind::PowerRoot: os << "power_root:m=" << format17(m_); break;
    case PsiKind::EndpointSingular:
      os << "endpoint:beta1=" << format17(beta1_) << ",beta2=" << format17(beta2_);
      break;
    case PsiKind::Extremal: os << "extremal:r=" << format17(r_); break;
    case PsiKind::Constant: os << "const:c=" << format17(c_); break;
    case PsiKind::Natural: os << "natural"; break;
    case PsiKind::Tabulated: os << "table[" << tab_p_.size() << "]"; break;
  }
  return os.str();
}

namespace {

double parse_double_strict(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [next, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || next != s.data() + s.size()) {
    throw std::invalid_argument("psi spec: bad numeric value for " + what + ": '" + s + "'");
  }
  return v;
}

}  // namespace

Psi parse_psi_spec(const std::string& spec, double a, double b) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<std::pair<std::string, std::string>> kv;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      std::string item = rest.substr(pos, comma - pos);
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("psi spec: expected key=value, got '" + item + "'");
      kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      pos = comma + 1;
    }
  }
  auto get = [&](const std::string& key) -> const std::string& {
    for (auto& [k, v] : kv)
      if (k == key) return v;
    throw std::invalid_argument("psi spec '" + name + "': missing parameter '" + key + "'");
  };

  if (name == "power_root") return Psi::power_root(parse_double_strict(get("m"), "m"), a, b);
  if (name == "endpoint")
    return Psi::endpoint_singular(parse_double_strict(get("beta1"), "beta1"),
                                  parse_double_strict(get("beta2"), "beta2"), a, b);
  if (name == "const") return Psi::constant(parse_double_strict(get("c"), "c"), a, b);
  if (name == "extremal") return Psi::extremal(parse_double_strict(get("r"), "r"), a, b);
  if (name == "natural") return Psi::natural(read_function_file(get("file")), a, b);
  if (name == "table") return Psi::tabulated(read_table_file(get("file")), a, b);
  throw std::invalid_argument(
      "unknown psi spec '" + name +
      "' (expected power_root | endpoint | const | extremal | natural | table)");
}

BThetaResult btheta_norm(const SimpleFunction& f, double b, double theta) {
  require(std::isfinite(b) && b > 1.0, "btheta_norm: need finite b > 1");
  require(theta >= 0.0 && std::isfinite(theta), "btheta_norm: need theta >= 0");
  if (f.is_zero()) return {0.0, 0.0, true};

  LpEvaluator lp(f);
  // objective over eps in (0, b-1]; at eps -> 0 the limit is |f|_b for theta = 0
  // and 0 for theta > 0 (the eps^(theta/b) factor vanishes).
  auto objective = [&](double eps) {
    if (eps <= 0.0) return theta == 0.0 ? lp(b) : 0.0;
    const double p = b - eps;
    const double factor = std::exp((theta / (b - eps)) * std::log(eps));
    return factor * lp(p);
  };

  // Log-spaced toward eps = 0 where the supremum is typically approached.
  const double hi = b - 1.0;
  std::vector<double> grid = log_grid(hi * 1e-14, hi, 512);
  grid.insert(grid.begin(), 0.0);

  OptConfig cfg;
  ScalarOptResult r = scalar_extremize(objective, 0.0, hi, ExtremizeMode::Sup, cfg,
                                       std::nullopt, &grid);
  return {r.value, r.arg, r.converged};
}

}  // namespace gls
