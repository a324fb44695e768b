#include "gls/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gls {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

MeasurePartition::MeasurePartition(std::vector<double> weights)
    : weights_(std::move(weights)) {
  require(!weights_.empty(), "MeasurePartition: at least one atom required");
  for (double w : weights_) {
    require(std::isfinite(w) && w > 0.0,
            "MeasurePartition: every weight must be finite and > 0");
  }
  total_mass_ = stable_sum(weights_);
}

SimpleFunction::SimpleFunction(PartitionPtr partition, std::vector<double> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  require(partition_ != nullptr, "SimpleFunction: null partition");
  require(values_.size() == partition_->size(),
          "SimpleFunction: values/weights length mismatch");
  for (double v : values_) {
    require(std::isfinite(v), "SimpleFunction: values must be finite");
  }
}

SimpleFunction::SimpleFunction(std::vector<double> weights, std::vector<double> values)
    : SimpleFunction(std::make_shared<MeasurePartition>(std::move(weights)),
                     std::move(values)) {}

bool SimpleFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

SimpleFunction SimpleFunction::scaled(double c) const {
  require(std::isfinite(c), "SimpleFunction::scaled: scale must be finite");
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = c * values_[i];
  return SimpleFunction(partition_, std::move(out));
}

namespace {

const MeasurePartition& common_partition(const SimpleFunction& f,
                                         const SimpleFunction& g) {
  if (f.partition_ptr() == g.partition_ptr()) return f.partition();
  // Distinct objects are accepted when the weights agree exactly.
  require(f.partition().weights() == g.partition().weights(),
          "SimpleFunction arithmetic: operands on different partitions");
  return f.partition();
}

}  // namespace

SimpleFunction operator+(const SimpleFunction& f, const SimpleFunction& g) {
  common_partition(f, g);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f.value(i) + g.value(i);
  return SimpleFunction(f.partition_ptr(), std::move(out));
}

SimpleFunction operator-(const SimpleFunction& f, const SimpleFunction& g) {
  common_partition(f, g);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f.value(i) - g.value(i);
  return SimpleFunction(f.partition_ptr(), std::move(out));
}

SimpleFunction operator*(double c, const SimpleFunction& f) { return f.scaled(c); }
SimpleFunction operator*(const SimpleFunction& f, double c) { return f.scaled(c); }

double stable_sum(const std::vector<double>& terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - s) + t;
    } else {
      comp += (t - s) + sum;
    }
    sum = s;
  }
  return sum + comp;
}

LpEvaluator::LpEvaluator(const SimpleFunction& f)
    : weights_(f.partition().weights()), total_mass_(f.partition().total_mass()) {
  log_ratio_.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    max_abs_ = std::max(max_abs_, std::abs(f.value(i)));
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double av = std::abs(f.value(i));
    log_ratio_[i] = (av == 0.0) ? kNegInf : std::log(av / max_abs_);
  }
}

double LpEvaluator::operator()(double p) const {
  require(std::isfinite(p) && p >= 1.0, "lp_norm: p must be finite and >= 1");
  if (max_abs_ == 0.0) return 0.0;
  // sum w_i (|v_i|/M)^p with compensated accumulation; every term <= w_i.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double lr = log_ratio_[i];
    double t;
    if (lr == 0.0) {
      t = weights_[i];
    } else if (lr == kNegInf) {
      continue;
    } else {
      t = weights_[i] * std::exp(p * lr);
    }
    double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - s) + t;
    } else {
      comp += (t - s) + sum;
    }
    sum = s;
  }
  sum += comp;
  return max_abs_ * std::exp(std::log(sum) / p);
}

double lp_norm(const SimpleFunction& f, double p) { return LpEvaluator(f)(p); }

double ess_sup(const SimpleFunction& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.value(i)));
  return m;
}

LyapunovCheck lyapunov_monotone(const SimpleFunction& f, std::vector<double> p_grid) {
  require(std::abs(f.partition().total_mass() - 1.0) <= 1e-9,
          "lyapunov_monotone: requires unit total mass");
  require(!p_grid.empty(), "lyapunov_monotone: empty grid");
  std::sort(p_grid.begin(), p_grid.end());
  require(p_grid.front() >= 1.0, "lyapunov_monotone: grid entries must be >= 1");

  LpEvaluator eval(f);
  LyapunovCheck out;
  double prev = eval(p_grid.front());
  for (std::size_t i = 1; i < p_grid.size(); ++i) {
    const double cur = eval(p_grid[i]);
    if (cur < prev - 1e-12) {
      out.monotone = false;
      out.violation = std::make_pair(p_grid[i - 1], p_grid[i]);
      out.norm_before = prev;
      out.norm_after = cur;
      return out;
    }
    prev = cur;
  }
  return out;
}

}  // namespace gls
