#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace gls {

// Finite weighted partition standing in for an atomless measure space.
// Weights are the atom masses; all strictly positive, at least one atom.
class MeasurePartition {
public:
  explicit MeasurePartition(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_mass_; }

private:
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

using PartitionPtr = std::shared_ptr<const MeasurePartition>;

// Step function: one finite real value per atom of a shared partition.
// Immutable after construction.
class SimpleFunction {
public:
  SimpleFunction(PartitionPtr partition, std::vector<double> values);
  SimpleFunction(std::vector<double> weights, std::vector<double> values);

  const MeasurePartition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }
  std::size_t size() const { return values_.size(); }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  bool is_zero() const;
  SimpleFunction scaled(double c) const;

private:
  PartitionPtr partition_;
  std::vector<double> values_;
};

// Pointwise arithmetic; both operands must live on the same partition.
SimpleFunction operator+(const SimpleFunction& f, const SimpleFunction& g);
SimpleFunction operator-(const SimpleFunction& f, const SimpleFunction& g);
SimpleFunction operator*(double c, const SimpleFunction& f);
SimpleFunction operator*(const SimpleFunction& f, double c);

// Compensated (Neumaier) summation.
double stable_sum(const std::vector<double>& terms);

// (sum_i w_i |v_i|^p)^(1/p) for finite p >= 1. Scaled by max|v| internally so
// that huge p (up to 2^20 and beyond) neither overflows nor underflows.
double lp_norm(const SimpleFunction& f, double p);

// max_i |v_i|; the p -> infinity limit of lp_norm.
double ess_sup(const SimpleFunction& f);

// Precomputed per-function state for evaluating lp_norm at many values of p.
class LpEvaluator {
public:
  explicit LpEvaluator(const SimpleFunction& f);

  double operator()(double p) const;  // == lp_norm(f, p)
  double sup() const { return max_abs_; }
  double total_mass() const { return total_mass_; }

private:
  std::vector<double> weights_;
  std::vector<double> log_ratio_;  // log(|v_i|/max_abs); -inf marks zero values
  double max_abs_ = 0.0;
  double total_mass_ = 0.0;
};

struct LyapunovCheck {
  bool monotone = true;
  // First adjacent pair (p_lo, p_hi) of the sorted grid where the norm decreases.
  std::optional<std::pair<double, double>> violation;
  double norm_before = 0.0;
  double norm_after = 0.0;
};

// Requires unit total mass (|mass - 1| <= 1e-9), else throws: the monotonicity
// only holds on probability measures. Slack 1e-12 per adjacent pair.
LyapunovCheck lyapunov_monotone(const SimpleFunction& f, std::vector<double> p_grid);

}  // namespace gls
