#include "gls/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gls {

namespace {

// splitmix64 scramble
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t stream) {
  state_ = mix64(seed ^ 0x8824a1f7edbd6d2fULL) + stream * 0x9e3779b97f4a7c15ULL;
  // warm up so that nearby streams decorrelate
  next_u64();
  next_u64();
}

std::uint64_t TrialRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double TrialRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrialRng::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double TrialRng::heavy_tailed_symmetric() {
  return std::tan(std::numbers::pi * (uniform01() - 0.5));
}

int TrialRng::uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

PartitionPtr sample_unit_mass_partition(TrialRng& rng, int atoms_min, int atoms_max) {
  if (atoms_min < 1 || atoms_max < atoms_min)
    throw std::invalid_argument("sample_unit_mass_partition: bad atom bounds");
  const int k = rng.uniform_int(atoms_min, atoms_max);
  std::vector<double> w(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    w[i] = -std::log(rng.uniform_pos());
    if (w[i] <= 0.0) w[i] = 1e-300;  // uniform_pos can return exactly 1
    total += w[i];
  }
  for (int i = 0; i < k; ++i) w[i] /= total;
  return std::make_shared<MeasurePartition>(std::move(w));
}

namespace {

SimpleFunction sample_values(TrialRng& rng, const PartitionPtr& part) {
  std::vector<double> v(part->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.heavy_tailed_symmetric();
  return SimpleFunction(part, std::move(v));
}

SimpleFunction scale_into_ball(TrialRng& rng, const SpaceDesc& space,
                               const SimpleFunction& raw, double* norm_out) {
  const double n0 = space_norm(space, raw);
  if (!(n0 > 0.0) || !std::isfinite(n0)) {
    // zero draw: keep the zero function, which lies in every ball
    *norm_out = 0.0;
    return raw.scaled(0.0);
  }
  const double rho = rng.uniform01();
  SimpleFunction f = raw.scaled(rho / n0);
  *norm_out = rho;
  return f;
}

}  // namespace

BallPair sample_ball_pair(TrialRng& rng, const SpaceDesc& space,
                          const PairSampleConfig& cfg, bool degenerate_pair) {
  PartitionPtr part = sample_unit_mass_partition(rng, cfg.atoms_min, cfg.atoms_max);
  SimpleFunction raw_x = sample_values(rng, part);
  double nx = 0.0;
  SimpleFunction x = scale_into_ball(rng, space, raw_x, &nx);
  if (degenerate_pair) {
    return BallPair{x, x, nx, nx};
  }
  SimpleFunction raw_y = sample_values(rng, part);
  double ny = 0.0;
  SimpleFunction y = scale_into_ball(rng, space, raw_y, &ny);
  return BallPair{std::move(x), std::move(y), nx, ny};
}

}  // namespace gls
