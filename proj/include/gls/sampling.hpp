#pragma once

#include <cstdint>

#include "gls/gls_norm.hpp"
#include "gls/measure.hpp"

namespace gls {

// Deterministic per-trial stream: every draw derives from (seed, stream), so
// campaign results are bit-identical regardless of the parallel schedule.
class TrialRng {
public:
  TrialRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform01();                // [0, 1)
  double uniform_pos();              // (0, 1]
  double heavy_tailed_symmetric();   // standard Cauchy
  int uniform_int(int lo, int hi);   // inclusive bounds

private:
  std::uint64_t state_;
};

struct PairSampleConfig {
  int atoms_min = 2;
  int atoms_max = 64;
};

// Exponential draws normalized to total mass one (Dirichlet(1,..,1) weights).
PartitionPtr sample_unit_mass_partition(TrialRng& rng, int atoms_min, int atoms_max);

struct BallPair {
  SimpleFunction x, y;
  double norm_x = 0.0, norm_y = 0.0;  // in the sampling space
};

// Heavy-tailed values on a shared partition, each function rescaled by
// rho/norm with rho uniform on [0,1]: covers the interior and boundary of the
// unit ball. degenerate_pair forces y = x.
BallPair sample_ball_pair(TrialRng& rng, const SpaceDesc& space,
                          const PairSampleConfig& cfg, bool degenerate_pair = false);

}  // namespace gls
