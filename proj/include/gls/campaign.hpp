#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gls/convexity.hpp"

namespace gls {

enum class Command {
  Norm,
  Moc,
  VerifyThm21,
  VerifyThm31,
  VerifyTriangle,
  VerifyExamples,
  SweepMoc,
  SweepSubgaussian,
};

std::string command_name(Command c);

struct CampaignConfig {
  Command command = Command::VerifyTriangle;
  long trials = 1000;
  std::uint64_t seed = 0;
  int atoms_min = 2;
  int atoms_max = 64;
  // NaN means "per-command default".
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  std::string psi_spec = "const:c=1";
  double p = 2.0;
  bool use_lp = false;  // sweep-moc over L_p instead of a GLS space
  std::vector<double> eps_grid;
  double d = std::numeric_limits<double>::quiet_NaN();  // examples: psi bound
  double p_max = 65536.0;  // probe cap for unbounded intervals
  int example_select = 0;  // verify-examples: 0 = both, 1, 2
  bool degenerate_pairs = false;  // force y = x (trivial-slack path)
  std::string out_base;           // "" -> ./<command>
  int threads = 0;                // 0 -> hardware; does not affect results
};

enum TrialFlags : unsigned {
  kFlagVacuous = 1u,
  kFlagTail = 2u,
  kFlagNotConverged = 4u,
};
std::string flags_to_string(unsigned flags);

struct TrialRecord {
  long index = 0;
  int example = 0;  // verify-examples only
  double slack = 0.0;
  double dist = 0.0;
  double functional = 0.0;
  double arg_p = 0.0;
  double proof_slack = 0.0;
  double delta = 0.0;
  unsigned flags = 0;
};

struct SweepRecord {
  double eps = 0.0;
  double analytic_delta = std::numeric_limits<double>::quiet_NaN();
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  double two_atom_delta = std::numeric_limits<double>::quiet_NaN();
  double two_atom_gap = std::numeric_limits<double>::quiet_NaN();
  double empirical_min = std::numeric_limits<double>::quiet_NaN();
  double best_dist = std::numeric_limits<double>::quiet_NaN();
  double best_sum_norm = std::numeric_limits<double>::quiet_NaN();
  long feasible = 0;
  long rejected = 0;
};

struct VerificationReport {
  CampaignConfig config;  // defaults resolved
  std::vector<TrialRecord> trials;
  std::vector<SweepRecord> sweep;
  double min_slack = std::numeric_limits<double>::infinity();
  double mean_slack = 0.0;
  long violations = 0;          // trials with slack < -1e-9 (asserting checks)
  long example2_violations = 0; // reporting mode, never fails the exit status
  long vacuous_count = 0;
  long worst_trial = -1;
  double wall_time_s = 0.0;
  std::string trials_path, summary_path;
  int exit_status = 0;
};

// Runs verify-* and sweep-* campaigns and writes <out>.trials.csv,
// <out>.summary.csv plus the worst/minimizing pairs in function-file format.
// Reports are bit-reproducible from (config, seed); wall time appears only on
// a comment line. norm/moc are single evaluations handled by the CLI.
VerificationReport run_campaign(const CampaignConfig& cfg);

// Tolerance below which a slack counts as a violation.
inline constexpr double kViolationTol = -1e-9;

}  // namespace gls
