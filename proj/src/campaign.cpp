#include "gls/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gls/io.hpp"
#include "gls/parallel.hpp"

namespace gls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool is_set(double x) { return !std::isnan(x); }

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(0.2 * i);
  return g;
}

CampaignConfig resolve_defaults(CampaignConfig cfg) {
  require(cfg.trials >= 1, "campaign: trials must be >= 1");
  require(cfg.atoms_min >= 1 && cfg.atoms_max >= cfg.atoms_min,
          "campaign: bad atom bounds");
  if (cfg.threads <= 0) cfg.threads = default_thread_count();
  require(std::isfinite(cfg.p_max) && cfg.p_max > 1.0,
          "campaign: p_max must be finite and > 1");
  switch (cfg.command) {
    case Command::VerifyThm21:
      if (!is_set(cfg.a)) cfg.a = 1.2;
      if (!is_set(cfg.b)) cfg.b = 2.0;
      break;
    case Command::VerifyThm31:
      if (!is_set(cfg.a)) cfg.a = 2.5;
      if (!is_set(cfg.b)) cfg.b = 8.0;
      break;
    case Command::VerifyTriangle:
      require(std::isfinite(cfg.p) && cfg.p > 1.0, "verify-triangle: need p > 1");
      break;
    case Command::VerifyExamples:
      if (cfg.example_select == 0) {
        require(!is_set(cfg.a) && !is_set(cfg.b),
                "verify-examples: pass --example 1|2 to override the interval");
      }
      break;
    case Command::SweepMoc:
      if (cfg.eps_grid.empty()) cfg.eps_grid = default_eps_grid();
      if (cfg.use_lp) require(std::isfinite(cfg.p) && cfg.p > 1.0, "sweep-moc: need p > 1");
      break;
    case Command::SweepSubgaussian:
      cfg.psi_spec = "power_root:m=2";
      cfg.a = 1.0;
      cfg.b = std::numeric_limits<double>::infinity();
      if (cfg.eps_grid.empty()) cfg.eps_grid = default_eps_grid();
      break;
    default:
      throw std::invalid_argument("run_campaign: command '" + command_name(cfg.command) +
                                  "' is not a campaign");
  }
  if (cfg.out_base.empty()) cfg.out_base = command_name(cfg.command);
  for (double e : cfg.eps_grid)
    require(e >= 0.0 && e <= 2.0, "campaign: eps grid entries must lie in [0,2]");
  return cfg;
}

GLSpace make_space(const CampaignConfig& cfg, double a, double b) {
  GLSpace space{parse_psi_spec(cfg.psi_spec, a, b)};
  space.opt.p_max = cfg.p_max;
  return space;
}

unsigned trial_flags(const WcocCheck& c) {
  unsigned f = 0;
  if (c.vacuous_bound) f |= kFlagVacuous;
  if (c.tail_dominated) f |= kFlagTail;
  if (!c.converged) f |= kFlagNotConverged;
  return f;
}

struct CsvWriter {
  std::ofstream out;

  explicit CsvWriter(const std::string& path) : out(path) {
    if (!out) throw std::runtime_error("cannot write report file: " + path);
  }
  void header_block(const CampaignConfig& cfg) {
    out << "# gls-report,v1\n";
    out << "# command," << command_name(cfg.command) << "\n";
    out << "# seed," << cfg.seed << "\n";
    out << "# trials," << cfg.trials << "\n";
    out << "# a," << format17(cfg.a) << "\n";
    out << "# b," << format17(cfg.b) << "\n";
    out << "# psi," << cfg.psi_spec << "\n";
    out << "# p," << format17(cfg.p) << "\n";
    out << "# use_lp," << (cfg.use_lp ? 1 : 0) << "\n";
    out << "# atoms_min," << cfg.atoms_min << "\n";
    out << "# atoms_max," << cfg.atoms_max << "\n";
    out << "# degenerate," << (cfg.degenerate_pairs ? 1 : 0) << "\n";
    out << "# example," << cfg.example_select << "\n";
    out << "# d," << format17(cfg.d) << "\n";
    out << "# p_max," << format17(cfg.p_max) << "\n";
    out << "# eps_grid,";
    for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i) {
      if (i) out << ";";
      out << format17(cfg.eps_grid[i]);
    }
    out << "\n";
  }
  void line(const std::string& s) { out << s << "\n"; }
};

std::string trial_columns(Command c) {
  switch (c) {
    case Command::VerifyThm21:
    case Command::VerifyThm31:
      return "trial,slack,dist_gls,functional,arg_p,proof_slack,delta,flags";
    case Command::VerifyTriangle:
      return "trial,slack,dist,delta,flags";
    case Command::VerifyExamples:
      return "trial,example,slack,dist_a,flags";
    case Command::SweepMoc:
      return "eps,analytic_delta,lower_bound,two_atom_delta,two_atom_gap,"
             "empirical_min,best_dist,best_sum_norm,feasible,rejected";
    case Command::SweepSubgaussian:
      return "eps,empirical_min,best_dist,best_sum_norm,feasible,rejected";
    default:
      return "";
  }
}

std::string format_trial(Command c, const TrialRecord& r) {
  std::ostringstream os;
  switch (c) {
    case Command::VerifyThm21:
    case Command::VerifyThm31:
      os << r.index << "," << format17(r.slack) << "," << format17(r.dist) << ","
         << format17(r.functional) << "," << format17(r.arg_p) << ","
         << format17(r.proof_slack) << "," << format17(r.delta) << ","
         << flags_to_string(r.flags);
      break;
    case Command::VerifyTriangle:
      os << r.index << "," << format17(r.slack) << "," << format17(r.dist) << ","
         << format17(r.delta) << "," << flags_to_string(r.flags);
      break;
    case Command::VerifyExamples:
      os << r.index << "," << r.example << "," << format17(r.slack) << ","
         << format17(r.dist) << "," << flags_to_string(r.flags);
      break;
    default:
      break;
  }
  return os.str();
}

std::string format_sweep(Command c, const SweepRecord& r) {
  std::ostringstream os;
  if (c == Command::SweepMoc) {
    os << format17(r.eps) << "," << format17(r.analytic_delta) << ","
       << format17(r.lower_bound) << "," << format17(r.two_atom_delta) << ","
       << format17(r.two_atom_gap) << "," << format17(r.empirical_min) << ","
       << format17(r.best_dist) << "," << format17(r.best_sum_norm) << ","
       << r.feasible << "," << r.rejected;
  } else {
    os << format17(r.eps) << "," << format17(r.empirical_min) << ","
       << format17(r.best_dist) << "," << format17(r.best_sum_norm) << ","
       << r.feasible << "," << r.rejected;
  }
  return os.str();
}

void aggregate(VerificationReport& rep) {
  std::vector<double> slacks;
  slacks.reserve(rep.trials.size());
  for (const TrialRecord& t : rep.trials) {
    slacks.push_back(t.slack);
    const bool violating = t.slack < kViolationTol;
    if (t.example == 2) {
      if (violating) ++rep.example2_violations;
    } else if (violating) {
      ++rep.violations;
    }
    if (t.flags & kFlagVacuous) ++rep.vacuous_count;
    if (t.slack < rep.min_slack) {
      rep.min_slack = t.slack;
      rep.worst_trial = t.index;
    }
  }
  rep.mean_slack = slacks.empty() ? 0.0 : stable_sum(slacks) / slacks.size();
}

void write_reports(VerificationReport& rep) {
  const CampaignConfig& cfg = rep.config;
  rep.trials_path = cfg.out_base + ".trials.csv";
  rep.summary_path = cfg.out_base + ".summary.csv";

  CsvWriter trials(rep.trials_path);
  trials.header_block(cfg);
  trials.line(trial_columns(cfg.command));
  for (const TrialRecord& t : rep.trials) trials.line(format_trial(cfg.command, t));
  for (const SweepRecord& s : rep.sweep) trials.line(format_sweep(cfg.command, s));

  CsvWriter summary(rep.summary_path);
  summary.header_block(cfg);
  summary.line("metric,value");
  summary.line("trials," + std::to_string(rep.trials.size()));
  summary.line("sweep_rows," + std::to_string(rep.sweep.size()));
  summary.line("min_slack," + format17(rep.trials.empty() ? kNaN : rep.min_slack));
  summary.line("mean_slack," + format17(rep.mean_slack));
  summary.line("violations," + std::to_string(rep.violations));
  summary.line("example2_violations," + std::to_string(rep.example2_violations));
  summary.line("vacuous_trials," + std::to_string(rep.vacuous_count));
  summary.line("worst_trial," + std::to_string(rep.worst_trial));
  summary.line("exit_status," + std::to_string(rep.exit_status));
  // wall time is the one nondeterministic field; it stays on a comment line
  summary.out << "# wall_time_s," << format17(rep.wall_time_s) << "\n";
}

void write_pair(const std::string& base, const std::string& tag,
                const SimpleFunction& x, const SimpleFunction& y,
                const std::string& note) {
  write_function_file(base + "." + tag + "_x.fn", x, note);
  write_function_file(base + "." + tag + "_y.fn", y, note);
}

void run_verify_wcoc(VerificationReport& rep) {
  const CampaignConfig& cfg = rep.config;
  const bool thm31 = cfg.command == Command::VerifyThm31;
  const GLSpace space = make_space(cfg, cfg.a, cfg.b);
  const SpaceDesc desc = space;
  const PairSampleConfig pcfg{cfg.atoms_min, cfg.atoms_max};

  rep.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.threads, [&](long i) {
    TrialRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    BallPair pr = sample_ball_pair(rng, desc, pcfg, cfg.degenerate_pairs);
    const WcocCheck c = thm31
        ? wcoc_bound_thm31(pr.x, pr.y, space, pr.norm_x, pr.norm_y)
        : wcoc_bound_thm21(pr.x, pr.y, space, pr.norm_x, pr.norm_y);
    TrialRecord& t = rep.trials[static_cast<std::size_t>(i)];
    t.index = i;
    t.slack = c.slack;
    t.dist = c.dist_gls;
    t.functional = c.bound.functional_value;
    t.arg_p = c.bound.arg_p;
    t.proof_slack = c.proof_slack;
    t.delta = c.bound.delta_component;
    t.flags = trial_flags(c);
  });
  aggregate(rep);
  rep.exit_status = rep.violations > 0 ? 1 : 0;

  if (rep.worst_trial >= 0) {
    TrialRng rng(cfg.seed, static_cast<std::uint64_t>(rep.worst_trial));
    BallPair pr = sample_ball_pair(rng, desc, pcfg, cfg.degenerate_pairs);
    write_pair(cfg.out_base, "worst", pr.x, pr.y,
               command_name(cfg.command) + " seed " + std::to_string(cfg.seed) +
                   " trial " + std::to_string(rep.worst_trial));
  }
}

void run_verify_triangle(VerificationReport& rep) {
  const CampaignConfig& cfg = rep.config;
  const SpaceDesc desc = LpSpace{cfg.p};
  const PairSampleConfig pcfg{cfg.atoms_min, cfg.atoms_max};

  rep.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, cfg.threads, [&](long i) {
    TrialRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    BallPair pr = sample_ball_pair(rng, desc, pcfg, cfg.degenerate_pairs);
    const TriangleCheck c = refined_triangle_check(pr.x, pr.y, cfg.p);
    TrialRecord& t = rep.trials[static_cast<std::size_t>(i)];
    t.index = i;
    t.slack = c.slack;
    t.dist = c.dist;
    t.delta = c.delta;
  });
  aggregate(rep);
  rep.exit_status = rep.violations > 0 ? 1 : 0;

  if (rep.worst_trial >= 0) {
    TrialRng rng(cfg.seed, static_cast<std::uint64_t>(rep.worst_trial));
    BallPair pr = sample_ball_pair(rng, desc, pcfg, cfg.degenerate_pairs);
    write_pair(cfg.out_base, "worst", pr.x, pr.y,
               "verify-triangle seed " + std::to_string(cfg.seed) + " trial " +
                   std::to_string(rep.worst_trial));
  }
}

void run_verify_examples(VerificationReport& rep) {
  const CampaignConfig& cfg = rep.config;
  const PairSampleConfig pcfg{cfg.atoms_min, cfg.atoms_max};

  std::vector<int> selected;
  if (cfg.example_select == 0) {
    selected = {1, 2};
  } else if (cfg.example_select == 1 || cfg.example_select == 2) {
    selected = {cfg.example_select};
  } else {
    throw std::invalid_argument("verify-examples: --example must be 1 or 2");
  }

  for (int ex : selected) {
    double a = cfg.a, b = cfg.b;
    if (!is_set(a)) a = (ex == 1) ? 1.5 : 2.5;
    if (!is_set(b)) b = (ex == 1) ? 2.0 : 4.0;
    const GLSpace space = make_space(cfg, a, b);
    const double d = is_set(cfg.d) ? cfg.d : psi_probe_max(space.psi) * (1.0 + 1e-12);
    const SpaceDesc desc = space;

    std::vector<TrialRecord> recs(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](long i) {
      TrialRng rng(cfg.seed, static_cast<std::uint64_t>(i));
      BallPair pr = sample_ball_pair(rng, desc, pcfg, cfg.degenerate_pairs);
      const ExampleCheck c =
          (ex == 1) ? example1_check(pr.x, pr.y, space, d, pr.norm_x, pr.norm_y)
                    : example2_check(pr.x, pr.y, space, d, pr.norm_x, pr.norm_y);
      TrialRecord& t = recs[static_cast<std::size_t>(i)];
      t.index = i;
      t.example = ex;
      t.slack = c.slack;
      t.dist = c.dist_a;
    });

    long worst = -1;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (const TrialRecord& t : recs) {
      if (t.slack < worst_slack) {
        worst_slack = t.slack;
        worst = t.index;
      }
    }
    if (worst >= 0) {
      TrialRng rng(cfg.seed, static_cast<std::uint64_t>(worst));
      BallPair pr = sample_ball_pair(rng, desc, pcfg, cfg.degenerate_pairs);
      write_pair(cfg.out_base, "ex" + std::to_string(ex) + ".worst", pr.x, pr.y,
                 "verify-examples example " + std::to_string(ex) + " seed " +
                     std::to_string(cfg.seed) + " trial " + std::to_string(worst));
    }
    rep.trials.insert(rep.trials.end(), recs.begin(), recs.end());
  }
  aggregate(rep);
  // Example 2 is reporting-only; the exit status follows example 1.
  rep.exit_status = rep.violations > 0 ? 1 : 0;
}

void run_sweep(VerificationReport& rep) {
  const CampaignConfig& cfg = rep.config;
  const PairSampleConfig pcfg{cfg.atoms_min, cfg.atoms_max};

  SpaceDesc desc = LpSpace{cfg.p};
  const bool lp_mode = cfg.command == Command::SweepMoc && cfg.use_lp;
  if (!lp_mode) {
    double a = cfg.a, b = cfg.b;
    if (!is_set(a)) a = 1.2;
    if (!is_set(b)) b = 2.0;
    desc = make_space(cfg, a, b);
  }

  for (std::size_t k = 0; k < cfg.eps_grid.size(); ++k) {
    const double eps = cfg.eps_grid[k];
    EmpiricalMoc em = empirical_moc_random(desc, eps, cfg.trials, cfg.seed, pcfg,
                                           static_cast<std::uint64_t>(k) << 32,
                                           cfg.threads);
    SweepRecord s;
    s.eps = eps;
    s.empirical_min = em.result.delta;
    s.best_dist = em.infeasible() ? kNaN : em.best_dist;
    s.best_sum_norm = em.infeasible() ? kNaN : em.best_sum_norm;
    s.feasible = em.feasible;
    s.rejected = em.rejected;
    if (lp_mode) {
      s.analytic_delta = delta_lp_exact(cfg.p, eps).delta;
      s.lower_bound = delta_lp_lower_bound(cfg.p, eps);
      s.two_atom_delta = empirical_moc_two_atom(cfg.p, eps).delta;
      s.two_atom_gap = s.two_atom_delta - s.analytic_delta;
    }
    if (em.best_x.has_value()) {
      write_pair(cfg.out_base, "eps" + std::to_string(k), *em.best_x, *em.best_y,
                 command_name(cfg.command) + " eps " + format17(eps) + " seed " +
                     std::to_string(cfg.seed));
    }
    rep.sweep.push_back(s);
  }
  rep.exit_status = 0;  // sweeps tabulate; they never fail the exit status
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Norm: return "norm";
    case Command::Moc: return "moc";
    case Command::VerifyThm21: return "verify-thm21";
    case Command::VerifyThm31: return "verify-thm31";
    case Command::VerifyTriangle: return "verify-triangle";
    case Command::VerifyExamples: return "verify-examples";
    case Command::SweepMoc: return "sweep-moc";
    case Command::SweepSubgaussian: return "sweep-subgaussian";
  }
  return "?";
}

std::string flags_to_string(unsigned flags) {
  if (flags == 0) return "-";
  std::string s;
  auto add = [&](const char* name) {
    if (!s.empty()) s += "|";
    s += name;
  };
  if (flags & kFlagVacuous) add("vacuous");
  if (flags & kFlagTail) add("tail");
  if (flags & kFlagNotConverged) add("no_conv");
  return s;
}

VerificationReport run_campaign(const CampaignConfig& user_cfg) {
  VerificationReport rep;
  rep.config = resolve_defaults(user_cfg);
  const auto t0 = std::chrono::steady_clock::now();
  switch (rep.config.command) {
    case Command::VerifyThm21:
    case Command::VerifyThm31:
      run_verify_wcoc(rep);
      break;
    case Command::VerifyTriangle:
      run_verify_triangle(rep);
      break;
    case Command::VerifyExamples:
      run_verify_examples(rep);
      break;
    case Command::SweepMoc:
    case Command::SweepSubgaussian:
      run_sweep(rep);
      break;
    default:
      break;  // unreachable: resolve_defaults rejects non-campaign commands
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_reports(rep);
  return rep;
}

}  // namespace gls
