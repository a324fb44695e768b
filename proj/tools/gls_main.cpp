#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gls/campaign.hpp"
#include "gls/io.hpp"

namespace {

struct CliState {
  gls::CampaignConfig cfg;
  std::string b_str;
  std::string eps_grid_str;
  double eps_single = std::numeric_limits<double>::quiet_NaN();
  std::string fn_path;
  bool psi_given = false;
  bool p_given = false;
};

double parse_b(const std::string& s) {
  if (s == "inf" || s == "INF" || s == "Inf") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (...) {
  }
  throw CLI::ValidationError("--b", "expected a number or 'inf', got '" + s + "'");
}

std::vector<double> parse_eps_grid(const std::string& s) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw CLI::ValidationError("--eps-grid", "expected lo:hi:n, got '" + s + "'");
  }
  const double lo = std::stod(s.substr(0, c1));
  const double hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
  const int n = std::stoi(s.substr(c2 + 1));
  if (n < 1) throw CLI::ValidationError("--eps-grid", "need n >= 1");
  std::vector<double> g;
  if (n == 1) {
    g.push_back(lo);
  } else {
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  }
  return g;
}

void add_campaign_options(CLI::App* cmd, CliState& st, bool with_psi, bool with_p,
                          bool with_eps) {
  cmd->add_option("--trials", st.cfg.trials, "number of random trials");
  cmd->add_option("--seed", st.cfg.seed, "campaign seed (64-bit unsigned)");
  cmd->add_option("--atoms-min", st.cfg.atoms_min, "minimum atoms per partition");
  cmd->add_option("--atoms-max", st.cfg.atoms_max, "maximum atoms per partition");
  cmd->add_option("--a", st.cfg.a, "interval lower endpoint a");
  cmd->add_option("--b", st.b_str, "interval upper endpoint b (or 'inf')");
  if (with_psi) {
    cmd->add_option("--psi", st.cfg.psi_spec,
                    "generating function, e.g. const:c=1 | power_root:m=2 | "
                    "endpoint:beta1=1,beta2=0.5 | extremal:r=3 | natural:file=F | "
                    "table:file=F")
        ->each([&st](const std::string&) { st.psi_given = true; });
  }
  if (with_p) {
    cmd->add_option("--p", st.cfg.p, "Lebesgue exponent p")
        ->each([&st](const std::string&) { st.p_given = true; });
  }
  if (with_eps) {
    cmd->add_option("--eps", st.eps_single, "single eps value in [0,2]");
    cmd->add_option("--eps-grid", st.eps_grid_str, "eps grid lo:hi:n");
  }
  cmd->add_option("--out", st.cfg.out_base, "report path prefix");
  cmd->add_option("--threads", st.cfg.threads,
                  "worker threads (0 = auto; never affects results)");
}

void finish_config(CliState& st, gls::Command command) {
  st.cfg.command = command;
  if (!st.b_str.empty()) st.cfg.b = parse_b(st.b_str);
  if (!st.eps_grid_str.empty()) {
    st.cfg.eps_grid = parse_eps_grid(st.eps_grid_str);
  } else if (!std::isnan(st.eps_single)) {
    st.cfg.eps_grid = {st.eps_single};
  }
}

int print_campaign_summary(const gls::VerificationReport& rep) {
  using gls::format17;
  std::cout << "command," << gls::command_name(rep.config.command) << "\n";
  std::cout << "trials," << rep.trials.size() << "\n";
  std::cout << "sweep_rows," << rep.sweep.size() << "\n";
  std::cout << "seed," << rep.config.seed << "\n";
  std::cout << "violations," << rep.violations << "\n";
  std::cout << "example2_violations," << rep.example2_violations << "\n";
  std::cout << "vacuous_trials," << rep.vacuous_count << "\n";
  if (!rep.trials.empty()) {
    std::cout << "min_slack," << format17(rep.min_slack) << "\n";
    std::cout << "mean_slack," << format17(rep.mean_slack) << "\n";
    std::cout << "worst_trial," << rep.worst_trial << "\n";
  }
  std::cout << "report_trials," << rep.trials_path << "\n";
  std::cout << "report_summary," << rep.summary_path << "\n";
  std::cout << "# wall_time_s," << format17(rep.wall_time_s) << "\n";
  std::cout << "exit," << rep.exit_status << "\n";
  return rep.exit_status;
}

int run_norm(const CliState& st) {
  using gls::format17;
  const gls::SimpleFunction f = gls::read_function_file(st.fn_path);
  if (st.p_given && !st.psi_given) {
    std::cout << "lp_norm," << format17(gls::lp_norm(f, st.cfg.p)) << "\n";
    std::cout << "p," << format17(st.cfg.p) << "\n";
    return 0;
  }
  const double a = std::isnan(st.cfg.a) ? 1.0 : st.cfg.a;
  const double b = std::isnan(st.cfg.b) ? 2.0 : st.cfg.b;
  const gls::GLSpace space{gls::parse_psi_spec(st.cfg.psi_spec, a, b)};
  const gls::GlsResult r = gls::gls_norm(f, space);
  std::cout << "gls_norm," << format17(r.value) << "\n";
  std::cout << "arg_p," << format17(r.arg_p) << "\n";
  std::cout << "converged," << (r.converged ? 1 : 0) << "\n";
  std::cout << "tail_dominated," << (r.tail_dominated ? 1 : 0) << "\n";
  return 0;
}

int run_moc(const CliState& st) {
  using gls::format17;
  std::vector<double> grid = st.cfg.eps_grid;
  if (grid.empty()) grid = {0.0, 0.5, 1.0, 1.5, 2.0};
  std::ostringstream table;
  table << "eps,delta,method,iterations,residual,lower_bound\n";
  for (double eps : grid) {
    const gls::MocResult m = gls::delta_lp_exact(st.cfg.p, eps);
    table << format17(eps) << "," << format17(m.delta) << ","
          << gls::moc_method_name(m.method) << "," << m.iterations << ","
          << format17(m.residual) << ","
          << format17(gls::delta_lp_lower_bound(st.cfg.p, eps)) << "\n";
  }
  std::cout << "p," << format17(st.cfg.p) << "\n" << table.str();
  if (!st.cfg.out_base.empty()) {
    std::ofstream out(st.cfg.out_base + ".moc.csv");
    if (!out) throw std::runtime_error("cannot write " + st.cfg.out_base + ".moc.csv");
    out << "# gls moc table, p=" << format17(st.cfg.p) << "\n" << table.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grand Lebesgue Space norms, moduli of convexity, and randomized "
               "verification of the convexity bounds"};
  app.require_subcommand(1);

  CliState st;

  CLI::App* norm = app.add_subcommand("norm", "GLS or L_p norm of a function file");
  norm->add_option("--fn", st.fn_path, "function file (lines: <weight> <value>)")
      ->required();
  add_campaign_options(norm, st, true, true, false);

  CLI::App* moc = app.add_subcommand("moc", "analytic modulus of convexity of L_p");
  add_campaign_options(moc, st, false, true, true);

  CLI::App* thm21 = app.add_subcommand(
      "verify-thm21", "randomized check of the kappa lower bound on (1,2]");
  add_campaign_options(thm21, st, true, false, false);
  thm21->add_flag("--degenerate", st.cfg.degenerate_pairs, "force y = x pairs");

  CLI::App* thm31 = app.add_subcommand(
      "verify-thm31", "randomized check of the theta lower bound on (2,inf)");
  add_campaign_options(thm31, st, true, false, false);
  thm31->add_flag("--degenerate", st.cfg.degenerate_pairs, "force y = x pairs");

  CLI::App* tri = app.add_subcommand(
      "verify-triangle", "randomized check of the refined triangle inequality in L_p");
  add_campaign_options(tri, st, false, true, false);
  tri->add_flag("--degenerate", st.cfg.degenerate_pairs, "force y = x pairs");

  CLI::App* ex = app.add_subcommand(
      "verify-examples", "randomized check of the bounded-psi example inequalities");
  add_campaign_options(ex, st, true, false, false);
  ex->add_option("--example", st.cfg.example_select, "1, 2, or 0 for both");
  ex->add_option("--d", st.cfg.d, "psi upper bound d (default: probe-grid max)");

  CLI::App* smoc = app.add_subcommand(
      "sweep-moc", "empirical modulus-of-convexity sweep over an eps grid");
  add_campaign_options(smoc, st, true, true, true);

  CLI::App* ssub = app.add_subcommand(
      "sweep-subgaussian",
      "exploratory empirical-MOC sweep for psi(p) = sqrt(p) on (1,inf)");
  add_campaign_options(ssub, st, false, false, true);
  ssub->add_option("--p-max", st.cfg.p_max, "probe cap for the unbounded interval");

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed()) {
      finish_config(st, gls::Command::Norm);
      return run_norm(st);
    }
    if (moc->parsed()) {
      finish_config(st, gls::Command::Moc);
      return run_moc(st);
    }
    gls::Command cmd = gls::Command::VerifyTriangle;
    if (thm21->parsed()) cmd = gls::Command::VerifyThm21;
    if (thm31->parsed()) cmd = gls::Command::VerifyThm31;
    if (tri->parsed()) cmd = gls::Command::VerifyTriangle;
    if (ex->parsed()) cmd = gls::Command::VerifyExamples;
    if (smoc->parsed()) cmd = gls::Command::SweepMoc;
    if (ssub->parsed()) cmd = gls::Command::SweepSubgaussian;
    finish_config(st, cmd);
    if (smoc->parsed()) st.cfg.use_lp = !st.psi_given;
    const gls::VerificationReport rep = gls::run_campaign(st.cfg);
    return print_campaign_summary(rep);
  } catch (const std::exception& e) {
    std::cerr << "gls: error: " << e.what() << "\n";
    return 2;
  }
}
