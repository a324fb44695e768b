#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gls/campaign.hpp"
#include "gls/io.hpp"

using namespace gls;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string drop_wall_time(const std::string& s) {
  std::istringstream in(s);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# wall_time_s", 0) == 0) continue;
    out << line << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("thm21 campaign with degenerate pairs: slack = 2 - ||2x|| >= 0, exit 0") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyThm21;
  cfg.trials = 1;
  cfg.seed = 12345;
  cfg.degenerate_pairs = true;
  cfg.out_base = "campaign_degenerate";
  VerificationReport rep = run_campaign(cfg);
  REQUIRE(rep.trials.size() == 1);
  CHECK(rep.trials[0].functional == 0.0);
  CHECK(rep.trials[0].slack >= 0.0);
  CHECK(rep.violations == 0);
  CHECK(rep.exit_status == 0);
}

TEST_CASE("triangle campaign: p = 2, seeded, zero violations") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyTriangle;
  cfg.p = 2.0;
  cfg.trials = 2000;
  cfg.seed = 42;
  cfg.out_base = "campaign_triangle";
  VerificationReport rep = run_campaign(cfg);
  CHECK(rep.violations == 0);
  CHECK(rep.exit_status == 0);
  CHECK(rep.min_slack >= -1e-9);
  CHECK(rep.trials.size() == 2000);
}

TEST_CASE("campaign reports are byte-reproducible from (config, seed)") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyThm21;
  cfg.trials = 64;
  cfg.seed = 777;
  cfg.psi_spec = "power_root:m=2";
  cfg.out_base = "campaign_repro_a";
  run_campaign(cfg);
  cfg.out_base = "campaign_repro_b";
  cfg.threads = 1;  // schedule must not matter
  run_campaign(cfg);

  std::string a = slurp("campaign_repro_a.trials.csv");
  std::string b = slurp("campaign_repro_b.trials.csv");
  // the config echo contains no out path or thread count, so whole bodies match
  CHECK(a == b);
  CHECK(drop_wall_time(slurp("campaign_repro_a.summary.csv")) ==
        drop_wall_time(slurp("campaign_repro_b.summary.csv")));
}

TEST_CASE("golden report for a pinned seed") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyTriangle;
  cfg.p = 2.0;
  cfg.trials = 32;
  cfg.seed = 7;
  cfg.atoms_min = 2;
  cfg.atoms_max = 8;
  cfg.out_base = "campaign_golden";
  run_campaign(cfg);
  const std::string got = slurp("campaign_golden.trials.csv");
  const std::string want = slurp(std::string(TEST_DATA_DIR) + "/golden_triangle.trials.csv");
  CHECK(got == want);
}

TEST_CASE("worst pair round-trips through the function-file format") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyThm21;
  cfg.trials = 50;
  cfg.seed = 99;
  cfg.out_base = "campaign_roundtrip";
  VerificationReport rep = run_campaign(cfg);
  REQUIRE(rep.worst_trial >= 0);
  const double recorded =
      rep.trials[static_cast<std::size_t>(rep.worst_trial)].slack;

  SimpleFunction x = read_function_file("campaign_roundtrip.worst_x.fn");
  SimpleFunction y = read_function_file("campaign_roundtrip.worst_y.fn");
  GLSpace space{parse_psi_spec(cfg.psi_spec, 1.2, 2.0)};
  WcocCheck c = wcoc_bound_thm21(x, y, space);
  CHECK(std::abs(c.slack - recorded) <= 1e-12);
}

TEST_CASE("examples campaign: both examples run; exit follows example 1 only") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyExamples;
  cfg.trials = 100;
  cfg.seed = 5;
  cfg.out_base = "campaign_examples";
  VerificationReport rep = run_campaign(cfg);
  CHECK(rep.trials.size() == 200);
  bool saw1 = false, saw2 = false;
  for (const TrialRecord& t : rep.trials) {
    if (t.example == 1) saw1 = true;
    if (t.example == 2) saw2 = true;
  }
  CHECK(saw1);
  CHECK(saw2);
  CHECK(rep.exit_status == (rep.violations > 0 ? 1 : 0));
  // example 2 violations never drive the exit status
  CHECK(rep.violations == 0);
}

TEST_CASE("examples campaign rejects an interval override without --example") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyExamples;
  cfg.a = 1.5;
  CHECK_THROWS_AS(run_campaign(cfg), std::invalid_argument);
}

TEST_CASE("sweep-moc in L_p mode tabulates analytic and empirical columns") {
  CampaignConfig cfg;
  cfg.command = Command::SweepMoc;
  cfg.use_lp = true;
  cfg.p = 3.0;
  cfg.trials = 60;
  cfg.seed = 11;
  cfg.eps_grid = {0.0, 1.0};
  cfg.out_base = "campaign_sweep_lp";
  VerificationReport rep = run_campaign(cfg);
  REQUIRE(rep.sweep.size() == 2);
  CHECK(rep.sweep[0].empirical_min <= 1e-12);
  CHECK(rep.sweep[1].analytic_delta ==
        doctest::Approx(0.043534408613805461).epsilon(1e-12));
  CHECK(rep.sweep[1].two_atom_delta ==
        doctest::Approx(rep.sweep[1].analytic_delta).epsilon(1e-9));
  CHECK(rep.sweep[1].empirical_min >= rep.sweep[1].analytic_delta - 1e-9);
  CHECK(rep.exit_status == 0);
}

TEST_CASE("sweep-subgaussian forces psi = sqrt(p) on (1, inf) and never fails") {
  CampaignConfig cfg;
  cfg.command = Command::SweepSubgaussian;
  cfg.trials = 40;
  cfg.seed = 13;
  cfg.eps_grid = {0.0, 0.5};
  cfg.p_max = 4096.0;
  cfg.out_base = "campaign_sweep_sub";
  VerificationReport rep = run_campaign(cfg);
  REQUIRE(rep.sweep.size() == 2);
  CHECK(rep.config.psi_spec == "power_root:m=2");
  CHECK(std::isinf(rep.config.b));
  CHECK(rep.sweep[0].empirical_min <= 1e-12);
  CHECK(rep.exit_status == 0);
}

TEST_CASE("sweep minimizing pair round-trips through its serialized files") {
  CampaignConfig cfg;
  cfg.command = Command::SweepMoc;
  cfg.use_lp = true;
  cfg.p = 2.0;
  cfg.trials = 80;
  cfg.seed = 21;
  cfg.eps_grid = {1.0};
  cfg.out_base = "campaign_sweep_rt";
  VerificationReport rep = run_campaign(cfg);
  REQUIRE(rep.sweep.size() == 1);
  REQUIRE(rep.sweep[0].feasible > 0);
  SimpleFunction x = read_function_file("campaign_sweep_rt.eps0_x.fn");
  SimpleFunction y = read_function_file("campaign_sweep_rt.eps0_y.fn");
  const double re = std::max(0.0, 1.0 - lp_norm(x + y, 2.0) / 2.0);
  CHECK(std::abs(re - rep.sweep[0].empirical_min) <= 1e-12);
  CHECK(lp_norm(x - y, 2.0) >= 1.0 - 1e-12);
}

TEST_CASE("campaign validation errors") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyTriangle;
  cfg.trials = 0;
  CHECK_THROWS_AS(run_campaign(cfg), std::invalid_argument);
  cfg.trials = 10;
  cfg.p = 1.0;
  CHECK_THROWS_AS(run_campaign(cfg), std::invalid_argument);
  CampaignConfig sweep;
  sweep.command = Command::SweepMoc;
  sweep.use_lp = true;
  sweep.eps_grid = {3.0};
  CHECK_THROWS_AS(run_campaign(sweep), std::invalid_argument);
  CampaignConfig norm;
  norm.command = Command::Norm;
  CHECK_THROWS_AS(run_campaign(norm), std::invalid_argument);
}

TEST_CASE("trials file schema: comment header then fixed columns") {
  CampaignConfig cfg;
  cfg.command = Command::VerifyThm31;
  cfg.trials = 8;
  cfg.seed = 3;
  cfg.out_base = "campaign_schema";
  run_campaign(cfg);
  std::istringstream in(slurp("campaign_schema.trials.csv"));
  std::string line;
  bool in_header = true;
  std::size_t data_lines = 0;
  std::string columns;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      CHECK(in_header);  // comments only before the column row
      continue;
    }
    if (in_header) {
      columns = line;
      in_header = false;
      continue;
    }
    ++data_lines;
  }
  CHECK(columns == "trial,slack,dist_gls,functional,arg_p,proof_slack,delta,flags");
  CHECK(data_lines == 8);
}
