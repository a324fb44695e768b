#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gls/convexity.hpp"
#include "gls/sampling.hpp"

using namespace gls;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent oracle: plain long-double bisection on the implicit equation,
// no Newton steps, no shared code with the implementation.
double oracle_delta_implicit(double p, double eps) {
  const long double e = static_cast<long double>(eps) / 2.0L;
  const long double pp = static_cast<long double>(p);
  long double lo = 0.0L, hi = 1.0L;
  for (int i = 0; i < 120; ++i) {
    const long double d = (lo + hi) / 2.0L;
    const long double r =
        powl(1.0L - d + e, pp) + powl(fabsl(1.0L - d - e), pp) - 2.0L;
    if (r > 0.0L) lo = d; else hi = d;
  }
  return static_cast<double>((lo + hi) / 2.0L);
}

// The algebraic two-atom pair attaining the p >= 2 modulus at distance eps.
std::pair<SimpleFunction, SimpleFunction> extremal_pair(double p, double eps, double w1) {
  const double w2 = 1.0 - w1;
  const double beta = (eps == 0.0) ? 0.0 : (eps / 2.0) * std::pow(w2, -1.0 / p);
  double s = 1.0 - w2 * std::pow(beta, p);
  if (s < 0.0) s = 0.0;
  const double alpha = std::pow(s / w1, 1.0 / p);
  SimpleFunction x({w1, w2}, {alpha, beta});
  SimpleFunction y(x.partition_ptr(), {alpha, -beta});
  return {x, y};
}

SimpleFunction random_ball_fn(TrialRng& rng, double p, int kmin, int kmax) {
  PartitionPtr part = sample_unit_mass_partition(rng, kmin, kmax);
  std::vector<double> v(part->size());
  for (auto& x : v) x = rng.heavy_tailed_symmetric();
  SimpleFunction f(part, std::move(v));
  const double n = lp_norm(f, p);
  if (!(n > 0.0)) return f.scaled(0.0);
  return f.scaled(rng.uniform01() / n);
}

}  // namespace

TEST_CASE("delta_lp_exact at p = 2, eps = 1 equals 1 - sqrt(3)/2") {
  MocResult m = delta_lp_exact(2.0, 1.0);
  CHECK(m.method == MocMethod::ImplicitRoot);
  CHECK(m.delta == doctest::Approx(0.13397459621556135).epsilon(1e-12));
  CHECK(m.residual <= 1e-12);
}

TEST_CASE("delta_lp_exact at p = 3, eps = 1 equals 1 - 0.875^(1/3)") {
  MocResult m = delta_lp_exact(3.0, 1.0);
  CHECK(m.method == MocMethod::ClosedForm);
  CHECK(m.delta == doctest::Approx(0.043534408613805461).epsilon(1e-12));
}

TEST_CASE("delta_lp_exact at p = 1.5, eps = 1 matches the independent bisection oracle") {
  MocResult m = delta_lp_exact(1.5, 1.0);
  const double oracle = oracle_delta_implicit(1.5, 1.0);
  CHECK(std::abs(m.delta - oracle) <= 1e-10);
  CHECK(m.delta == doctest::Approx(0.067122610329016173).epsilon(1e-10));
  CHECK(m.residual <= 1e-12);
  CHECK(m.iterations <= 200);
}

TEST_CASE("delta_lp_exact boundary and error cases") {
  for (double p : {1.1, 1.7, 2.0, 3.0, 12.0}) {
    MocResult m = delta_lp_exact(p, 0.0);
    CHECK(m.delta == 0.0);
    MocResult top = delta_lp_exact(p, 2.0);
    CHECK(top.delta == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(delta_lp_exact(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(delta_lp_exact(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(delta_lp_exact(2.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(delta_lp_exact(2.0, 2.1), std::invalid_argument);
  CHECK_THROWS_AS(delta_lp_exact(kInf, 1.0), std::invalid_argument);
}

TEST_CASE("closed form and implicit root agree at p = 2 across the eps grid") {
  for (int i = 0; i <= 20; ++i) {
    const double eps = 0.1 * i;
    const double implicit_root = delta_lp_exact(2.0, eps).delta;
    const double closed = (eps == 0.0)
        ? 0.0
        : -std::expm1(std::log1p(-std::exp(2.0 * std::log(eps / 2.0))) / 2.0);
    CHECK(std::abs(implicit_root - closed) <= 1e-10);
  }
}

TEST_CASE("delta_lp_exact is continuous across the p = 2 branch boundary") {
  for (double eps : {0.3, 1.0, 1.7}) {
    const double below = delta_lp_exact(2.0 - 1e-12, eps).delta;
    const double above = delta_lp_exact(2.0 + 1e-12, eps).delta;
    CHECK(std::abs(below - above) <= 1e-9);
  }
}

TEST_CASE("delta_lp_exact is nondecreasing in eps for each p") {
  for (double p : {1.1, 1.5, 2.0, 3.0, 6.0, 10.0}) {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      const double d = delta_lp_exact(p, 2.0 * i / 40.0).delta;
      CHECK(d >= prev - 1e-12);
      prev = d;
    }
  }
}

TEST_CASE("delta_lp_exact dominates the classical lower bounds") {
  for (double p : {1.1, 1.3, 1.7, 2.0, 2.5, 3.0, 6.0, 10.0}) {
    for (int i = 0; i <= 20; ++i) {
      const double eps = 0.1 * i;
      CHECK(delta_lp_exact(p, eps).delta >= delta_lp_lower_bound(p, eps) - 1e-12);
    }
  }
}

TEST_CASE("delta_lp_lower_bound spot values") {
  CHECK(delta_lp_lower_bound(2.0, 1.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(delta_lp_lower_bound(3.0, 1.0) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-12));
  CHECK(delta_lp_lower_bound(1.5, 0.0) == 0.0);
}

TEST_CASE("refined triangle: x = y reduces to the plain bound") {
  SimpleFunction x({0.5, 0.5}, {1.0, 0.5});
  const double n = lp_norm(x, 2.0);
  SimpleFunction xhat = x.scaled(0.8 / n);
  TriangleCheck c = refined_triangle_check(xhat, xhat, 2.0);
  CHECK(c.dist == 0.0);
  CHECK(c.delta == 0.0);
  CHECK(c.slack == doctest::Approx(2.0 - 1.6).epsilon(1e-12));
  CHECK(c.slack >= 0.0);
}

TEST_CASE("refined triangle: antipodal unit pair gives zero left side") {
  SimpleFunction x({1.0}, {1.0});
  TriangleCheck c = refined_triangle_check(x, x.scaled(-1.0), 1.5);
  CHECK(c.dist == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.slack >= -1e-12);
}

TEST_CASE("refined triangle is tight on the extremal two-atom pair for p >= 2") {
  for (double p : {2.0, 3.0, 6.0}) {
    for (double eps : {0.5, 1.0, 1.5}) {
      auto [x, y] = extremal_pair(p, eps, 0.3);
      TriangleCheck c = refined_triangle_check(x, y, p);
      CHECK(std::abs(c.slack) <= 1e-9);
    }
  }
}

TEST_CASE("refined triangle rejects out-of-ball inputs") {
  SimpleFunction big({1.0}, {1.5});
  SimpleFunction ok({1.0}, {0.5});
  CHECK_THROWS_AS(refined_triangle_check(big, ok, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(refined_triangle_check(ok, big, 2.0), std::invalid_argument);
}

TEST_CASE("thm21: degenerate pair x = y gives slack 2 - ||2x||") {
  GLSpace space{Psi::constant(1.0, 1.2, 2.0)};
  SimpleFunction x({0.5, 0.5}, {0.9, 0.1});
  const double n = gls_norm(x, space).value;
  SimpleFunction xhat = x.scaled(0.7 / n);
  WcocCheck c = wcoc_bound_thm21(xhat, xhat, space);
  CHECK(c.bound.functional_value == 0.0);
  CHECK(c.slack == doctest::Approx(2.0 - gls_norm(xhat + xhat, space).value)
                       .epsilon(1e-12));
  CHECK(c.slack >= 0.0);
  CHECK(c.proof_slack >= -1e-9);
}

TEST_CASE("thm21 interval validation") {
  SimpleFunction x({1.0}, {0.1});
  GLSpace bad{Psi::constant(1.0, 2.5, 8.0)};
  CHECK_THROWS_AS(wcoc_bound_thm21(x, x, bad), std::invalid_argument);
  GLSpace good{Psi::constant(1.0, 1.2, 2.0)};
  CHECK_THROWS_AS(wcoc_bound_thm31(x, x, good), std::invalid_argument);
  SimpleFunction big({1.0}, {5.0});
  CHECK_THROWS_AS(wcoc_bound_thm21(big, x, good), std::invalid_argument);
}

TEST_CASE("thm21 randomized: slack and proof-chain slack stay nonnegative") {
  std::vector<Psi> psis;
  psis.push_back(Psi::constant(1.0, 1.2, 2.0));
  psis.push_back(Psi::power_root(2.0, 1.2, 2.0));
  psis.push_back(Psi::endpoint_singular(1.0, 0.5, 1.2, 2.0));
  for (const Psi& psi : psis) {
    GLSpace space{psi};
    const SpaceDesc desc = space;
    for (long t = 0; t < 300; ++t) {
      TrialRng rng(1001, static_cast<std::uint64_t>(t));
      BallPair pr = sample_ball_pair(rng, desc, {2, 32});
      WcocCheck c = wcoc_bound_thm21(pr.x, pr.y, space, pr.norm_x, pr.norm_y);
      CHECK(c.slack >= -1e-9);
      CHECK(c.proof_slack >= -1e-9);
      CHECK(c.bound.delta_component ==
            doctest::Approx((space.a() - 1.0) / 8.0 * c.bound.functional_value)
                .epsilon(1e-15));
    }
  }
}

TEST_CASE("thm31 randomized: slack stays nonnegative; x = -y exercised") {
  GLSpace space{Psi::constant(1.0, 2.5, 8.0)};
  const SpaceDesc desc = space;
  for (long t = 0; t < 300; ++t) {
    TrialRng rng(2002, static_cast<std::uint64_t>(t));
    BallPair pr = sample_ball_pair(rng, desc, {2, 32});
    WcocCheck c = wcoc_bound_thm31(pr.x, pr.y, space, pr.norm_x, pr.norm_y);
    CHECK(c.slack >= -1e-9);
    CHECK(c.proof_slack >= -1e-9);
  }
  // antipodal unit pair: left side vanishes, so the bound needs theta <= 2
  SimpleFunction x({1.0}, {1.0});
  WcocCheck c = wcoc_bound_thm31(x, x.scaled(-1.0), space);
  CHECK(c.sum_norm == 0.0);
  CHECK(c.bound.functional_value <= 2.0);
  CHECK(c.slack >= -1e-9);
}

TEST_CASE("empirical_moc_random at eps = 0 returns zero") {
  EmpiricalMoc em = empirical_moc_random(LpSpace{2.0}, 0.0, 50, 31);
  CHECK(em.result.delta <= 1e-12);
  CHECK(em.feasible >= 50);
  GLSpace space{Psi::power_root(2.0, 1.0, kInf)};
  EmpiricalMoc eg = empirical_moc_random(SpaceDesc{space}, 0.0, 20, 31);
  CHECK(eg.result.delta <= 1e-12);
}

TEST_CASE("empirical_moc_random upper-estimates the analytic modulus") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (double eps : {0.5, 1.0}) {
      EmpiricalMoc em = empirical_moc_random(LpSpace{p}, eps, 400, 77);
      REQUIRE(em.feasible > 0);
      const double analytic = delta_lp_exact(p, eps).delta;
      CHECK(em.result.delta >= analytic - 1e-9);
      CHECK(em.best_x.has_value());
      // the recorded winning pair reproduces its value
      const double re =
          1.0 - lp_norm(*em.best_x + *em.best_y, p) / 2.0;
      CHECK(std::abs(std::max(0.0, re) - em.result.delta) <= 1e-12);
    }
  }
}

TEST_CASE("empirical_moc_random reports infeasible eps honestly") {
  EmpiricalMoc em = empirical_moc_random(LpSpace{2.0}, 1.999, 5, 5);
  CHECK(em.infeasible());
  CHECK(std::isnan(em.result.delta));
  CHECK(em.rejected == 5);
  CHECK_THROWS_AS(empirical_moc_random(LpSpace{2.0}, 2.5, 5, 5), std::invalid_argument);
}

TEST_CASE("two-atom directed search reproduces the closed form for p >= 2") {
  for (double p : {2.0, 3.0, 6.0}) {
    for (double eps : {0.5, 1.0, 1.5}) {
      MocResult m = empirical_moc_two_atom(p, eps);
      CHECK(std::abs(m.delta - delta_lp_exact(p, eps).delta) <= 1e-9);
      CHECK(m.residual <= 1e-9);
    }
  }
}

TEST_CASE("two-atom directed search at p = 1.5 upper-bounds the implicit root") {
  MocResult m = empirical_moc_two_atom(1.5, 1.0);
  const double implicit_root = delta_lp_exact(1.5, 1.0).delta;
  CHECK(m.delta >= implicit_root - 1e-9);
  // achieved gap is reported, never asserted to vanish
  const double gap = m.delta - implicit_root;
  CHECK(m.delta == doctest::Approx(0.25236703666080706).epsilon(1e-9));
  MESSAGE("two-atom to implicit-root gap at (p, eps) = (1.5, 1): ", gap);
}

TEST_CASE("two-atom directed search at eps = 0 and eps = 2") {
  CHECK(empirical_moc_two_atom(3.0, 0.0).delta <= 1e-12);
  CHECK(empirical_moc_two_atom(3.0, 2.0).delta == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("example 1: trivial pair and randomized slack") {
  GLSpace space{Psi::constant(1.0, 1.5, 2.0)};
  const SpaceDesc desc = space;
  SimpleFunction x({0.5, 0.5}, {1.0, -0.25});
  SimpleFunction xhat = x.scaled(0.6 / gls_norm(x, space).value);
  ExampleCheck c = example1_check(xhat, xhat, space, 1.0);
  CHECK(c.dist_a == 0.0);
  CHECK(c.slack >= 0.0);
  CHECK(!c.reporting_only);
  for (long t = 0; t < 200; ++t) {
    TrialRng rng(3003, static_cast<std::uint64_t>(t));
    BallPair pr = sample_ball_pair(rng, desc, {2, 24});
    ExampleCheck e = example1_check(pr.x, pr.y, space, 1.0, pr.norm_x, pr.norm_y);
    CHECK(e.slack >= -1e-9);
  }
}

TEST_CASE("example 2 runs in reporting mode with the printed exponents") {
  GLSpace space{Psi::constant(1.0, 2.5, 4.0)};
  const SpaceDesc desc = space;
  long violations = 0;
  for (long t = 0; t < 200; ++t) {
    TrialRng rng(4004, static_cast<std::uint64_t>(t));
    BallPair pr = sample_ball_pair(rng, desc, {2, 24});
    ExampleCheck e = example2_check(pr.x, pr.y, space, 1.0, pr.norm_x, pr.norm_y);
    CHECK(e.reporting_only);
    if (e.slack < -1e-9) ++violations;
  }
  MESSAGE("example 2 violations over 200 trials: ", violations);
}

TEST_CASE("example preconditions are enforced") {
  GLSpace space{Psi::constant(1.0, 1.5, 2.0)};
  SimpleFunction bad_mass({1.0, 1.0}, {0.1, 0.1});  // total mass 2
  CHECK_THROWS_AS(example1_check(bad_mass, bad_mass, space, 1.0),
                  std::invalid_argument);
  SimpleFunction ok({1.0}, {0.1});
  // psi exceeds the claimed bound d
  CHECK_THROWS_AS(example1_check(ok, ok, space, 0.5), std::invalid_argument);
  // singular psi admits no finite d
  GLSpace sing{Psi::endpoint_singular(1.0, 0.5, 1.5, 2.0)};
  CHECK_THROWS_AS(example1_check(ok, ok, sing, 100.0), std::invalid_argument);
  // wrong interval for example 2
  CHECK_THROWS_AS(example2_check(ok, ok, space, 1.0), std::invalid_argument);
}

TEST_CASE("moc method names are stable report tokens") {
  CHECK(std::string(moc_method_name(MocMethod::ClosedForm)) == "closed_form");
  CHECK(std::string(moc_method_name(MocMethod::ImplicitRoot)) == "implicit_root");
  CHECK(std::string(moc_method_name(MocMethod::EmpiricalRandom)) == "empirical_random");
  CHECK(std::string(moc_method_name(MocMethod::EmpiricalTwoAtom)) ==
        "empirical_two_atom");
}
