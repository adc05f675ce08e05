#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wsnburst/errors.hpp"
#include "wsnburst/model.hpp"

using namespace wsnburst;
using namespace wsnburst::model;
using Catch::Approx;

namespace {

// Sum over the geometric pmf until the remaining tail mass drops below 1e-12.
double brute_force_geometric_D(double mean) {
  const double p = 1.0 / mean;
  double num = 0.0, den = 0.0, tail = 1.0;
  for (long l = 1; tail > 1e-12; ++l) {
    const double pl = p * std::pow(1.0 - p, static_cast<double>(l - 1));
    num += l * (l + 1) / 2.0 * pl;
    den += l * pl;
    tail -= pl;
  }
  return num / den;
}

}  // namespace

TEST_CASE("derive_source_params") {
  const auto exp = PeriodLaw::exponential();

  const auto a = derive_source_params(50, 1, 50, 0.5, exp, exp);
  CHECK(a.K == Approx(50));
  CHECK(a.lambda_p == Approx(100));
  CHECK(a.on_mean == Approx(0.5));
  CHECK(a.off_mean == Approx(0.5));
  CHECK(a.n_p / (a.on_mean + a.off_mean) == Approx(50));

  const auto b = derive_source_params(50, 5, 50, 0.9, exp, exp);
  CHECK(b.K == Approx(10));
  CHECK(b.lambda_p == Approx(100));

  const auto c = derive_source_params(50, 1, 50, 0.0, exp, exp);
  CHECK(c.lambda_p == Approx(50));
  CHECK(c.off_mean == 0.0);
  CHECK_FALSE(c.off_dist.has_value());

  const auto pareto = derive_source_params(50, 1, 50, 0.7, PeriodLaw::pareto(), PeriodLaw::pareto());
  CHECK(dists::mean_of(pareto.on_dist) == Approx(pareto.on_mean));
  CHECK(dists::mean_of(*pareto.off_dist) == Approx(pareto.off_mean));

  CHECK_THROWS_AS(derive_source_params(50, 1, 50, 1.0, exp, exp), DomainError);
  CHECK_THROWS_AS(derive_source_params(50, 1, 50, 1.0 - 1e-320, exp, exp), DomainError);
  CHECK_THROWS_AS(derive_source_params(50, 0, 50, 0.5, exp, exp), DomainError);
}

TEST_CASE("burstiness") {
  CHECK(burstiness(10, 20) == Approx(0.5));
  CHECK(burstiness(50, 50) == 0.0);
  CHECK(burstiness(10, 200) == Approx(0.95));
  CHECK_THROWS_AS(burstiness(30, 20), DomainError);
}

TEST_CASE("blowup_points") {
  CHECK(blowup_points(1, 0.5) == std::vector<double>{0.5});
  const auto two = blowup_points(2, 0.5);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(two[1] == 0.5);
  CHECK(blowup_points(10, 0.5).front() == Approx(0.909091).margin(1e-6));

  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= 9; ++k) {
      const double rho = k / 10.0;
      const auto pts = blowup_points(n, rho);
      REQUIRE(pts.size() == static_cast<std::size_t>(n));
      CHECK(pts.back() == 1.0 - rho);
      for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] < pts[i - 1]);
    }

  CHECK_THROWS_AS(blowup_points(0, 0.5), DomainError);
  CHECK_THROWS_AS(blowup_points(2, 1.0), DomainError);
}

TEST_CASE("limiting delays") {
  CHECK(mpd_smooth_limit(100, 0.5) == Approx(0.02));
  CHECK(mpd_smooth_limit(20, 0.5) == Approx(0.1));
  CHECK(mpd_smooth_limit(100, 0.9) == Approx(0.1));
  CHECK_THROWS_AS(mpd_smooth_limit(100, 1.0), InstabilityError);

  CHECK(mpd_bulk_limit(20, 0.5, make_geometric_burst(20)) == Approx(2.0));
  CHECK(mpd_bulk_limit(100, 0.5, make_discretized_burst(dists::Deterministic{1})) == Approx(0.02));
  CHECK(mpd_bulk_limit(100, 0.5, make_geometric_burst(50)) == Approx(1.0));
}

TEST_CASE("bulk factor") {
  const auto g = bulk_factor(make_geometric_burst(20));
  CHECK(g.value == Approx(brute_force_geometric_D(20)).epsilon(1e-9));
  CHECK(g.value == Approx(20));
  CHECK(g.std_error == 0.0);
  CHECK(bulk_factor(make_discretized_burst(dists::Deterministic{1})).value == 1.0);
  CHECK(bulk_factor(make_discretized_burst(dists::Deterministic{5})).value == 3.0);

  // Monte Carlo path: exponential X discretized; finite second moment.
  const auto mc = bulk_factor(make_discretized_burst(dists::Exponential{20}), 1'000'000, 11);
  CHECK_FALSE(mc.unstable);
  CHECK(mc.std_error > 0.0);
  CHECK(mc.value == Approx(20.5).margin(5 * mc.std_error + 0.5));

  const auto heavy = bulk_factor(make_discretized_burst(dists::Pareto{1.4, 50}), 200'000, 3);
  CHECK(heavy.unstable);
}

TEST_CASE("burst laws") {
  CHECK(burst_size_mean(make_geometric_burst(50)) == Approx(50));
  const auto pareto = burst_law_for(PeriodLaw::pareto(), 50);
  CHECK(burst_size_mean(pareto) == Approx(50).epsilon(0.01));
  const auto tpt = burst_law_for(PeriodLaw::tpt(30), 50);
  CHECK(burst_size_mean(tpt) == Approx(50).epsilon(0.01));
  CHECK(std::holds_alternative<GeometricBurst>(burst_law_for(PeriodLaw::exponential(), 20)));
  // A mean of 0.3 cannot survive L = max(1, round(X)).
  CHECK_THROWS_AS(make_discretized_burst(dists::Exponential{0.3}), DomainError);

  RngStream s(5);
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto l = sample_burst_size(make_geometric_burst(20), s);
    REQUIRE(l >= 1);
    acc += static_cast<double>(l);
  }
  CHECK(acc / n == Approx(20).epsilon(0.02));
}

TEST_CASE("emission mode names") {
  CHECK(emission_mode_from_string(to_string(EmissionMode::PoissonAtPeakRate)) == EmissionMode::PoissonAtPeakRate);
  CHECK(emission_mode_from_string("constant") == EmissionMode::ConstantPeakRate);
  CHECK_THROWS(emission_mode_from_string("bogus"));
}
