#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsnburst/dists.hpp"
#include "wsnburst/errors.hpp"

using namespace wsnburst;
using namespace wsnburst::dists;
using Catch::Approx;

namespace {

struct FixedUniform {
  double u;
  double uniform() const { return u; }
};

// Least-squares slope of log(survival) against log(x).
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& survival) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(survival[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double simpson_mean(const DistributionSpec& d, double upper, int steps) {
  // E[X] = integral of R(x) dx; substitute x = t^2 to tame the long tail.
  const double top = std::sqrt(upper);
  const double h = top / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * reliability(d, t * t) * 2.0 * t;
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("reliability at the origin and known quantiles") {
  CHECK(reliability(Pareto{1.4, 50}, 0.0) == 1.0);
  CHECK(reliability(Tpt{0.5, 1, 3.0, 2.0}, 0.5) == Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(reliability(Pareto{1.4, 50}, 12.814) == Approx(0.5).margin(1e-4));
  CHECK(reliability(Exponential{2.0}, 2.0) == Approx(std::exp(-1.0)));
  CHECK(reliability(Deterministic{3.0}, 2.9) == 1.0);
  CHECK(reliability(Deterministic{3.0}, 3.0) == 0.0);
}

TEST_CASE("reliability rejects bad parameters") {
  CHECK_THROWS_AS(reliability(Pareto{1.0, 50}, 1.0), DomainError);
  CHECK_THROWS_AS(reliability(Exponential{-1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(reliability(Tpt{1.5, 3, 2.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(reliability(Tpt{0.5, 0, 2.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(reliability(Exponential{1.0}, -1.0), DomainError);
}

TEST_CASE("analytic means") {
  CHECK(mean_of(Pareto{1.4, 50}) == 50.0);
  CHECK(mean_of(Tpt{0.5, 1, 7.0, 2.0}) == Approx(0.5).epsilon(1e-15));
  CHECK(mean_of(Exponential{3.0}) == 3.0);
  CHECK(mean_of(Deterministic{4.0}) == 4.0);

  // Three-branch TPT: weights 4/7, 2/7, 1/7 with scales 1, lambda, lambda^2.
  const Tpt t3{0.5, 3, 1.64067, 1.0};
  CHECK(mean_of(t3) == Approx(1.424734).epsilon(1e-6));
  CHECK(mean_of(t3) == Approx(simpson_mean(t3, 400.0, 20000)).epsilon(1e-8));

  // theta * lambda == 1: every branch contributes equally.
  const Tpt flat{0.5, 4, 2.0, 1.0};
  CHECK(mean_of(flat) == Approx(4 * 0.5 / (1 - std::pow(0.5, 4))).epsilon(1e-12));
}

TEST_CASE("inverse-transform samples at a fixed uniform") {
  FixedUniform half{0.5};
  CHECK(sample(Exponential{2.0}, half) == Approx(1.38629).epsilon(1e-5));
  const double x = sample(Pareto{1.4, 50}, half);
  CHECK(x == Approx(12.8134).epsilon(1e-4));
  CHECK(reliability(Pareto{1.4, 50}, x) == Approx(0.5).epsilon(1e-12));
  CHECK(sample(Deterministic{7.0}, half) == 7.0);
}

TEST_CASE("single-branch TPT and exponential produce identical bits") {
  RngStream a(42), b(42);
  const DistributionSpec tpt = Tpt{0.5, 1, 1.64067, 2.0};
  const DistributionSpec exp = Exponential{0.5};
  for (int i = 0; i < 10000; ++i) {
    const double x = sample(tpt, a);
    const double y = sample(exp, b);
    REQUIRE(std::memcmp(&x, &y, sizeof x) == 0);
  }
}

TEST_CASE("tpt_calibrate") {
  const auto one = tpt_calibrate(0.5, 1.4, 1.0, 1);
  CHECK(one.mu == Approx(1.0).epsilon(1e-15));
  CHECK(one.lambda == Approx(1.64067).epsilon(1e-5));
  CHECK(0.5 * std::pow(one.lambda, 1.4) == Approx(1.0).epsilon(1e-14));
  CHECK(tpt_calibrate(0.5, 1.4, 0.5, 1).mu == Approx(2.0).epsilon(1e-15));

  const auto t30 = tpt_calibrate(0.5, 1.4, 1.0, 30);
  CHECK(std::abs(mean_of(t30) - 1.0) < 1e-12);
  CHECK(std::abs(mean_of(tpt_calibrate(0.3, 1.2, 7.5, 12)) - 7.5) < 1e-11);

  CHECK_THROWS_AS(tpt_calibrate(0.5, 1.4, 0.0, 3), DomainError);
  CHECK_THROWS_AS(tpt_calibrate(1.0, 1.4, 1.0, 3), DomainError);
}

TEST_CASE("empirical means converge") {
  RngStream s(7);
  for (const DistributionSpec& d :
       {DistributionSpec{Exponential{2.0}}, DistributionSpec{tpt_calibrate(0.5, 1.4, 3.0, 5)},
        DistributionSpec{Pareto{2.5, 4.0}}}) {
    double acc = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) acc += sample(d, s);
    CHECK(acc / n == Approx(mean_of(d)).epsilon(0.03));
  }
}

TEST_CASE("Pareto tail slope on a log grid") {
  const Pareto p{1.4, 50};
  RngStream s(2024);
  const int n = 1'000'000;
  std::vector<double> draws(n);
  for (auto& x : draws) x = sample(p, s);
  std::sort(draws.begin(), draws.end());

  std::vector<double> xs, empirical, exact;
  for (double x = 500.0; x <= 10000.0; x *= 1.35) {
    const auto above = draws.end() - std::upper_bound(draws.begin(), draws.end(), x);
    xs.push_back(x);
    empirical.push_back(static_cast<double>(above) / n);
    exact.push_back(reliability(p, x));
  }
  const double exact_slope = fitted_slope(xs, exact);
  CHECK(exact_slope == Approx(-1.37).margin(0.02));
  CHECK(fitted_slope(xs, empirical) == Approx(exact_slope).margin(0.06));
  CHECK(fitted_slope(xs, empirical) == Approx(-1.4).margin(0.15));
}

TEST_CASE("sampling is deterministic per seed") {
  const DistributionSpec d = tpt_calibrate(0.5, 1.4, 1.0, 30);
  RngStream a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = sample(d, a);
    CHECK(x == sample(d, b));
    if (x != sample(d, c)) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("json round trip") {
  for (const DistributionSpec& d : {DistributionSpec{Exponential{2.0}}, DistributionSpec{Pareto{1.4, 50}},
                                    DistributionSpec{tpt_calibrate(0.5, 1.4, 1.0, 30)},
                                    DistributionSpec{Deterministic{3.0}}}) {
    const auto back = from_json(to_json(d));
    CHECK(describe(back) == describe(d));
    CHECK(mean_of(back) == Approx(mean_of(d)).epsilon(1e-12));
  }
}
