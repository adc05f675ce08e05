#include "wsnburst/model.hpp"

#include <cmath>
#include <limits>

#include "wsnburst/errors.hpp"

namespace wsnburst::model {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// sum_{l>=2} exp(-(l - 1/2) / m)
double exponential_rounding_tail(double m) {
  return std::exp(-1.5 / m) / -std::expm1(-1.0 / m);
}

// sum_{l>=2} (1 + (l - 1/2)/s)^-alpha: direct terms, then Euler-Maclaurin.
double pareto_rounding_tail(double s, double alpha) {
  constexpr int kDirect = 20000;
  auto f = [&](double l) { return std::pow(1.0 + (l - 0.5) / s, -alpha); };
  double sum = 0.0;
  for (int l = kDirect; l >= 2; --l) sum += f(l);
  const double n = kDirect + 1;
  const double base = 1.0 + (n - 0.5) / s;
  const double integral = s / (alpha - 1.0) * std::pow(base, 1.0 - alpha);
  const double derivative = -alpha / s * std::pow(base, -alpha - 1.0);
  return sum + integral + f(n) / 2.0 - derivative / 12.0;
}

}  // namespace

std::string to_string(EmissionMode mode) {
  return mode == EmissionMode::ConstantPeakRate ? "constant" : "poisson";
}

EmissionMode emission_mode_from_string(const std::string& name) {
  if (name == "constant") return EmissionMode::ConstantPeakRate;
  if (name == "poisson") return EmissionMode::PoissonAtPeakRate;
  throw DomainError("emission mode must be \"constant\" or \"poisson\", got \"" + name + "\"");
}

dists::DistributionSpec PeriodLaw::with_mean(double mean) const {
  switch (family) {
    case Family::Exponential:
      return dists::Exponential{mean};
    case Family::Pareto: {
      dists::DistributionSpec spec = dists::Pareto{alpha, mean};
      dists::validate(spec);
      return spec;
    }
    case Family::Tpt:
      return dists::tpt_calibrate(theta, alpha, mean, truncation);
  }
  throw DomainError("unknown period law");
}

std::string PeriodLaw::label() const {
  switch (family) {
    case Family::Exponential:
      return "exp";
    case Family::Pareto:
      return "pareto";
    case Family::Tpt:
      return "tpt";
  }
  return "?";
}

BulkSizeLaw make_geometric_burst(double mean) {
  require(std::isfinite(mean) && mean >= 1.0, "geometric burst mean must be >= 1");
  return GeometricBurst{mean};
}

BulkSizeLaw make_discretized_burst(const dists::DistributionSpec& spec) {
  dists::validate(spec);
  BulkSizeLaw law = DiscretizedBurst{spec};
  if (!std::holds_alternative<dists::Deterministic>(spec)) {
    const double target = dists::mean_of(spec);
    const double actual = burst_size_mean(law);
    if (std::abs(actual / target - 1.0) > 0.01)
      throw DomainError("discretized burst size mean " + std::to_string(actual) +
                        " deviates more than 1% from " + std::to_string(target));
  }
  return law;
}

double burst_size_mean(const BulkSizeLaw& law) {
  if (const auto* g = std::get_if<GeometricBurst>(&law)) return std::max(1.0, g->mean);
  const auto& spec = std::get<DiscretizedBurst>(law).spec;
  // E[L] = 1 + sum_{l>=2} Pr(X >= l - 1/2)
  struct Visitor {
    double operator()(const dists::Exponential& d) const {
      return 1.0 + exponential_rounding_tail(d.mean);
    }
    double operator()(const dists::Pareto& d) const {
      return 1.0 + pareto_rounding_tail(d.mean * (d.alpha - 1.0), d.alpha);
    }
    double operator()(const dists::Tpt& d) const {
      const double norm = (1.0 - d.theta) / (1.0 - std::pow(d.theta, d.truncation));
      double sum = 0.0;
      for (int j = 0; j < d.truncation; ++j)
        sum += std::pow(d.theta, j) * exponential_rounding_tail(std::pow(d.lambda, j) / d.mu);
      return 1.0 + norm * sum;
    }
    double operator()(const dists::Deterministic& d) const { return std::max(1.0, std::round(d.value)); }
  };
  return std::visit(Visitor{}, spec);
}

SourceParams derive_source_params(double lambda_total, int node_count, double n_p, double b,
                                  const PeriodLaw& on_law, const PeriodLaw& off_law,
                                  EmissionMode mode) {
  require(std::isfinite(lambda_total) && lambda_total > 0.0, "lambda_total must be positive");
  require(node_count >= 1, "node count N must be >= 1");
  require(std::isfinite(n_p) && n_p >= 1.0, "n_p must be >= 1");
  require(b >= 0.0 && b < 1.0, "burstiness b must lie in [0,1)");

  SourceParams p{};
  p.K = lambda_total / node_count;
  p.lambda_p = p.K / (1.0 - b);
  require(std::isfinite(p.lambda_p), "peak rate K/(1-b) is not representable");
  p.n_p = n_p;
  p.b = b;
  p.on_mean = n_p / p.lambda_p;
  p.off_mean = p.on_mean * b / (1.0 - b);
  p.on_dist = on_law.with_mean(p.on_mean);
  if (b > 0.0) p.off_dist = off_law.with_mean(p.off_mean);
  p.emission_mode = mode;
  return p;
}

BulkSizeLaw burst_law_for(const PeriodLaw& on_law, double n_p) {
  if (on_law.family == PeriodLaw::Family::Exponential) return make_geometric_burst(n_p);
  return make_discretized_burst(on_law.with_mean(n_p));
}

double burstiness(double K, double lambda_p) {
  require(K > 0.0 && lambda_p > 0.0, "rates must be positive");
  require(K <= lambda_p, "mean rate K exceeds peak rate lambda_p");
  return 1.0 - K / lambda_p;
}

std::vector<double> blowup_points(int node_count, double rho) {
  require(node_count >= 1, "node count N must be >= 1");
  require(rho > 0.0 && rho < 1.0, "utilization rho must lie in (0,1)");
  // N(1-rho)/(N - rho(N-i)) rewritten so that i = N divides by exactly 1.
  std::vector<double> points;
  points.reserve(node_count);
  const double n = node_count;
  for (int i = 1; i <= node_count; ++i)
    points.push_back((1.0 - rho) / (1.0 - rho * (n - i) / n));
  return points;
}

double mpd_smooth_limit(double v, double rho) {
  require(std::isfinite(v) && v > 0.0, "service rate v must be positive");
  require(rho > 0.0, "utilization rho must be positive");
  if (rho >= 1.0) throw InstabilityError("utilization rho >= 1 has no steady state");
  return (1.0 / v) / (1.0 - rho);
}

BulkFactor bulk_factor(const BulkSizeLaw& law, std::uint64_t samples, std::uint64_t seed) {
  if (const auto* g = std::get_if<GeometricBurst>(&law)) {
    // E[L] = m, E[L^2] = 2m^2 - m  =>  E[L(L+1)/2] / E[L] = m
    return {std::max(1.0, g->mean), 0.0, false};
  }
  const auto& spec = std::get<DiscretizedBurst>(law).spec;
  if (const auto* d = std::get_if<dists::Deterministic>(&spec)) {
    const double l = std::max(1.0, std::round(d->value));
    return {(l + 1.0) / 2.0, 0.0, false};
  }
  require(samples >= 2, "bulk factor needs at least two samples");

  // Ratio estimator E[L(L+1)/2] / E[L] with a delta-method standard error.
  RngStream stream(seed);
  double sum_l = 0.0, sum_q = 0.0, sum_ll = 0.0, sum_qq = 0.0, sum_lq = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double l = static_cast<double>(sample_burst_size(law, stream));
    const double q = l * (l + 1.0) / 2.0;
    sum_l += l;
    sum_q += q;
    sum_ll += l * l;
    sum_qq += q * q;
    sum_lq += l * q;
  }
  const double n = static_cast<double>(samples);
  const double mean_l = sum_l / n;
  const double mean_q = sum_q / n;
  const double ratio = mean_q / mean_l;
  const double var_l = (sum_ll - n * mean_l * mean_l) / (n - 1.0);
  const double var_q = (sum_qq - n * mean_q * mean_q) / (n - 1.0);
  const double cov = (sum_lq - n * mean_l * mean_q) / (n - 1.0);
  const double var_ratio = (var_q - 2.0 * ratio * cov + ratio * ratio * var_l) / (mean_l * mean_l * n);

  const auto* pareto = std::get_if<dists::Pareto>(&spec);
  return {ratio, std::sqrt(std::max(0.0, var_ratio)), pareto != nullptr && pareto->alpha <= 2.0};
}

double mpd_bulk_limit(double v, double rho, const BulkSizeLaw& law) {
  return bulk_factor(law).value * mpd_smooth_limit(v, rho);
}

}  // namespace wsnburst::model
