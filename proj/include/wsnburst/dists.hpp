#pragma once

// Positive-valued distributions used for ON times, OFF times and burst
// sizes: exponential, Pareto (mean-parameterized Lomax), truncated power
// tail (TPT) and deterministic.

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "wsnburst/rng.hpp"

namespace wsnburst::dists {

struct Exponential {
  double mean;
};

// R(x) = (1 + x / (M (alpha - 1)))^-alpha, so E[X] = M.
struct Pareto {
  double alpha;
  double mean;
};

// Mixture of `truncation` exponentials. Branch j has weight
// (1-theta) theta^j / (1-theta^T) and rate mu / lambda^j.
struct Tpt {
  double theta;
  int truncation;
  double lambda;
  double mu;
};

struct Deterministic {
  double value;
};

using DistributionSpec = std::variant<Exponential, Pareto, Tpt, Deterministic>;

// Throws DomainError naming the offending parameter.
void validate(const DistributionSpec& spec);

// Pr(X > x).
double reliability(const DistributionSpec& spec, double x);

double mean_of(const DistributionSpec& spec);

// TPT whose untruncated tail decays as x^-alpha (lambda = theta^(-1/alpha))
// and whose mean is `target_mean`.
Tpt tpt_calibrate(double theta, double alpha, double target_mean, int truncation);

// Same, with an explicit geometric factor instead of the power-tail default.
Tpt tpt_with_lambda(double theta, double lambda, double target_mean, int truncation);

std::string describe(const DistributionSpec& spec);

// {"kind":"exp","mean":..} | {"kind":"pareto","alpha":..,"mean":..} |
// {"kind":"tpt","theta":..,"alpha":..,"T":..,"mean":..} | {"kind":"det","value":..}
// A tpt object may carry "lambda" instead of "alpha".
DistributionSpec from_json(const nlohmann::json& j);
nlohmann::json to_json(const DistributionSpec& spec);

namespace detail {

// Branch index of a truncated geometric law on {0..T-1} with ratio theta.
inline int tpt_branch(const Tpt& d, double u) {
  if (d.truncation == 1) return 0;
  const double total = 1.0 - std::pow(d.theta, d.truncation);
  const int j = static_cast<int>(std::floor(std::log1p(-u * total) / std::log(d.theta)));
  return std::clamp(j, 0, d.truncation - 1);
}

}  // namespace detail

// Inverse-transform sampling. Exponential{1/mu} and Tpt{T=1, mu} consume the
// same single uniform and produce the same bits.
template <UniformSource S>
double sample(const DistributionSpec& spec, S& stream) {
  struct Visitor {
    S& s;
    double operator()(const Exponential& d) const { return -std::log(s.uniform()) * d.mean; }
    double operator()(const Pareto& d) const {
      const double u = s.uniform();
      return d.mean * (d.alpha - 1.0) * (std::pow(u, -1.0 / d.alpha) - 1.0);
    }
    double operator()(const Tpt& d) const {
      const int j = d.truncation == 1 ? 0 : detail::tpt_branch(d, s.uniform());
      const double scale = (j == 0 ? 1.0 : std::pow(d.lambda, j)) / d.mu;
      return -std::log(s.uniform()) * scale;
    }
    double operator()(const Deterministic& d) const { return d.value; }
  };
  return std::visit(Visitor{stream}, spec);
}

}  // namespace wsnburst::dists
