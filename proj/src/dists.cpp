#include "wsnburst/dists.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wsnburst/errors.hpp"

namespace wsnburst::dists {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// sum_{j<T} (theta*lambda)^j, with the theta*lambda == 1 limit.
double tpt_moment_sum(double theta, double lambda, int truncation) {
  const double r = theta * lambda;
  if (std::abs(r - 1.0) < 1e-12) return static_cast<double>(truncation);
  return (1.0 - std::pow(r, truncation)) / (1.0 - r);
}

}  // namespace

void validate(const DistributionSpec& spec) {
  struct Visitor {
    void operator()(const Exponential& d) const {
      require(positive_finite(d.mean), "exponential mean must be positive");
    }
    void operator()(const Pareto& d) const {
      require(std::isfinite(d.alpha) && d.alpha > 1.0, "pareto alpha must exceed 1");
      require(positive_finite(d.mean), "pareto mean must be positive");
    }
    void operator()(const Tpt& d) const {
      require(d.theta > 0.0 && d.theta < 1.0, "tpt theta must lie in (0,1)");
      require(d.truncation >= 1, "tpt truncation T must be >= 1");
      require(std::isfinite(d.lambda) && d.lambda > 1.0, "tpt lambda must exceed 1");
      require(positive_finite(d.mu), "tpt mu must be positive");
    }
    void operator()(const Deterministic& d) const {
      require(positive_finite(d.value), "deterministic value must be positive");
    }
  };
  std::visit(Visitor{}, spec);
}

double reliability(const DistributionSpec& spec, double x) {
  validate(spec);
  require(x >= 0.0 && !std::isnan(x), "reliability argument must be nonnegative");
  struct Visitor {
    double x;
    double operator()(const Exponential& d) const { return std::exp(-x / d.mean); }
    double operator()(const Pareto& d) const {
      return std::pow(1.0 + x / (d.mean * (d.alpha - 1.0)), -d.alpha);
    }
    double operator()(const Tpt& d) const {
      double sum = 0.0;
      double weight = 1.0;
      double scale = 1.0;
      for (int j = 0; j < d.truncation; ++j) {
        sum += weight * std::exp(-d.mu * x / scale);
        weight *= d.theta;
        scale *= d.lambda;
      }
      return std::min(1.0, (1.0 - d.theta) / (1.0 - std::pow(d.theta, d.truncation)) * sum);
    }
    double operator()(const Deterministic& d) const { return x < d.value ? 1.0 : 0.0; }
  };
  return std::visit(Visitor{x}, spec);
}

double mean_of(const DistributionSpec& spec) {
  validate(spec);
  struct Visitor {
    double operator()(const Exponential& d) const { return d.mean; }
    double operator()(const Pareto& d) const { return d.mean; }
    double operator()(const Tpt& d) const {
      const double norm = (1.0 - d.theta) / ((1.0 - std::pow(d.theta, d.truncation)) * d.mu);
      return norm * tpt_moment_sum(d.theta, d.lambda, d.truncation);
    }
    double operator()(const Deterministic& d) const { return d.value; }
  };
  return std::visit(Visitor{}, spec);
}

Tpt tpt_with_lambda(double theta, double lambda, double target_mean, int truncation) {
  require(positive_finite(target_mean), "tpt target mean must be positive");
  Tpt d{theta, truncation, lambda, 1.0};
  validate(d);
  if (truncation == 1) {
    d.mu = 1.0 / target_mean;
    return d;
  }
  d.mu = mean_of(d) / target_mean;
  return d;
}

Tpt tpt_calibrate(double theta, double alpha, double target_mean, int truncation) {
  require(theta > 0.0 && theta < 1.0, "tpt theta must lie in (0,1)");
  require(std::isfinite(alpha) && alpha > 1.0, "tpt alpha must exceed 1");
  return tpt_with_lambda(theta, std::pow(theta, -1.0 / alpha), target_mean, truncation);
}

std::string describe(const DistributionSpec& spec) {
  std::ostringstream os;
  os.precision(9);
  struct Visitor {
    std::ostringstream& os;
    void operator()(const Exponential& d) const { os << "exp(mean=" << d.mean << ")"; }
    void operator()(const Pareto& d) const {
      os << "pareto(alpha=" << d.alpha << ", mean=" << d.mean << ")";
    }
    void operator()(const Tpt& d) const {
      os << "tpt(theta=" << d.theta << ", T=" << d.truncation << ", lambda=" << d.lambda
         << ", mu=" << d.mu << ")";
    }
    void operator()(const Deterministic& d) const { os << "det(" << d.value << ")"; }
  };
  std::visit(Visitor{os}, spec);
  return os.str();
}

DistributionSpec from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw DomainError("distribution must be an object with a string \"kind\"");
  const auto kind = j["kind"].get<std::string>();
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number())
      throw DomainError(std::string("distribution \"") + kind + "\" needs numeric \"" + key + "\"");
    return j[key].get<double>();
  };
  DistributionSpec spec;
  if (kind == "exp") {
    spec = Exponential{number("mean")};
  } else if (kind == "pareto") {
    spec = Pareto{number("alpha"), number("mean")};
  } else if (kind == "tpt") {
    const double t = number("T");
    if (t != std::floor(t)) throw DomainError("tpt T must be an integer");
    if (j.contains("lambda"))
      spec = tpt_with_lambda(number("theta"), number("lambda"), number("mean"), static_cast<int>(t));
    else
      spec = tpt_calibrate(number("theta"), number("alpha"), number("mean"), static_cast<int>(t));
  } else if (kind == "det") {
    spec = Deterministic{number("value")};
  } else {
    throw DomainError("unknown distribution kind \"" + kind + "\"");
  }
  validate(spec);
  return spec;
}

nlohmann::json to_json(const DistributionSpec& spec) {
  struct Visitor {
    nlohmann::json operator()(const Exponential& d) const { return {{"kind", "exp"}, {"mean", d.mean}}; }
    nlohmann::json operator()(const Pareto& d) const {
      return {{"kind", "pareto"}, {"alpha", d.alpha}, {"mean", d.mean}};
    }
    nlohmann::json operator()(const Tpt& d) const {
      const double alpha = -std::log(d.theta) / std::log(d.lambda);
      return {{"kind", "tpt"},      {"theta", d.theta},  {"alpha", alpha}, {"T", d.truncation},
              {"mean", mean_of(d)}, {"lambda", d.lambda}};
    }
    nlohmann::json operator()(const Deterministic& d) const { return {{"kind", "det"}, {"value", d.value}}; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace wsnburst::dists
