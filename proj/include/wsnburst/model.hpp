#pragma once

// Source and sink parameters of the N-Burst model and its closed-form
// results: burstiness, limiting mean packet delays and blow-up points.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wsnburst/dists.hpp"

namespace wsnburst::model {

enum class EmissionMode { ConstantPeakRate, PoissonAtPeakRate };

std::string to_string(EmissionMode mode);
EmissionMode emission_mode_from_string(const std::string& name);

// Shape of an ON or OFF period law, independent of its mean. The mean is
// fixed later by derive_source_params.
struct PeriodLaw {
  enum class Family { Exponential, Pareto, Tpt };
  Family family = Family::Exponential;
  double alpha = 1.4;  // Pareto / TPT tail index
  double theta = 0.5;  // TPT only
  int truncation = 1;  // TPT only

  static PeriodLaw exponential() { return {}; }
  static PeriodLaw pareto(double alpha = 1.4) { return {Family::Pareto, alpha, 0.5, 1}; }
  static PeriodLaw tpt(int truncation, double theta = 0.5, double alpha = 1.4) {
    return {Family::Tpt, alpha, theta, truncation};
  }

  dists::DistributionSpec with_mean(double mean) const;
  // "exp", "pareto", "tpt"
  std::string label() const;
};

// Law of L, the number of packets in one burst. L >= 1 always.
struct GeometricBurst {
  double mean;  // success probability 1/mean on {1,2,...}
};
// L = max(1, round(X)) for X drawn from `spec`.
struct DiscretizedBurst {
  dists::DistributionSpec spec;
};
using BulkSizeLaw = std::variant<GeometricBurst, DiscretizedBurst>;

// Validates the law; for the discretized variant E[L] must match the
// continuous mean within 1%.
BulkSizeLaw make_geometric_burst(double mean);
BulkSizeLaw make_discretized_burst(const dists::DistributionSpec& spec);

// E[L], exact (series summation for the discretized variant).
double burst_size_mean(const BulkSizeLaw& law);

template <UniformSource S>
std::uint64_t sample_burst_size(const BulkSizeLaw& law, S& stream);

struct SourceParams {
  double K;         // mean packet rate of one source (packets/s)
  double lambda_p;  // peak rate during a burst (packets/s)
  double n_p;       // mean packets per burst
  double b;         // burstiness, 1 - K/lambda_p
  double on_mean;   // n_p / lambda_p (s)
  double off_mean;  // on_mean * b / (1 - b) (s)
  dists::DistributionSpec on_dist;
  std::optional<dists::DistributionSpec> off_dist;  // absent iff b == 0
  EmissionMode emission_mode = EmissionMode::ConstantPeakRate;
};

struct SinkParams {
  double v;    // service rate (packets/s)
  double rho;  // utilization
  double B;    // overflow threshold (packets)
};

SourceParams derive_source_params(double lambda_total, int node_count, double n_p, double b,
                                  const PeriodLaw& on_law, const PeriodLaw& off_law,
                                  EmissionMode mode = EmissionMode::ConstantPeakRate);

// Burst-size law matching an ON law: exponential ON times give geometric
// bursts, the power-tailed laws are discretized.
BulkSizeLaw burst_law_for(const PeriodLaw& on_law, double n_p);

double burstiness(double K, double lambda_p);

// b_1 > b_2 > ... > b_N, with b_N = 1 - rho exactly.
std::vector<double> blowup_points(int node_count, double rho);

double mpd_smooth_limit(double v, double rho);

struct BulkFactor {
  double value;
  double std_error;  // zero for closed-form laws
  bool unstable;     // second moment of L infinite; value does not converge
};

BulkFactor bulk_factor(const BulkSizeLaw& law, std::uint64_t samples = 1'000'000,
                       std::uint64_t seed = 0x5eed);

double mpd_bulk_limit(double v, double rho, const BulkSizeLaw& law);

// ---------------------------------------------------------------------------

template <UniformSource S>
std::uint64_t sample_burst_size(const BulkSizeLaw& law, S& stream) {
  if (const auto* g = std::get_if<GeometricBurst>(&law)) {
    if (g->mean <= 1.0) return 1;
    const double q = 1.0 - 1.0 / g->mean;
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(stream.uniform()) / std::log(q)));
  }
  const double x = std::round(dists::sample(std::get<DiscretizedBurst>(law).spec, stream));
  return x < 1.0 ? 1 : static_cast<std::uint64_t>(x);
}

}  // namespace wsnburst::model
