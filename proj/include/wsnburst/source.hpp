#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wsnburst/model.hpp"
#include "wsnburst/rng.hpp"

namespace wsnburst::sim {

struct Emission {
  double time;
  std::uint64_t burst;     // 0-based burst index
  std::uint64_t position;  // index within the burst
};

// Lazy ON/OFF emission process of one source. Starts with an OFF period
// (skipped when the source has no OFF law), then alternates: draw L, emit L
// packets at the peak rate, idle for an OFF draw. Stops at the horizon.
class SourceProcess {
 public:
  SourceProcess(const model::SourceParams& params, const model::BulkSizeLaw& law, RngStream stream,
                double horizon);

  // Next emission strictly before the horizon, strictly after the previous one.
  std::optional<Emission> next();

 private:
  void start_burst(double at);

  const model::SourceParams* params_;
  const model::BulkSizeLaw* law_;
  RngStream stream_;
  double horizon_;
  double spacing_;
  double burst_start_ = 0.0;
  double cursor_ = 0.0;  // Poisson mode: time of the next packet
  double last_ = -1.0;
  std::uint64_t burst_ = 0;
  std::uint64_t burst_size_ = 0;
  std::uint64_t position_ = 0;
  bool started_ = false;
  bool done_ = false;
};

// All emissions in [0, horizon).
std::vector<Emission> source_emit(const model::SourceParams& params, const model::BulkSizeLaw& law,
                                  RngStream stream, double horizon);

}  // namespace wsnburst::sim
