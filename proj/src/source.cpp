#include "wsnburst/source.hpp"

#include <cmath>

#include "wsnburst/errors.hpp"

namespace wsnburst::sim {

SourceProcess::SourceProcess(const model::SourceParams& params, const model::BulkSizeLaw& law,
                             RngStream stream, double horizon)
    : params_(&params), law_(&law), stream_(stream), horizon_(horizon), spacing_(1.0 / params.lambda_p) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!(params.lambda_p > 0.0) || !std::isfinite(params.lambda_p)) throw DomainError("peak rate must be positive");
}

void SourceProcess::start_burst(double at) {
  burst_start_ = at;
  cursor_ = at;
  position_ = 0;
  burst_size_ = model::sample_burst_size(*law_, stream_);
}

std::optional<Emission> SourceProcess::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    ++burst_;
    start_burst(params_->off_dist ? dists::sample(*params_->off_dist, stream_) : 0.0);
  } else if (position_ == burst_size_) {
    const bool poisson = params_->emission_mode == model::EmissionMode::PoissonAtPeakRate;
    // End of the ON period: one spacing after the last packet.
    const double on_end = poisson ? cursor_ : burst_start_ + static_cast<double>(burst_size_) * spacing_;
    const double off = params_->off_dist ? dists::sample(*params_->off_dist, stream_) : 0.0;
    ++burst_;
    start_burst(on_end + off);
  }

  double t;
  if (params_->emission_mode == model::EmissionMode::ConstantPeakRate) {
    t = burst_start_ + static_cast<double>(position_) * spacing_;
  } else {
    t = cursor_;
    cursor_ += -std::log(stream_.uniform()) * spacing_;
  }
  if (t <= last_) t = std::nextafter(last_, INFINITY);
  if (t >= horizon_) {
    done_ = true;
    return std::nullopt;
  }
  last_ = t;
  return Emission{t, burst_ - 1, position_++};
}

std::vector<Emission> source_emit(const model::SourceParams& params, const model::BulkSizeLaw& law,
                                  RngStream stream, double horizon) {
  SourceProcess process(params, law, stream, horizon);
  std::vector<Emission> out;
  while (auto e = process.next()) out.push_back(*e);
  return out;
}

}  // namespace wsnburst::sim
