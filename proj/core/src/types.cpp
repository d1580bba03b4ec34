#include "pakf/types.hpp"

#include <cmath>
#include <string>

#include "pakf/error.hpp"

namespace pakf {

namespace {

void check_dt(double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw DataError("dt must be finite and > 0 (got " + std::to_string(dt) + ")");
  }
}

}  // namespace

Trace::Trace(std::vector<double> samples, double dt) : samples_(std::move(samples)), dt_(dt) {
  if (samples_.empty()) throw DataError("trace has no samples");
  check_dt(dt_);
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (!std::isfinite(samples_[k])) {
      throw DataError("non-finite sample at t=" + std::to_string(k));
    }
  }
}

Volume validate_volume(VolumeShape shape, double dt, std::vector<double> data) {
  if (shape.nx == 0 || shape.ny == 0 || shape.nt == 0) {
    throw DataError("volume dimensions must be positive (nx=" + std::to_string(shape.nx) +
                    ", ny=" + std::to_string(shape.ny) + ", nt=" + std::to_string(shape.nt) + ")");
  }
  if (data.size() != shape.samples()) {
    throw DataError("volume data length mismatch: expected nx*ny*nt=" +
                    std::to_string(shape.samples()) + " samples, got " +
                    std::to_string(data.size()));
  }
  check_dt(dt);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      const std::size_t t = i % shape.nt;
      const std::size_t y = (i / shape.nt) % shape.ny;
      const std::size_t x = i / (shape.nt * shape.ny);
      throw DataError("non-finite sample at (" + std::to_string(x) + "," + std::to_string(y) +
                      "," + std::to_string(t) + ")");
    }
  }
  return Volume(shape, dt, std::move(data));
}

Volume validate_volume(const Volume& v) {
  return validate_volume(v.shape(), v.dt(), std::vector<double>(v.data().begin(), v.data().end()));
}

std::span<const double> Volume::trace_samples(GridIndex at) const {
  if (at.x >= shape_.nx || at.y >= shape_.ny) {
    throw DataError("trace index (" + std::to_string(at.x) + "," + std::to_string(at.y) +
                    ") outside " + std::to_string(shape_.nx) + "x" + std::to_string(shape_.ny) +
                    " grid");
  }
  return std::span<const double>(data_).subspan(offset(at), shape_.nt);
}

Trace Volume::trace(GridIndex at) const {
  const auto s = trace_samples(at);
  return Trace(std::vector<double>(s.begin(), s.end()), dt_);
}

void FilterParams::validate() const {
  for (double v : {f, h, gu, q, r, x0, p0}) {
    if (!std::isfinite(v)) throw DataError("filter parameters must be finite");
  }
  if (q < 0.0) throw DataError("system noise q must be >= 0");
  if (r < 0.0) throw DataError("measurement noise r must be >= 0");
  if (p0 < 0.0) throw DataError("initial covariance p0 must be >= 0");
  if (q + r <= 0.0) throw NumericalError("degenerate model: q + r must be > 0");
}

FilterParams FilterParams::random_walk(double q, double r, double x0, double p0) {
  return FilterParams{.f = 1.0, .h = 1.0, .gu = 0.0, .q = q, .r = r, .x0 = x0, .p0 = p0};
}

void RoiSpec::validate(std::size_t nt) const {
  if (t_lo >= t_hi || t_hi > nt) {
    throw DataError("invalid ROI " + std::to_string(t_lo) + ":" + std::to_string(t_hi) +
                    " for trace length " + std::to_string(nt));
  }
}

bool RoiSpec::avoids_edges(std::size_t nt) const noexcept {
  const double lo = 0.1 * static_cast<double>(nt);
  const double hi = 0.9 * static_cast<double>(nt);
  return static_cast<double>(t_lo) >= lo && static_cast<double>(t_hi) <= hi;
}

EnvelopeImage::EnvelopeImage(std::size_t nx, std::size_t ny, std::vector<double> pixels)
    : nx_(nx), ny_(ny), pixels_(std::move(pixels)) {
  if (nx_ == 0 || ny_ == 0) throw DataError("image dimensions must be positive");
  if (pixels_.size() != nx_ * ny_) throw DataError("image pixel count mismatch");
  for (double p : pixels_) {
    if (!std::isfinite(p) || p < 0.0) throw DataError("image pixels must be finite and >= 0");
  }
}

}  // namespace pakf
