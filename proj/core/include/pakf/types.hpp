#pragma once

// Shared value types for A-scan processing. Every type validates its
// invariants on construction and is immutable afterwards.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pakf {

/// One A-scan: finite samples on a uniform time axis.
class Trace {
 public:
  /// Throws DataError if `samples` is empty, holds a non-finite value, or
  /// `dt` is not finite and strictly positive.
  Trace(std::vector<double> samples, double dt);

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t k) const noexcept { return samples_[k]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double dt() const noexcept { return dt_; }

  /// Moves the sample storage out, leaving the trace unusable.
  std::vector<double> release() && { return std::move(samples_); }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<double> samples_;
  double dt_;
};

/// Position of one trace on the scan grid.
struct GridIndex {
  std::size_t x = 0;
  std::size_t y = 0;

  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

struct VolumeShape {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nt = 0;

  std::size_t traces() const noexcept { return nx * ny; }
  std::size_t samples() const noexcept { return nx * ny * nt; }

  friend bool operator==(const VolumeShape&, const VolumeShape&) = default;
};

class Volume;

/// Builds a Volume, checking dimensions, data length, finiteness and dt.
/// Errors name the violated invariant and, for samples, the (x, y, t) index.
Volume validate_volume(VolumeShape shape, double dt, std::vector<double> data);

/// A 3-D block of traces. Storage is x-major, then y, with t fastest, so each
/// trace is a contiguous slice.
class Volume {
 public:
  const VolumeShape& shape() const noexcept { return shape_; }
  std::size_t nx() const noexcept { return shape_.nx; }
  std::size_t ny() const noexcept { return shape_.ny; }
  std::size_t nt() const noexcept { return shape_.nt; }
  double dt() const noexcept { return dt_; }
  std::span<const double> data() const noexcept { return data_; }

  std::size_t offset(GridIndex at) const noexcept { return (at.x * shape_.ny + at.y) * shape_.nt; }
  std::span<const double> trace_samples(GridIndex at) const;
  Trace trace(GridIndex at) const;

  /// Grid position of flat trace number `i` (x-major).
  GridIndex grid_index(std::size_t i) const noexcept { return {i / shape_.ny, i % shape_.ny}; }

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  friend Volume validate_volume(VolumeShape, double, std::vector<double>);
  Volume(VolumeShape shape, double dt, std::vector<double> data)
      : shape_(shape), dt_(dt), data_(std::move(data)) {}

  VolumeShape shape_;
  double dt_;
  std::vector<double> data_;
};

/// Re-validates an existing volume; returns it unchanged when all invariants hold.
Volume validate_volume(const Volume& v);

/// Scalar state-space model: x_k = f x_{k-1} + gu + w, y_k = h x_k + v,
/// with Var(w) = q and Var(v) = r.
struct FilterParams {
  double f = 1.0;
  double h = 1.0;
  double gu = 0.0;
  double q = 0.0;
  double r = 0.0;
  double x0 = 0.0;
  double p0 = 0.0;

  /// Throws DataError on non-finite fields or negative q, r, p0; throws
  /// NumericalError when q + r == 0.
  void validate() const;

  /// Random walk (f = h = 1, gu = 0) with the given noise numbers and start state.
  static FilterParams random_walk(double q, double r, double x0, double p0);
};

/// Per-sample output of the forward filter. All sequences share one length.
struct FilterTrajectory {
  std::vector<double> x_prior;
  std::vector<double> p_prior;
  std::vector<double> x_post;
  std::vector<double> p_post;
  std::vector<double> gain;

  std::size_t size() const noexcept { return x_post.size(); }
};

struct QSelectionReport {
  std::vector<double> grid;
  std::vector<GridIndex> sampled_trace_ids;
  std::vector<double> best_q_per_trace;
  /// PSNR (dB) reached at the best Q; +inf when the noise region vanished.
  std::vector<double> best_psnr_per_trace;
  double q_final = 0.0;

  friend bool operator==(const QSelectionReport&, const QSelectionReport&) = default;
};

/// Half-open sample range [t_lo, t_hi) along the time axis.
struct RoiSpec {
  std::size_t t_lo = 0;
  std::size_t t_hi = 0;

  /// Throws DataError unless t_lo < t_hi <= nt.
  void validate(std::size_t nt) const;
  /// True when the ROI stays inside the central 80% of the time axis.
  bool avoids_edges(std::size_t nt) const noexcept;

  friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

/// Maximum envelope amplitude per trace, stored x-major like Volume.
class EnvelopeImage {
 public:
  EnvelopeImage(std::size_t nx, std::size_t ny, std::vector<double> pixels);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::span<const double> pixels() const noexcept { return pixels_; }
  double at(GridIndex g) const noexcept { return pixels_[g.x * ny_ + g.y]; }

  friend bool operator==(const EnvelopeImage&, const EnvelopeImage&) = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> pixels_;
};

}  // namespace pakf
