#pragma once

// Synthetic A-scans and scan volumes with stored ground truth.

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "pakf/types.hpp"

namespace pakf {

struct Reflection {
  double time_s = 0.0;
  double amp = 0.0;

  friend bool operator==(const Reflection&, const Reflection&) = default;
};

/// Fractional -6 dB bandwidth of the Gaussian-modulated pulse.
inline constexpr double kPulseFractionalBandwidth = 0.6;

struct SynthSpec {
  std::size_t nt = 2048;
  double dt = 20e-6 / 2048.0;  // 2048 samples span 20 us
  double pulse_center_hz = 2.5e6;
  double pulse_time_s = 1.5e-5;
  double pulse_amp = 1.0;
  double noise_sigma = 0.05;
  /// Expected number of single-sample interferences per trace (Poisson).
  double impulse_rate = 0.0;
  double impulse_amp = 0.0;
  std::vector<Reflection> reflections;
  std::uint64_t seed = 0;

  /// Throws DataError when a field is out of range.
  void validate() const;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

/// 1/e half-width of the pulse envelope, in seconds. The pulse is truncated to
/// three half-widths on either side of its centre.
double pulse_half_width_s(double center_hz);

/// Value at time offset `t` (seconds from the pulse centre) of a unit
/// Gaussian-modulated cosine.
double pulse_shape(double t, double center_hz);

struct SynthTrace {
  Trace trace;
  Trace clean;
  Trace noise;
  Trace artifacts;
};

/// trace = clean + noise + artifacts, sample by sample. The components are
/// rounded to a power-of-two grid (about 2^-49 of their combined amplitude
/// bound) so that the identity holds exactly in floating point. Identical
/// specs give identical bits.
SynthTrace synth_trace(const SynthSpec& spec);

using GridMask = std::set<GridIndex>;

struct SynthVolume {
  Volume volume;
  /// Same scan without the absorber: pulse-free, identical interference
  /// realisation per (x, y), independent noise.
  Volume background;
  /// Clean component of `volume`.
  Volume clean;
  GridMask truth_mask;
};

/// Traces at masked positions carry the pulse (and reflections); the rest hold
/// noise and interference only. Per-trace randomness is derived from
/// (seed, x, y), so generation order does not matter.
SynthVolume synth_volume(const SynthSpec& base, std::size_t nx, std::size_t ny,
                         const GridMask& mask);

}  // namespace pakf
