#pragma once

// Differential (background) filtering, the low-pass comparison baseline, and
// the volume-level drivers for both processing arms.

#include <cstddef>
#include <vector>

#include "pakf/types.hpp"

namespace pakf {

/// Pointwise signal - background. Lengths and dt must match exactly.
Trace differential_subtract(const Trace& signal, const Trace& background);

inline constexpr std::size_t kLowpassTaps = 101;

/// Hamming-windowed sinc low-pass taps, normalized to unit DC gain.
/// `taps` must be odd; the cutoff must lie strictly below Nyquist.
std::vector<double> design_lowpass(double cutoff_hz, double dt, std::size_t taps = kLowpassTaps);

/// Zero-phase low-pass: the FIR is applied forward, then backward over the
/// time-reversed output. Edges are extended by odd reflection.
Trace lowpass(const Trace& trace, double cutoff_hz);

/// Default baseline cutoff: twice the 2.5 MHz transducer centre frequency.
inline constexpr double kDefaultLowpassCutoffHz = 5.0e6;

/// Denoises every trace with denoise_trace(trace, q, estimate_r(trace, noise_window)).
/// When `background` is given, it is processed the same way and subtracted
/// trace by trace at matching (x, y).
Volume pipeline_denoise(const Volume& volume, const Volume* background, double q,
                        std::size_t noise_window);

/// The comparison arm: lowpass every trace, then subtract the low-passed
/// background when present.
Volume baseline_denoise(const Volume& volume, const Volume* background, double cutoff_hz);

/// Forward filter only (no smoother), with the same per-trace R and optional
/// background subtraction as pipeline_denoise.
Volume forward_only_denoise(const Volume& volume, const Volume* background, double q,
                            std::size_t noise_window);

}  // namespace pakf
