#pragma once

#include <span>
#include <vector>

#include "pakf/types.hpp"

namespace pakf {

/// Magnitude of the discrete analytic signal. The spectrum is doubled at
/// positive frequencies and zeroed at negative ones; DC and (for even length)
/// Nyquist bins are kept. Requires at least two samples.
Trace envelope(const Trace& trace);

/// Same as envelope() on a raw sample span.
std::vector<double> envelope_of(std::span<const double> samples);

/// Pixel (x, y) is the largest envelope value of the trace at (x, y).
EnvelopeImage reconstruct(const Volume& volume);

/// 10 log10(max_roi(env)^2 / mean_{outside roi}(env^2)) in dB, where env is
/// the Hilbert envelope of `trace`.
///
/// Throws DataError for an invalid ROI or one that covers the whole trace,
/// and InfinitePsnr when the envelope outside the ROI is identically zero.
double psnr(const Trace& trace, const RoiSpec& roi);

/// psnr() evaluated on a precomputed envelope.
double psnr_from_envelope(std::span<const double> env, const RoiSpec& roi);

/// psnr(after, roi) - psnr(before, roi).
double psnr_gain(const Trace& before, const Trace& after, const RoiSpec& roi);

}  // namespace pakf
