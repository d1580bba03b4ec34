#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pakf/types.hpp"

namespace pakf {

/// Measurement noise number: mean square of the first `noise_window` samples.
/// Throws DataError unless 1 <= noise_window <= trace length.
double estimate_r(const Trace& trace, std::size_t noise_window);

/// Default noise-window length: 5% of nt rounded up, at least 16, at most nt.
std::size_t default_noise_window(std::size_t nt) noexcept;

inline constexpr std::size_t kDefaultQGridPoints = 15;
inline constexpr std::size_t kDefaultSampleCount = 32;

/// `points` log-spaced values from 1e-6 * reference to 1e-1 * reference.
std::vector<double> log_q_grid(double reference, std::size_t points = kDefaultQGridPoints);

/// Trace positions drawn for Q selection: `n_sample` distinct traces, chosen
/// uniformly with Rng(seed), returned in draw order.
std::vector<GridIndex> sample_traces(const Volume& volume, std::size_t n_sample,
                                     std::uint64_t seed);

/// Parallel filter-bank Q selection. Every sampled trace is denoised with each
/// grid value (using its own estimate_r) and scored with envelope PSNR over
/// `roi`; the best grid value per trace is recorded (ties go to the smaller
/// grid index) and q_final is their arithmetic mean.
QSelectionReport select_q(const Volume& volume, std::span<const double> grid,
                          std::size_t n_sample, std::uint64_t seed, std::size_t noise_window,
                          const RoiSpec& roi);

/// select_q with the default grid, anchored at the median estimate_r of the
/// sampled traces.
QSelectionReport select_q_auto(const Volume& volume, std::size_t n_sample, std::uint64_t seed,
                               std::size_t noise_window, const RoiSpec& roi);

/// Envelope PSNR of denoise_trace(trace, q, r); +inf when the noise region is
/// exactly zero.
double denoised_psnr(const Trace& trace, double q, double r, const RoiSpec& roi);

}  // namespace pakf
