#include "pakf/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pakf/error.hpp"
#include "pakf/parallel.hpp"
#include "pakf/random.hpp"
#include "pakf/recon.hpp"
#include "pakf/rts.hpp"

namespace pakf {

double estimate_r(const Trace& trace, std::size_t noise_window) {
  if (noise_window == 0 || noise_window > trace.size()) {
    throw DataError("noise window " + std::to_string(noise_window) + " outside [1, " +
                    std::to_string(trace.size()) + "]");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < noise_window; ++i) acc += trace[i] * trace[i];
  return acc / static_cast<double>(noise_window);
}

std::size_t default_noise_window(std::size_t nt) noexcept {
  const std::size_t five_percent = (nt * 5 + 99) / 100;
  return std::min(nt, std::max<std::size_t>(16, five_percent));
}

std::vector<double> log_q_grid(double reference, std::size_t points) {
  if (!(reference > 0.0) || !std::isfinite(reference)) {
    throw NumericalError("Q grid reference must be finite and > 0 (got " +
                         std::to_string(reference) + ")");
  }
  if (points == 0) throw UsageError("Q grid needs at least one point");
  if (points == 1) return {1e-6 * reference};
  std::vector<double> grid(points);
  const double lo = std::log10(1e-6);
  const double hi = std::log10(1e-1);
  for (std::size_t i = 0; i < points; ++i) {
    const double e = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = std::pow(10.0, e) * reference;
  }
  return grid;
}

std::vector<GridIndex> sample_traces(const Volume& volume, std::size_t n_sample,
                                     std::uint64_t seed) {
  const std::size_t total = volume.shape().traces();
  if (n_sample == 0) throw UsageError("n_sample must be positive");
  if (n_sample > total) {
    throw UsageError("n_sample " + std::to_string(n_sample) + " exceeds trace count " +
                     std::to_string(total));
  }
  Rng rng(derive_seed(seed, 0x51u));
  std::vector<GridIndex> out;
  out.reserve(n_sample);
  for (std::size_t i : sample_without_replacement(total, n_sample, rng)) {
    out.push_back(volume.grid_index(i));
  }
  return out;
}

double denoised_psnr(const Trace& trace, double q, double r, const RoiSpec& roi) {
  try {
    return psnr(denoise_trace(trace, q, r), roi);
  } catch (const InfinitePsnr&) {
    return std::numeric_limits<double>::infinity();
  }
}

QSelectionReport select_q(const Volume& volume, std::span<const double> grid,
                          std::size_t n_sample, std::uint64_t seed, std::size_t noise_window,
                          const RoiSpec& roi) {
  if (grid.empty()) throw UsageError("Q grid is empty");
  for (double q : grid) {
    if (!(q > 0.0) || !std::isfinite(q)) throw UsageError("Q grid values must be finite and > 0");
  }
  roi.validate(volume.nt());

  QSelectionReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.sampled_trace_ids = sample_traces(volume, n_sample, seed);

  const std::size_t n_traces = report.sampled_trace_ids.size();
  const std::size_t n_grid = grid.size();
  std::vector<double> r_values(n_traces);
  for (std::size_t i = 0; i < n_traces; ++i) {
    r_values[i] = estimate_r(volume.trace(report.sampled_trace_ids[i]), noise_window);
  }

  std::vector<double> scores(n_traces * n_grid);
  parallel_for(scores.size(), [&](std::size_t job) {
    const std::size_t i = job / n_grid;
    const std::size_t j = job % n_grid;
    const GridIndex at = report.sampled_trace_ids[i];
    try {
      scores[job] = denoised_psnr(volume.trace(at), grid[j], r_values[i], roi);
    } catch (const Error& e) {
      rethrow_with_context(e, "trace (" + std::to_string(at.x) + "," + std::to_string(at.y) +
                                  "), q=" + std::to_string(grid[j]));
    }
  });

  report.best_q_per_trace.resize(n_traces);
  report.best_psnr_per_trace.resize(n_traces);
  for (std::size_t i = 0; i < n_traces; ++i) {
    const auto row = std::span<const double>(scores).subspan(i * n_grid, n_grid);
    const std::size_t best = static_cast<std::size_t>(
        std::distance(row.begin(), std::max_element(row.begin(), row.end())));
    report.best_q_per_trace[i] = grid[best];
    report.best_psnr_per_trace[i] = row[best];
  }
  report.q_final = std::accumulate(report.best_q_per_trace.begin(),
                                   report.best_q_per_trace.end(), 0.0) /
                   static_cast<double>(n_traces);
  return report;
}

QSelectionReport select_q_auto(const Volume& volume, std::size_t n_sample, std::uint64_t seed,
                               std::size_t noise_window, const RoiSpec& roi) {
  const auto ids = sample_traces(volume, n_sample, seed);
  std::vector<double> r_values;
  r_values.reserve(ids.size());
  for (const GridIndex& at : ids) r_values.push_back(estimate_r(volume.trace(at), noise_window));
  std::sort(r_values.begin(), r_values.end());
  const std::size_t m = r_values.size();
  const double median =
      (m % 2 == 1) ? r_values[m / 2] : 0.5 * (r_values[m / 2 - 1] + r_values[m / 2]);
  const auto grid = log_q_grid(median);
  return select_q(volume, grid, n_sample, seed, noise_window, roi);
}

}  // namespace pakf
