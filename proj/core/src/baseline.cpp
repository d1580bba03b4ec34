#include "pakf/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "pakf/adapt.hpp"
#include "pakf/error.hpp"
#include "pakf/parallel.hpp"
#include "pakf/rts.hpp"

namespace pakf {

namespace {

// Sample i of `x` extended by odd reflection about both end points. Indices
// further out than one reflection are clamped, which keeps constants constant.
double odd_extension(std::span<const double> x, std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (i < 0) return 2.0 * x[0] - x[static_cast<std::size_t>(std::min(-i, n - 1))];
  if (i >= n) {
    return 2.0 * x[static_cast<std::size_t>(n - 1)] -
           x[static_cast<std::size_t>(std::max<std::ptrdiff_t>(2 * (n - 1) - i, 0))];
  }
  return x[static_cast<std::size_t>(i)];
}

void causal_fir(std::span<const double> taps, std::vector<double>& signal) {
  std::vector<double> out(signal.size(), 0.0);
  for (std::size_t k = 0; k < signal.size(); ++k) {
    const std::size_t m = std::min(taps.size(), k + 1);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += taps[j] * signal[k - j];
    out[k] = acc;
  }
  signal.swap(out);
}

void check_same_shape(const Volume& volume, const Volume& background) {
  if (!(volume.shape() == background.shape()) || volume.dt() != background.dt()) {
    throw DataError("background volume dimensions differ from signal volume");
  }
}

using TraceTransform = std::function<Trace(const Trace&)>;

Volume map_traces(const Volume& volume, const Volume* background, const TraceTransform& fn) {
  if (background != nullptr) check_same_shape(volume, *background);
  std::vector<double> data(volume.shape().samples());
  const std::size_t nt = volume.nt();
  parallel_for(volume.shape().traces(), [&](std::size_t i) {
    const GridIndex at = volume.grid_index(i);
    try {
      Trace out = fn(volume.trace(at));
      if (background != nullptr) out = differential_subtract(out, fn(background->trace(at)));
      std::copy(out.samples().begin(), out.samples().end(),
                data.begin() + static_cast<std::ptrdiff_t>(i * nt));
    } catch (const Error& e) {
      rethrow_with_context(e, "trace (" + std::to_string(at.x) + "," + std::to_string(at.y) + ")");
    }
  });
  return validate_volume(volume.shape(), volume.dt(), std::move(data));
}

}  // namespace

Trace differential_subtract(const Trace& signal, const Trace& background) {
  if (signal.size() != background.size()) {
    throw DataError("differential filter needs equal lengths (" + std::to_string(signal.size()) +
                    " vs " + std::to_string(background.size()) + ")");
  }
  if (signal.dt() != background.dt()) throw DataError("differential filter needs equal dt");
  std::vector<double> out(signal.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = signal[k] - background[k];
  return Trace(std::move(out), signal.dt());
}

std::vector<double> design_lowpass(double cutoff_hz, double dt, std::size_t taps) {
  if (taps == 0 || taps % 2 == 0) throw UsageError("FIR tap count must be odd");
  const double nyquist = 0.5 / dt;
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < nyquist)) {
    throw DataError("low-pass cutoff " + std::to_string(cutoff_hz) +
                    " Hz must lie in (0, Nyquist=" + std::to_string(nyquist) + " Hz)");
  }
  const double fc = cutoff_hz * dt;  // cycles per sample
  const std::size_t mid = (taps - 1) / 2;
  std::vector<double> h(taps);
  // Evaluate the left half and mirror it so the taps are exactly symmetric.
  for (std::size_t i = 0; i <= mid; ++i) {
    const double m = static_cast<double>(mid - i);
    const double sinc = (i == mid) ? 2.0 * fc
                                   : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
    const double window =
        taps == 1 ? 1.0
                  : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                           static_cast<double>(taps - 1));
    h[i] = sinc * window;
    h[taps - 1 - i] = h[i];
  }
  double sum = 0.0;
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

Trace lowpass(const Trace& trace, double cutoff_hz) {
  const auto taps = design_lowpass(cutoff_hz, trace.dt());
  const std::size_t n = trace.size();
  const std::size_t pad = 3 * (taps.size() - 1);

  std::vector<double> work(n + 2 * pad);
  for (std::size_t i = 0; i < work.size(); ++i) {
    work[i] = odd_extension(trace.samples(),
                            static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(pad));
  }
  causal_fir(taps, work);
  std::reverse(work.begin(), work.end());
  causal_fir(taps, work);
  std::reverse(work.begin(), work.end());

  return Trace(std::vector<double>(work.begin() + static_cast<std::ptrdiff_t>(pad),
                                   work.begin() + static_cast<std::ptrdiff_t>(pad + n)),
               trace.dt());
}

Volume pipeline_denoise(const Volume& volume, const Volume* background, double q,
                        std::size_t noise_window) {
  return map_traces(volume, background, [&](const Trace& t) {
    return denoise_trace(t, q, estimate_r(t, noise_window));
  });
}

Volume baseline_denoise(const Volume& volume, const Volume* background, double cutoff_hz) {
  return map_traces(volume, background, [&](const Trace& t) { return lowpass(t, cutoff_hz); });
}

Volume forward_only_denoise(const Volume& volume, const Volume* background, double q,
                            std::size_t noise_window) {
  return map_traces(volume, background, [&](const Trace& t) {
    return forward_filter_trace(t, q, estimate_r(t, noise_window));
  });
}

}  // namespace pakf
