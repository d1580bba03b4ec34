#include "pakf/recon.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "pakf/error.hpp"
#include "pakf/parallel.hpp"

namespace pakf {

namespace {

// FFTW planning is not thread-safe, executing a finished plan is. Plans are
// created once per length with FFTW_ESTIMATE so the chosen algorithm (and the
// bits it produces) never depends on timing.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    PlanPair p{fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, FFTW_ESTIMATE),
               fftw_plan_dft_1d(len, b, a, FFTW_BACKWARD, FFTW_ESTIMATE)};
    fftw_free(a);
    fftw_free(b);
    if (p.forward == nullptr || p.inverse == nullptr) {
      throw NumericalError("FFT planning failed for length " + std::to_string(n));
    }
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

}  // namespace

std::vector<double> envelope_of(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw DataError("envelope needs at least 2 samples (got " + std::to_string(n) + ")");

  const PlanPair plans = plan_cache().get(n);
  ComplexBuffer time(fftw_alloc_complex(n));
  ComplexBuffer freq(fftw_alloc_complex(n));
  for (std::size_t k = 0; k < n; ++k) {
    time[k][0] = samples[k];
    time[k][1] = 0.0;
  }
  fftw_execute_dft(plans.forward, time.get(), freq.get());

  // Analytic-signal weights: 1 at DC (and Nyquist for even n), 2 for positive
  // frequencies, 0 for negative ones.
  const std::size_t half = n / 2;
  const std::size_t last_positive = (n % 2 == 0) ? half - 1 : half;
  for (std::size_t k = 1; k <= last_positive; ++k) {
    freq[k][0] *= 2.0;
    freq[k][1] *= 2.0;
  }
  for (std::size_t k = last_positive + 1 + (n % 2 == 0 ? 1 : 0); k < n; ++k) {
    freq[k][0] = 0.0;
    freq[k][1] = 0.0;
  }
  fftw_execute_dft(plans.inverse, freq.get(), time.get());

  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> env(n);
  for (std::size_t k = 0; k < n; ++k) {
    env[k] = std::hypot(time[k][0], time[k][1]) * scale;
  }
  return env;
}

Trace envelope(const Trace& trace) { return Trace(envelope_of(trace.samples()), trace.dt()); }

EnvelopeImage reconstruct(const Volume& volume) {
  std::vector<double> pixels(volume.shape().traces());
  parallel_for(pixels.size(), [&](std::size_t i) {
    const GridIndex at = volume.grid_index(i);
    try {
      const auto env = envelope_of(volume.trace_samples(at));
      pixels[i] = *std::max_element(env.begin(), env.end());
    } catch (const Error& e) {
      rethrow_with_context(e, "trace (" + std::to_string(at.x) + "," + std::to_string(at.y) + ")");
    }
  });
  return EnvelopeImage(volume.nx(), volume.ny(), std::move(pixels));
}

double psnr_from_envelope(std::span<const double> env, const RoiSpec& roi) {
  roi.validate(env.size());
  const std::size_t outside = env.size() - (roi.t_hi - roi.t_lo);
  if (outside == 0) throw DataError("ROI covers the whole trace; no noise region left");

  double peak = 0.0;
  for (std::size_t k = roi.t_lo; k < roi.t_hi; ++k) peak = std::max(peak, env[k]);
  double power = 0.0;
  for (std::size_t k = 0; k < roi.t_lo; ++k) power += env[k] * env[k];
  for (std::size_t k = roi.t_hi; k < env.size(); ++k) power += env[k] * env[k];
  power /= static_cast<double>(outside);

  if (power == 0.0) throw InfinitePsnr("zero noise power outside the ROI");
  return 10.0 * std::log10(peak * peak / power);
}

double psnr(const Trace& trace, const RoiSpec& roi) {
  roi.validate(trace.size());
  return psnr_from_envelope(envelope_of(trace.samples()), roi);
}

double psnr_gain(const Trace& before, const Trace& after, const RoiSpec& roi) {
  if (before.size() != after.size()) {
    throw DataError("psnr_gain needs equal trace lengths (" + std::to_string(before.size()) +
                    " vs " + std::to_string(after.size()) + ")");
  }
  return psnr(after, roi) - psnr(before, roi);
}

}  // namespace pakf
