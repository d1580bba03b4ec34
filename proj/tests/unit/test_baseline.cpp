#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "pakf/adapt.hpp"
#include "pakf/baseline.hpp"
#include "pakf/error.hpp"
#include "pakf/recon.hpp"
#include "pakf/rts.hpp"
#include "pakf/synth.hpp"

using namespace pakf;

namespace {

constexpr double kDt = 20e-6 / 2048.0;

std::vector<double> tone(std::size_t n, double freq_hz, double amp) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(k) * kDt);
  }
  return v;
}

// |H(f)| of an FIR evaluated directly from the taps.
double fir_magnitude(const std::vector<double>& taps, double freq_hz) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    acc += taps[k] * std::polar(1.0, -2.0 * std::numbers::pi * freq_hz * static_cast<double>(k) * kDt);
  }
  return std::abs(acc);
}

double rms(std::span<const double> v, std::size_t from, std::size_t to) {
  double acc = 0.0;
  for (std::size_t k = from; k < to; ++k) acc += v[k] * v[k];
  return std::sqrt(acc / static_cast<double>(to - from));
}

double peak_abs(std::span<const double> v, std::size_t from, std::size_t to) {
  double m = 0.0;
  for (std::size_t k = from; k < to; ++k) m = std::max(m, std::abs(v[k]));
  return m;
}

}  // namespace

TEST_CASE("differential subtraction") {
  const Trace s({1.0, 2.0, 3.0}, 1.0);
  const Trace b({0.5, 2.0, -1.0}, 1.0);
  const Trace d = differential_subtract(s, b);
  CHECK(d[0] == 0.5);
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 4.0);
  const Trace z = differential_subtract(s, s);
  for (double v : z.samples()) CHECK(v == 0.0);
  CHECK_THROWS_AS(differential_subtract(s, Trace({1.0, 2.0}, 1.0)), DataError);
  CHECK_THROWS_AS(differential_subtract(s, Trace({1.0, 2.0, 3.0}, 2.0)), DataError);
}

TEST_CASE("low-pass design") {
  const auto taps = design_lowpass(5e6, kDt);
  REQUIRE(taps.size() == kLowpassTaps);
  double sum = 0.0;
  for (double t : taps) sum += t;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 0; k < taps.size(); ++k) CHECK(taps[k] == taps[taps.size() - 1 - k]);
  CHECK(fir_magnitude(taps, 1e6) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fir_magnitude(taps, 20e6) < 1e-3);
  CHECK_THROWS_AS(design_lowpass(5e6, kDt, 100), UsageError);
  CHECK_THROWS_AS(design_lowpass(60e6, kDt), DataError);
  CHECK_THROWS_AS(design_lowpass(0.0, kDt), DataError);
}

TEST_CASE("zero-phase low-pass matches the squared FIR response") {
  const auto taps = design_lowpass(5e6, kDt);
  for (double f : {1e6, 2.5e6, 4e6, 7e6}) {
    const std::size_t n = 2048;
    const auto in = tone(n, f, 1.0);
    const Trace out = lowpass(Trace(in, kDt), 5e6);
    const double h = fir_magnitude(taps, f);
    const double got = peak_abs(out.samples(), 400, n - 400);
    CHECK(got == doctest::Approx(h * h).epsilon(2e-3).scale(1.0));
  }
}

TEST_CASE("zero-phase low-pass keeps DC and does not shift a pulse") {
  const Trace c(std::vector<double>(300, 2.5), kDt);
  const Trace lc = lowpass(c, 5e6);
  for (double v : lc.samples()) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

  SynthSpec spec;
  spec.noise_sigma = 0.0;
  const Trace clean = synth_trace(spec).clean;
  const Trace lp = lowpass(clean, 5e6);
  // The pulse is symmetric about its centre; a zero-phase filter keeps it so.
  const std::size_t centre = static_cast<std::size_t>(std::lround(spec.pulse_time_s / spec.dt));
  for (std::size_t d = 1; d < 60; ++d) {
    const double a = lp[centre - d] - lp[centre + d];
    CHECK(std::abs(a) < 5e-3);
  }
}

TEST_CASE("volume drivers apply the per-trace arms") {
  SynthSpec spec;
  spec.nt = 256;
  spec.pulse_time_s = 128 * spec.dt;
  spec.impulse_rate = 2.0;
  spec.impulse_amp = 0.5;
  spec.seed = 8;
  const auto sv = synth_volume(spec, 3, 2, {{1, 1}});
  const std::size_t w = default_noise_window(spec.nt);
  const double q = 1e-4;

  const Volume p = pipeline_denoise(sv.volume, &sv.background, q, w);
  const Volume f = forward_only_denoise(sv.volume, nullptr, q, w);
  const Volume b = baseline_denoise(sv.volume, &sv.background, 5e6);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      const GridIndex g{x, y};
      const Trace s = sv.volume.trace(g);
      const Trace bg = sv.background.trace(g);
      const Trace expect_p = differential_subtract(denoise_trace(s, q, estimate_r(s, w)),
                                                   denoise_trace(bg, q, estimate_r(bg, w)));
      CHECK(p.trace(g) == expect_p);
      CHECK(f.trace(g) == forward_filter_trace(s, q, estimate_r(s, w)));
      CHECK(b.trace(g) == differential_subtract(lowpass(s, 5e6), lowpass(bg, 5e6)));
    }
  }

  const Volume zero = pipeline_denoise(sv.volume, &sv.volume, q, w);
  for (double v : zero.data()) CHECK(v == 0.0);

  const auto other = synth_volume(spec, 2, 2, {});
  CHECK_THROWS_AS(pipeline_denoise(sv.volume, &other.volume, q, w), DataError);
}

TEST_CASE("errors in a trace name its position") {
  const Volume v = validate_volume({2, 1, 8}, 1.0, std::vector<double>(16, 0.0));
  try {
    pipeline_denoise(v, nullptr, 1e-3, 4);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("trace (0,0)") != std::string::npos);
  }
}

TEST_CASE("subtracting a zero background is the identity") {
  const Trace s({1.5, -2.0, 0.25}, 1.0);
  CHECK(differential_subtract(s, Trace({0.0, 0.0, 0.0}, 1.0)) == s);
}

TEST_CASE("differential filtering cancels a shared artifact") {
  SynthSpec spec;
  spec.nt = 1024;
  spec.pulse_time_s = 512 * spec.dt;
  spec.noise_sigma = 0.0;
  spec.impulse_rate = 8.0;
  spec.impulse_amp = 0.5;
  spec.seed = 11;
  const SynthTrace st = synth_trace(spec);
  const double q = 1e-3;
  const double r = 1e-2;

  const Trace smoothed = denoise_trace(st.trace, q, r);
  const Trace diff = differential_subtract(smoothed, denoise_trace(st.artifacts, q, r));
  const Trace clean = denoise_trace(st.clean, q, r);

  // Energy outside the pulse support, where the smoothed clean pulse has
  // decayed: the artifact left over after subtraction against the artifact
  // seen by the plain smoothed signal.
  const std::size_t half = static_cast<std::size_t>(std::ceil(6.0 * pulse_half_width_s(spec.pulse_center_hz) / spec.dt));
  double before = 0.0;
  double after = 0.0;
  for (std::size_t k = 0; k < spec.nt; ++k) {
    if (k + half >= 512 && k <= 512 + half) continue;
    before += std::pow(smoothed[k] - clean[k], 2);
    after += std::pow(diff[k] - clean[k], 2);
  }
  REQUIRE(before > 0.0);
  CHECK(10.0 * std::log10(before / std::max(after, 1e-300)) >= 20.0);
}

TEST_CASE("low-pass stop band and noise removal") {
  const std::size_t n = 4096;
  const double cutoff = 2e6;
  const auto in = tone(n, 4.0 * cutoff, 1.0);
  const Trace out = lowpass(Trace(in, kDt), cutoff);
  CHECK(rms(out.samples(), 200, n - 200) <= 0.01 * rms(in, 200, n - 200));

  std::mt19937_64 gen(21);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> w(n);
  for (double& x : w) x = dist(gen);
  const Trace lw = lowpass(Trace(w, kDt), kDefaultLowpassCutoffHz);
  CHECK(rms(lw.samples(), 0, n) < rms(w, 0, n));
}

TEST_CASE("low-passed pulse correlates with the original at lag zero") {
  SynthSpec spec;
  spec.noise_sigma = 0.0;
  spec.pulse_time_s = 700 * spec.dt;
  const Trace clean = synth_trace(spec).clean;
  for (double cutoff : {3e6, 5e6, 8e6}) {
    const Trace lp = lowpass(clean, cutoff);
    const long max_lag = 40;
    long best_lag = 0;
    double best = -INFINITY;
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
      double acc = 0.0;
      for (long k = max_lag; k < static_cast<long>(clean.size()) - max_lag; ++k) {
        acc += lp[static_cast<std::size_t>(k + lag)] * clean[static_cast<std::size_t>(k)];
      }
      if (acc > best) {
        best = acc;
        best_lag = lag;
      }
    }
    CHECK(best_lag == 0);
  }
}

TEST_CASE("pipeline raises PSNR on the pulse traces of a phantom") {
  SynthSpec spec;
  spec.nt = 512;
  spec.pulse_time_s = 3.0e-6;
  spec.noise_sigma = 0.05;
  spec.seed = 19;
  GridMask mask;
  for (std::size_t x = 3; x <= 12; ++x) mask.insert({x, 2});
  for (std::size_t y = 3; y <= 6; ++y) mask.insert({12, y});
  const auto sv = synth_volume(spec, 16, 8, mask);
  const RoiSpec roi{196, 420};
  const std::size_t w = default_noise_window(spec.nt);
  const auto rep = select_q_auto(sv.volume, 32, 1, w, roi);
  const Volume out = pipeline_denoise(sv.volume, &sv.background, rep.q_final, w);
  CHECK(out.shape() == sv.volume.shape());
  for (const GridIndex& g : mask) {
    CHECK(psnr(out.trace(g), roi) > psnr(sv.volume.trace(g), roi));
  }
}
