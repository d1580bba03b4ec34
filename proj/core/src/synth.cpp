#include "pakf/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pakf/error.hpp"
#include "pakf/parallel.hpp"
#include "pakf/random.hpp"

namespace pakf {

namespace {

enum Stream : std::uint64_t {
  kNoiseStream = 1,
  kArtifactStream = 2,
  kBackgroundNoiseStream = 3,
};

// Envelope exponent a in exp(-a t^2) for a -6 dB fractional bandwidth.
double envelope_exponent(double center_hz) {
  const double bw = std::numbers::pi * center_hz * kPulseFractionalBandwidth;
  const double ref = std::log(std::pow(10.0, -6.0 / 20.0));
  return -(bw * bw) / (4.0 * ref);
}

struct Seeds {
  std::uint64_t noise;
  std::uint64_t artifacts;
};

// Components are rounded to multiples of a power-of-two quantum sized so that
// any sum or difference of them stays exactly representable. That keeps
// trace - clean - noise - artifacts == 0 exact in every evaluation order.
// The bound has ample headroom over anything the generator can produce
// (Box-Muller tops out near 8.6 sigma).
double component_quantum(const SynthSpec& spec) {
  double refl = 0.0;
  for (const Reflection& r : spec.reflections) refl += r.amp;
  const double impulses = spec.impulse_rate + 10.0 * std::sqrt(spec.impulse_rate) + 10.0;
  const double bound = spec.pulse_amp + refl + 10.0 * spec.noise_sigma + spec.impulse_amp * impulses;
  if (!(bound > 0.0)) return 0.0;
  return std::ldexp(1.0, std::ilogb(bound) + 1 - 50);
}

void quantize(std::vector<double>& v, double quantum) {
  if (quantum == 0.0) return;
  for (double& x : v) x = std::nearbyint(x / quantum) * quantum;
}

struct Components {
  std::vector<double> clean;
  std::vector<double> noise;
  std::vector<double> artifacts;
};

void add_pulse(std::vector<double>& out, double dt, double t0, double amp, double center_hz) {
  if (amp == 0.0) return;
  const double reach = 3.0 * pulse_half_width_s(center_hz);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = static_cast<double>(k) * dt - t0;
    if (std::abs(t) < reach) out[k] += amp * pulse_shape(t, center_hz);
  }
}

Components generate(const SynthSpec& spec, Seeds seeds, double quantum) {
  Components c{std::vector<double>(spec.nt, 0.0), std::vector<double>(spec.nt, 0.0),
               std::vector<double>(spec.nt, 0.0)};

  add_pulse(c.clean, spec.dt, spec.pulse_time_s, spec.pulse_amp, spec.pulse_center_hz);
  for (const Reflection& r : spec.reflections) {
    add_pulse(c.clean, spec.dt, r.time_s, r.amp, spec.pulse_center_hz);
  }

  if (spec.noise_sigma > 0.0) {
    Rng rng(seeds.noise);
    for (double& v : c.noise) v = spec.noise_sigma * rng.normal();
  }

  if (spec.impulse_rate > 0.0 && spec.impulse_amp > 0.0) {
    Rng rng(seeds.artifacts);
    const std::uint64_t count = rng.poisson(spec.impulse_rate);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto at = static_cast<std::size_t>(rng.below(spec.nt));
      const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
      c.artifacts[at] += sign * spec.impulse_amp;
    }
  }
  quantize(c.clean, quantum);
  quantize(c.noise, quantum);
  quantize(c.artifacts, quantum);
  return c;
}

std::vector<double> sum(const Components& c) {
  std::vector<double> out(c.clean.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = c.clean[k] + c.noise[k] + c.artifacts[k];
  return out;
}

}  // namespace

void SynthSpec::validate() const {
  const double span = static_cast<double>(nt) * dt;
  auto check = [](bool ok, const char* what) {
    if (!ok) throw DataError(std::string("invalid synth spec: ") + what);
  };
  check(nt > 0, "nt must be positive");
  check(std::isfinite(dt) && dt > 0.0, "dt must be finite and > 0");
  check(std::isfinite(pulse_center_hz) && pulse_center_hz > 0.0, "pulse_center_hz must be > 0");
  check(pulse_center_hz < 0.5 / dt, "pulse_center_hz must be below Nyquist");
  check(pulse_time_s >= 0.0 && pulse_time_s < span, "pulse_time_s must lie in [0, nt*dt)");
  check(pulse_amp >= 0.0 && std::isfinite(pulse_amp), "pulse_amp must be >= 0");
  check(noise_sigma >= 0.0 && std::isfinite(noise_sigma), "noise_sigma must be >= 0");
  check(impulse_rate >= 0.0 && std::isfinite(impulse_rate), "impulse_rate must be >= 0");
  check(impulse_amp >= 0.0 && std::isfinite(impulse_amp), "impulse_amp must be >= 0");
  for (const Reflection& r : reflections) {
    check(r.time_s >= 0.0 && r.time_s < span, "reflection time must lie in [0, nt*dt)");
    check(r.amp >= 0.0 && std::isfinite(r.amp), "reflection amplitude must be >= 0");
  }
}

double pulse_half_width_s(double center_hz) { return 1.0 / std::sqrt(envelope_exponent(center_hz)); }

double pulse_shape(double t, double center_hz) {
  const double a = envelope_exponent(center_hz);
  return std::exp(-a * t * t) * std::cos(2.0 * std::numbers::pi * center_hz * t);
}

SynthTrace synth_trace(const SynthSpec& spec) {
  spec.validate();
  const Components c = generate(spec, {derive_seed(spec.seed, kNoiseStream),
                                       derive_seed(spec.seed, kArtifactStream)},
                                component_quantum(spec));
  return {Trace(sum(c), spec.dt), Trace(c.clean, spec.dt), Trace(c.noise, spec.dt),
          Trace(c.artifacts, spec.dt)};
}

SynthVolume synth_volume(const SynthSpec& base, std::size_t nx, std::size_t ny,
                         const GridMask& mask) {
  base.validate();
  if (nx == 0 || ny == 0) throw DataError("synthetic volume needs nx, ny > 0");
  for (const GridIndex& g : mask) {
    if (g.x >= nx || g.y >= ny) {
      throw DataError("mask coordinate (" + std::to_string(g.x) + "," + std::to_string(g.y) +
                      ") outside " + std::to_string(nx) + "x" + std::to_string(ny) + " grid");
    }
  }

  const VolumeShape shape{nx, ny, base.nt};
  const double quantum = component_quantum(base);
  std::vector<double> signal(shape.samples());
  std::vector<double> background(shape.samples());
  std::vector<double> clean(shape.samples());

  parallel_for(shape.traces(), [&](std::size_t i) {
    const GridIndex at{i / ny, i % ny};
    const std::uint64_t artifact_seed = derive_seed(base.seed, kArtifactStream, at.x, at.y);

    SynthSpec spec = base;
    if (!mask.contains(at)) {
      spec.pulse_amp = 0.0;
      spec.reflections.clear();
    }
    const Components sig = generate(spec, {derive_seed(base.seed, kNoiseStream, at.x, at.y),
                                           artifact_seed},
                                        quantum);

    SynthSpec bg_spec = base;
    bg_spec.pulse_amp = 0.0;
    bg_spec.reflections.clear();
    const Components bg = generate(
        bg_spec, {derive_seed(base.seed, kBackgroundNoiseStream, at.x, at.y), artifact_seed},
        quantum);

    const auto s = sum(sig);
    const auto b = sum(bg);
    const std::size_t off = i * base.nt;
    std::copy(s.begin(), s.end(), signal.begin() + static_cast<std::ptrdiff_t>(off));
    std::copy(b.begin(), b.end(), background.begin() + static_cast<std::ptrdiff_t>(off));
    std::copy(sig.clean.begin(), sig.clean.end(), clean.begin() + static_cast<std::ptrdiff_t>(off));
  });

  return {validate_volume(shape, base.dt, std::move(signal)),
          validate_volume(shape, base.dt, std::move(background)),
          validate_volume(shape, base.dt, std::move(clean)), mask};
}

}  // namespace pakf
