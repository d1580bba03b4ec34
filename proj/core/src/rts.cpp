#include "pakf/rts.hpp"

#include <cmath>
#include <string>

#include "pakf/error.hpp"
#include "pakf/kalman.hpp"

namespace pakf {

namespace {

void check_noise_numbers(double q, double r) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw NumericalError("system noise q must be finite and > 0 (got " + std::to_string(q) + ")");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw NumericalError("measurement noise r must be finite and > 0 (got " + std::to_string(r) +
                         "); the noise window may be all zeros");
  }
}

}  // namespace

SmoothedTrajectory rts_smooth(const FilterTrajectory& traj, const FilterParams& params) {
  const std::size_t n = traj.x_post.size();
  if (n == 0) throw DataError("cannot smooth an empty trajectory");
  if (traj.x_prior.size() != n || traj.p_prior.size() != n || traj.p_post.size() != n ||
      traj.gain.size() != n) {
    throw DataError("filter trajectory sequences differ in length");
  }

  SmoothedTrajectory out{std::vector<double>(n), std::vector<double>(n)};
  out.x[n - 1] = traj.x_post[n - 1];
  out.p[n - 1] = traj.p_post[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) {
    const double p_next = traj.p_prior[k + 1];
    if (p_next == 0.0) {
      throw NumericalError("degenerate covariance: P-[" + std::to_string(k + 1) +
                           "] is zero at smoother step k=" + std::to_string(k));
    }
    const double c = traj.p_post[k] * params.f / p_next;
    out.x[k] = traj.x_post[k] + c * (out.x[k + 1] - traj.x_prior[k + 1]);
    out.p[k] = traj.p_post[k] + c * c * (out.p[k + 1] - p_next);
  }
  return out;
}

Trace denoise_trace(const Trace& trace, double q, double r) {
  check_noise_numbers(q, r);
  const FilterParams params = pipeline_params(trace, q, r);
  auto smoothed = rts_smooth(kf_filter(trace, params), params);
  return Trace(std::move(smoothed.x), trace.dt());
}

Trace forward_filter_trace(const Trace& trace, double q, double r) {
  check_noise_numbers(q, r);
  auto traj = kf_filter(trace, pipeline_params(trace, q, r));
  return Trace(std::move(traj.x_post), trace.dt());
}

}  // namespace pakf
