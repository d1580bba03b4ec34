#include "pakf/kalman.hpp"

#include <string>

#include "pakf/error.hpp"

namespace pakf {

KalmanStep kf_step(double x_prev_post, double p_prev_post, double y, const FilterParams& params) {
  const double p_prior = params.f * p_prev_post * params.f + params.q;
  const double denom = params.h * p_prior * params.h + params.r;
  if (denom == 0.0) {
    throw NumericalError("degenerate model: gain denominator h^2 P- + r is zero");
  }
  const double gain = p_prior * params.h / denom;
  const double x_prior = params.f * x_prev_post + params.gu;
  const double x_post = x_prior + gain * (y - params.h * x_prior);
  // (1 - K h) P- rewritten as P- r / (h^2 P- + r): same value, no cancellation
  // when K h is close to 1, and never larger than P-.
  const double p_post = p_prior * (params.r / denom);
  return {x_prior, p_prior, gain, x_post, p_post};
}

FilterTrajectory kf_filter(const Trace& trace, const FilterParams& params) {
  params.validate();
  const std::size_t n = trace.size();
  FilterTrajectory out;
  out.x_prior.resize(n);
  out.p_prior.resize(n);
  out.x_post.resize(n);
  out.p_post.resize(n);
  out.gain.resize(n);

  double x = params.x0;
  double p = params.p0;
  for (std::size_t k = 0; k < n; ++k) {
    KalmanStep s{};
    try {
      s = kf_step(x, p, trace[k], params);
    } catch (const Error& e) {
      rethrow_with_context(e, "sample " + std::to_string(k));
    }
    out.x_prior[k] = s.x_prior;
    out.p_prior[k] = s.p_prior;
    out.gain[k] = s.gain;
    out.x_post[k] = s.x_post;
    out.p_post[k] = s.p_post;
    x = s.x_post;
    p = s.p_post;
  }
  return out;
}

FilterParams pipeline_params(const Trace& trace, double q, double r) {
  return FilterParams::random_walk(q, r, trace[0], r);
}

}  // namespace pakf
