#pragma once

#include "pakf/types.hpp"

namespace pakf {

/// Quantities produced by one predict/update cycle.
struct KalmanStep {
  double x_prior;
  double p_prior;
  double gain;
  double x_post;
  double p_post;
};

/// One scalar Kalman predict/update cycle:
///
///   P- = f P+ f + q          K  = P- h / (h P- h + r)
///   x- = f x+ + gu           x+ = x- + K (y - h x-)
///                            P+ = (1 - K h) P-
///
/// P+ is evaluated as P- r / (h P- h + r), which is equal and keeps full
/// precision when K h is close to 1. Throws NumericalError when h^2 P- + r == 0.
KalmanStep kf_step(double x_prev_post, double p_prev_post, double y, const FilterParams& params);

/// Runs kf_step over every sample of `trace`, starting from (params.x0, params.p0).
/// Errors carry the index of the failing sample.
FilterTrajectory kf_filter(const Trace& trace, const FilterParams& params);

/// The random-walk model used throughout the pipeline: f = h = 1, gu = 0,
/// seeded with the first sample and p0 = r.
FilterParams pipeline_params(const Trace& trace, double q, double r);

}  // namespace pakf
