#pragma once

#include <vector>

#include "pakf/types.hpp"

namespace pakf {

struct SmoothedTrajectory {
  std::vector<double> x;
  std::vector<double> p;
};

/// Fixed-interval Rauch-Tung-Striebel backward pass over a forward trajectory.
///
/// Anchored at the final forward posterior, then for k = N-2 .. 0:
///   C_k   = P+_k f / P-_{k+1}
///   xs_k  = x+_k + C_k (xs_{k+1} - x-_{k+1})
///   Ps_k  = P+_k + C_k^2 (Ps_{k+1} - P-_{k+1})
///
/// Throws NumericalError naming k when P-_{k+1} is zero, and DataError when the
/// trajectory is empty or its sequences differ in length.
SmoothedTrajectory rts_smooth(const FilterTrajectory& traj, const FilterParams& params);

/// Forward filter plus backward smoother under the random-walk pipeline model.
/// Requires q > 0 and r > 0. Length and dt are preserved.
Trace denoise_trace(const Trace& trace, double q, double r);

/// The forward filter alone (posterior means), same model as denoise_trace.
Trace forward_filter_trace(const Trace& trace, double q, double r);

}  // namespace pakf
