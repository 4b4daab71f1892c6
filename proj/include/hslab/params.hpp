#pragma once

#include "hslab/errors.hpp"

namespace hslab {

/// Parameter bundle (N, s, p, alpha) for the weighted critical embedding,
/// with the critical exponent r derived from the scale-invariance relation
/// (N - alpha)/r = (N - p s)/p.  r is stored once at construction and never
/// re-derived at call sites.
struct FractionalParams {
  int dim = 1;         // spatial dimension N
  double s = 0.5;      // differentiability order, in (0,1) (1 for the local family)
  double p = 2.0;      // summability exponent, > 1
  double alpha = 0.0;  // weight exponent, in [0, p*s)
  double r = 0.0;      // critical exponent, derived

  // Summability below which the optimizer's energy seminorm is infinite.
  double threshold() const { return dim * (p - 1.0) / (dim - s); }

  // Decay rate beta of the optimizer tail: u(rho) ~ rho^{-beta}.
  double tail_decay_rate() const { return (dim - p * s) / (p - 1.0); }

  // Amplitude exponent of the concentrating rescaling u_eps.
  double rescale_power() const { return (p * s - dim) / p; }

  bool operator==(const FractionalParams&) const = default;
};

// Validates 0 <= alpha < p*s < N, p > 1, 0 < s < 1 and computes r.
// Throws ConstraintViolation naming the violated constraint.
FractionalParams make_params(int N, double s, double p, double alpha);

// The s = 1 comparison family for gradient-norm experiments.  Requires
// 0 <= alpha < p < N; r is derived from the same scaling relation.
FractionalParams make_local_params(int N, double p, double alpha);

}  // namespace hslab
