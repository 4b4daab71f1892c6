#pragma once

#include "hslab/profile.hpp"

namespace hslab {

/// Parameters of a truncation-by-composition step for a rescaled profile:
/// the two threshold levels come from evaluating the profile at delta and
/// theta_bar * delta, and m is the slope of the middle branch of G.
struct TruncationSpec {
  double eps = 0.0;        // concentration scale of the rescaled profile
  double delta = 0.0;      // truncation radius, eps <= delta
  double theta_bar = 0.0;  // dilation factor, > 1
  double t_low = 0.0;      // U_eps(theta_bar * delta)
  double t_high = 0.0;     // U_eps(delta)
  double m = 0.0;          // t_high / (t_high - t_low), in [1, 2] when delta >= eps
};

// Smallest dilation theta (on a bisection grid, tolerance 1e-3) such that
// sup_{rho >= 1} U(theta rho)/U(rho) <= 1/2.  The sup is evaluated on a log
// grid of rho in [1, 1e6] together with the analytic tail limit
// theta^{-beta}.  Throws NoDecay when no theta <= 1e6 works.
double find_theta_bar(const RadialProfile& profile);

// Builds and validates the spec from the rescaled profile.  Requires
// eps <= delta (rejects otherwise) and strictly ordered thresholds.
TruncationSpec make_truncation_spec(const RadialProfile& u_eps, double eps, double delta,
                                    double theta_bar);

// The scalar map G: 0 below t_low, linear with slope m in the middle,
// identity above t_high; continuous at both knots.
CompositionMap build_g(const TruncationSpec& spec);

// U_{eps,delta}(rho) = G(U_eps(rho)): untouched on [0, delta], zero beyond
// theta_bar * delta, radially non-increasing.  Throws SpecMismatch when the
// spec thresholds do not match u_eps at delta and theta_bar*delta to 1e-10.
RadialProfile truncate_by_composition(const RadialProfile& u_eps, const TruncationSpec& spec);

// phi(rho/delta) * U_eps(rho) with phi the cubic smoothstep cutoff:
// unchanged on [0, delta], supported in [0, 2 delta].
RadialProfile truncate_by_multiplication(const RadialProfile& u_eps, double delta);

// True iff `truncated` vanishes for rho >= outer and agrees with `original`
// to 1e-12 (relative) for rho <= inner, on a 1024-point audit grid.
bool support_check(const RadialProfile& truncated, const RadialProfile& original, double inner,
                   double outer);

}  // namespace hslab
