#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hslab/params.hpp"

namespace hslab {

class RadialProfile;

/// Closed-form optimizer shape  amplitude * (1 + (rho/scale)^a)^b  with
/// a = (p - alpha/s)/(p - 1) and b = (p s - N)/(p - alpha/s).
struct ClosedFormAT {
  double scale = 1.0;      // concentration scale eps
  double amplitude = 1.0;  // multiplicative factor in front
};

/// Log-spaced radius grid with non-negative non-increasing values.
/// Interpolation is piecewise-linear in (log rho, log u); a segment with a
/// zero endpoint (or touching rho = 0) falls back to linear in rho.  Below
/// the first node the profile is constant; beyond the last node it follows
/// the stored tail decay rate, or vanishes if the last value is zero.
struct SampledGrid {
  std::vector<double> rho;  // strictly increasing, rho[0] >= 0
  std::vector<double> val;  // non-negative, non-increasing
};

/// Non-decreasing piecewise-linear value map used by truncation:
/// 0 on [0, t_low], slope*(t - t_low) on [t_low, t_high], identity above.
struct CompositionMap {
  double t_low = 0.0;
  double t_high = 0.0;
  double slope = 1.0;

  double operator()(double t) const;
  double derivative(double t) const;  // a.e.
};

/// Radial cubic-smoothstep cutoff: 1 on [0, delta], 0 on [2 delta, inf).
struct SmoothstepCutoff {
  double delta = 1.0;

  double operator()(double rho) const;
  double derivative(double rho) const;
};

/// A profile post-composed with a value map (g), or multiplied by a radial
/// cutoff.  Exactly one of (g, cutoff) is engaged.  Evaluation stays exact:
/// no resampling of the base is involved.
struct ComposedForm {
  std::shared_ptr<const RadialProfile> base;
  std::optional<CompositionMap> g;
  std::optional<SmoothstepCutoff> cutoff;
  double amplitude = 1.0;             // outer multiplicative factor
  std::vector<double> kinks;          // radii where the map switches branch
  double support_radius = 0.0;        // profile vanishes beyond this radius
};

/// Result of a power-law tail fit of a profile over [rho_min, rho_max].
struct DecayFit {
  double c1 = 0.0;                 // min of u(rho) * rho^beta over the range
  double c2 = 0.0;                 // max of the same compensated product
  double fit_min = 0.0;            // window used
  double fit_max = 0.0;
  double measured_exponent = 0.0;  // log-log slope (negative for decay)
  double stderr_exponent = 0.0;
};

/// Radial function on R^N: non-negative, non-increasing in rho, with
/// power-law tail metadata.  Immutable after construction; all operations
/// return new profiles.
class RadialProfile {
public:
  using Representation = std::variant<ClosedFormAT, SampledGrid, ComposedForm>;

  RadialProfile(FractionalParams params, Representation rep, double tail_decay_rate);

  const FractionalParams& params() const { return params_; }
  const Representation& representation() const { return rep_; }

  double evaluate(double rho) const;
  double derivative(double rho) const;  // a.e.; one-sided at kinks

  // Decay rate beta of the tail: u ~ c rho^{-beta}. Ignored when compact.
  double tail_decay_rate() const { return tail_decay_rate_; }

  // Smallest radius beyond which the profile vanishes identically;
  // infinity for profiles with full support.
  double support_radius() const;
  bool has_compact_support() const;

  // Radius of the concentration core (the rescaling scale eps).
  double core_scale() const;

  // Radii where the profile or its derivative has a kink; used as
  // quadrature breakpoints.
  std::vector<double> kink_radii() const;

  double amplitude() const;

private:
  FractionalParams params_;
  Representation rep_;
  double tail_decay_rate_;
};

// The closed-form optimizer shape with amplitude 1 (value 1 at the origin).
RadialProfile at_profile(const FractionalParams& params);

// A sampled profile from explicit grid data. Validates monotonicity.
RadialProfile sampled_profile(const FractionalParams& params, std::vector<double> rho,
                              std::vector<double> val, double tail_decay_rate);

// Concentrating rescaling u_eps(rho) = eps^{(ps-N)/p} u(rho/eps).
RadialProfile rescale(const RadialProfile& profile, double eps);

// Pointwise multiple c * u.
RadialProfile scale_amplitude(const RadialProfile& profile, double c);

// Given the computed powers [u]_{s,p}^p and ||u||_{r,alpha}^r, returns
// (c*u, c) with c = (gagliardo_p_pow / hardy_r_pow)^{1/(r-p)}, so that the
// scaled profile has equal powers.  Throws DegenerateNorm on bad inputs.
std::pair<RadialProfile, double> normalize(const RadialProfile& profile, double gagliardo_p_pow,
                                           double hardy_r_pow);

// Least-squares tail fit on [rho_min, rho_max]; requires rho_min >= 1 and
// rho_max > 2 rho_min; at least 8 sample radii must fall in the window.
DecayFit decay_fit(const RadialProfile& profile, double rho_min, double rho_max);

// Resample onto n log-spaced radii spanning [lo, hi] (origin node included).
RadialProfile sample_profile(const RadialProfile& profile, int n, double lo, double hi);

// Default sampling grid: 1024 log-spaced radii over [1e-4, 1e4] times the
// concentration scale.
RadialProfile sample_profile(const RadialProfile& profile);

}  // namespace hslab
