#pragma once

#include <cstdint>
#include <functional>

#include "hslab/profile.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

/// A computed (semi)norm with diagnostics.
struct SeminormValue {
  double value = 0.0;          // the norm itself (q-th root already taken)
  double est_rel_error = 0.0;  // internal error estimate, relative
  bool converged = false;      // error estimate met the target and no divergence
  bool diverged = false;       // grew without bound under outer-radius doubling
  std::int64_t evaluations = 0;
  double tail_contribution = 0.0;  // share of the power integral from the outer half-domain
};

/// Besov supremum result: the grid supremum, its location, and whether it
/// was attained at the edge of the (already extended) step grid.
struct BesovValue {
  SeminormValue norm;
  double h_argmax = 0.0;
  bool boundary_warning = false;
};

/// Mixed p-q energy J(u) = [u]_{s,p}^p + [u]_{s,q}^q with both terms kept.
struct MixedEnergyValue {
  double value = 0.0;
  SeminormValue p_term;  // [u]_{s,p}
  SeminormValue q_term;  // [u]_{s,q}
  bool converged = false;
  bool diverged = false;
};

// Gagliardo seminorm [u]_{s,q} via radial reduction with graded diagonal
// bands and an outer-radius doubling ladder.  Divergent seminorms are
// reported through flags, never exceptions.
SeminormValue gagliardo(const RadialProfile& profile, double s, double q,
                        const QuadratureConfig& cfg);

// Weighted norm ||u||_{r,alpha} = (int |u|^r |x|^{-alpha} dx)^{1/r}.
SeminormValue hardy_norm(const RadialProfile& profile, double r, double alpha,
                         const QuadratureConfig& cfg);

// Besov seminorm sup_h |h|^{-sigma} ||d_h u||_{L^q} with first-order
// (order = 1) or second-order (order = 2) differences.
BesovValue besov(const RadialProfile& profile, double sigma, double q, int order,
                 const QuadratureConfig& cfg);

// J(u) = [u]_{s,p}^p + [u]_{s,q}^q for p > q >= 1.
MixedEnergyValue mixed_energy(const RadialProfile& profile, double s, double p, double q,
                              const QuadratureConfig& cfg);

// ||grad u||_{L^q} for the s = 1 comparison family.
SeminormValue local_gradient_norm(const RadialProfile& profile, double q,
                                  const QuadratureConfig& cfg);

// Test oracle: direct double midpoint sum of |f(x)-f(y)|^q |x-y|^{-1-qs}
// over a uniform grid on [a, b] (f vanishing outside), diagonal cells
// handled by dyadic grading, Richardson-extrapolated across refinement
// levels.  `refinement` is log2 of the finest grid size.  1D only.
double brute_force_oracle(const std::function<double(double)>& f, double a, double b, double s,
                          double q, int refinement);

}  // namespace hslab
