#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// Controls for the singular quadrature engine.
struct QuadratureConfig {
  int grid_points = 512;        // target nodes per axis
  double r_max = 1e4;           // outer truncation radius of integration
  int diagonal_levels = 40;     // graded refinement depth toward rho = tau
  double target_rel_tol = 1e-4; // requested relative accuracy
  int angular_points = 16;      // Gauss nodes per angular panel (N >= 2)

  void validate() const;
};

// |S^{N-1}|, the surface measure of the unit sphere in R^N (2 for N = 1).
double sphere_area(int dim);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_rule(int n);

// Integrates f over [a, b] with one n-point Gauss panel.
double gauss_panel(const std::function<double(double)>& f, double a, double b, int n);

// Integrates f over consecutive panels given by edges[0] < ... < edges[k].
double gauss_panels(const std::function<double(double)>& f, const std::vector<double>& edges,
                    int n);

// Log-spaced panel edges covering [lo, hi] with roughly `per_decade`
// panels per decade, with the extra breakpoints inserted.
std::vector<double> log_edges(double lo, double hi, double per_decade,
                              const std::vector<double>& breakpoints = {});

/// Angular reduction kernel for N >= 2:
///   Phi_N(rho, tau) = |S^{N-2}| * Int_0^pi (rho^2 + tau^2 - 2 rho tau cos phi)^{-(N+qs)/2}
///                      sin^{N-2}(phi) dphi
/// evaluated through the scale-free section psi(w) = Phi_N(1, w), w <= 1,
/// cached on a grid of 1 - w and interpolated in log-log coordinates with
/// the (1-w)^{-1-qs} singularity factored out.
class AngularKernel {
public:
  AngularKernel(int dim, double qs, int gauss_points = 16);

  // Phi_N(rho, tau) for arbitrary positive radii (symmetric in arguments).
  double operator()(double rho, double tau) const;

  // The scale-free section psi(w) for w in [0, 1).
  double section(double w) const;

  // Direct adaptive evaluation of psi(w), no cache. Used for validation.
  double section_direct(double w) const;

  // Int_0^x t^{qs-1} psi(t) dt, used by far-field tail closures.
  double section_moment(double x) const;

  // Prefactor of the (1-w)^{-1-qs} diagonal asymptote of psi.
  double singular_coefficient() const { return sing_coeff_; }

  int dim() const { return dim_; }
  double qs() const { return qs_; }

private:
  int dim_;
  double qs_;
  int gauss_points_;
  double sing_coeff_;             // prefactor of the (1-w)^{-1-qs} asymptote
  std::vector<double> log_v_;     // log(1 - w) grid, decreasing from 0
  std::vector<double> log_g_;     // log of psi * (1-w)^{1+qs} on the grid
};

/// Simple online accumulator for Richardson extrapolation of a sequence
/// I(R), I(2R), ... with known remainder decay R^{-gamma}.
struct DoublingLadder {
  std::vector<double> values;  // cumulative values at successive doublings

  void push(double v) { values.push_back(v); }

  // Growth ratios between consecutive rungs.
  std::vector<double> growth() const;

  // True when the value grew by more than `frac` per doubling for the
  // final `run` consecutive doublings.
  bool diverging(double frac = 0.05, int run = 3) const;

  // Extrapolated limit assuming remainder ~ c R^{-gamma}; falls back to
  // the last value when the ladder is too short.  `drop_last` rungs are
  // ignored, which gives an internal error estimate by comparison.
  double extrapolate(double gamma, int drop_last = 0) const;

  // |extrapolate(all rungs) - extrapolate(all but last)|, a defensible
  // estimate of the extrapolation residual.
  double extrapolation_gap(double gamma) const;
};

}  // namespace hslab
