#pragma once

#include <vector>

#include "hslab/profile.hpp"
#include "hslab/quadrature.hpp"

namespace hslab {

enum class Normalization { none, hardy_unit, el_normalized };

/// Profile values on a shared log-spaced radius grid.
struct DiscreteProfile {
  FractionalParams params;
  std::vector<double> radii;
  std::vector<double> values;
  Normalization normalization = Normalization::none;
};

struct OptimizerConfig {
  int max_iters = 3000;
  double tol = 1e-10;   // relative quotient decrease considered stalled
  double step0 = 0.5;   // initial relative step
  int grid_points = 384;
  double grid_lo = 1e-5;
  double grid_hi = 1e6;
  QuadratureConfig quad;
};

struct OptimizerResult {
  DiscreteProfile minimizer;
  double s_est = 0.0;  // quotient at the minimizer
  int iterations = 0;
  double final_step = 0.0;
  bool converged = false;  // false signals non-convergence; best iterate kept
  std::vector<double> quotient_history;
};

/// Quadrature discretization of the energy and weighted norm on a fixed
/// grid: the kernel weights are assembled once, making energies, gradients
/// and weak-form pairings cheap vector operations.  Requires p*s < 1 (the
/// nodal kernel weights would not be integrable otherwise).
class DiscreteEnergyForm {
public:
  DiscreteEnergyForm(const FractionalParams& params, std::vector<double> radii,
                     const QuadratureConfig& quad);

  const std::vector<double>& radii() const { return radii_; }
  const FractionalParams& params() const { return params_; }

  double gagliardo_pow(const std::vector<double>& u) const;  // [u]_{s,p}^p
  double hardy_pow(const std::vector<double>& u) const;      // ||u||_{r,alpha}^r
  double quotient(const std::vector<double>& u) const;       // [u]^p / ||u||^p

  std::vector<double> gagliardo_gradient(const std::vector<double>& u) const;
  std::vector<double> hardy_gradient(const std::vector<double>& u) const;

  // Weak-form pairings: A(u, phi) of the nonlinear energy differential and
  // B(u, phi) of the weighted right-hand side.
  double pairing(const std::vector<double>& u, const std::vector<double>& phi) const;
  double weighted_dual(const std::vector<double>& u, const std::vector<double>& phi) const;

private:
  FractionalParams params_;
  std::vector<double> radii_;
  std::vector<double> cell_edges_;   // radii_.size() + 1 cell boundaries
  std::vector<double> pair_weights_; // dense symmetric, zero diagonal
  std::vector<double> cell_corr_;    // within-cell forward-difference weights
  std::vector<double> hardy_weights_;
  std::size_t m_ = 0;
};

// Sample a radial profile onto the optimizer grid.
DiscreteProfile discretize(const RadialProfile& profile, const OptimizerConfig& cfg);

// Hat function max(0, 1 - rho) on the optimizer grid.
DiscreteProfile hat_initial(const FractionalParams& params, const OptimizerConfig& cfg);

// Export view as a sampled radial profile (values clamped monotone).
RadialProfile to_radial(const DiscreteProfile& profile);

// Quotient through the continuum engine (independent of the discrete form).
double rayleigh_quotient(const DiscreteProfile& profile, const QuadratureConfig& cfg);

// Projected descent on the discrete quotient over the non-negative cone,
// renormalized to unit weighted norm after every step.
OptimizerResult minimize(const DiscreteProfile& init, const OptimizerConfig& cfg);

// Rescale values so the discrete powers match: [cu]^p = ||cu||^r.
std::pair<DiscreteProfile, double> normalize_discrete(const DiscreteProfile& profile,
                                                      const OptimizerConfig& cfg);

// Maximum normalized weak-form gap |A(U,phi) - B(U,phi)| / A(U,U) over the
// supplied test functions (value vectors on the profile's grid).
double el_residual(const DiscreteProfile& profile,
                   const std::vector<std::vector<double>>& test_functions,
                   const OptimizerConfig& cfg);

// Log-radius bump test functions for the weak-form audit.
std::vector<std::vector<double>> bump_test_functions(const std::vector<double>& radii, int count);

}  // namespace hslab
