#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hslab/quadrature.hpp"
#include "hslab/seminorms.hpp"
#include "hslab/truncation.hpp"

namespace hslab {

enum class SweepMode { fix_delta_sweep_eps, fix_ratio, eps_power_of_delta };

/// A reproducible sweep over the concentrating truncated family.
struct ExperimentPlan {
  FractionalParams params;
  std::vector<double> q_list;  // in (1, p]
  SweepMode mode = SweepMode::fix_delta_sweep_eps;
  std::vector<double> eps_values;
  double delta = 1.0;       // fix_delta_sweep_eps
  double ratio = 0.25;      // fix_ratio: eps/delta held at this value
  double beta_power = 1.0;  // eps_power_of_delta: eps = delta^beta
  double nu = 0.05;         // rate loss for the below-threshold bound
  QuadratureConfig quad;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency

  // When set, each sweep row also carries the interpolation factors
  // [.]_{B^sigma_{t,inf}} and [.]_{s,t}.
  std::optional<double> interp_sigma;
  std::optional<double> interp_t;

  double delta_for(double eps) const;
  void validate() const;
};

struct SweepRow {
  double eps = 0.0, delta = 0.0, q = 0.0;
  SeminormValue seminorm_q;     // [U_{eps,delta}]_{s,q}
  double gagliardo_p_pow = 0.0; // [U_{eps,delta}]_{s,p}^p
  double hardy_r_pow = 0.0;     // ||U_{eps,delta}||_{r,alpha}^r
  double deficit1 = 0.0;        // [.]_{s,p}^p - S_norm
  double deficit2 = 0.0;        // S_norm - ||.||_{r,alpha}^r
  double besov_sigma_t = 0.0;   // 0 unless the plan requests interpolation factors
  double gagliardo_s_t = 0.0;
  std::string flag;  // empty when the row is clean
};

struct SweepTable {
  ExperimentPlan plan;
  double s_norm = 0.0;        // [U]_{s,p}^p of the normalized base profile
  double base_scale_c = 0.0;  // normalization constant c
  double theta_bar = 0.0;
  std::vector<SweepRow> rows;
};

/// Fitted log-log slope versus a theoretical exponent.
struct ScalingFit {
  enum class Verdict { consistent, bound_satisfied, violated };

  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r_squared = 0.0;
  double theoretical_exponent = 0.0;
  Verdict verdict = Verdict::consistent;
  int points = 0;
};

const char* to_string(ScalingFit::Verdict v);

enum class Column {
  eps,
  delta,
  eps_over_delta,
  seminorm,
  deficit1,
  deficit2,
  gagliardo_p_pow,
  hardy_r_pow,
};

// Ordinary least squares on (log x, log y) over converged rows (optionally
// restricted to one q).  Requires >= 4 usable rows.
ScalingFit fit_slope(const SweepTable& table, Column x, Column y, double theoretical_exponent,
                     std::optional<double> q_filter = std::nullopt);
ScalingFit fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                     double theoretical_exponent);

// Builds the normalized base profile, the theta-bar dilation, and one row
// per (eps, q) tuple (eps outer, q inner).  Per-row failures are recorded
// in the row flag; the sweep never aborts.
SweepTable run_sweep(const ExperimentPlan& plan);

// [U]_{s,p}^p of the normalized base profile together with the constant c.
struct BaseNorm {
  double s_norm = 0.0;
  double c = 0.0;
  double gagliardo_p_pow = 0.0;  // before normalization
  double hardy_r_pow = 0.0;
};
BaseNorm normalized_base_energy(const FractionalParams& params, const QuadratureConfig& quad);

/// One verification entry: a fitted slope plus the bound-ratio spread.
struct ReportEntry {
  double q = 0.0;
  ScalingFit fit;
  double ratio_min = 0.0;  // min/max of seminorm divided by the bound shape
  double ratio_max = 0.0;
  std::string note;
};

struct TheoremReport {
  std::string name;
  FractionalParams params;
  std::vector<ReportEntry> entries;
  SweepTable table;
  bool any_violated = false;
  double min_deficit1 = 0.0, min_deficit2 = 0.0, deficit_tolerance = 0.0;  // lemma checks
};

// Upper bound [U_{eps,delta}]_{s,q} <= C eps^{N/q - N/p} for q above the
// threshold: slope fit vs eps plus ratio boundedness.
TheoremReport verify_st1(const ExperimentPlan& plan);

// Below-threshold bound with rate loss nu: slope of log seminorm vs
// log(eps/delta) compared against (N - ps)/(p(p-1)) - nu, plus ratio
// boundedness against the full bound shape.
TheoremReport verify_nu(const ExperimentPlan& plan);

// Energy/weighted-norm deficits of the truncated family: sign checks and
// slope fits against (N-ps)/(p-1) and (N-alpha)/(p-1).
TheoremReport verify_lemma21(const ExperimentPlan& plan);

// Differentiability reach at the Besov scale: theta = min{1, p(1-alpha/N)},
// sigma_bar = ps/(p-theta) for p >= 2, else 2s/(2-theta).  Always > s.
double sigma_bar(const FractionalParams& params);

// Usable range (s, min(sigma_bar, 1)) for interpolation experiments.
std::pair<double, double> usable_sigma_range(const FractionalParams& params);

// The decay exponent (1-mu)(N/t - N/p) - mu(sigma - s) realized by an
// interpolation triple; always below (N-ps)/(p(p-1)) on admissible triples.
double interpolation_exponent(const FractionalParams& params, double t, double mu, double sigma);

struct InterpolationParams {
  double t = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
};

// Deterministic rule choosing (t, mu, sigma) whose exponent equals the
// limit rate minus nu.  Throws NoSolution when nu >= (N-ps)/(p(p-1)).
InterpolationParams choose_interpolation_params(const FractionalParams& params, double q,
                                                double nu);

struct InterpolationCheck {
  double eps = 0.0, delta = 0.0, q = 0.0;
  double sigma = 0.0, t = 0.0, mu = 0.0;
  double lhs = 0.0;           // [U_{eps,delta}]_{s,q}
  double delta_power = 0.0;   // delta^{N/q - N/t + mu (sigma - s)}
  double besov_factor = 0.0;  // [U_{eps,delta}]_{B^sigma_{t,inf}}
  double gagliardo_factor = 0.0;  // [U_{eps,delta}]_{s,t}
  double ratio = 0.0;             // lhs / rhs
};

// Ratio audit of the two-factor interpolation bound across a sweep.
std::vector<InterpolationCheck> interpolation_audit(const ExperimentPlan& plan, double sigma,
                                                    double t, double mu);

// s = 1 comparison family: gradient-norm sweep with the same truncation,
// fitted against the local-case exponents.  Requires p < N and alpha = 0.
TheoremReport verify_local_case(const ExperimentPlan& plan);

}  // namespace hslab
