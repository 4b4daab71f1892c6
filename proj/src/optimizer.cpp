#include "hslab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "hslab/seminorms.hpp"

namespace hslab {

namespace {

double pow_signed(double x, double e) {
  // |x|^{e-1} x, the odd power appearing in the energy differential
  if (x == 0.0) return 0.0;
  return (x > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x), e);
}

// double primitive of t^{-1-g}: F'' = t^{-1-g}
double kernel_double_primitive(double t, double g) {
  if (t <= 0.0) return 0.0;
  return std::pow(t, 1.0 - g) / (g * (g - 1.0));
}

}  // namespace

DiscreteEnergyForm::DiscreteEnergyForm(const FractionalParams& params, std::vector<double> radii,
                                       const QuadratureConfig& quad)
    : params_(params), radii_(std::move(radii)), m_(radii_.size()) {
  if (m_ < 8) throw ConstraintViolation("discrete form: need at least 8 radii");
  const double ps = params_.p * params_.s;
  if (!(ps < 1.0))
    throw InvalidParams("discrete form: nodal kernel weights require p*s < 1");
  const int N = params_.dim;
  const double p = params_.p;
  const double omega = sphere_area(N);

  cell_edges_.resize(m_ + 1);
  cell_edges_[0] = 0.0;
  for (std::size_t i = 0; i + 1 < m_; ++i) cell_edges_[i + 1] = std::sqrt(radii_[i] * radii_[i + 1]);
  cell_edges_[m_] = radii_[m_ - 1] * std::sqrt(radii_[m_ - 1] / radii_[m_ - 2]);

  std::optional<AngularKernel> kernel;
  if (N >= 2) kernel.emplace(N, ps, quad.angular_points);
  const auto phi = [&](double rho, double tau) -> double {
    if (N == 1) return std::pow(std::abs(rho - tau), -1.0 - ps) + std::pow(rho + tau, -1.0 - ps);
    return (*kernel)(rho, tau);
  };
  const auto weighted = [&](double rho, double tau) {
    double v = phi(rho, tau);
    if (N > 1) v *= std::pow(rho * tau, N - 1.0);
    return v;
  };

  // dense pair weights: 2 * Int_{cell_i x cell_j} Phi rho^{N-1} tau^{N-1}
  pair_weights_.assign(m_ * m_, 0.0);
  const GaussRule& g4 = gauss_rule(4);
  for (std::size_t i = 0; i < m_; ++i) {
    const double a0 = cell_edges_[i], a1 = cell_edges_[i + 1];
    for (std::size_t j = i + 1; j < m_; ++j) {
      const double b0 = cell_edges_[j], b1 = cell_edges_[j + 1];
      double w = 0.0;
      if (j == i + 1) {
        if (N == 1) {
          // singular |rho-tau| part in closed form, smooth part by Gauss
          const auto F2 = [&](double t) { return kernel_double_primitive(t, ps); };
          w += F2(b1 - a0) - F2(b0 - a0) - F2(b1 - a1) + F2(b0 - a1);
          for (int ii = 0; ii < 4; ++ii) {
            const double rho = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * g4.x[ii];
            for (int jj = 0; jj < 4; ++jj) {
              const double tau = 0.5 * (b0 + b1) + 0.5 * (b1 - b0) * g4.x[jj];
              w += 0.25 * (a1 - a0) * (b1 - b0) * g4.w[ii] * g4.w[jj] *
                   std::pow(rho + tau, -1.0 - ps);
            }
          }
        } else {
          // dyadic strips toward the shared edge
          double lo = b0;
          const double width = b1 - b0;
          for (int strip = 0; strip < 24; ++strip) {
            const double hi2 = (strip + 1 == 24) ? b1 : b0 + width * std::pow(2.0, strip + 1 - 24.0);
            for (int ii = 0; ii < 4; ++ii) {
              const double rho = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * g4.x[ii];
              for (int jj = 0; jj < 4; ++jj) {
                const double tau = 0.5 * (lo + hi2) + 0.5 * (hi2 - lo) * g4.x[jj];
                w += 0.25 * (a1 - a0) * (hi2 - lo) * g4.w[ii] * g4.w[jj] * weighted(rho, tau);
              }
            }
            lo = hi2;
          }
        }
      } else {
        for (int ii = 0; ii < 4; ++ii) {
          const double rho = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * g4.x[ii];
          for (int jj = 0; jj < 4; ++jj) {
            const double tau = 0.5 * (b0 + b1) + 0.5 * (b1 - b0) * g4.x[jj];
            w += 0.25 * (a1 - a0) * (b1 - b0) * g4.w[ii] * g4.w[jj] * weighted(rho, tau);
          }
        }
      }
      const double full = 2.0 * omega * w;
      pair_weights_[i * m_ + j] = full;
      pair_weights_[j * m_ + i] = full;
    }
  }

  // within-cell correction, forward-difference slope model
  cell_corr_.assign(m_, 0.0);
  const double c1 = p - ps, c2 = p + 1.0 - ps;
  for (std::size_t i = 0; i + 1 < m_; ++i) {
    const double w = cell_edges_[i + 1] - cell_edges_[i];
    const double dr = radii_[i + 1] - radii_[i];
    double corr = 2.0 * std::pow(w, c2) / (c1 * c2) / std::pow(dr, p);
    if (N == 1) {
      cell_corr_[i] = omega * corr;
    } else {
      cell_corr_[i] =
          omega * corr * kernel->singular_coefficient() * std::pow(radii_[i], N - 1.0);
    }
  }

  hardy_weights_.resize(m_);
  const double e = N - params_.alpha;
  for (std::size_t i = 0; i < m_; ++i) {
    hardy_weights_[i] =
        omega * (std::pow(cell_edges_[i + 1], e) - std::pow(cell_edges_[i], e)) / e;
  }
}

double DiscreteEnergyForm::gagliardo_pow(const std::vector<double>& u) const {
  const double p = params_.p;
  double total = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const double ui = u[i];
    const double* row = &pair_weights_[i * m_];
    double local = 0.0;
    if (p == 2.0) {
      for (std::size_t j = i + 1; j < m_; ++j) {
        const double d = ui - u[j];
        local += row[j] * d * d;
      }
    } else {
      for (std::size_t j = i + 1; j < m_; ++j) {
        const double d = std::abs(ui - u[j]);
        if (d != 0.0) local += row[j] * std::pow(d, p);
      }
    }
    total += local;
    if (i + 1 < m_) {
      const double d = std::abs(u[i + 1] - ui);
      if (d != 0.0) total += cell_corr_[i] * (p == 2.0 ? d * d : std::pow(d, p));
    }
  }
  return total;
}

double DiscreteEnergyForm::hardy_pow(const std::vector<double>& u) const {
  const double r = params_.r;
  double total = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (u[i] > 0.0) total += hardy_weights_[i] * std::pow(u[i], r);
  }
  return total;
}

double DiscreteEnergyForm::quotient(const std::vector<double>& u) const {
  const double h = hardy_pow(u);
  if (!(h > 0.0)) throw DegenerateNorm("quotient: weighted norm vanishes");
  return gagliardo_pow(u) / std::pow(h, params_.p / params_.r);
}

std::vector<double> DiscreteEnergyForm::gagliardo_gradient(const std::vector<double>& u) const {
  const double p = params_.p;
  std::vector<double> g(m_, 0.0);
  if (p == 2.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &pair_weights_[i * m_];
      double acc = 0.0;
      const double ui = u[i];
      for (std::size_t j = 0; j < m_; ++j) acc += row[j] * (ui - u[j]);
      g[i] = 2.0 * acc;
    }
  } else {
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &pair_weights_[i * m_];
      double acc = 0.0;
      const double ui = u[i];
      for (std::size_t j = 0; j < m_; ++j) acc += row[j] * pow_signed(ui - u[j], p - 1.0);
      g[i] = p * acc;
    }
  }
  for (std::size_t i = 0; i + 1 < m_; ++i) {
    const double t = p * cell_corr_[i] * pow_signed(u[i + 1] - u[i], p - 1.0);
    g[i + 1] += t;
    g[i] -= t;
  }
  return g;
}

std::vector<double> DiscreteEnergyForm::hardy_gradient(const std::vector<double>& u) const {
  const double r = params_.r;
  std::vector<double> g(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    if (u[i] > 0.0) g[i] = r * hardy_weights_[i] * std::pow(u[i], r - 1.0);
  }
  return g;
}

double DiscreteEnergyForm::pairing(const std::vector<double>& u,
                                   const std::vector<double>& phi) const {
  const auto g = gagliardo_gradient(u);
  return std::inner_product(g.begin(), g.end(), phi.begin(), 0.0) / params_.p;
}

double DiscreteEnergyForm::weighted_dual(const std::vector<double>& u,
                                         const std::vector<double>& phi) const {
  const double r = params_.r;
  double total = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (u[i] > 0.0) total += hardy_weights_[i] * std::pow(u[i], r - 1.0) * phi[i];
  }
  return total;
}

namespace {

std::vector<double> optimizer_grid(const OptimizerConfig& cfg) {
  std::vector<double> radii(cfg.grid_points);
  for (int i = 0; i < cfg.grid_points; ++i) {
    radii[i] =
        cfg.grid_lo * std::pow(cfg.grid_hi / cfg.grid_lo, i / (cfg.grid_points - 1.0));
  }
  return radii;
}

}  // namespace

DiscreteProfile discretize(const RadialProfile& profile, const OptimizerConfig& cfg) {
  DiscreteProfile out;
  out.params = profile.params();
  out.radii = optimizer_grid(cfg);
  out.values.resize(out.radii.size());
  for (std::size_t i = 0; i < out.radii.size(); ++i) out.values[i] = profile.evaluate(out.radii[i]);
  return out;
}

DiscreteProfile hat_initial(const FractionalParams& params, const OptimizerConfig& cfg) {
  DiscreteProfile out;
  out.params = params;
  out.radii = optimizer_grid(cfg);
  out.values.resize(out.radii.size());
  for (std::size_t i = 0; i < out.radii.size(); ++i)
    out.values[i] = std::max(0.0, 1.0 - out.radii[i]);
  return out;
}

RadialProfile to_radial(const DiscreteProfile& profile) {
  std::vector<double> rho;
  std::vector<double> val;
  rho.reserve(profile.radii.size() + 1);
  val.reserve(profile.radii.size() + 1);
  rho.push_back(0.0);
  val.push_back(profile.values.empty() ? 0.0 : profile.values.front());
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    rho.push_back(profile.radii[i]);
    val.push_back(std::min(profile.values[i], val.back()));  // clamp to monotone
  }
  return sampled_profile(profile.params, std::move(rho), std::move(val),
                         profile.params.tail_decay_rate());
}

double rayleigh_quotient(const DiscreteProfile& profile, const QuadratureConfig& cfg) {
  const RadialProfile u = to_radial(profile);
  const auto& pr = profile.params;
  const SeminormValue h = hardy_norm(u, pr.r, pr.alpha, cfg);
  if (!(h.value > 0.0)) throw DegenerateNorm("rayleigh_quotient: weighted norm vanishes");
  const SeminormValue g = gagliardo(u, pr.s, pr.p, cfg);
  return std::pow(g.value, pr.p) / std::pow(h.value, pr.p);
}

OptimizerResult minimize(const DiscreteProfile& init, const OptimizerConfig& cfg) {
  DiscreteEnergyForm form(init.params, init.radii, cfg.quad);
  const double p = init.params.p, r = init.params.r;
  const std::size_t m = init.radii.size();

  std::vector<double> u = init.values;
  for (auto& v : u) v = std::max(v, 0.0);
  const auto renorm = [&](std::vector<double>& w) {
    const double h = form.hardy_pow(w);
    if (!(h > 0.0)) throw DegenerateNorm("minimize: iterate lost its weighted norm");
    const double c = std::pow(h, -1.0 / r);
    for (auto& v : w) v *= c;
  };
  renorm(u);

  OptimizerResult res;
  double quotient = form.gagliardo_pow(u);  // H = 1 after renorm
  res.quotient_history.push_back(quotient);
  double step = cfg.step0;
  int stalled = 0;

  std::vector<double> trial(m);
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const auto ge = form.gagliardo_gradient(u);
    const auto gh = form.hardy_gradient(u);
    std::vector<double> grad(m);
    const double factor = (p / r) * quotient;
    for (std::size_t i = 0; i < m; ++i) grad[i] = ge[i] - factor * gh[i];

    double unorm = 0.0, gnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      unorm += u[i] * u[i];
      gnorm += grad[i] * grad[i];
    }
    if (!(gnorm > 0.0)) break;
    const double scale = std::sqrt(unorm / gnorm);

    bool accepted = false;
    while (step > 1e-16) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = std::max(0.0, u[i] - step * scale * grad[i]);
      double h = form.hardy_pow(trial);
      if (h > 0.0) {
        const double c = std::pow(h, -1.0 / r);
        for (auto& v : trial) v *= c;
        const double q_trial = form.gagliardo_pow(trial);
        if (q_trial < quotient) {
          u.swap(trial);
          const double drop = (quotient - q_trial) / quotient;
          quotient = q_trial;
          res.quotient_history.push_back(quotient);
          accepted = true;
          stalled = (drop < cfg.tol) ? stalled + 1 : 0;
          step = std::min(step * 1.5, 4.0);
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || stalled >= 8) break;
  }

  res.iterations = it;
  res.final_step = step;
  res.converged = (it < cfg.max_iters);
  res.minimizer.params = init.params;
  res.minimizer.radii = init.radii;
  res.minimizer.values = std::move(u);
  res.minimizer.normalization = Normalization::hardy_unit;
  res.s_est = quotient;
  return res;
}

std::pair<DiscreteProfile, double> normalize_discrete(const DiscreteProfile& profile,
                                                      const OptimizerConfig& cfg) {
  DiscreteEnergyForm form(profile.params, profile.radii, cfg.quad);
  const double g = form.gagliardo_pow(profile.values);
  const double h = form.hardy_pow(profile.values);
  if (!(g > 0.0) || !(h > 0.0)) throw DegenerateNorm("normalize_discrete: degenerate powers");
  const double c = std::pow(g / h, 1.0 / (profile.params.r - profile.params.p));
  DiscreteProfile out = profile;
  for (auto& v : out.values) v *= c;
  out.normalization = Normalization::el_normalized;
  return {out, c};
}

double el_residual(const DiscreteProfile& profile,
                   const std::vector<std::vector<double>>& test_functions,
                   const OptimizerConfig& cfg) {
  DiscreteEnergyForm form(profile.params, profile.radii, cfg.quad);
  const double denom = form.gagliardo_pow(profile.values);
  if (!(denom > 0.0)) throw DegenerateNorm("el_residual: zero energy");
  double worst = 0.0;
  for (const auto& phi : test_functions) {
    if (phi.size() != profile.values.size())
      throw InvalidRange("el_residual: test function grid mismatch");
    const double a = form.pairing(profile.values, phi);
    const double b = form.weighted_dual(profile.values, phi);
    worst = std::max(worst, std::abs(a - b) / denom);
  }
  return worst;
}

std::vector<std::vector<double>> bump_test_functions(const std::vector<double>& radii, int count) {
  std::vector<std::vector<double>> out;
  const double l0 = std::log(radii.front()), l1 = std::log(radii.back());
  const double width = (l1 - l0) / (count + 1.0);
  for (int k = 1; k <= count; ++k) {
    const double center = l0 + k * (l1 - l0) / (count + 1.0);
    std::vector<double> phi(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double z = (std::log(radii[i]) - center) / width;
      phi[i] = std::exp(-z * z);
    }
    out.push_back(std::move(phi));
  }
  return out;
}

}  // namespace hslab
