#include "hslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hslab {

void QuadratureConfig::validate() const {
  if (grid_points < 64) throw ConstraintViolation("quadrature: grid_points must be >= 64");
  if (diagonal_levels < 2) throw ConstraintViolation("quadrature: diagonal_levels must be >= 2");
  if (!(target_rel_tol > 0.0 && target_rel_tol < 0.1))
    throw ConstraintViolation("quadrature: target_rel_tol must lie in (0, 0.1)");
  if (!(r_max > 0.0)) throw ConstraintViolation("quadrature: r_max must be positive");
  if (angular_points < 4) throw ConstraintViolation("quadrature: angular_points must be >= 4");
}

double sphere_area(int dim) {
  if (dim < 1) throw ConstraintViolation("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

namespace {

GaussRule compute_gauss(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton iteration on P_n, symmetric roots
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int n) {
  const GaussRule& rule = gauss_rule(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.w[i] * f(mid + half * rule.x[i]);
  return sum * half;
}

double gauss_panels(const std::function<double(double)>& f, const std::vector<double>& edges,
                    int n) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) sum += gauss_panel(f, edges[i], edges[i + 1], n);
  return sum;
}

std::vector<double> log_edges(double lo, double hi, double per_decade,
                              const std::vector<double>& breakpoints) {
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidRange("log_edges: need 0 < lo < hi");
  const double decades = std::log10(hi / lo);
  const int panels = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(panels) + breakpoints.size() + 1);
  for (int i = 0; i <= panels; ++i) edges.push_back(lo * std::pow(hi / lo, i / double(panels)));
  for (double b : breakpoints) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::max(a, b); }),
              edges.end());
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

AngularKernel::AngularKernel(int dim, double qs, int gauss_points)
    : dim_(dim), qs_(qs), gauss_points_(std::max(8, gauss_points)) {
  if (dim < 2) throw ConstraintViolation("AngularKernel: requires N >= 2");
  if (!(qs > 0.0)) throw ConstraintViolation("AngularKernel: requires q*s > 0");
  // coefficient of the (1-w)^{-1-qs} asymptote
  const double lg = std::lgamma(0.5 * (dim - 1.0)) + std::lgamma(0.5 * (qs + 1.0)) -
                    std::lgamma(0.5 * (dim + qs));
  sing_coeff_ = sphere_area(dim - 1) * 0.5 * std::exp(lg);

  const int n_nodes = 2048;
  const double v_min = 1e-9, v_max = 1.0;
  log_v_.resize(n_nodes);
  log_g_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double lv = std::log(v_min) + (std::log(v_max) - std::log(v_min)) * i / (n_nodes - 1.0);
    const double v = std::exp(lv);
    const double psi = section_direct(1.0 - v);
    log_v_[i] = lv;
    log_g_[i] = std::log(psi * std::pow(v, 1.0 + qs_));
  }
}

double AngularKernel::section_direct(double w) const {
  w = std::clamp(w, 0.0, 1.0 - 1e-12);
  const double v = 1.0 - w;
  const double expo = -0.5 * (dim_ + qs_);
  const auto integrand = [&](double phi) {
    const double d2 = v * v + 2.0 * w * (1.0 - std::cos(phi));
    double sn = 1.0;
    if (dim_ > 2) sn = std::pow(std::sin(phi), dim_ - 2.0);
    return std::pow(d2, expo) * sn;
  };
  // graded panels toward phi = 0 where the kernel peaks at width ~ v
  double sum = gauss_panel(integrand, 0.0, std::min(v, M_PI), gauss_points_);
  double a = std::min(v, M_PI);
  while (a < M_PI) {
    const double b = std::min(2.0 * a, M_PI);
    sum += gauss_panel(integrand, a, b, gauss_points_);
    a = b;
  }
  return sphere_area(dim_ - 1) * sum;
}

double AngularKernel::section(double w) const {
  if (w <= 0.0) return std::exp(log_g_.back());  // v = 1
  w = std::min(w, 1.0 - 1e-15);
  const double v = 1.0 - w;
  const double lv = std::log(v);
  if (lv <= log_v_.front()) return sing_coeff_ * std::pow(v, -1.0 - qs_);

  const double step = (log_v_.back() - log_v_.front()) / (log_v_.size() - 1.0);
  const double t = (lv - log_v_.front()) / step;
  const std::size_t j = std::min(log_v_.size() - 2, static_cast<std::size_t>(t));
  const double f = t - j;
  // Catmull-Rom in (log v, log g)
  const std::size_t j0 = (j == 0) ? 0 : j - 1;
  const std::size_t j3 = std::min(log_v_.size() - 1, j + 2);
  const double y0 = log_g_[j0], y1 = log_g_[j], y2 = log_g_[j + 1], y3 = log_g_[j3];
  const double m1 = 0.5 * (y2 - y0);
  const double m2 = 0.5 * (y3 - y1);
  const double f2 = f * f, f3 = f2 * f;
  const double lg = (2 * f3 - 3 * f2 + 1) * y1 + (f3 - 2 * f2 + f) * m1 +
                    (-2 * f3 + 3 * f2) * y2 + (f3 - f2) * m2;
  return std::exp(lg) * std::pow(v, -1.0 - qs_);
}

double AngularKernel::operator()(double rho, double tau) const {
  const double hi = std::max(rho, tau), lo = std::min(rho, tau);
  if (!(hi > 0.0)) throw InvalidRange("AngularKernel: radii must be positive");
  return std::pow(hi, -double(dim_) - qs_) * section(lo / hi);
}

double AngularKernel::section_moment(double x) const {
  if (!(x > 0.0)) return 0.0;
  x = std::min(x, 0.999999);
  const double floor_t = x * 1e-10;
  const auto f = [&](double t) { return std::pow(t, qs_ - 1.0) * section(t); };
  const auto edges = log_edges(floor_t, x, 8.0);
  double sum = gauss_panels(f, edges, gauss_points_);
  sum += section(0.0) * std::pow(floor_t, qs_) / qs_;
  return sum;
}

std::vector<double> DoublingLadder::growth() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < values.size(); ++i) {
    out.push_back(values[i - 1] != 0.0 ? values[i] / values[i - 1] : 1.0);
  }
  return out;
}

bool DoublingLadder::diverging(double frac, int run) const {
  const auto g = growth();
  if (static_cast<int>(g.size()) < run) return false;
  for (std::size_t i = g.size() - run; i < g.size(); ++i) {
    if (!(g[i] > 1.0 + frac)) return false;
  }
  return true;
}

double DoublingLadder::extrapolate(double gamma, int drop_last) const {
  const std::size_t n =
      (drop_last > 0 && values.size() > static_cast<std::size_t>(drop_last))
          ? values.size() - drop_last
          : values.size();
  if (n < 2) return n ? values[n - 1] : 0.0;
  const double d1 = values[n - 1] - values[n - 2];
  if (n >= 3) {
    const double d0 = values[n - 2] - values[n - 3];
    if (d0 != 0.0) {
      const double ratio = d1 / d0;
      if (ratio > 0.0 && ratio < 0.97) return values[n - 1] + d1 * ratio / (1.0 - ratio);
    }
  }
  if (gamma > 0.0) {
    const double q = std::pow(2.0, -gamma);
    if (q < 0.97) return values[n - 1] + d1 * q / (1.0 - q);
  }
  return values[n - 1];
}

double DoublingLadder::extrapolation_gap(double gamma) const {
  if (values.size() < 4) return 0.0;
  return std::abs(extrapolate(gamma) - extrapolate(gamma, 1));
}

}  // namespace hslab
