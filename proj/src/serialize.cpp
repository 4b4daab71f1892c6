#include "hslab/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hslab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

json params_to_json(const FractionalParams& p) {
  return json{{"N", p.dim}, {"s", p.s}, {"p", p.p}, {"alpha", p.alpha}, {"r", p.r}};
}

FractionalParams params_from_json(const json& j) {
  const int N = j.at("N").get<int>();
  const double s = j.at("s").get<double>();
  const double p = j.at("p").get<double>();
  const double alpha = j.value("alpha", 0.0);
  if (s == 1.0) return make_local_params(N, p, alpha);
  return make_params(N, s, p, alpha);
}

json profile_to_json(const RadialProfile& profile) {
  json j;
  j["params"] = params_to_json(profile.params());
  j["tail_exponent"] = profile.tail_decay_rate();
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          j["representation"] = "closed_form_at";
          j["amplitude"] = rep.amplitude;
          j["scale"] = rep.scale;
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          j["representation"] = "sampled";
          j["amplitude"] = 1.0;
          j["grid"] = rep.rho;
          j["values"] = rep.val;
        } else {
          j["representation"] = "truncated";
          j["amplitude"] = rep.amplitude;
          j["base"] = profile_to_json(*rep.base);
          j["kinks"] = rep.kinks;
          j["support_radius"] = rep.support_radius;
          if (rep.g) {
            j["map"] = json{{"kind", "composition"},
                            {"t_low", rep.g->t_low},
                            {"t_high", rep.g->t_high},
                            {"m", rep.g->slope}};
          } else {
            j["map"] = json{{"kind", "multiplication"}, {"delta", rep.cutoff->delta}};
          }
        }
      },
      profile.representation());
  return j;
}

RadialProfile profile_from_json(const json& j) {
  const FractionalParams params = params_from_json(j.at("params"));
  const double tail = j.value("tail_exponent", params.tail_decay_rate());
  const std::string rep = j.at("representation").get<std::string>();
  if (rep == "closed_form_at") {
    ClosedFormAT form;
    form.scale = j.value("scale", 1.0);
    form.amplitude = j.value("amplitude", 1.0);
    return RadialProfile(params, form, tail);
  }
  if (rep == "sampled") {
    return sampled_profile(params, j.at("grid").get<std::vector<double>>(),
                           j.at("values").get<std::vector<double>>(), tail);
  }
  if (rep == "truncated") {
    ComposedForm form;
    form.base = std::make_shared<RadialProfile>(profile_from_json(j.at("base")));
    form.amplitude = j.value("amplitude", 1.0);
    form.kinks = j.at("kinks").get<std::vector<double>>();
    form.support_radius = j.at("support_radius").get<double>();
    const json& m = j.at("map");
    if (m.at("kind") == "composition") {
      form.g = CompositionMap{m.at("t_low").get<double>(), m.at("t_high").get<double>(),
                              m.at("m").get<double>()};
    } else {
      form.cutoff = SmoothstepCutoff{m.at("delta").get<double>()};
    }
    return RadialProfile(params, std::move(form), tail);
  }
  throw IoError("profile_from_json: unknown representation '" + rep + "'");
}

json quad_to_json(const QuadratureConfig& q) {
  return json{{"grid_points", q.grid_points},
              {"r_max", q.r_max},
              {"diagonal_levels", q.diagonal_levels},
              {"target_rel_tol", q.target_rel_tol},
              {"angular_points", q.angular_points}};
}

QuadratureConfig quad_from_json(const json& j) {
  QuadratureConfig q;
  q.grid_points = j.value("grid_points", q.grid_points);
  q.r_max = j.value("r_max", q.r_max);
  q.diagonal_levels = j.value("diagonal_levels", q.diagonal_levels);
  q.target_rel_tol = j.value("target_rel_tol", q.target_rel_tol);
  q.angular_points = j.value("angular_points", q.angular_points);
  q.validate();
  return q;
}

namespace {

std::string mode_name(SweepMode m) {
  switch (m) {
    case SweepMode::fix_delta_sweep_eps:
      return "fix_delta_sweep_eps";
    case SweepMode::fix_ratio:
      return "fix_ratio";
    case SweepMode::eps_power_of_delta:
      return "eps_power_of_delta";
  }
  return "?";
}

SweepMode mode_from_name(const std::string& name) {
  if (name == "fix_delta_sweep_eps") return SweepMode::fix_delta_sweep_eps;
  if (name == "fix_ratio") return SweepMode::fix_ratio;
  if (name == "eps_power_of_delta") return SweepMode::eps_power_of_delta;
  throw IoError("unknown sweep mode '" + name + "'");
}

}  // namespace

json plan_to_json(const ExperimentPlan& plan) {
  json j;
  j["params"] = params_to_json(plan.params);
  j["q_list"] = plan.q_list;
  j["sweep_mode"] = mode_name(plan.mode);
  j["eps_values"] = plan.eps_values;
  j["delta"] = plan.delta;
  j["ratio"] = plan.ratio;
  j["beta_power"] = plan.beta_power;
  j["nu"] = plan.nu;
  j["quad"] = quad_to_json(plan.quad);
  j["seed"] = plan.seed;
  j["workers"] = plan.workers;
  if (plan.interp_sigma) j["interp_sigma"] = *plan.interp_sigma;
  if (plan.interp_t) j["interp_t"] = *plan.interp_t;
  return j;
}

ExperimentPlan plan_from_json(const json& j) {
  ExperimentPlan plan;
  plan.params = params_from_json(j.at("params"));
  plan.q_list = j.value("q_list", std::vector<double>{});
  plan.mode = mode_from_name(j.value("sweep_mode", std::string("fix_delta_sweep_eps")));
  plan.eps_values = j.value("eps_values", std::vector<double>{});
  plan.delta = j.value("delta", 1.0);
  plan.ratio = j.value("ratio", 0.25);
  plan.beta_power = j.value("beta_power", 1.0);
  plan.nu = j.value("nu", 0.05);
  if (j.contains("quad")) plan.quad = quad_from_json(j.at("quad"));
  plan.seed = j.value("seed", std::uint64_t{0});
  plan.workers = j.value("workers", 0);
  if (j.contains("interp_sigma")) plan.interp_sigma = j.at("interp_sigma").get<double>();
  if (j.contains("interp_t")) plan.interp_t = j.at("interp_t").get<double>();
  return plan;
}

json seminorm_to_json(const SeminormValue& v) {
  return json{{"value", v.value},
              {"est_rel_error", v.est_rel_error},
              {"converged", v.converged},
              {"diverged", v.diverged},
              {"evaluations", v.evaluations},
              {"tail_contribution", v.tail_contribution}};
}

json fit_to_json(const ScalingFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"stderr", fit.stderr_slope},
              {"r_squared", fit.r_squared},
              {"theoretical_exponent", fit.theoretical_exponent},
              {"verdict", to_string(fit.verdict)},
              {"points", fit.points}};
}

json report_to_json(const TheoremReport& report) {
  json j;
  j["name"] = report.name;
  j["params"] = params_to_json(report.params);
  j["s_norm"] = report.table.s_norm;
  j["theta_bar"] = report.table.theta_bar;
  j["any_violated"] = report.any_violated;
  if (report.name == "lemma21") {
    j["min_deficit1"] = report.min_deficit1;
    j["min_deficit2"] = report.min_deficit2;
    j["deficit_tolerance"] = report.deficit_tolerance;
  }
  j["entries"] = json::array();
  for (const auto& e : report.entries) {
    json je;
    je["q"] = e.q;
    if (e.fit.points > 0) je["fit"] = fit_to_json(e.fit);
    je["ratio_min"] = e.ratio_min;
    je["ratio_max"] = e.ratio_max;
    if (!e.note.empty()) je["note"] = e.note;
    j["entries"].push_back(je);
  }
  return j;
}

json optimizer_result_to_json(const OptimizerResult& r) {
  json j;
  j["s_est"] = r.s_est;
  j["iterations"] = r.iterations;
  j["final_step"] = r.final_step;
  j["converged"] = r.converged;
  j["grid_points"] = r.minimizer.radii.size();
  j["quotient_initial"] = r.quotient_history.empty() ? 0.0 : r.quotient_history.front();
  j["quotient_final"] = r.quotient_history.empty() ? 0.0 : r.quotient_history.back();
  return j;
}

std::string table_to_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "eps,delta,q,seminorm,err,converged,deficit1,deficit2,besov_sigma_t,gagliardo_s_t\n";
  for (const auto& row : table.rows) {
    os << fmt(row.eps) << ',' << fmt(row.delta) << ',' << fmt(row.q) << ','
       << fmt(row.seminorm_q.value) << ',' << fmt(row.seminorm_q.est_rel_error) << ','
       << (row.flag.empty() && row.seminorm_q.converged ? 1 : 0) << ',' << fmt(row.deficit1)
       << ',' << fmt(row.deficit2) << ',' << fmt(row.besov_sigma_t) << ','
       << fmt(row.gagliardo_s_t) << '\n';
  }
  return os.str();
}

std::string profile_to_csv(const RadialProfile& profile, int points) {
  std::ostringstream os;
  os << "rho,u\n";
  const double scale = profile.core_scale();
  const double lo = 1e-4 * scale;
  const double hi = profile.has_compact_support() ? profile.support_radius() : 1e4 * scale;
  os << "0," << fmt(profile.evaluate(0.0)) << '\n';
  for (int i = 0; i < points; ++i) {
    const double rho = lo * std::pow(hi / lo, i / (points - 1.0));
    os << fmt(rho) << ',' << fmt(profile.evaluate(rho)) << '\n';
  }
  return os.str();
}

std::string history_to_csv(const OptimizerResult& result) {
  std::ostringstream os;
  os << "iteration,quotient\n";
  for (std::size_t i = 0; i < result.quotient_history.size(); ++i) {
    os << i << ',' << fmt(result.quotient_history[i]) << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out.good()) throw IoError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace hslab
