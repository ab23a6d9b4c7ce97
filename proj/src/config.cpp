#include "cvrsp/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace cvrsp {

using nlohmann::json;

namespace {

std::vector<double> step_grid(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + " must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json target_json(const TargetSpec& t) {
  json j = {{"alpha", t.alpha}};
  switch (t.kind) {
    case TargetKind::CatPlus: j["kind"] = "cat_plus"; break;
    case TargetKind::CatMinus: j["kind"] = "cat_minus"; break;
    case TargetKind::Coherent:
      j["kind"] = "coherent";
      j["sign"] = t.sign;
      break;
    case TargetKind::PhaseCat:
      j["kind"] = "phase_cat";
      j["sign"] = t.sign;
      break;
    case TargetKind::Custom:
      j["kind"] = "custom";
      j["c_plus"] = complex_json(t.c_plus);
      j["c_minus"] = complex_json(t.c_minus);
      break;
  }
  return j;
}

TargetSpec target_from(const json& j, const std::string& where) {
  check_keys(j, where, {"kind", "alpha", "sign", "c_plus", "c_minus"});
  std::string kind;
  read(j, "kind", kind, where);
  TargetSpec t;
  read(j, "alpha", t.alpha, where);
  read(j, "sign", t.sign, where);
  if (kind == "cat_plus") {
    t.kind = TargetKind::CatPlus;
  } else if (kind == "cat_minus") {
    t.kind = TargetKind::CatMinus;
  } else if (kind == "coherent") {
    t.kind = TargetKind::Coherent;
  } else if (kind == "phase_cat") {
    t.kind = TargetKind::PhaseCat;
  } else if (kind == "custom") {
    t.kind = TargetKind::Custom;
    if (!j.contains("c_plus") || !j.contains("c_minus")) {
      throw ConfigError(where + ": custom target needs c_plus and c_minus");
    }
    t.c_plus = complex_from(j["c_plus"], where + ".c_plus");
    t.c_minus = complex_from(j["c_minus"], where + ".c_minus");
  } else {
    throw ConfigError(where + ".kind: unknown target kind '" + kind + "'");
  }
  return t;
}

void require_sorted_nonempty(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty()) throw ConfigError(name + " must not be empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError(name + " must be sorted");
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError(name + " has a non-finite value");
  }
}

template <typename F>
void wrap(const std::string& what, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.resource.model = ExperimentalResource{3.0};
  cfg.conditioning = Conditioning{0.0, 0.0, 0.2, Efficiency(1.0), Acceptance::Window};
  cfg.targets = standard_targets(0.7);
  cfg.scan.q_grid = step_grid(-3.0, 3.0, 0.01);
  cfg.scan.eta_grid = step_grid(0.5, 1.0, 0.05);
  cfg.scan.delta_grid = step_grid(0.0, 0.5, 0.01);
  cfg.tomo.reconstruction.eta_correction = Efficiency(cfg.tomo.eta_detection);
  return cfg;
}

void RunConfig::validate() const {
  if (dim < 2) throw ConfigError("dim must be >= 2");
  if (dim_a < 2) throw ConfigError("dim_a must be >= 2");
  wrap("resource", [&] { resource.validate(); });
  wrap("conditioning", [&] { conditioning.validate(); });
  if (targets.empty()) throw ConfigError("targets must not be empty");
  for (const auto& t : targets) wrap("targets", [&] { t.validate(); });
  require_sorted_nonempty(scan.q_grid, "scan.q_grid_snu");
  require_sorted_nonempty(scan.eta_grid, "scan.eta_grid");
  require_sorted_nonempty(scan.delta_grid, "scan.delta_grid_snu");
  for (double e : scan.eta_grid) {
    if (e < 0.0 || e > 1.0) throw ConfigError("scan.eta_grid values must lie in [0, 1]");
  }
  if (scan.delta_grid.front() < 0.0) throw ConfigError("scan.delta_grid_snu must be >= 0");
  if (tomo.n_samples < 1) throw ConfigError("tomo.n_samples must be >= 1");
  if (!(tomo.eta_detection >= 0.0 && tomo.eta_detection <= 1.0)) {
    throw ConfigError("tomo.eta_detection must lie in [0, 1]");
  }
  wrap("tomo.target", [&] { tomo.target.validate(); });
  wrap("tomo", [&] { tomo.reconstruction.validate(); });
  if (!(wigner.step > 0.0) || !(wigner.x_max > wigner.x_min) || !(wigner.p_max > wigner.p_min)) {
    throw ConfigError("wigner grid must have step > 0 and max > min");
  }
  if (!(bloch_alpha > 0.0)) throw ConfigError("bloch_alpha must be > 0");
  if (!(base_rate_hz >= 0.0)) throw ConfigError("base_rate_hz must be >= 0");
  if (preset && (*preset < 1 || *preset > 6)) {
    throw ConfigError("preset must be between 1 and 6");
  }
}

json to_json(const RunConfig& cfg) {
  json resource;
  if (const auto* ideal = std::get_if<IdealResource>(&cfg.resource.model)) {
    resource = {{"model", "ideal"}, {"alpha", ideal->alpha}};
  } else {
    resource = {{"model", "experimental"},
                {"squeezing_db", std::get<ExperimentalResource>(cfg.resource.model).squeezing_db}};
  }
  resource["weight_dv"] = cfg.resource.weight_dv;

  json targets = json::array();
  for (const auto& t : cfg.targets) targets.push_back(target_json(t));

  const auto& rc = cfg.tomo.reconstruction;
  return {
      {"dim", cfg.dim},
      {"dim_a", cfg.dim_a},
      {"seed", cfg.seed},
      {"resource", resource},
      {"conditioning",
       {{"theta_rad", cfg.conditioning.theta},
        {"q_snu", cfg.conditioning.q},
        {"delta_snu", cfg.conditioning.delta},
        {"eta_a", cfg.conditioning.eta_a.value()},
        {"acceptance", cfg.conditioning.acceptance == Acceptance::Tail ? "tail" : "window"}}},
      {"targets", targets},
      {"scan",
       {{"q_grid_snu", cfg.scan.q_grid},
        {"eta_grid", cfg.scan.eta_grid},
        {"delta_grid_snu", cfg.scan.delta_grid}}},
      {"tomo",
       {{"target", target_json(cfg.tomo.target)},
        {"n_samples", cfg.tomo.n_samples},
        {"eta_detection", cfg.tomo.eta_detection},
        {"dim_recon", rc.dim_recon},
        {"eta_correction", rc.eta_correction.value()},
        {"bin_width_snu", rc.bin_width},
        {"phases_rad", rc.phase_set},
        {"max_iters", rc.max_iters},
        {"tol", rc.tol}}},
      {"wigner",
       {{"x_min_snu", cfg.wigner.x_min},
        {"x_max_snu", cfg.wigner.x_max},
        {"p_min_snu", cfg.wigner.p_min},
        {"p_max_snu", cfg.wigner.p_max},
        {"step_snu", cfg.wigner.step}}},
      {"bloch_alpha", cfg.bloch_alpha},
      {"base_rate_hz", cfg.base_rate_hz},
      {"preset", cfg.preset ? json(*cfg.preset) : json(nullptr)},
  };
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg = default_config();
  check_keys(j, "config",
             {"dim", "dim_a", "seed", "resource", "conditioning", "targets", "scan", "tomo",
              "wigner", "bloch_alpha", "base_rate_hz", "preset"});
  read(j, "dim", cfg.dim, "config");
  read(j, "dim_a", cfg.dim_a, "config");
  read(j, "seed", cfg.seed, "config");
  read(j, "bloch_alpha", cfg.bloch_alpha, "config");
  read(j, "base_rate_hz", cfg.base_rate_hz, "config");
  if (j.contains("preset")) {
    if (j["preset"].is_null()) {
      cfg.preset.reset();
    } else {
      int row = 0;
      read(j, "preset", row, "config");
      cfg.preset = row;
    }
  }

  if (j.contains("resource")) {
    const json& r = j["resource"];
    check_keys(r, "resource", {"model", "alpha", "squeezing_db", "weight_dv"});
    std::string model = "experimental";
    read(r, "model", model, "resource");
    if (model == "ideal") {
      IdealResource ideal;
      read(r, "alpha", ideal.alpha, "resource");
      cfg.resource.model = ideal;
    } else if (model == "experimental") {
      ExperimentalResource exp;
      read(r, "squeezing_db", exp.squeezing_db, "resource");
      cfg.resource.model = exp;
    } else {
      throw ConfigError("resource.model must be 'ideal' or 'experimental'");
    }
    read(r, "weight_dv", cfg.resource.weight_dv, "resource");
  }

  if (j.contains("conditioning")) {
    const json& c = j["conditioning"];
    check_keys(c, "conditioning", {"theta_rad", "q_snu", "delta_snu", "eta_a", "acceptance"});
    read(c, "theta_rad", cfg.conditioning.theta, "conditioning");
    read(c, "q_snu", cfg.conditioning.q, "conditioning");
    read(c, "delta_snu", cfg.conditioning.delta, "conditioning");
    double eta = cfg.conditioning.eta_a.value();
    read(c, "eta_a", eta, "conditioning");
    wrap("conditioning.eta_a", [&] { cfg.conditioning.eta_a = Efficiency(eta); });
    std::string acc = "window";
    read(c, "acceptance", acc, "conditioning");
    if (acc == "window") {
      cfg.conditioning.acceptance = Acceptance::Window;
    } else if (acc == "tail") {
      cfg.conditioning.acceptance = Acceptance::Tail;
    } else {
      throw ConfigError("conditioning.acceptance must be 'window' or 'tail'");
    }
  }

  if (j.contains("targets")) {
    if (!j["targets"].is_array()) throw ConfigError("targets must be an array");
    cfg.targets.clear();
    for (std::size_t i = 0; i < j["targets"].size(); ++i) {
      cfg.targets.push_back(target_from(j["targets"][i], "targets[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("scan")) {
    const json& s = j["scan"];
    check_keys(s, "scan", {"q_grid_snu", "eta_grid", "delta_grid_snu"});
    read(s, "q_grid_snu", cfg.scan.q_grid, "scan");
    read(s, "eta_grid", cfg.scan.eta_grid, "scan");
    read(s, "delta_grid_snu", cfg.scan.delta_grid, "scan");
  }

  if (j.contains("tomo")) {
    const json& t = j["tomo"];
    check_keys(t, "tomo",
               {"target", "n_samples", "eta_detection", "dim_recon", "eta_correction",
                "bin_width_snu", "phases_rad", "max_iters", "tol"});
    if (t.contains("target")) cfg.tomo.target = target_from(t["target"], "tomo.target");
    read(t, "n_samples", cfg.tomo.n_samples, "tomo");
    read(t, "eta_detection", cfg.tomo.eta_detection, "tomo");
    auto& rc = cfg.tomo.reconstruction;
    read(t, "dim_recon", rc.dim_recon, "tomo");
    double eta = rc.eta_correction.value();
    read(t, "eta_correction", eta, "tomo");
    wrap("tomo.eta_correction", [&] { rc.eta_correction = Efficiency(eta); });
    read(t, "bin_width_snu", rc.bin_width, "tomo");
    read(t, "phases_rad", rc.phase_set, "tomo");
    read(t, "max_iters", rc.max_iters, "tomo");
    read(t, "tol", rc.tol, "tomo");
  }

  if (j.contains("wigner")) {
    const json& w = j["wigner"];
    check_keys(w, "wigner", {"x_min_snu", "x_max_snu", "p_min_snu", "p_max_snu", "step_snu"});
    read(w, "x_min_snu", cfg.wigner.x_min, "wigner");
    read(w, "x_max_snu", cfg.wigner.x_max, "wigner");
    read(w, "p_min_snu", cfg.wigner.p_min, "wigner");
    read(w, "p_max_snu", cfg.wigner.p_max, "wigner");
    read(w, "step_snu", cfg.wigner.step, "wigner");
  }

  cfg.validate();
  return cfg;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

}  // namespace cvrsp
