#include "cvrsp/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "cvrsp/wigner.hpp"

namespace cvrsp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
}

json matrix_json(const Matrix& m) {
  json entries = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return entries;
}

json conditioning_json(const Conditioning& c) {
  return {{"theta_rad", c.theta},
          {"q_snu", c.q},
          {"delta_snu", c.delta},
          {"eta_a", c.eta_a.value()},
          {"acceptance", c.acceptance == Acceptance::Tail ? "tail" : "window"}};
}

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

TwoModeState build_resource(const RunConfig& cfg) {
  return hybrid_entangled(cfg.resource, cfg.dim_a, cfg.dim);
}

void cmd_scan(const RunConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  prepare_dir(out_dir);
  const TwoModeState resource = build_resource(cfg);
  const Conditioning& c = cfg.conditioning;
  write_file(out_dir / "fig1c.csv",
             to_csv(fidelity_vs_q(resource, c.theta, cfg.scan.q_grid, cfg.targets, c.eta_a)));
  write_file(out_dir / "fig1d.csv",
             to_csv(fidelity_vs_eta(resource, c.q, c.theta, cfg.scan.eta_grid, cfg.targets)));
  write_file(out_dir / "fig1e.csv", to_csv(fidelity_vs_delta(resource, c.theta, c.q,
                                                             cfg.scan.delta_grid, cfg.targets,
                                                             c.eta_a)));
}

void cmd_prepare(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  prepare_dir(out_dir);

  Conditioning cond = cfg.conditioning;
  std::vector<TargetSpec> targets = cfg.targets;
  std::optional<PublishedPreset> preset;
  if (cfg.preset) {
    preset = published_presets(cfg.bloch_alpha).at(*cfg.preset - 1);
    // keep the configured heralding efficiency
    cond = Conditioning{preset->conditioning.theta, preset->conditioning.q,
                        preset->conditioning.delta, cfg.conditioning.eta_a,
                        preset->conditioning.acceptance};
    targets.insert(targets.begin(), preset->target);
  }

  const TwoModeState resource = build_resource(cfg);
  const PreparedState prepared = condition(resource, cond);
  const double rate = heralded_rate(prepared.success_prob, cfg.base_rate_hz);

  json fids = json::array();
  for (const auto& t : targets) {
    fids.push_back({{"target", t.name()}, {"fidelity", fidelity(prepared.rho_b, t.build(cfg.dim))}});
  }
  json state = {
      {"dim", prepared.rho_b.dim()},
      {"rho", matrix_json(prepared.rho_b.matrix())},
      {"conditioning", conditioning_json(cond)},
      {"success_prob", prepared.success_prob},
      {"success_is_density", prepared.success_is_density},
      {"heralded_rate_hz", rate},
      {"base_rate_hz", cfg.base_rate_hz},
      {"purity", purity(prepared.rho_b)},
      {"mean_photon_number", mean_photon_number(prepared.rho_b)},
      {"fidelities", fids},
  };
  if (prepared.success_is_density) {
    state["note"] =
        "point projection: success_prob is an outcome density per unit shot-noise width";
  }
  if (preset) {
    state["published"] = {{"row", preset->index},
                          {"target", preset->target.name()},
                          {"fidelity_experimental", preset->published_fidelity},
                          {"rate_hz_experimental", preset->published_rate_hz},
                          {"note", "measured values, shown for comparison only"}};
  }
  write_file(out_dir / "state.json", state.dump(2) + "\n");

  const BlochEmbedding bloch = bloch_embed(prepared.rho_b, cfg.bloch_alpha);
  const json bloch_json = {{"alpha", cfg.bloch_alpha},
                           {"polar_rad", bloch.coords.polar},
                           {"azimuth_rad", bloch.coords.azimuth},
                           {"d", bloch.coords.d},
                           {"fidelity", bloch.fidelity},
                           {"grid_fidelity", bloch.grid_fidelity},
                           {"subspace_weight", bloch.subspace_weight},
                           {"purity", bloch.purity}};
  write_file(out_dir / "bloch.json", bloch_json.dump(2) + "\n");

  const auto xs = linspace_step(cfg.wigner.x_min, cfg.wigner.x_max, cfg.wigner.step);
  const auto ps = linspace_step(cfg.wigner.p_min, cfg.wigner.p_max, cfg.wigner.step);
  const WignerGrid grid = wigner_grid(prepared.rho_b, xs, ps);
  write_file(out_dir / "wigner.csv", to_csv(grid));
  write_file(out_dir / "wigner.json",
             wigner_metadata(grid, prepared.rho_b, "prepared state").dump(2) + "\n");
  if (!grid_adequate(grid, prepared.rho_b)) {
    log << "warning: Wigner grid is too coarse or narrow for the unit-normalization check\n";
  }

  log << "success probability " << fmt(prepared.success_prob, "%.5g")
      << (prepared.success_is_density ? " (density)" : "") << ", heralded rate "
      << fmt(rate / 1e3, "%.3f") << " kHz\n";
  log << "bloch: polar " << fmt(bloch.coords.polar) << " rad, azimuth "
      << fmt(bloch.coords.azimuth) << " rad, d " << fmt(bloch.coords.d) << "\n";
  for (const auto& f : fids) {
    log << "  F[" << f["target"].get<std::string>() << "] = " << fmt(f["fidelity"].get<double>())
        << "\n";
  }
  if (preset) {
    log << "simulated vs published (row " << preset->index << ", " << preset->target.name()
        << "): F " << fmt(fids[0]["fidelity"].get<double>()) << " vs "
        << fmt(preset->published_fidelity, "%.2f") << " (experimental), rate "
        << fmt(rate / 1e3, "%.2f") << " kHz vs " << fmt(preset->published_rate_hz / 1e3, "%.1f")
        << " kHz (experimental)\n";
  }
}

void cmd_tomo(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  prepare_dir(out_dir);
  const auto& rc = cfg.tomo.reconstruction;
  const PureState truth = cfg.tomo.target.build(cfg.dim);
  const auto records = sample_homodyne(MixedState(truth), rc.phase_set, cfg.tomo.n_samples,
                                       Efficiency(cfg.tomo.eta_detection), cfg.seed);
  {
    std::ofstream os(out_dir / "records.csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot open records.csv for writing");
    write_records_csv(os, records);
  }
  const MleResult recon = mle_reconstruct(records, rc);
  write_file(out_dir / "recon.json", reconstruction_json(recon).dump(2) + "\n");

  const PureState truth_small = resize(truth, rc.dim_recon);
  const double f = fidelity(recon.rho, truth_small);
  const json report = {
      {"target", cfg.tomo.target.name()},
      {"n_samples", cfg.tomo.n_samples},
      {"eta_detection", cfg.tomo.eta_detection},
      {"eta_correction", rc.eta_correction.value()},
      {"dim_recon", rc.dim_recon},
      {"seed", cfg.seed},
      {"fidelity", f},
      {"wigner_origin", wigner_point(recon.rho, 0.0, 0.0)},
      {"wigner_origin_truth", wigner_point(MixedState(truth), 0.0, 0.0)},
      {"iterations", recon.iterations},
      {"converged", recon.converged},
      {"log_likelihood", recon.log_likelihood},
  };
  write_file(out_dir / "report.json", report.dump(2) + "\n");
  log << "tomography of " << cfg.tomo.target.name() << ": F = " << fmt(f, "%.5f")
      << ", W(0,0) = " << fmt(wigner_point(recon.rho, 0.0, 0.0), "%.5f") << ", "
      << recon.iterations << " iterations" << (recon.converged ? "" : " (not converged)") << "\n";
}

}  // namespace cvrsp
