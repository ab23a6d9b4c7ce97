#include "cvrsp/rsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "cvrsp/parallel.hpp"

namespace cvrsp {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<PureState> build_targets(std::span<const TargetSpec> targets, int dim) {
  if (targets.empty()) throw std::invalid_argument("target list is empty");
  std::vector<PureState> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(t.build(dim));
  return out;
}

/// One row per (grid value, target), grid-major; each grid point evaluated
/// independently so the scan can run in parallel.
template <typename Prepare>
FidelityTable scan(std::span<const double> grid, std::span<const TargetSpec> targets, int dim,
                   Prepare prepare) {
  const auto states = build_targets(targets, dim);
  FidelityTable table(grid.size() * targets.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const MixedState rho = prepare(grid[i]);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      table[i * targets.size() + t] = {grid[i], targets[t].name(), fidelity(rho, states[t])};
    }
  });
  return table;
}

double wrap_azimuth(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

}  // namespace

void TargetSpec::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("target alpha must be > 0");
  if ((kind == TargetKind::Coherent || kind == TargetKind::PhaseCat) && sign != 1 && sign != -1) {
    throw std::invalid_argument("target sign must be +1 or -1");
  }
  if (kind == TargetKind::Custom) {
    const double n = std::norm(c_plus) + std::norm(c_minus);
    if (std::abs(n - 1.0) > 1e-9) {
      throw std::invalid_argument("custom target coefficients must satisfy |c+|^2 + |c-|^2 = 1");
    }
  }
}

std::string TargetSpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case TargetKind::CatPlus: os << "cat_plus"; break;
    case TargetKind::CatMinus: os << "cat_minus"; break;
    case TargetKind::Coherent: os << (sign > 0 ? "coherent_plus" : "coherent_minus"); break;
    case TargetKind::PhaseCat: os << (sign > 0 ? "phase_cat_plus_i" : "phase_cat_minus_i"); break;
    case TargetKind::Custom:
      os << "custom(" << format_double(c_plus.real()) << "," << format_double(c_plus.imag())
         << ";" << format_double(c_minus.real()) << "," << format_double(c_minus.imag()) << ")";
      break;
  }
  os << "@" << alpha;
  return os.str();
}

PureState TargetSpec::build(int dim) const {
  validate();
  switch (kind) {
    case TargetKind::CatPlus: return cat(alpha, Parity::Even, dim);
    case TargetKind::CatMinus: return cat(alpha, Parity::Odd, dim);
    case TargetKind::Coherent: return cvrsp::coherent(sign * alpha, dim);
    case TargetKind::PhaseCat:
      return PureState(cvrsp::coherent(alpha, dim).amplitudes() +
                       cplx(0.0, sign) * cvrsp::coherent(-alpha, dim).amplitudes());
    case TargetKind::Custom:
      return PureState(c_plus * cat(alpha, Parity::Even, dim).amplitudes() +
                       c_minus * cat(alpha, Parity::Odd, dim).amplitudes());
  }
  throw std::logic_error("unknown target kind");
}

TargetSpec TargetSpec::cat_plus(double alpha) { return {TargetKind::CatPlus, alpha}; }
TargetSpec TargetSpec::cat_minus(double alpha) { return {TargetKind::CatMinus, alpha}; }
TargetSpec TargetSpec::coherent(double alpha, int sign) {
  return {TargetKind::Coherent, alpha, sign};
}
TargetSpec TargetSpec::phase_cat(double alpha, int sign) {
  return {TargetKind::PhaseCat, alpha, sign};
}
TargetSpec TargetSpec::custom(double alpha, cplx c_plus, cplx c_minus) {
  return {TargetKind::Custom, alpha, 1, c_plus, c_minus};
}

std::vector<TargetSpec> standard_targets(double alpha) {
  return {TargetSpec::cat_plus(alpha),        TargetSpec::cat_minus(alpha),
          TargetSpec::coherent(alpha, +1),    TargetSpec::coherent(alpha, -1),
          TargetSpec::phase_cat(alpha, +1),   TargetSpec::phase_cat(alpha, -1)};
}

std::string to_csv(const FidelityTable& table) {
  std::string out = "param,target,fidelity\n";
  for (const auto& row : table) {
    out += format_double(row.param) + "," + row.target + "," + format_double(row.fidelity) + "\n";
  }
  return out;
}

FidelityTable fidelity_vs_q(const TwoModeState& resource, double theta,
                            std::span<const double> q_grid, std::span<const TargetSpec> targets,
                            Efficiency eta_a) {
  return scan(q_grid, targets, resource.dim_b(), [&](double q) {
    return condition(resource, Conditioning{theta, q, 0.0, eta_a}).rho_b;
  });
}

FidelityTable fidelity_vs_eta(const TwoModeState& resource, double q, double theta,
                              std::span<const double> eta_grid,
                              std::span<const TargetSpec> targets) {
  return scan(eta_grid, targets, resource.dim_b(), [&](double eta) {
    return condition(resource, Conditioning{theta, q, 0.0, Efficiency(eta)}).rho_b;
  });
}

FidelityTable fidelity_vs_delta(const TwoModeState& resource, double theta, double q,
                                std::span<const double> delta_grid,
                                std::span<const TargetSpec> targets, Efficiency eta_a) {
  return scan(delta_grid, targets, resource.dim_b(), [&](double delta) {
    return condition(resource, Conditioning{theta, q, delta, eta_a}).rho_b;
  });
}

FidelityTable select_target(const FidelityTable& table, const std::string& target) {
  FidelityTable out;
  std::copy_if(table.begin(), table.end(), std::back_inserter(out),
               [&](const FidelityRow& r) { return r.target == target; });
  return out;
}

double argmax_param(const FidelityTable& table, const std::string& target) {
  const FidelityTable rows = select_target(table, target);
  if (rows.empty()) throw std::invalid_argument("no rows for target " + target);
  const auto best = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.fidelity < b.fidelity;
  });
  return best->param;
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw NumericalError("power-law fit needs at least two positive points");
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw NumericalError("power-law fit: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), slope, n};
}

PowerLawFit fidelity_drop_fit(const FidelityTable& delta_table, const std::string& target,
                              double lo, double hi) {
  const FidelityTable rows = select_target(delta_table, target);
  const auto zero = std::find_if(rows.begin(), rows.end(),
                                 [](const FidelityRow& r) { return r.param == 0.0; });
  if (zero == rows.end()) throw std::invalid_argument("delta scan lacks the delta = 0 entry");
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.param >= lo - 1e-12 && r.param <= hi + 1e-12) {
      xs.push_back(r.param);
      ys.push_back(zero->fidelity - r.fidelity);
    }
  }
  return fit_power_law(xs, ys);
}

PureState bloch_state(double polar, double azimuth, double alpha, int dim) {
  return PureState(std::cos(0.5 * polar) * cat(alpha, Parity::Even, dim).amplitudes() +
                   std::polar(std::sin(0.5 * polar), azimuth) *
                       cat(alpha, Parity::Odd, dim).amplitudes());
}

BlochEmbedding bloch_embed(const MixedState& rho, double alpha) {
  const int dim = rho.dim();
  const Vector plus = cat(alpha, Parity::Even, dim).amplitudes();
  const Vector minus = cat(alpha, Parity::Odd, dim).amplitudes();
  // rho compressed onto span{Cat+, Cat-}; the fidelity with any Bloch
  // state is the quadratic form of this 2x2 block.
  const cplx m00 = plus.dot(rho.matrix() * plus);
  const cplx m01 = plus.dot(rho.matrix() * minus);
  const cplx m11 = minus.dot(rho.matrix() * minus);
  auto objective = [&](double polar, double azimuth) {
    const double c = std::cos(0.5 * polar);
    const double s = std::sin(0.5 * polar);
    return c * c * m00.real() + s * s * m11.real() +
           2.0 * c * s * (m01 * std::polar(1.0, azimuth)).real();
  };

  constexpr int kPolarSteps = 64;
  constexpr int kAzimuthSteps = 128;
  const double dpolar = kPi / (kPolarSteps - 1);
  const double dazimuth = 2.0 * kPi / kAzimuthSteps;
  double best_polar = 0.0;
  double best_azimuth = 0.0;
  double best = -1.0;
  for (int i = 0; i < kPolarSteps; ++i) {
    for (int j = 0; j < kAzimuthSteps; ++j) {
      const double f = objective(i * dpolar, j * dazimuth);
      if (f > best) {
        best = f;
        best_polar = i * dpolar;
        best_azimuth = j * dazimuth;
      }
    }
  }
  const double grid_best = best;

  double step_polar = dpolar;
  double step_azimuth = dazimuth;
  while (step_polar > 1e-6 || step_azimuth > 1e-6) {
    bool moved = false;
    const double cand[4][2] = {{best_polar + step_polar, best_azimuth},
                               {best_polar - step_polar, best_azimuth},
                               {best_polar, best_azimuth + step_azimuth},
                               {best_polar, best_azimuth - step_azimuth}};
    for (const auto& c : cand) {
      const double polar = std::clamp(c[0], 0.0, kPi);
      const double azimuth = wrap_azimuth(c[1]);
      const double f = objective(polar, azimuth);
      if (f > best) {
        best = f;
        best_polar = polar;
        best_azimuth = azimuth;
        moved = true;
      }
    }
    if (!moved) {
      step_polar *= 0.5;
      step_azimuth *= 0.5;
    }
  }

  BlochEmbedding out;
  out.purity = purity(rho);
  out.coords = {best_polar, wrap_azimuth(best_azimuth),
                std::sqrt(std::max(2.0 * out.purity - 1.0, 0.0))};
  out.fidelity = std::clamp(best, 0.0, 1.0);
  out.grid_fidelity = std::clamp(grid_best, 0.0, 1.0);
  out.subspace_weight = m00.real() + m11.real();
  return out;
}

double heralded_rate(double success_prob, double base_rate_hz) {
  if (!(success_prob >= 0.0) || !(base_rate_hz >= 0.0)) {
    throw std::invalid_argument("heralded_rate: inputs must be nonnegative");
  }
  return success_prob * base_rate_hz;
}

std::vector<PublishedPreset> published_presets(double alpha) {
  const double theta_phase = 1.5 * kPi;
  auto window = [](double q, double theta) {
    return Conditioning{theta, q, 0.2, Efficiency(1.0), Acceptance::Window};
  };
  return {
      {1, TargetSpec::cat_plus(alpha),
       Conditioning{0.0, 2.0, 0.0, Efficiency(1.0), Acceptance::Tail}, 0.86, 13.8e3},
      {2, TargetSpec::cat_minus(alpha), window(0.0, 0.0), 0.65, 9.6e3},
      {3, TargetSpec::coherent(alpha, +1), window(1.14, 0.0), 0.85, 9.4e3},
      {4, TargetSpec::coherent(alpha, -1), window(-1.14, 0.0), 0.85, 9.4e3},
      {5, TargetSpec::phase_cat(alpha, +1), window(-1.14, theta_phase), 0.81, 9.4e3},
      {6, TargetSpec::phase_cat(alpha, -1), window(1.14, theta_phase), 0.80, 9.4e3},
  };
}

}  // namespace cvrsp
