#pragma once

// Protocol-level studies on top of the conditioning primitive: fidelity
// scans over Q, heralding efficiency and window width; placement of a
// prepared state on the {Cat+, Cat-} Bloch sphere; and bookkeeping for the
// published table of prepared states.

#include <span>
#include <string>
#include <vector>

#include "cvrsp/homodyne.hpp"
#include "cvrsp/states.hpp"

namespace cvrsp {

/// Entanglement heralding rate of the source, Hz.
inline constexpr double kHeraldingRateHz = 200e3;

enum class TargetKind { CatPlus, CatMinus, Coherent, PhaseCat, Custom };

struct TargetSpec {
  TargetKind kind = TargetKind::CatMinus;
  double alpha = 0.7;
  /// Coherent: +alpha or -alpha. PhaseCat: |alpha> + sign*i |-alpha>.
  int sign = +1;
  /// Custom: c_plus |Cat+> + c_minus |Cat->.
  cplx c_plus = 0.0;
  cplx c_minus = 0.0;

  void validate() const;
  std::string name() const;
  PureState build(int dim) const;

  static TargetSpec cat_plus(double alpha);
  static TargetSpec cat_minus(double alpha);
  static TargetSpec coherent(double alpha, int sign);
  static TargetSpec phase_cat(double alpha, int sign);
  static TargetSpec custom(double alpha, cplx c_plus, cplx c_minus);

  bool operator==(const TargetSpec&) const = default;
};

/// Cat+, Cat-, |+-alpha>, |alpha> +- i|-alpha>.
std::vector<TargetSpec> standard_targets(double alpha);

struct FidelityRow {
  double param = 0.0;
  std::string target;
  double fidelity = 0.0;
};

using FidelityTable = std::vector<FidelityRow>;

/// `param,target,fidelity` with 17 significant digits.
std::string to_csv(const FidelityTable& table);

/// Point projection (delta = 0) at each Q.
FidelityTable fidelity_vs_q(const TwoModeState& resource, double theta,
                            std::span<const double> q_grid, std::span<const TargetSpec> targets,
                            Efficiency eta_a = Efficiency(1.0));

/// Point projection at (Q, theta) for each heralding efficiency.
FidelityTable fidelity_vs_eta(const TwoModeState& resource, double q, double theta,
                              std::span<const double> eta_grid,
                              std::span<const TargetSpec> targets);

/// Window of width delta centred on Q for each delta; delta = 0 is the
/// point projection.
FidelityTable fidelity_vs_delta(const TwoModeState& resource, double theta, double q,
                                std::span<const double> delta_grid,
                                std::span<const TargetSpec> targets,
                                Efficiency eta_a = Efficiency(1.0));

/// Rows of `table` for one target, in table order.
FidelityTable select_target(const FidelityTable& table, const std::string& target);

/// Grid value with the largest fidelity for `target` (first on ties).
double argmax_param(const FidelityTable& table, const std::string& target);

struct PowerLawFit {
  double coefficient = 0.0;
  double exponent = 0.0;
  int points = 0;
};

/// Least squares of log y on log x; points with x <= 0 or y <= 0 are skipped.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// Fit F(0) - F(delta) = c delta^p over delta in [lo, hi] for one target
/// of a fidelity_vs_delta table (which must contain delta = 0).
PowerLawFit fidelity_drop_fit(const FidelityTable& delta_table, const std::string& target,
                              double lo = 0.05, double hi = 0.4);

struct BlochCoords {
  double polar = 0.0;    ///< [0, pi], 0 is Cat+
  double azimuth = 0.0;  ///< [0, 2 pi)
  double d = 0.0;        ///< sqrt(max(2 purity - 1, 0))
};

struct BlochEmbedding {
  BlochCoords coords;
  double fidelity = 0.0;       ///< refined optimum
  double grid_fidelity = 0.0;  ///< best value on the coarse grid
  double subspace_weight = 0.0;
  double purity = 0.0;
};

/// cos(polar/2)|Cat+> + e^{i azimuth} sin(polar/2)|Cat->.
PureState bloch_state(double polar, double azimuth, double alpha, int dim);

/// Maximizes F(rho, bloch_state) on a 64 x 128 angular grid, then refines
/// by compass search down to 1e-6 rad.
BlochEmbedding bloch_embed(const MixedState& rho, double alpha);

/// success_prob * base_rate_hz.
double heralded_rate(double success_prob, double base_rate_hz = kHeraldingRateHz);

struct PublishedPreset {
  int index = 0;
  TargetSpec target;
  Conditioning conditioning;
  double published_fidelity = 0.0;
  double published_rate_hz = 0.0;
};

/// The six published preparations. Theta is expressed in this library's
/// orientation (<q_theta|1> = e^{i theta} psi_1), which is the published
/// value for rows 1-4 and its negative for rows 5-6.
std::vector<PublishedPreset> published_presets(double alpha = 0.7);

}  // namespace cvrsp
