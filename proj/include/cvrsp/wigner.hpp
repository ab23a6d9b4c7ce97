#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvrsp/fock.hpp"

namespace cvrsp {

/// Phase-space coordinates are in shot-noise units, x = <a + a^dag>,
/// p = <-i(a - a^dag)>, and W integrates to one over dx dp (vacuum peak
/// 1/(2 pi)).
inline constexpr const char* kWignerConvention =
    "x=a+adag, p=-i(a-adag), shot-noise units, integral W dx dp = 1";

double wigner_point(const MixedState& rho, double x, double p);

/// (1/2pi) Tr[rho (-1)^n], the value at the origin.
double wigner_origin_parity(const MixedState& rho);

struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ps;
  /// values[i][j] = W(xs[j], ps[i]); one row per p.
  std::vector<std::vector<double>> values;

  /// Riemann sum with uniform spacing taken from the grids.
  double integral() const;
  /// Trapezoid integral over p for each x.
  std::vector<double> x_marginal() const;
};

WignerGrid wigner_grid(const MixedState& rho, const std::vector<double>& xs,
                       const std::vector<double>& ps);

/// True when the grid is fine and wide enough for the unit-normalization
/// check (step <= 0.1 and spanning +-6 about the state's mean).
bool grid_adequate(const WignerGrid& grid, const MixedState& rho);

double negativity_min(const WignerGrid& grid);

/// lo, lo + step, ..., hi (inclusive, rounded to the nearest count).
std::vector<double> linspace_step(double lo, double hi, double step);

/// Header rows "x,..." and "p,...", then one row of W per p value.
std::string to_csv(const WignerGrid& grid);

nlohmann::json wigner_metadata(const WignerGrid& grid, const MixedState& rho,
                               const std::string& descriptor);

}  // namespace cvrsp
