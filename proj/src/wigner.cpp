#include "cvrsp/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "cvrsp/parallel.hpp"

namespace cvrsp {

namespace {

constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// W = (1/2pi) Tr[rho D(beta) Pi] with beta = x + i p (= 2 alpha) and Pi the
// parity. With y = |beta|^2 and the normalized Laguerre functions
//   g_m^k(y) = sqrt(m!/(m+k)!) y^{k/2} e^{-y/2} L_m^k(y),
// the matrix elements are <m+k|D(beta)Pi|m> = (-1)^m e^{ik phi} g_m^k and
// <m|D(beta)Pi|m+k> = (-1)^m e^{-ik phi} g_m^k, phi = arg(beta).
double wigner_point(const MixedState& rho, double x, double p) {
  const int dim = rho.dim();
  const Matrix& r = rho.matrix();
  const double y = x * x + p * p;
  const double phi = std::atan2(p, x);
  const double sqrt_y = std::sqrt(y);

  double total = 0.0;
  double g0k = std::exp(-0.5 * y);  // g_0^k, advanced in k
  for (int k = 0; k < dim; ++k) {
    if (k > 0) g0k *= sqrt_y / std::sqrt(static_cast<double>(k));
    const cplx phase = std::polar(1.0, k * phi);
    // g_{m+1} = [(2m+1+k-y) g_m - sqrt(m (m+k)) g_{m-1}] / sqrt((m+1)(m+1+k))
    double g_prev = 0.0;
    double g = g0k;
    for (int m = 0; m + k < dim; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      if (k == 0) {
        total += sign * g * r(m, m).real();
      } else {
        total += 2.0 * sign * g * (r(m, m + k) * phase).real();
      }
      const double next =
          ((2.0 * m + 1.0 + k - y) * g -
           std::sqrt(static_cast<double>(m) * (m + k)) * g_prev) /
          std::sqrt((m + 1.0) * (m + 1.0 + k));
      g_prev = g;
      g = next;
    }
  }
  return kInvTwoPi * total;
}

double wigner_origin_parity(const MixedState& rho) {
  double parity = 0.0;
  for (int n = 0; n < rho.dim(); ++n) parity += (n % 2 == 0 ? 1.0 : -1.0) * rho(n, n).real();
  return kInvTwoPi * parity;
}

double WignerGrid::integral() const {
  if (xs.size() < 2 || ps.size() < 2) return 0.0;
  const double dx = (xs.back() - xs.front()) / (xs.size() - 1);
  const double dp = (ps.back() - ps.front()) / (ps.size() - 1);
  double acc = 0.0;
  for (const auto& row : values) {
    for (double v : row) acc += v;
  }
  return acc * dx * dp;
}

std::vector<double> WignerGrid::x_marginal() const {
  std::vector<double> out(xs.size(), 0.0);
  if (ps.size() < 2) return out;
  const double dp = (ps.back() - ps.front()) / (ps.size() - 1);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double w = (i == 0 || i + 1 == ps.size()) ? 0.5 * dp : dp;
    for (std::size_t j = 0; j < xs.size(); ++j) out[j] += w * values[i][j];
  }
  return out;
}

WignerGrid wigner_grid(const MixedState& rho, const std::vector<double>& xs,
                       const std::vector<double>& ps) {
  if (xs.empty() || ps.empty()) throw std::invalid_argument("wigner_grid: empty axis");
  WignerGrid grid{xs, ps, std::vector<std::vector<double>>(ps.size())};
  parallel_for(ps.size(), [&](std::size_t i) {
    auto& row = grid.values[i];
    row.resize(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) row[j] = wigner_point(rho, xs[j], ps[i]);
  });
  return grid;
}

bool grid_adequate(const WignerGrid& grid, const MixedState& rho) {
  if (grid.xs.size() < 2 || grid.ps.size() < 2) return false;
  const double dx = (grid.xs.back() - grid.xs.front()) / (grid.xs.size() - 1);
  const double dp = (grid.ps.back() - grid.ps.front()) / (grid.ps.size() - 1);
  // <a> -> mean (x, p) = (2 Re<a>, 2 Im<a>)
  cplx mean_a = 0.0;
  for (int n = 1; n < rho.dim(); ++n) mean_a += std::sqrt(static_cast<double>(n)) * rho(n, n - 1);
  const double mx = 2.0 * mean_a.real();
  const double mp = 2.0 * mean_a.imag();
  const double slack = 1e-9;
  return dx <= 0.1 + slack && dp <= 0.1 + slack && grid.xs.front() <= mx - 6.0 + slack &&
         grid.xs.back() >= mx + 6.0 - slack && grid.ps.front() <= mp - 6.0 + slack &&
         grid.ps.back() >= mp + 6.0 - slack;
}

double negativity_min(const WignerGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& row : grid.values) {
    for (double v : row) lo = std::min(lo, v);
  }
  return lo;
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("linspace_step: bad range");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = lo + (hi - lo) * (n == 0 ? 0.0 : double(i) / n);
  return out;
}

std::string to_csv(const WignerGrid& grid) {
  std::string out = "x";
  for (double x : grid.xs) out += "," + format_double(x);
  out += "\np";
  for (double p : grid.ps) out += "," + format_double(p);
  out += "\n";
  for (const auto& row : grid.values) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ",";
      out += format_double(row[j]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json wigner_metadata(const WignerGrid& grid, const MixedState& rho,
                               const std::string& descriptor) {
  return {
      {"convention", kWignerConvention},
      {"layout", "row 1: x values; row 2: p values; then one row of W per p value"},
      {"dim", rho.dim()},
      {"state", descriptor},
      {"nx", grid.xs.size()},
      {"np", grid.ps.size()},
      {"x_range", {grid.xs.front(), grid.xs.back()}},
      {"p_range", {grid.ps.front(), grid.ps.back()}},
      {"integral", grid.integral()},
      {"min", negativity_min(grid)},
      {"origin_parity_value", wigner_origin_parity(rho)},
      {"grid_adequate", grid_adequate(grid, rho)},
  };
}

}  // namespace cvrsp
