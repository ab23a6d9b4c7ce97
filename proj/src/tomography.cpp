#include "cvrsp/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "cvrsp/homodyne.hpp"
#include "cvrsp/parallel.hpp"
#include "cvrsp/quadrature.hpp"

namespace cvrsp {

namespace {

constexpr double kCdfStep = 1e-3;
constexpr std::size_t kChunk = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct CdfTable {
  std::vector<double> qs;
  std::vector<double> cdf;

  double invert(double u) const {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return qs.front();
    if (it == cdf.end()) return qs.back();
    const auto i = static_cast<std::size_t>(it - cdf.begin());
    const double c0 = cdf[i - 1];
    const double c1 = cdf[i];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return qs[i - 1] + t * (qs[i] - qs[i - 1]);
  }
};

CdfTable build_cdf(const MixedState& rho, double theta) {
  const Marginal m(rho, theta);
  const std::size_t n =
      static_cast<std::size_t>(std::llround(2.0 * kQuadratureCutoff / kCdfStep)) + 1;
  CdfTable t;
  t.qs.resize(n);
  t.cdf.resize(n);
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.qs[i] = -kQuadratureCutoff + i * kCdfStep;
    dens[i] = m(t.qs[i]);
  }
  t.cdf[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    t.cdf[i] = t.cdf[i - 1] + 0.5 * kCdfStep * (dens[i] + dens[i - 1]);
  }
  const double total = t.cdf.back();
  if (!(total > 0.0)) throw NumericalError("homodyne marginal has no mass on [-10, 10]");
  for (double& c : t.cdf) c /= total;
  return t;
}

/// Binned counts and the POVM elements of the occupied bins.
struct BinnedProblem {
  std::vector<Matrix> povm;
  std::vector<double> freq;
  std::size_t total = 0;
};

std::size_t phase_index(double theta, std::span<const double> phases) {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (std::abs(theta - phases[i]) <= 1e-9) return i;
  }
  throw std::invalid_argument("record phase " + std::to_string(theta) +
                              " is not in the configured phase set");
}

BinnedProblem bin_records(std::span<const HomodyneRecord> records, const TomoConfig& cfg) {
  cfg.validate();
  if (records.empty()) throw std::invalid_argument("no homodyne records to reconstruct from");

  const double lo = -kQuadratureCutoff;
  const int n_bins = static_cast<int>(std::ceil(2.0 * kQuadratureCutoff / cfg.bin_width - 1e-9));
  const int overflow = n_bins;
  const std::size_t n_phases = cfg.phase_set.size();
  std::vector<std::vector<std::size_t>> counts(n_phases,
                                               std::vector<std::size_t>(n_bins + 1, 0));
  for (const auto& r : records) {
    if (!std::isfinite(r.q) || !std::isfinite(r.theta)) {
      throw std::invalid_argument("non-finite homodyne record");
    }
    const std::size_t ph = phase_index(r.theta, cfg.phase_set);
    int bin = overflow;
    if (std::abs(r.q) <= kQuadratureCutoff) {
      bin = std::min(n_bins - 1, static_cast<int>(std::floor((r.q - lo) / cfg.bin_width)));
    }
    ++counts[ph][bin];
  }

  std::size_t occupied = 0;
  for (const auto& row : counts) {
    occupied += std::count_if(row.begin(), row.end(), [](std::size_t c) { return c > 0; });
  }
  if (occupied < 2) {
    throw NumericalError("all homodyne counts fall in a single bin; likelihood is degenerate");
  }

  // Phase-independent bin operators B_i[m][n] = int_bin psi_m psi_n, then
  // pushed through the loss adjoint (which commutes with phase rotation).
  const int d = cfg.dim_recon;
  std::vector<bool> bin_used(n_bins + 1, false);
  for (const auto& row : counts) {
    for (int b = 0; b <= n_bins; ++b) bin_used[b] = bin_used[b] || row[b] > 0;
  }
  std::vector<Matrix> base(n_bins + 1);
  Matrix covered = Matrix::Zero(d, d);
  for (int b = 0; b < n_bins; ++b) {
    const double a = lo + b * cfg.bin_width;
    const double e = std::min(kQuadratureCutoff, a + cfg.bin_width);
    const QuadratureRule rule = composite_rule(a, e, 21, 0.5);
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < rule.points.size(); ++j) {
      const auto psi = quad_wavefunctions(d, rule.points[j]);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) m(r, c) += rule.weights[j] * psi[r] * psi[c];
      }
    }
    covered += m;
    base[b] = std::move(m);
  }
  base[overflow] = Matrix::Identity(d, d) - covered;
  for (int b = 0; b <= n_bins; ++b) {
    if (bin_used[b]) base[b] = loss_adjoint(base[b], cfg.eta_correction);
  }

  BinnedProblem prob;
  prob.total = records.size();
  for (std::size_t ph = 0; ph < n_phases; ++ph) {
    // Pi_theta[m][n] = e^{-i m theta} B[m][n] e^{i n theta}
    Vector u(d);
    for (int m = 0; m < d; ++m) u(m) = std::polar(1.0, -m * cfg.phase_set[ph]);
    for (int b = 0; b <= n_bins; ++b) {
      if (counts[ph][b] == 0) continue;
      prob.povm.push_back(u.asDiagonal() * base[b] * u.conjugate().asDiagonal());
      prob.freq.push_back(static_cast<double>(counts[ph][b]) / prob.total);
    }
  }
  return prob;
}

double bin_probability(const Matrix& rho, const Matrix& povm) {
  // Tr[rho Pi] = sum conj(rho_mn) Pi_mn for Hermitian rho
  return (rho.conjugate().cwiseProduct(povm)).sum().real();
}

// The overflow element is closed as I - sum(bins), so its probability for
// any state here is rounding noise of either sign. Anything below this is zero.
constexpr double kProbabilityFloor = 1e-14;

double likelihood_of(const Matrix& rho, const BinnedProblem& prob) {
  double ll = 0.0;
  for (std::size_t j = 0; j < prob.povm.size(); ++j) {
    const double p = bin_probability(rho, prob.povm[j]);
    if (!(p > kProbabilityFloor)) return -std::numeric_limits<double>::infinity();
    ll += prob.freq[j] * std::log(p);
  }
  return ll;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> default_phase_set(int n) {
  if (n < 1) throw std::invalid_argument("phase set needs at least one phase");
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = k * std::numbers::pi / n;
  return out;
}

void TomoConfig::validate() const {
  if (dim_recon < 2) throw std::invalid_argument("dim_recon must be >= 2");
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (phase_set.empty()) throw std::invalid_argument("phase set is empty");
}

std::vector<HomodyneRecord> sample_homodyne(const MixedState& rho,
                                            std::span<const double> phase_set, int n_samples,
                                            Efficiency eta, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (phase_set.empty()) throw std::invalid_argument("phase set is empty");
  const MixedState lossy = loss_channel(rho, eta);
  std::vector<CdfTable> tables(phase_set.size());
  parallel_for(phase_set.size(), [&](std::size_t i) { tables[i] = build_cdf(lossy, phase_set[i]); });

  const auto n = static_cast<std::size_t>(n_samples);
  std::vector<HomodyneRecord> out(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c + 1)));
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto ph = std::min(phase_set.size() - 1,
                               static_cast<std::size_t>(unit_uniform(rng) * phase_set.size()));
      out[i] = {phase_set[ph], tables[ph].invert(unit_uniform(rng))};
    }
  });
  return out;
}

MleResult mle_reconstruct(std::span<const HomodyneRecord> records, const TomoConfig& cfg) {
  const BinnedProblem prob = bin_records(records, cfg);
  const int d = cfg.dim_recon;
  Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);

  std::vector<double> history;
  double ll = likelihood_of(rho, prob);
  bool converged = false;
  int iter = 0;
  while (iter < cfg.max_iters) {
    history.push_back(ll);
    Matrix r = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < prob.povm.size(); ++j) {
      const double p = bin_probability(rho, prob.povm[j]);
      if (p > kProbabilityFloor) r += (prob.freq[j] / p) * prob.povm[j];
    }
    Matrix next = r * rho * r;
    next = 0.5 * (next + next.adjoint()).eval();
    next /= next.trace().real();
    rho = std::move(next);
    ++iter;
    const double next_ll = likelihood_of(rho, prob);
    const double gain = next_ll - ll;
    ll = next_ll;
    if (std::abs(gain) < cfg.tol) {
      converged = true;
      break;
    }
  }
  history.push_back(ll);
  return MleResult{MixedState(std::move(rho)), iter, ll, converged, std::move(history)};
}

double log_likelihood(const MixedState& rho, std::span<const HomodyneRecord> records,
                      const TomoConfig& cfg) {
  if (rho.dim() != cfg.dim_recon) {
    throw std::invalid_argument("log_likelihood: state dimension differs from dim_recon");
  }
  return likelihood_of(rho.matrix(), bin_records(records, cfg));
}

void write_records_csv(std::ostream& os, std::span<const HomodyneRecord> records) {
  os << "theta_rad,q\n";
  for (const auto& r : records) os << format_double(r.theta) << ',' << format_double(r.q) << '\n';
}

std::vector<HomodyneRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("record file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta_rad,q") throw std::invalid_argument("record file header must be theta_rad,q");
  std::vector<HomodyneRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("record line " + std::to_string(lineno) + " lacks a comma");
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      HomodyneRecord r{std::stod(a, &used), 0.0};
      if (used != a.size()) throw std::invalid_argument("trailing characters");
      r.q = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument("trailing characters");
      if (!std::isfinite(r.theta) || !std::isfinite(r.q)) throw std::invalid_argument("non-finite");
      out.push_back(r);
    } catch (const std::exception& e) {
      throw std::invalid_argument("record line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

nlohmann::json reconstruction_json(const MleResult& result) {
  nlohmann::json entries = nlohmann::json::array();
  const Matrix& m = result.rho.matrix();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return {{"dim", result.rho.dim()},
          {"rho", entries},
          {"iterations", result.iterations},
          {"log_likelihood", result.log_likelihood},
          {"converged", result.converged}};
}

}  // namespace cvrsp
