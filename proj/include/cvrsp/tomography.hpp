#pragma once

// Synthetic homodyne data and iterative maximum-likelihood reconstruction.
//
// Outcomes are binned per local-oscillator phase. Each bin's POVM element is
// the window-integrated quadrature projector, optionally pulled back through
// the adjoint of a loss channel so that the reconstruction estimates the
// state *before* detection loss while every iterate stays physical. The
// iteration is the plain R rho R fixed point, renormalized each step.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvrsp/channels.hpp"
#include "cvrsp/fock.hpp"

namespace cvrsp {

struct HomodyneRecord {
  double theta = 0.0;
  double q = 0.0;

  bool operator==(const HomodyneRecord&) const = default;
};

/// k pi / n for k = 0..n-1.
std::vector<double> default_phase_set(int n = 12);

struct TomoConfig {
  int dim_recon = 12;
  Efficiency eta_correction{1.0};
  double bin_width = 0.1;
  std::vector<double> phase_set = default_phase_set();
  int max_iters = 20000;
  double tol = 1e-10;

  void validate() const;
};

/// Applies loss eta, then draws each sample's phase uniformly from
/// `phase_set` and its quadrature by inverse-CDF sampling of the marginal
/// (tabulated at step 1e-3 on [-10, 10]). Deterministic for a given seed and
/// independent of the thread count.
std::vector<HomodyneRecord> sample_homodyne(const MixedState& rho,
                                            std::span<const double> phase_set, int n_samples,
                                            Efficiency eta, std::uint64_t seed);

struct MleResult {
  MixedState rho;
  int iterations = 0;
  double log_likelihood = 0.0;
  bool converged = false;
  /// Log-likelihood before each update, then the final value.
  std::vector<double> history;
};

MleResult mle_reconstruct(std::span<const HomodyneRecord> records, const TomoConfig& cfg);

/// Sum over bins of f_j ln Tr[rho Pi_j] with f_j the relative bin
/// frequencies; -infinity if an occupied bin has zero probability (below
/// 1e-14, the rounding floor of the overflow element).
double log_likelihood(const MixedState& rho, std::span<const HomodyneRecord> records,
                      const TomoConfig& cfg);

void write_records_csv(std::ostream& os, std::span<const HomodyneRecord> records);
std::vector<HomodyneRecord> read_records_csv(std::istream& is);

/// {dim, rho: [[re, im], ...] row-major, iterations, log_likelihood, converged}
nlohmann::json reconstruction_json(const MleResult& result);

}  // namespace cvrsp
