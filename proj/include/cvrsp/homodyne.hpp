#pragma once

#include <vector>

#include "cvrsp/channels.hpp"
#include "cvrsp/fock.hpp"
#include "cvrsp/quadrature.hpp"

namespace cvrsp {

/// Quadrature range outside which every state handled here has
/// negligible (< 1e-20) probability mass.
inline constexpr double kQuadratureCutoff = 10.0;

/// Number-state wavefunction psi_n(q) in shot-noise units (vacuum
/// variance 1): psi_0 = (2 pi)^{-1/4} e^{-q^2/4}, psi_1 = q psi_0.
double quad_wavefunction(int n, double q);

/// psi_0(q) .. psi_{dim-1}(q) by the three-term recursion.
std::vector<double> quad_wavefunctions(int dim, double q);

/// <q_theta|n> = e^{i n theta} psi_n(q).
cplx quad_overlap(int n, double q, double theta);

/// Homodyne outcome density P_theta(q) = <q_theta|rho|q_theta>.
class Marginal {
 public:
  Marginal(MixedState rho, double theta);

  double operator()(double q) const;
  double theta() const { return theta_; }

  /// Probability of an outcome in [lo, hi] (composite Gauss-Legendre).
  double probability(double lo, double hi) const;

  /// Integral over [lo, hi], halving the panel width until two successive
  /// estimates agree to 1e-13.
  double total_mass(double lo = -kQuadratureCutoff, double hi = kQuadratureCutoff) const;

 private:
  MixedState rho_;
  double theta_;
};

Marginal marginal(const MixedState& rho, double theta);

enum class Acceptance {
  Window,  ///< q in [Q - delta/2, Q + delta/2]; delta = 0 is a point projection
  Tail     ///< |q| >= Q
};

struct Conditioning {
  double theta = 0.0;
  double q = 0.0;
  double delta = 0.0;
  Efficiency eta_a{1.0};
  Acceptance acceptance = Acceptance::Window;

  void validate() const;
  /// theta reduced to [0, 2 pi).
  double reduced_theta() const;
  bool is_point() const { return acceptance == Acceptance::Window && delta == 0.0; }
};

/// Quadrature nodes covering the acceptance region (empty for a point).
QuadratureRule acceptance_rule(const Conditioning& c);

struct PreparedState {
  MixedState rho_b;
  /// Window probability; for a point projection, the outcome density at Q
  /// times a unit reference width (see success_is_density).
  double success_prob = 0.0;
  bool success_is_density = false;
};

/// Bob's state after Alice's mode passes through loss eta_A and her
/// homodyne outcome lands in the acceptance region.
PreparedState condition(const TwoModeState& resource, const Conditioning& c);

/// (cv_minus + Q e^{i theta} cv_plus), normalized.
PureState closed_form_state(double q, double theta, const PureState& cv_minus,
                            const PureState& cv_plus);

/// Acceptance probability computed from Alice's reduced state alone, for
/// cross-checking condition(). c.eta_a is applied here.
double acceptance_probability(const MixedState& alice, const Conditioning& c);

}  // namespace cvrsp
