#pragma once

#include "cvrsp/fock.hpp"

namespace cvrsp {

/// Transmission probability of a pure-loss beamsplitter, in [0, 1].
class Efficiency {
 public:
  explicit Efficiency(double eta = 1.0);
  double value() const { return eta_; }

 private:
  double eta_;
};

/// Gaussian rms phase noise, in degrees.
class PhaseJitter {
 public:
  explicit PhaseJitter(double sigma_deg = 0.0);
  double sigma_deg() const { return sigma_deg_; }
  double sigma_rad() const;

 private:
  double sigma_deg_;
};

/// Kraus coefficient <n-k| K_k |n> = sqrt(C(n,k)) eta^{(n-k)/2} (1-eta)^{k/2}.
double loss_kraus_element(int n, int k, double eta);

MixedState loss_channel(const MixedState& rho, Efficiency eta);

/// Loss applied to one mode of a two-mode state.
TwoModeState loss_channel(const TwoModeState& state, Mode mode, Efficiency eta);

/// Heisenberg-picture (adjoint) loss map, sum_k K_k^dag X K_k. Unital.
Matrix loss_adjoint(const Matrix& op, Efficiency eta);

MixedState phase_jitter(const MixedState& rho, PhaseJitter jitter);

}  // namespace cvrsp
