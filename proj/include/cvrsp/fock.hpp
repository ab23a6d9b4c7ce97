#pragma once

// Truncated Fock-space states and the handful of linear-algebra operations
// the rest of the library is built on. Everything is dense: single-mode
// dimensions stay below ~40 and two-mode states below ~1600 rows.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvrsp {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultDim = 30;
inline constexpr int kConvergenceDim = 40;

/// Raised when a computation has no meaningful numerical answer
/// (empty acceptance window, degenerate data, zero vector).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalized ket over photon numbers 0..dim-1.
class PureState {
 public:
  /// Normalizes `amplitudes`; throws std::invalid_argument when dim < 2
  /// and NumericalError when the vector has zero norm.
  explicit PureState(Vector amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  cplx operator[](int n) const { return amps_(n); }

 private:
  Vector amps_;
};

/// Density matrix over a truncated single mode. Construction symmetrizes
/// and renormalizes away rounding noise, and rejects anything that is not
/// a state to within loose tolerances.
class MixedState {
 public:
  explicit MixedState(Matrix rho);
  explicit MixedState(const PureState& psi);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }
  cplx operator()(int m, int n) const { return rho_(m, n); }

 private:
  Matrix rho_;
};

enum class Mode { A, B };

/// Joint state of two modes, index (nA, nB) -> nA * dimB + nB.
/// The ket is retained when the state was built from one.
class TwoModeState {
 public:
  TwoModeState(Vector ket, int dim_a, int dim_b);
  TwoModeState(Matrix rho, int dim_a, int dim_b);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  bool is_pure_representation() const { return ket_.has_value(); }
  const std::optional<Vector>& ket() const { return ket_; }
  const Matrix& matrix() const { return rho_; }

 private:
  int dim_a_;
  int dim_b_;
  std::optional<Vector> ket_;
  Matrix rho_;
};

PureState basis_state(int n, int dim);

/// Ladder operators on a raw (unnormalized) ket. `create` drops the
/// component pushed past the truncation.
Vector annihilate(const Vector& ket);
Vector create(const Vector& ket);

Matrix annihilation_matrix(int dim);
Matrix number_matrix(int dim);

TwoModeState tensor(const PureState& a, const PureState& b);
TwoModeState tensor(const MixedState& a, const MixedState& b);

MixedState partial_trace(const TwoModeState& state, Mode keep);

/// <psi|rho|psi>; dimensions must agree.
double fidelity(const MixedState& rho, const PureState& target);
double fidelity(const PureState& a, const PureState& b);
double purity(const MixedState& rho);
double mean_photon_number(const MixedState& rho);
double mean_photon_number(const PureState& psi);

/// e^{i phi n} rho e^{-i phi n}
MixedState rotate(const MixedState& rho, double phi);
PureState rotate(const PureState& psi, double phi);

/// Zero-pads or truncates (then renormalizes) to a new dimension.
PureState resize(const PureState& psi, int dim);
MixedState resize(const MixedState& rho, int dim);

struct StateCheck {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const {
    return hermiticity_error <= 1e-12 && trace_error <= 1e-12 && min_eigenvalue >= -1e-10;
  }
};

StateCheck check_density_matrix(const Matrix& rho);

}  // namespace cvrsp
