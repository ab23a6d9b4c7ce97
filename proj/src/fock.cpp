#include "cvrsp/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace cvrsp {

namespace {

constexpr double kTraceSlack = 1e-6;
constexpr double kNegativitySlack = 1e-8;

void require_dim(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("truncation dimension must be >= 2, got " + std::to_string(dim));
  }
}

}  // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  require_dim(static_cast<int>(amps_.size()));
  const double norm = amps_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericalError("cannot normalize a zero or non-finite ket");
  }
  amps_ /= norm;
}

MixedState::MixedState(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  require_dim(static_cast<int>(rho_.rows()));
  if (!rho_.allFinite()) {
    throw NumericalError("density matrix has non-finite entries");
  }
  const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    throw std::invalid_argument("density matrix is not Hermitian (deviation " +
                                std::to_string(asym) + ")");
  }
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kTraceSlack) {
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr));
  }
  rho_ /= tr;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kNegativitySlack) {
    throw std::invalid_argument("density matrix is not positive semidefinite (eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
}

MixedState::MixedState(const PureState& psi)
    : rho_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

TwoModeState::TwoModeState(Vector ket, int dim_a, int dim_b) : dim_a_(dim_a), dim_b_(dim_b) {
  require_dim(dim_a);
  require_dim(dim_b);
  if (ket.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw std::invalid_argument("two-mode ket size does not match dimA*dimB");
  }
  const double norm = ket.norm();
  if (!(norm > 0.0)) {
    throw NumericalError("cannot normalize a zero two-mode ket");
  }
  ket /= norm;
  rho_ = ket * ket.adjoint();
  ket_ = std::move(ket);
}

TwoModeState::TwoModeState(Matrix rho, int dim_a, int dim_b) : dim_a_(dim_a), dim_b_(dim_b) {
  require_dim(dim_a);
  require_dim(dim_b);
  const auto n = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (rho.rows() != n || rho.cols() != n) {
    throw std::invalid_argument("two-mode density matrix size does not match dimA*dimB");
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kTraceSlack) {
    throw std::invalid_argument("two-mode density matrix trace is " + std::to_string(tr));
  }
  rho_ = rho / tr;
}

PureState basis_state(int n, int dim) {
  require_dim(dim);
  if (n < 0 || n >= dim) {
    throw std::out_of_range("photon number " + std::to_string(n) + " outside [0, " +
                            std::to_string(dim) + ")");
  }
  Vector v = Vector::Zero(dim);
  v(n) = 1.0;
  return PureState(std::move(v));
}

Vector annihilate(const Vector& ket) {
  const auto dim = ket.size();
  Vector out = Vector::Zero(dim);
  for (Eigen::Index n = 0; n + 1 < dim; ++n) {
    out(n) = std::sqrt(static_cast<double>(n + 1)) * ket(n + 1);
  }
  return out;
}

Vector create(const Vector& ket) {
  const auto dim = ket.size();
  Vector out = Vector::Zero(dim);
  for (Eigen::Index n = 1; n < dim; ++n) {
    out(n) = std::sqrt(static_cast<double>(n)) * ket(n - 1);
  }
  return out;
}

Matrix annihilation_matrix(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number_matrix(int dim) {
  Matrix num = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) num(n, n) = n;
  return num;
}

TwoModeState tensor(const PureState& a, const PureState& b) {
  Vector joint = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return TwoModeState(std::move(joint), a.dim(), b.dim());
}

TwoModeState tensor(const MixedState& a, const MixedState& b) {
  Matrix joint = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return TwoModeState(std::move(joint), a.dim(), b.dim());
}

MixedState partial_trace(const TwoModeState& state, Mode keep) {
  const int da = state.dim_a();
  const int db = state.dim_b();
  const Matrix& rho = state.matrix();
  if (keep == Mode::A) {
    Matrix out = Matrix::Zero(da, da);
    for (int i = 0; i < da; ++i) {
      for (int j = 0; j < da; ++j) {
        out(i, j) = rho.block(i * db, j * db, db, db).trace();
      }
    }
    return MixedState(std::move(out));
  }
  Matrix out = Matrix::Zero(db, db);
  for (int i = 0; i < da; ++i) out += rho.block(i * db, i * db, db, db);
  return MixedState(std::move(out));
}

double fidelity(const MixedState& rho, const PureState& target) {
  if (rho.dim() != target.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(rho.dim()) +
                                " vs " + std::to_string(target.dim()) + ")");
  }
  const Vector& psi = target.amplitudes();
  return std::clamp(psi.dot(rho.matrix() * psi).real(), 0.0, 1.0);
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

double purity(const MixedState& rho) {
  // Tr[rho^2] = sum |rho_mn|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

double mean_photon_number(const MixedState& rho) {
  double n = 0.0;
  for (int k = 0; k < rho.dim(); ++k) n += k * rho(k, k).real();
  return n;
}

double mean_photon_number(const PureState& psi) {
  double n = 0.0;
  for (int k = 0; k < psi.dim(); ++k) n += k * std::norm(psi[k]);
  return n;
}

MixedState rotate(const MixedState& rho, double phi) {
  Matrix out = rho.matrix();
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < rho.dim(); ++n) out(m, n) *= std::polar(1.0, phi * (m - n));
  }
  return MixedState(std::move(out));
}

PureState rotate(const PureState& psi, double phi) {
  Vector out = psi.amplitudes();
  for (int n = 0; n < psi.dim(); ++n) out(n) *= std::polar(1.0, phi * n);
  return PureState(std::move(out));
}

PureState resize(const PureState& psi, int dim) {
  require_dim(dim);
  Vector out = Vector::Zero(dim);
  const int keep = std::min(dim, psi.dim());
  out.head(keep) = psi.amplitudes().head(keep);
  return PureState(std::move(out));
}

MixedState resize(const MixedState& rho, int dim) {
  require_dim(dim);
  Matrix out = Matrix::Zero(dim, dim);
  const int keep = std::min(dim, rho.dim());
  out.topLeftCorner(keep, keep) = rho.matrix().topLeftCorner(keep, keep);
  const double tr = out.trace().real();
  if (!(tr > 0.0)) throw NumericalError("resize removed all population");
  out /= tr;
  return MixedState(std::move(out));
}

StateCheck check_density_matrix(const Matrix& rho) {
  StateCheck c;
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

}  // namespace cvrsp
