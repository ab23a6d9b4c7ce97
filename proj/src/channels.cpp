#include "cvrsp/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cvrsp {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// coeff[n][k] = <n-k|K_k|n>
std::vector<std::vector<double>> kraus_table(int dim, double eta) {
  std::vector<std::vector<double>> table(dim);
  for (int n = 0; n < dim; ++n) {
    table[n].resize(n + 1);
    for (int k = 0; k <= n; ++k) table[n][k] = loss_kraus_element(n, k, eta);
  }
  return table;
}

/// Loss on the outer index of a (da*db)^2 matrix whose inner blocks are db x db.
Matrix apply_loss_blocks(const Matrix& rho, int da, int db, double eta) {
  const auto table = kraus_table(da, eta);
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < da; ++b) {
      auto dst = out.block(a * db, b * db, db, db);
      for (int k = 0; a + k < da && b + k < da; ++k) {
        const double c = table[a + k][k] * table[b + k][k];
        if (c == 0.0) continue;
        dst += c * rho.block((a + k) * db, (b + k) * db, db, db);
      }
    }
  }
  return out;
}

}  // namespace

Efficiency::Efficiency(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("efficiency must lie in [0, 1], got " + std::to_string(eta));
  }
}

PhaseJitter::PhaseJitter(double sigma_deg) : sigma_deg_(sigma_deg) {
  if (!(sigma_deg >= 0.0)) throw std::invalid_argument("phase jitter must be >= 0 degrees");
}

double PhaseJitter::sigma_rad() const { return sigma_deg_ * std::numbers::pi / 180.0; }

double loss_kraus_element(int n, int k, double eta) {
  if (k < 0 || k > n) return 0.0;
  // pow(0, 0) == 1 covers the eta = 0 and eta = 1 endpoints
  return std::sqrt(std::exp(log_binomial(n, k))) * std::pow(eta, 0.5 * (n - k)) *
         std::pow(1.0 - eta, 0.5 * k);
}

MixedState loss_channel(const MixedState& rho, Efficiency eta) {
  if (eta.value() == 1.0) return rho;
  return MixedState(apply_loss_blocks(rho.matrix(), rho.dim(), 1, eta.value()));
}

TwoModeState loss_channel(const TwoModeState& state, Mode mode, Efficiency eta) {
  if (eta.value() == 1.0) return state;
  const int da = state.dim_a();
  const int db = state.dim_b();
  if (mode == Mode::A) {
    return TwoModeState(apply_loss_blocks(state.matrix(), da, db, eta.value()), da, db);
  }
  // Loss on B: same Kraus structure acting inside each db x db block.
  const auto table = kraus_table(db, eta.value());
  const Matrix& rho = state.matrix();
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      const auto src = rho.block(i * db, j * db, db, db);
      auto dst = out.block(i * db, j * db, db, db);
      for (int m = 0; m < db; ++m) {
        for (int n = 0; n < db; ++n) {
          cplx acc = 0.0;
          for (int k = 0; m + k < db && n + k < db; ++k) {
            acc += table[m + k][k] * table[n + k][k] * src(m + k, n + k);
          }
          dst(m, n) = acc;
        }
      }
    }
  }
  return TwoModeState(std::move(out), da, db);
}

Matrix loss_adjoint(const Matrix& op, Efficiency eta) {
  const int dim = static_cast<int>(op.rows());
  if (eta.value() == 1.0) return op;
  const auto table = kraus_table(dim, eta.value());
  Matrix out = Matrix::Zero(dim, dim);
  // (K_k^dag X K_k)_{mn} = K_k[m-k,m] K_k[n-k,n] X_{m-k,n-k}
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      cplx acc = 0.0;
      for (int k = 0; k <= std::min(m, n); ++k) {
        acc += table[m][k] * table[n][k] * op(m - k, n - k);
      }
      out(m, n) = acc;
    }
  }
  return out;
}

MixedState phase_jitter(const MixedState& rho, PhaseJitter jitter) {
  const double s2 = jitter.sigma_rad() * jitter.sigma_rad();
  if (s2 == 0.0) return rho;
  Matrix out = rho.matrix();
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < rho.dim(); ++n) {
      const double d = m - n;
      out(m, n) *= std::exp(-0.5 * s2 * d * d);
    }
  }
  return MixedState(std::move(out));
}

}  // namespace cvrsp
