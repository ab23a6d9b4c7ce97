#include "cvrsp/homodyne.hpp"

#include <cmath>
#include <numbers>

namespace cvrsp {

namespace {

const double kPsi0Norm = std::pow(2.0 * std::numbers::pi, -0.25);

constexpr double kMinNormalization = 1e-300;
constexpr int kWindowNodes = 21;
constexpr double kMaxPanel = 0.5;

/// Alice-side kernel K_{a a'} = sum_j w_j <q_j|a> conj(<q_j|a'>).
Matrix alice_kernel(int dim_a, const QuadratureRule& rule, double theta) {
  Matrix k = Matrix::Zero(dim_a, dim_a);
  Vector v(dim_a);
  for (size_t j = 0; j < rule.points.size(); ++j) {
    const auto psi = quad_wavefunctions(dim_a, rule.points[j]);
    for (int a = 0; a < dim_a; ++a) v(a) = std::polar(psi[a], a * theta);
    k.noalias() += rule.weights[j] * (v * v.adjoint());
  }
  return k;
}

}  // namespace

double quad_wavefunction(int n, double q) {
  if (n < 0) throw std::invalid_argument("photon number must be >= 0");
  return quad_wavefunctions(n + 1, q)[n];
}

std::vector<double> quad_wavefunctions(int dim, double q) {
  std::vector<double> psi(std::max(dim, 1));
  psi[0] = kPsi0Norm * std::exp(-0.25 * q * q);
  if (dim > 1) psi[1] = q * psi[0];
  for (int n = 1; n + 1 < dim; ++n) {
    psi[n + 1] = (q * psi[n] - std::sqrt(static_cast<double>(n)) * psi[n - 1]) /
                 std::sqrt(static_cast<double>(n + 1));
  }
  psi.resize(dim);
  return psi;
}

cplx quad_overlap(int n, double q, double theta) {
  return std::polar(quad_wavefunction(n, q), n * theta);
}

Marginal::Marginal(MixedState rho, double theta) : rho_(std::move(rho)), theta_(theta) {}

double Marginal::operator()(double q) const {
  const int d = rho_.dim();
  const auto psi = quad_wavefunctions(d, q);
  Vector v(d);
  for (int n = 0; n < d; ++n) v(n) = std::polar(psi[n], n * theta_);
  // <q_theta|rho|q_theta> with <q_theta|n> = v_n
  return std::max(0.0, (v.transpose() * rho_.matrix() * v.conjugate()).value().real());
}

double Marginal::probability(double lo, double hi) const {
  return integrate([this](double q) { return (*this)(q); }, lo, hi, kWindowNodes, kMaxPanel);
}

double Marginal::total_mass(double lo, double hi) const {
  auto f = [this](double q) { return (*this)(q); };
  double panel = kMaxPanel;
  double prev = integrate(f, lo, hi, kWindowNodes, panel);
  for (int refine = 0; refine < 6; ++refine) {
    panel *= 0.5;
    const double next = integrate(f, lo, hi, kWindowNodes, panel);
    if (std::abs(next - prev) < 1e-13) return next;
    prev = next;
  }
  return prev;
}

Marginal marginal(const MixedState& rho, double theta) { return Marginal(rho, theta); }

void Conditioning::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("acceptance window width must be >= 0");
  }
  if (!std::isfinite(q) || !std::isfinite(theta)) {
    throw std::invalid_argument("conditioning parameters must be finite");
  }
  if (acceptance == Acceptance::Tail && !(q >= 0.0 && q < kQuadratureCutoff)) {
    throw std::invalid_argument("tail acceptance threshold must lie in [0, 10)");
  }
}

double Conditioning::reduced_theta() const {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

QuadratureRule acceptance_rule(const Conditioning& c) {
  c.validate();
  if (c.acceptance == Acceptance::Window) {
    return composite_rule(c.q - 0.5 * c.delta, c.q + 0.5 * c.delta, kWindowNodes, kMaxPanel);
  }
  QuadratureRule upper = composite_rule(c.q, kQuadratureCutoff, kWindowNodes, kMaxPanel);
  const QuadratureRule lower = composite_rule(-kQuadratureCutoff, -c.q, kWindowNodes, kMaxPanel);
  upper.points.insert(upper.points.end(), lower.points.begin(), lower.points.end());
  upper.weights.insert(upper.weights.end(), lower.weights.begin(), lower.weights.end());
  return upper;
}

PreparedState condition(const TwoModeState& resource, const Conditioning& c) {
  c.validate();
  const TwoModeState lossy = loss_channel(resource, Mode::A, c.eta_a);
  const int da = lossy.dim_a();
  const int db = lossy.dim_b();
  const double theta = c.reduced_theta();

  Matrix rho_b = Matrix::Zero(db, db);
  if (c.is_point() && lossy.ket()) {
    // pure resource: project the ket directly
    const Vector& ket = *lossy.ket();
    const auto psi = quad_wavefunctions(da, c.q);
    Vector phi = Vector::Zero(db);
    for (int a = 0; a < da; ++a) phi += std::polar(psi[a], a * theta) * ket.segment(a * db, db);
    rho_b = phi * phi.adjoint();
  } else {
    Matrix kernel;
    if (c.is_point()) {
      QuadratureRule point;
      point.points = {c.q};
      point.weights = {1.0};
      kernel = alice_kernel(da, point, theta);
    } else {
      kernel = alice_kernel(da, acceptance_rule(c), theta);
    }
    const Matrix& rho = lossy.matrix();
    for (int a = 0; a < da; ++a) {
      for (int b = 0; b < da; ++b) {
        if (kernel(a, b) == cplx(0.0)) continue;
        rho_b += kernel(a, b) * rho.block(a * db, b * db, db, db);
      }
    }
  }

  const double norm = rho_b.trace().real();
  if (!(norm > kMinNormalization)) {
    throw NumericalError("acceptance region has no support for this resource");
  }
  rho_b /= norm;
  return PreparedState{MixedState(std::move(rho_b)), norm, c.is_point()};
}

PureState closed_form_state(double q, double theta, const PureState& cv_minus,
                            const PureState& cv_plus) {
  if (cv_minus.dim() != cv_plus.dim()) {
    throw std::invalid_argument("closed_form_state: branch dimensions differ");
  }
  return PureState(cv_minus.amplitudes() + q * std::polar(1.0, theta) * cv_plus.amplitudes());
}

double acceptance_probability(const MixedState& alice, const Conditioning& c) {
  const Marginal m(loss_channel(alice, c.eta_a), c.reduced_theta());
  if (c.is_point()) return m(c.q);
  const QuadratureRule rule = acceptance_rule(c);
  double p = 0.0;
  for (size_t j = 0; j < rule.points.size(); ++j) p += rule.weights[j] * m(rule.points[j]);
  return p;
}

}  // namespace cvrsp
