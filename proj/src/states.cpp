#include "cvrsp/states.hpp"

#include <cmath>
#include <string>

namespace cvrsp {

PureState coherent(cplx alpha, int dim) {
  if (std::norm(alpha) >= dim / 4.0) {
    throw std::invalid_argument("coherent amplitude too large for truncation dim " +
                                std::to_string(dim));
  }
  Vector v(dim);
  // amplitude_n = e^{-|a|^2/2} a^n / sqrt(n!), built incrementally
  cplx amp = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    v(n) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return PureState(std::move(v));
}

PureState cat(double alpha, Parity parity, int dim) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("cat amplitude must be positive");
  }
  // Built directly on the surviving parity sector to keep the zeros exact.
  Vector v = Vector::Zero(dim);
  const int first = parity == Parity::Even ? 0 : 1;
  const Vector c = coherent(alpha, dim).amplitudes();
  for (int n = first; n < dim; n += 2) v(n) = c(n);
  return PureState(std::move(v));
}

double squeezing_parameter(double squeezing_db) {
  return std::log(std::pow(10.0, squeezing_db / 20.0));
}

PureState squeezed_vacuum(double squeezing_db, int dim) {
  if (!(squeezing_db >= 0.0)) {
    throw std::invalid_argument("squeezing must be >= 0 dB");
  }
  const double r = squeezing_parameter(squeezing_db);
  const double t = std::tanh(r);
  Vector v = Vector::Zero(dim);
  // c_{2m} = sqrt(sech r) t^m sqrt((2m)!) / (2^m m!), via the ratio
  // c_{2m+2}/c_{2m} = t sqrt((2m+1)(2m+2)) / (2(m+1)).
  double c = std::sqrt(1.0 / std::cosh(r));
  for (int m = 0; 2 * m < dim; ++m) {
    v(2 * m) = c;
    c *= t * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1));
  }
  return PureState(std::move(v));
}

PureState photon_subtracted_sv(double squeezing_db, int dim) {
  if (!(squeezing_db > 0.0)) {
    throw NumericalError("photon subtraction from unsqueezed vacuum gives the zero vector");
  }
  return PureState(annihilate(squeezed_vacuum(squeezing_db, dim).amplitudes()));
}

void ResourceParams::validate() const {
  if (!(weight_dv > 0.0 && weight_dv <= 1.0)) {
    // weight 1 is allowed: it is the product-state limit
    throw std::invalid_argument("weight_dv must lie in (0, 1]");
  }
  if (const auto* ideal = std::get_if<IdealResource>(&model)) {
    if (!(ideal->alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  } else {
    const auto& exp = std::get<ExperimentalResource>(model);
    if (!(exp.squeezing_db > 0.0)) throw std::invalid_argument("squeezing_db must be > 0");
  }
}

CvBranches resource_branches(const ResourceParams& params, int dim_b) {
  params.validate();
  if (const auto* ideal = std::get_if<IdealResource>(&params.model)) {
    return {cat(ideal->alpha, Parity::Odd, dim_b), cat(ideal->alpha, Parity::Even, dim_b)};
  }
  const double db = std::get<ExperimentalResource>(params.model).squeezing_db;
  return {photon_subtracted_sv(db, dim_b), squeezed_vacuum(db, dim_b)};
}

TwoModeState hybrid_entangled(const ResourceParams& params, int dim_a, int dim_b) {
  const CvBranches cv = resource_branches(params, dim_b);
  const Vector joint = std::sqrt(1.0 - params.weight_dv) *
                           tensor(basis_state(0, dim_a), cv.minus).ket().value() +
                       std::sqrt(params.weight_dv) *
                           tensor(basis_state(1, dim_a), cv.plus).ket().value();
  return TwoModeState(joint, dim_a, dim_b);
}

double effective_cat_alpha(const PureState& psi, Parity parity, double lo, double hi) {
  auto score = [&](double a) { return fidelity(psi, cat(a, parity, psi.dim())); };
  constexpr int kCoarse = 80;
  double best = lo;
  double best_f = -1.0;
  for (int i = 0; i <= kCoarse; ++i) {
    const double a = lo + (hi - lo) * i / kCoarse;
    const double f = score(a);
    if (f > best_f) {
      best_f = f;
      best = a;
    }
  }
  const double step = (hi - lo) / kCoarse;
  double a = std::max(lo, best - step);
  double b = std::min(hi, best + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = score(x1);
  double f2 = score(x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = score(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = score(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace cvrsp
