#pragma once

#include <variant>

#include "cvrsp/fock.hpp"

namespace cvrsp {

enum class Parity { Even, Odd };

/// Coherent state |alpha>, renormalized after truncation. Requires
/// |alpha|^2 < dim / 4.
PureState coherent(cplx alpha, int dim);

/// (|alpha> +/- |-alpha>) normalized; Even is Cat+, Odd is Cat-.
PureState cat(double alpha, Parity parity, int dim);

/// Squeezing parameter for a variance reduction of `squeezing_db` decibels:
/// r = ln(10^{dB/20}).
double squeezing_parameter(double squeezing_db);

/// Squeezed vacuum with the reduced quadrature along P (variance
/// 10^{-dB/10} shot-noise units) and the stretched one along X, so that it
/// approximates the even cat built from a real amplitude.
PureState squeezed_vacuum(double squeezing_db, int dim);

/// a S|0>, normalized. Throws NumericalError for squeezing_db <= 0.
PureState photon_subtracted_sv(double squeezing_db, int dim);

struct IdealResource {
  double alpha = 0.7;
};

struct ExperimentalResource {
  double squeezing_db = 3.0;
};

struct ResourceParams {
  std::variant<IdealResource, ExperimentalResource> model = IdealResource{};
  /// Weight of the |1>|CV+> branch.
  double weight_dv = 0.5;

  void validate() const;
};

/// The CV halves of the resource: {CV-, CV+} paired with Alice's |0>, |1>.
struct CvBranches {
  PureState minus;
  PureState plus;
};

CvBranches resource_branches(const ResourceParams& params, int dim_b);

/// sqrt(1-w)|0>|CV-> + sqrt(w)|1>|CV+>.
TwoModeState hybrid_entangled(const ResourceParams& params, int dim_a, int dim_b);

/// Amplitude alpha in [lo, hi] maximizing F(psi, cat(alpha, parity)),
/// found by golden-section search after a coarse scan.
double effective_cat_alpha(const PureState& psi, Parity parity, double lo = 0.05,
                           double hi = 2.0);

}  // namespace cvrsp
