#pragma once

// Modified Bessel functions of the first kind on the log scale, and the
// quantities of the von Mises-Fisher distribution built from them.
// All functions are pure and thread-safe.

namespace svmf {

/// log I_order(x). Returns -inf for (order > 0, x = 0) and 0 for (0, 0).
/// Throws DomainError on negative or non-finite arguments.
double log_bessel_i(double order, double x);

/// A_d(kappa) = I_{d/2}(kappa) / I_{d/2-1}(kappa), in [0, 1).
/// Evaluated with a continued fraction, never by dividing Bessel values.
double bessel_ratio(int d, double kappa);

/// Derivative of bessel_ratio with respect to kappa.
double bessel_ratio_derivative(int d, double kappa);

/// log c_d(kappa), the log normaliser of the vMF density on S^{d-1}.
/// At kappa = 0 this is minus the log surface area of the sphere.
double log_vmf_normalizer(int d, double kappa);

/// Approximate inverse of bessel_ratio: kappa = (rbar d - rbar^3) / (1 - rbar^2).
/// With `refine`, Newton steps on bessel_ratio(d, kappa) = rbar follow until
/// the relative step drops below 1e-10 (at most 50 steps).
/// Throws DomainError unless 0 <= rbar < 1 and d >= 2.
double invert_bessel_ratio(int d, double rbar, bool refine = false);

namespace detail {

// Individual evaluation branches, exposed for crossover validation.
double log_bessel_i_series(double order, double x);
double log_bessel_i_debye(double order, double x);
double log_bessel_i_hankel(double order, double x);

// Branch selection thresholds.
inline constexpr double kDebyeMinOrder = 50.0;
inline constexpr double kSeriesMaxArg = 500.0;

}  // namespace detail
}  // namespace svmf
