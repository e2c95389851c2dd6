#include "svmf/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "svmf/error.hpp"

namespace svmf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_order_arg(double order, double x) {
  if (!(order >= 0.0) || !std::isfinite(order))
    throw DomainError("log_bessel_i: order must be finite and >= 0, got " + std::to_string(order));
  if (!(x >= 0.0) || !std::isfinite(x))
    throw DomainError("log_bessel_i: argument must be finite and >= 0, got " + std::to_string(x));
}

void check_dim_kappa(const char* who, int d, double kappa) {
  if (d < 2) throw DomainError(std::string(who) + ": dimension must be >= 2, got " + std::to_string(d));
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw DomainError(std::string(who) + ": kappa must be finite and >= 0, got " + std::to_string(kappa));
}

// Polynomials u_k(t) of the uniform asymptotic expansion, stored as
// (numerator coefficients by power of t, denominator).
struct DebyePoly {
  int lowest_power;  // powers lowest_power, lowest_power + 2, ...
  std::array<double, 8> coeff;
  int n_coeff;
  double denom;
};

constexpr std::array<DebyePoly, 8> kDebye{{
    {0, {1.0}, 1, 1.0},
    {1, {3.0, -5.0}, 2, 24.0},
    {2, {81.0, -462.0, 385.0}, 3, 1152.0},
    {3, {30375.0, -369603.0, 765765.0, -425425.0}, 4, 414720.0},
    {4, {4465125.0, -94121676.0, 349922430.0, -446185740.0, 185910725.0}, 5, 39813120.0},
    {5,
     {1519035525.0, -49286948607.0, 284499769554.0, -614135872350.0, 566098157625.0,
      -188699385875.0},
     6,
     6688604160.0},
    {6,
     {2757049477875.0, -127577298354750.0, 1050760774457901.0, -3369032068261860.0,
      5104696716244125.0, -3685299006138750.0, 1023694168371875.0},
     7,
     4815794995200.0},
    {7,
     {199689155040375.0, -12493049053044375.0, 138799253740521843.0, -613221795981706275.0,
      1347119637570231525.0, -1570320948552481125.0, 931766432052080625.0,
      -221849150488590625.0},
     8,
     115579079884800.0},
}};

double eval_debye(const DebyePoly& p, double t) {
  const double t2 = t * t;
  double acc = 0.0;
  for (int i = p.n_coeff - 1; i >= 0; --i) acc = acc * t2 + p.coeff[i];
  return acc * std::pow(t, p.lowest_power) / p.denom;
}

}  // namespace

namespace detail {

// I_v(x) = (x/2)^v / Gamma(v+1) * sum_k (x^2/4)^k / (k! (v+1)_k).
// All terms are positive; the running sum is rescaled to stay in range.
double log_bessel_i_series(double order, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int k = 1; k < 100000; ++k) {
    term *= q / (static_cast<double>(k) * (order + k));
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += 280.0 * std::numbers::ln10;
    }
    if (term < sum * 1e-17 && static_cast<double>(k) > 0.5 * x) break;
  }
  return order * std::log(0.5 * x) - std::lgamma(order + 1.0) + std::log(sum) + log_scale;
}

// Uniform asymptotic expansion in the order (Debye form):
// I_v(v z) ~ exp(v eta) / (sqrt(2 pi v) (1+z^2)^{1/4}) sum_k u_k(t) / v^k.
double log_bessel_i_debye(double order, double x) {
  const double z = x / order;
  const double s = std::hypot(1.0, z);
  const double t = 1.0 / s;
  // eta = s + log(z / (1 + s)); log1p keeps the small-z case accurate.
  const double eta = s + std::log(z) - std::log1p(s);
  double series = 0.0;
  double inv_pow = 1.0;
  for (const auto& p : kDebye) {
    series += eval_debye(p, t) * inv_pow;
    inv_pow /= order;
  }
  return order * eta - 0.5 * std::log(2.0 * std::numbers::pi * order) - 0.5 * std::log(s) +
         std::log(series);
}

// Large-argument expansion, I_v(x) ~ e^x / sqrt(2 pi x) sum_k (-1)^k a_k(v) / x^k.
// Terminates exactly for half-integer orders.
double log_bessel_i_hankel(double order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = kInf;
  for (int k = 1; k < 1000; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * x * k);
    const double a = std::abs(term);
    if (a == 0.0) break;
    if (a > prev_abs && k > order + 1.0) break;  // past the smallest term
    sum += term;
    if (a < 1e-17 * std::abs(sum)) break;
    prev_abs = a;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

}  // namespace detail

double log_bessel_i(double order, double x) {
  check_order_arg(order, x);
  if (x == 0.0) return order == 0.0 ? 0.0 : -kInf;
  if (order >= detail::kDebyeMinOrder) return detail::log_bessel_i_debye(order, x);
  if (x <= detail::kSeriesMaxArg) return detail::log_bessel_i_series(order, x);
  return detail::log_bessel_i_hankel(order, x);
}

// I_{v+1}(x) / I_v(x) = 1 / (b_1 + 1 / (b_2 + ...)), b_k = 2 (v + k) / x,
// evaluated with the modified Lentz algorithm.
double bessel_ratio(int d, double kappa) {
  check_dim_kappa("bessel_ratio", d, kappa);
  if (kappa == 0.0) return 0.0;
  const double order = 0.5 * d - 1.0;
  constexpr double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double dd = 0.0;
  for (long k = 1; k < 50'000'000; ++k) {
    const double b = 2.0 * (order + static_cast<double>(k)) / kappa;
    dd = b + dd;
    if (dd == 0.0) dd = tiny;
    dd = 1.0 / dd;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    const double delta = c * dd;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return f;
  }
  throw DomainError("bessel_ratio: continued fraction did not converge");
}

double bessel_ratio_derivative(int d, double kappa) {
  const double a = bessel_ratio(d, kappa);
  if (kappa == 0.0) return 1.0 / d;
  return 1.0 - a * a - (d - 1.0) / kappa * a;
}

double log_vmf_normalizer(int d, double kappa) {
  check_dim_kappa("log_vmf_normalizer", d, kappa);
  const double half_d = 0.5 * d;
  if (kappa == 0.0)
    return std::lgamma(half_d) - std::numbers::ln2 - half_d * std::log(std::numbers::pi);
  const double order = half_d - 1.0;
  return order * std::log(kappa) - half_d * std::log(2.0 * std::numbers::pi) -
         log_bessel_i(order, kappa);
}

double invert_bessel_ratio(int d, double rbar, bool refine) {
  if (d < 2) throw DomainError("invert_bessel_ratio: dimension must be >= 2, got " + std::to_string(d));
  if (!(rbar >= 0.0) || !(rbar < 1.0))
    throw DomainError("invert_bessel_ratio: mean resultant length must lie in [0, 1), got " +
                      std::to_string(rbar));
  const double kappa0 = (rbar * d - rbar * rbar * rbar) / (1.0 - rbar * rbar);
  if (!refine || kappa0 == 0.0) return kappa0;

  double kappa = kappa0;
  for (int it = 0; it < 50; ++it) {
    const double a = bessel_ratio(d, kappa);
    const double slope = 1.0 - a * a - (d - 1.0) / kappa * a;
    if (!(slope > 0.0)) break;
    double next = kappa - (a - rbar) / slope;
    if (!(next > 0.0)) next = 0.5 * kappa;
    const double step = std::abs(next - kappa);
    kappa = next;
    if (step < 1e-10 * kappa) break;
  }
  return kappa;
}

}  // namespace svmf
