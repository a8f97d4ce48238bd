#pragma once

// Rates for k-uniform pairs as functions of x = n/k: the certified upper
// bound from a rho-certificate, the asymptotic construction rate below it,
// and the exact value on 1 <= x <= 2.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "canbound/pipeline.hpp"

namespace canbound {

struct CurvePoint {
  double x = 0.0;
  double upper = 0.0;
  double lower = 0.0;
};

/// 2^(2 (h(1/x) - 1/x)), the construction rate with the o(1) term dropped.
/// Throws std::domain_error for x <= 2.
double lower_rate(double x);

/// 2^(2 (1 - 1/x)), exact for 1 <= x <= 2.
double exact_rate_small_x(double x);

/// rho_out of the step whose interval (lambda_lo, lambda_hi] contains x, and
/// rho0 at x = lambda_0. Throws std::out_of_range outside [lambda_0, lambda_N].
double upper_curve(const BoundCertificate& cert, double x);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline constexpr int kSymmetricMaxN = 64;

/// 2^k C(n, k) / C(2k, k) in lowest terms, for n >= 2k and n <= 64.
Rational symmetric_bound(int k, int n);

/// `samples` equally spaced points on [1, lambda_N]. The certificate is
/// assumed to be verified already. Throws std::runtime_error if any point has
/// lower > upper + 1e-9.
std::vector<CurvePoint> emit_curve(const BoundCertificate& cert, int samples);

/// CSV with header `x,upper,lower` and 12 significant digits.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points);

}  // namespace canbound
