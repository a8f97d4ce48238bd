#include "canbound/curves.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "canbound/entropy.hpp"

namespace canbound {

double lower_rate(double x) {
  if (!(x > 2.0)) throw std::domain_error("lower_rate is defined for x > 2");
  return std::exp2(2.0 * (binary_entropy(1.0 / x) - 1.0 / x));
}

double exact_rate_small_x(double x) {
  if (!(x >= 1.0 && x <= 2.0)) throw std::domain_error("exact_rate_small_x needs 1 <= x <= 2");
  return std::exp2(2.0 * (1.0 - 1.0 / x));
}

double upper_curve(const BoundCertificate& cert, double x) {
  const std::vector<double>& lambdas = cert.schedule.lambdas;
  if (lambdas.size() < 2 || cert.steps.size() + 1 != lambdas.size()) {
    throw std::out_of_range("certificate has no steps");
  }
  if (!(x >= lambdas.front() && x <= lambdas.back())) {
    throw std::out_of_range(fmt::format("x = {} outside [{}, {}]", x, lambdas.front(),
                                        lambdas.back()));
  }
  if (x == lambdas.front()) return cert.schedule.rho0;
  // First grid point >= x is lambda_hi of the enclosing step.
  const auto it = std::lower_bound(lambdas.begin() + 1, lambdas.end(), x);
  return cert.steps[static_cast<std::size_t>(it - lambdas.begin()) - 1].rho_out;
}

namespace {

__extension__ typedef unsigned __int128 u128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 binomial128(int n, int k) {
  u128 c = 1;
  for (int i = 0; i < k; ++i) c = c * static_cast<u128>(n - i) / static_cast<u128>(i + 1);
  return c;
}

}  // namespace

Rational symmetric_bound(int k, int n) {
  if (k < 1 || n < 2 * k) throw std::invalid_argument("symmetric_bound needs k >= 1, n >= 2k");
  if (n > kSymmetricMaxN) throw std::overflow_error("symmetric_bound supports n <= 64");
  u128 num = (u128{1} << k) * binomial128(n, k);
  u128 den = binomial128(2 * k, k);
  const u128 g = gcd128(num, den);
  num /= g;
  den /= g;
  constexpr u128 kLimit = ~std::uint64_t{0};
  if (num > kLimit || den > kLimit) throw std::overflow_error("symmetric_bound exceeds 64 bits");
  return Rational{static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
}

std::vector<CurvePoint> emit_curve(const BoundCertificate& cert, int samples) {
  if (samples < 2) throw std::invalid_argument("emit_curve needs at least 2 samples");
  const double x_max = cert.schedule.lambdas.back();
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double x = 1.0 + (x_max - 1.0) * i / (samples - 1);
    if (i == samples - 1) x = x_max;
    CurvePoint pt{x, 0.0, 0.0};
    if (x <= 2.0) {
      pt.lower = pt.upper = exact_rate_small_x(x);
    } else {
      pt.lower = lower_rate(x);
      pt.upper = upper_curve(cert, x);
    }
    if (pt.lower > pt.upper + 1e-9) {
      throw std::runtime_error(fmt::format("curve crosses at x = {}: lower {} > upper {}", x,
                                           pt.lower, pt.upper));
    }
    out.push_back(pt);
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "x,upper,lower\n";
  for (const CurvePoint& p : points) {
    out << fmt::format("{:.12g},{:.12g},{:.12g}\n", p.x, p.upper, p.lower);
  }
}

}  // namespace canbound
