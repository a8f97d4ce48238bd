#pragma once

// Inductive rho-iteration over a grid of ratios lambda = n/k.
//
// For consecutive grid points lambda < mu and a known rate r1 for
// n/k <= lambda, the next rate r2 is valid once
//
//   log2(r1) >= phi(gamma, lambda) + delta,   gamma = (r2^mu / r1^lambda)^(1/(mu - lambda)).
//
// run_schedule finds the smallest such r2 for each interval by bisection and
// records every step so the chain can be re-checked independently.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace canbound {

/// Every phi value is inflated by this amount before the margin test. It
/// stands in for the gap between double evaluation and the real-valued bound.
inline constexpr double kPhiInflation = 1e-10;

/// Upper end of the bisection bracket for rho_out.
inline constexpr double kRhoCap = 2.5;

/// Absolute bisection tolerance on rho_out.
inline constexpr double kRhoTolerance = 1e-12;

/// Beyond n/k = 3.6 every element has p_i q_i > 1/2.25, so the final rate
/// extends to all n/k provided it is at least 2.25.
inline constexpr double kLambdaMax = 3.6;
inline constexpr double kExtensionRate = 2.25;

struct Schedule {
  std::vector<double> lambdas;  // N + 1 grid points
  double delta = 1e-8;
  double rho0 = 2.0;

  std::size_t intervals() const { return lambdas.empty() ? 0 : lambdas.size() - 1; }

  /// lambda_i = 2 + i (lambda_max - 2) / N, with the last point set to
  /// lambda_max exactly.
  static Schedule uniform(std::size_t n_intervals, double lambda_max = kLambdaMax,
                          double delta = 1e-8, double rho0 = 2.0);

  /// Throws std::invalid_argument unless lambdas start at 2, increase
  /// strictly, end at or below 3.6, and delta > 0.
  void validate() const;
};

struct RhoStep {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double rho_in = 0.0;
  double rho_out = 0.0;
  double gamma = 0.0;
  double phi_value = 0.0;  // -inf when the phi constraint region is empty
  double margin = 0.0;     // log2(rho_in) - phi_value
};

struct BoundCertificate {
  Schedule schedule;
  std::vector<RhoStep> steps;
  double final_rho = 0.0;
  double theorem_bound = 0.0;
};

/// Thrown when no rho_out <= kRhoCap satisfies an interval.
class ScheduleFailure : public std::runtime_error {
 public:
  ScheduleFailure(std::size_t interval, const std::string& what)
      : std::runtime_error(what), interval_(interval) {}
  std::size_t interval() const { return interval_; }

 private:
  std::size_t interval_;
};

/// gamma = (r2^mu / r1^lam)^(1/(mu - lam)), evaluated in log space.
/// Returns +infinity when the result overflows a double.
double gamma_from(double r1, double r2, double lam, double mu);

/// phi_upper(gamma, lam).value, extended to gamma = +infinity (where the
/// product caps force f = 0).
double phi_value_at(double gamma, double lam);

/// log2(r1) - (phi_upper(gamma, lam) + kPhiInflation) >= delta.
/// Throws std::invalid_argument if gamma < max(r1, 2.25) or lam < 2.
bool step_ok(double r1, double gamma, double lam, double delta);

/// Minimal rho_out in [rho_in, kRhoCap] (to kRhoTolerance) passing step_ok.
/// Throws ScheduleFailure (interval index 0) when none exists.
RhoStep next_rho(double rho_in, double lam, double mu, double delta);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

BoundCertificate run_schedule(const Schedule& schedule, const ProgressFn& progress = {});

/// ceil(rate * 10^4) / 10^4, never below rate.
double round_up_4(double rate);

struct VerificationReport {
  bool ok = true;
  std::vector<std::size_t> failed_steps;
  std::vector<std::string> problems;
};

/// Recomputes every gamma and phi bound from the stored rho values and checks
/// the margins, the chaining, the base rate rho0 >= 2 at lambda = 2, and the
/// final values.
VerificationReport check_certificate(const BoundCertificate& cert, unsigned threads = 0);

inline bool verify_certificate(const BoundCertificate& cert, unsigned threads = 0) {
  return check_certificate(cert, threads).ok;
}

struct TheoremBound {
  double bound = 0.0;
  double final_rho = 0.0;
  std::vector<std::string> conditions;
};

/// All-n constant from a verified certificate covering [2, 3.6].
/// Throws std::invalid_argument when the certificate fails verification,
/// does not reach 3.6, or ends below 2.25.
TheoremBound final_bound(const BoundCertificate& cert, unsigned threads = 0);

class CertificateParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text format: `N=`, `delta=`, `rho0=` header lines, one
/// `i lambda_lo lambda_hi rho_in rho_out gamma phi_value margin` line per
/// step with 17 significant digits, then `final_rho=` and `theorem_bound=`.
void write_certificate(std::ostream& out, const BoundCertificate& cert);
BoundCertificate read_certificate(std::istream& in);

}  // namespace canbound
