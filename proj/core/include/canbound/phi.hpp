#pragma once

// Upper bounds for
//
//   phi(gamma, x) = sup (1/n) sum_i f(p_i, q_i)
//     s.t. p_i q_i <= 1/gamma,  sum p_i = sum q_i >= n (1 - 1/x),  0 <= p_i, q_i <= 1
//
// over all n. phi_upper dispatches between an exact closed form, the empty
// feasible region, and a Lagrangian bound along the hyperbola p q = 1/gamma.
// phi_oracle is an independent lower estimate used for testing.

#include <optional>
#include <string_view>

#include "canbound/entropy.hpp"

namespace canbound {

/// Validated (gamma, x). gamma >= 2.25 is required by every bound used here.
class PhiQuery {
 public:
  static constexpr double kMinGamma = 2.25;
  static constexpr double kMinX = 2.0;

  PhiQuery(double gamma, double x);

  double gamma() const { return gamma_; }
  double x() const { return x_; }
  /// Required mean of p + q, i.e. 2 (1 - 1/x).
  double required_sum() const { return 2.0 * (1.0 - 1.0 / x_); }

 private:
  double gamma_;
  double x_;
};

enum class PhiRegime { ClosedForm, Infeasible, LagrangianFallback };

std::string_view to_string(PhiRegime regime);

struct PhiCertificate {
  double p0 = 0.0;
  double q0 = 0.0;
  double kappa = 0.0;
  double psi = 0.0;
};

struct PhiBound {
  double value = 0.0;  // -infinity iff regime == Infeasible
  PhiRegime regime = PhiRegime::Infeasible;
  std::optional<PhiCertificate> certificate;
};

/// Roots p0 < q0 of t^2 - 2(1 - 1/x) t + 1/gamma when both lie in [0, 1].
/// Absent for a non-positive discriminant (including the double root).
std::optional<ProbPair> closed_form_candidate(const PhiQuery& query);

/// False iff no point with p q <= 1/gamma reaches p + q >= 2(1 - 1/x),
/// i.e. iff 1 + 1/gamma < 2(1 - 1/x). Ties within a few ulps count as
/// feasible, which can only make the resulting bound larger.
bool is_feasible(const PhiQuery& query);

/// Lagrangian bound psi - 2 kappa (1 - 1/x) with kappa chosen so that the
/// hyperbola point (p0, 1/(gamma p0)) maximises L_kappa. Valid for every
/// admissible p0 in (1/gamma, 1/sqrt(gamma)).
PhiBound lagrangian_phi_bound(const PhiQuery& query, double p0);

/// Number of p0 samples scanned when neither the closed form nor
/// infeasibility applies.
inline constexpr int kFallbackGridSize = 512;

/// Always >= phi(gamma, x).
PhiBound phi_upper(const PhiQuery& query);

struct OracleEstimate {
  double lower = 0.0;
  double upper_hint = 0.0;
};

/// Best mixture of grid points of {p q <= 1/gamma} (plus the hyperbola points
/// over each grid abscissa) whose means satisfy the constraints. `lower` is
/// attained by a feasible configuration; `upper_hint` adds a crude Lipschitz
/// grid error and is diagnostic only. Throws std::domain_error when the query
/// is infeasible and std::invalid_argument when resolution < 100.
OracleEstimate phi_oracle(const PhiQuery& query, int resolution);

/// sigma(p) = (g(p) - g(q)) / (q - p) with q = 1/(gamma p), on
/// 1/gamma <= p < 1/sqrt(gamma). Returns +infinity at p = 1/gamma (q = 1).
double sigma(double p, double gamma);

}  // namespace canbound
