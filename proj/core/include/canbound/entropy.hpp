#pragma once

// Scalar kernels for the entropy bound on cancellative pairs.
//
// Base conventions: binary_entropy and pair_objective are in bits (log2).
// log_ratio and kappa_for use the natural logarithm; the ln 2 in the
// denominator of kappa_for converts the derivative of f (which is in bits)
// back to the natural-log form of log_ratio.

namespace canbound {

/// A point (p, q) of the unit square. Constructing one validates the range.
class ProbPair {
 public:
  ProbPair(double p, double q);

  double p() const { return p_; }
  double q() const { return q_; }

  ProbPair swapped() const { return ProbPair(q_, p_); }

 private:
  double p_;
  double q_;
};

/// h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0 exactly.
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// f(p, q) = p h(q) + q h(p).
double pair_objective(const ProbPair& pq);

/// g(x) = ln(1 - x) / x on the open interval (0, 1).
/// Endpoints are rejected rather than extended by continuity.
double log_ratio(double x);

/// Multiplier that makes (p0, q0) the maximiser of the Lagrangian along the
/// hyperbola p q = p0 q0:
///
///   kappa = (p0 q0 / ln 2) * (g(p0) - g(q0)) / (q0 - p0)
///
/// Symmetric in its arguments and strictly positive. Throws
/// std::invalid_argument when p0 == q0 (the expression is 0/0 there).
double kappa_for(double p0, double q0);

/// L_kappa(p, q) = f(p, q) + kappa (p + q).
double lagrangian(const ProbPair& pq, double kappa);

}  // namespace canbound
