#include "canbound/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace canbound {

namespace {

void require_probability(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1], got " +
                            std::to_string(v));
  }
}

// -t log2 t with the 0 log 0 = 0 convention.
double plogp(double t) { return t == 0.0 ? 0.0 : -t * std::log2(t); }

}  // namespace

ProbPair::ProbPair(double p, double q) : p_(p), q_(q) {
  require_probability(p, "p");
  require_probability(q, "q");
}

double binary_entropy(double p) {
  require_probability(p, "binary_entropy argument");
  if (p == 0.0 || p == 1.0) return 0.0;
  return plogp(p) + plogp(1.0 - p);
}

double pair_objective(const ProbPair& pq) {
  return pq.p() * binary_entropy(pq.q()) + pq.q() * binary_entropy(pq.p());
}

double log_ratio(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("log_ratio is defined on (0, 1) only, got " +
                            std::to_string(x));
  }
  return std::log1p(-x) / x;
}

double kappa_for(double p0, double q0) {
  if (p0 == q0) {
    throw std::invalid_argument("kappa_for requires p0 != q0");
  }
  const double gp = log_ratio(p0);
  const double gq = log_ratio(q0);
  return (p0 * q0 / std::log(2.0)) * (gp - gq) / (q0 - p0);
}

double lagrangian(const ProbPair& pq, double kappa) {
  if (!(kappa >= 0.0)) {
    throw std::domain_error("lagrangian requires kappa >= 0");
  }
  return pair_objective(pq) + kappa * (pq.p() + pq.q());
}

}  // namespace canbound
