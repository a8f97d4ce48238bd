#include "canbound/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace canbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lipschitz constant of f on the unit square used for the oracle's hint.
constexpr double kOracleLipschitz = 8.0;

}  // namespace

PhiQuery::PhiQuery(double gamma, double x) : gamma_(gamma), x_(x) {
  if (!(gamma >= kMinGamma) || !std::isfinite(gamma)) {
    throw std::domain_error("gamma must be finite and >= 2.25, got " +
                            std::to_string(gamma));
  }
  if (!(x >= kMinX) || !std::isfinite(x)) {
    throw std::domain_error("x must be finite and >= 2, got " +
                            std::to_string(x));
  }
}

std::string_view to_string(PhiRegime regime) {
  switch (regime) {
    case PhiRegime::ClosedForm:
      return "ClosedForm";
    case PhiRegime::Infeasible:
      return "Infeasible";
    case PhiRegime::LagrangianFallback:
      return "LagrangianFallback";
  }
  return "?";
}

std::optional<ProbPair> closed_form_candidate(const PhiQuery& query) {
  const double s = query.required_sum();
  const double prod = 1.0 / query.gamma();
  const double disc = s * s - 4.0 * prod;
  // Rounding can leave a double root with a tiny positive discriminant.
  if (!(disc > 16.0 * std::numeric_limits<double>::epsilon() * s * s)) return std::nullopt;
  const double root = std::sqrt(disc);
  double q0 = 0.5 * (s + root);
  // Smaller root via the product keeps p0 q0 = 1/gamma to rounding.
  const double p0 = prod / q0;
  if (q0 > 1.0) {
    if (q0 > 1.0 + 4.0 * kEps) return std::nullopt;
    q0 = 1.0;
  }
  if (p0 < 0.0 || p0 >= q0) return std::nullopt;
  return ProbPair(p0, q0);
}

bool is_feasible(const PhiQuery& query) {
  const double reach = 1.0 + 1.0 / query.gamma();
  return reach >= query.required_sum() - 4.0 * kEps;
}

PhiBound lagrangian_phi_bound(const PhiQuery& query, double p0) {
  const double lo = 1.0 / query.gamma();
  const double hi = 1.0 / std::sqrt(query.gamma());
  if (!(p0 > lo && p0 < hi)) {
    throw std::invalid_argument(
        "lagrangian_phi_bound: p0 must lie in (1/gamma, 1/sqrt(gamma)), got " +
        std::to_string(p0));
  }
  const double q0 = 1.0 / (query.gamma() * p0);
  if (!(q0 < 1.0)) {
    throw std::invalid_argument("lagrangian_phi_bound: q0 = 1/(gamma p0) >= 1");
  }
  const double kappa = kappa_for(p0, q0);
  const double psi = lagrangian(ProbPair(p0, q0), kappa);
  PhiBound bound;
  bound.regime = PhiRegime::LagrangianFallback;
  bound.value = psi - kappa * query.required_sum();
  bound.certificate = PhiCertificate{p0, q0, kappa, psi};
  return bound;
}

PhiBound phi_upper(const PhiQuery& query) {
  if (auto root = closed_form_candidate(query)) {
    PhiBound bound;
    bound.regime = PhiRegime::ClosedForm;
    bound.value = pair_objective(*root);
    // At q0 = 1 the multiplier diverges; the value itself stays exact.
    const double kappa = root->q() < 1.0 ? kappa_for(root->p(), root->q()) : kInf;
    const double psi = root->q() < 1.0 ? lagrangian(*root, kappa) : kInf;
    bound.certificate = PhiCertificate{root->p(), root->q(), kappa, psi};
    return bound;
  }
  if (!is_feasible(query)) {
    return PhiBound{-kInf, PhiRegime::Infeasible, std::nullopt};
  }

  // Midpoints of a uniform partition keep every sample strictly inside
  // (1/gamma, 1/sqrt(gamma)). Strict comparison keeps the smallest p0 on ties.
  const double lo = 1.0 / query.gamma();
  const double hi = 1.0 / std::sqrt(query.gamma());
  const double step = (hi - lo) / kFallbackGridSize;
  std::optional<PhiBound> best;
  for (int j = 0; j < kFallbackGridSize; ++j) {
    const double p0 = lo + (j + 0.5) * step;
    if (!(p0 > lo && p0 < hi)) continue;
    PhiBound candidate = lagrangian_phi_bound(query, p0);
    if (!best || candidate.value < best->value) best = candidate;
  }
  if (!best) {
    throw std::logic_error("phi_upper: empty fallback grid");
  }
  return *best;
}

OracleEstimate phi_oracle(const PhiQuery& query, int resolution) {
  if (resolution < 100) {
    throw std::invalid_argument("phi_oracle: resolution must be >= 100");
  }
  if (!is_feasible(query)) {
    throw std::domain_error("phi_oracle: constraint region is empty");
  }

  // Swapping p and q maps the region and f to themselves, so any mixture can
  // be averaged with its mirror image to equalise the means. What remains is
  // a single constraint E[p + q] >= s, whose optimum is the upper concave
  // envelope of the points (p + q, f) evaluated on [s, inf).
  struct Point {
    double sum;
    double value;
  };
  const double cap = 1.0 / query.gamma();
  const double spacing = 1.0 / (resolution - 1);
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(resolution) * resolution / 2);
  auto add = [&](double p, double q) {
    points.push_back({p + q, pair_objective(ProbPair(p, q))});
  };
  for (int i = 0; i < resolution; ++i) {
    const double p = i * spacing;
    for (int j = 0; j < resolution; ++j) {
      const double q = j * spacing;
      if (p * q <= cap) add(p, q);
    }
    if (p > 0.0) {
      const double q = std::min(1.0, cap / p);
      add(p, q);
      add(q, p);
    }
  }

  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.sum < b.sum || (a.sum == b.sum && a.value > b.value);
  });
  std::vector<Point> hull;
  for (const Point& pt : points) {
    if (!hull.empty() && hull.back().sum == pt.sum) continue;
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      // Drop b when it lies on or below the chord a -> pt.
      const double cross =
          (b.sum - a.sum) * (pt.value - a.value) - (b.value - a.value) * (pt.sum - a.sum);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }

  const double s = std::min(query.required_sum(), hull.back().sum);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    if (hull[k].value > hull[peak].value) peak = k;
  }
  double lower = 0.0;
  if (hull[peak].sum >= s) {
    lower = hull[peak].value;
  } else {
    // The envelope decreases to the right of the peak; interpolate at s.
    std::size_t k = peak;
    while (k + 1 < hull.size() && hull[k + 1].sum < s) ++k;
    if (k + 1 == hull.size()) {
      lower = hull[k].value;
    } else {
      const Point& a = hull[k];
      const Point& b = hull[k + 1];
      const double t = (s - a.sum) / (b.sum - a.sum);
      lower = a.value + t * (b.value - a.value);
    }
  }
  return {lower, lower + kOracleLipschitz * spacing * std::sqrt(2.0)};
}

double sigma(double p, double gamma) {
  if (!(gamma >= PhiQuery::kMinGamma)) {
    throw std::domain_error("sigma requires gamma >= 2.25");
  }
  const double lo = 1.0 / gamma;
  const double hi = 1.0 / std::sqrt(gamma);
  if (!(p >= lo && p < hi)) {
    throw std::domain_error("sigma: p must lie in [1/gamma, 1/sqrt(gamma)), got " +
                            std::to_string(p));
  }
  const double q = 1.0 / (gamma * p);
  if (q >= 1.0) return kInf;
  return (log_ratio(p) - log_ratio(q)) / (q - p);
}

}  // namespace canbound
