#include "canbound/pipeline.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <string_view>

#include "canbound/parallel.hpp"
#include "canbound/phi.hpp"

namespace canbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close_relative(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Schedule Schedule::uniform(std::size_t n_intervals, double lambda_max, double delta,
                           double rho0) {
  if (n_intervals == 0) throw std::invalid_argument("schedule needs N >= 1");
  Schedule s;
  s.delta = delta;
  s.rho0 = rho0;
  s.lambdas.resize(n_intervals + 1);
  const double span = lambda_max - 2.0;
  for (std::size_t i = 0; i < n_intervals; ++i) {
    s.lambdas[i] = 2.0 + static_cast<double>(i) * span / static_cast<double>(n_intervals);
  }
  s.lambdas[n_intervals] = lambda_max;
  s.validate();
  return s;
}

void Schedule::validate() const {
  if (lambdas.size() < 2) throw std::invalid_argument("schedule needs N >= 1");
  if (lambdas.front() != 2.0) throw std::invalid_argument("schedule must start at lambda = 2");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) {
      throw std::invalid_argument("schedule lambdas must increase strictly");
    }
  }
  if (!(lambdas.back() <= kLambdaMax)) {
    throw std::invalid_argument("schedule must end at or below lambda = 3.6");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(rho0 >= 2.0 && rho0 <= kRhoCap)) {
    throw std::invalid_argument("rho0 must lie in [2, 2.5]");
  }
}

double gamma_from(double r1, double r2, double lam, double mu) {
  if (!(r1 >= 2.0 && r2 >= r1)) {
    throw std::invalid_argument("gamma_from requires 2 <= r1 <= r2");
  }
  if (!(lam >= 2.0 && mu > lam)) {
    throw std::invalid_argument("gamma_from requires 2 <= lam < mu");
  }
  // gamma = r1 (r2 / r1)^(mu / (mu - lam)); exact when r2 == r1.
  const double log_gamma = std::log(r1) + mu / (mu - lam) * std::log(r2 / r1);
  return std::exp(log_gamma);
}

double phi_value_at(double gamma, double lam) {
  if (std::isinf(gamma)) {
    // p q <= 0 puts every point on an axis, where f vanishes.
    return 1.0 >= 2.0 * (1.0 - 1.0 / lam) ? 0.0 : -kInf;
  }
  return phi_upper(PhiQuery(gamma, lam)).value;
}

bool step_ok(double r1, double gamma, double lam, double delta) {
  if (!(gamma >= r1 && gamma >= PhiQuery::kMinGamma)) {
    throw std::invalid_argument("step_ok requires gamma >= max(r1, 2.25)");
  }
  if (!(lam >= 2.0)) throw std::invalid_argument("step_ok requires lam >= 2");
  const double phi = phi_value_at(gamma, lam);
  if (phi == -kInf) return true;
  return std::log2(r1) - (phi + kPhiInflation) >= delta;
}

RhoStep next_rho(double rho_in, double lam, double mu, double delta) {
  if (!(rho_in >= 2.0 && rho_in <= kRhoCap)) {
    throw std::invalid_argument("next_rho requires 2 <= rho_in <= 2.5");
  }
  if (!(lam >= 2.0 && mu > lam && mu <= kLambdaMax)) {
    throw std::invalid_argument("next_rho requires 2 <= lam < mu <= 3.6");
  }
  auto passes = [&](double rho_out) {
    const double gamma = gamma_from(rho_in, rho_out, lam, mu);
    if (!(gamma >= PhiQuery::kMinGamma)) return false;
    return step_ok(rho_in, gamma, lam, delta);
  };

  double hi = rho_in;
  if (!passes(hi)) {
    double lo = rho_in;
    hi = kRhoCap;
    if (!passes(hi)) {
      throw ScheduleFailure(0, fmt::format("no rho_out <= {} satisfies [{}, {}] from rho_in = {}",
                                           kRhoCap, lam, mu, rho_in));
    }
    // passes() is monotone in rho_out: gamma grows with rho_out and the
    // phi bound does not increase with gamma.
    while (hi - lo > kRhoTolerance) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if (passes(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }

  RhoStep step;
  step.lambda_lo = lam;
  step.lambda_hi = mu;
  step.rho_in = rho_in;
  step.rho_out = hi;
  step.gamma = gamma_from(rho_in, hi, lam, mu);
  step.phi_value = phi_value_at(step.gamma, lam);
  step.margin = std::log2(rho_in) - step.phi_value;
  return step;
}

BoundCertificate run_schedule(const Schedule& schedule, const ProgressFn& progress) {
  schedule.validate();
  BoundCertificate cert;
  cert.schedule = schedule;
  const std::size_t n = schedule.intervals();
  cert.steps.reserve(n);
  double rho = schedule.rho0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      cert.steps.push_back(
          next_rho(rho, schedule.lambdas[i], schedule.lambdas[i + 1], schedule.delta));
    } catch (const ScheduleFailure& e) {
      throw ScheduleFailure(i, fmt::format("interval {}: {}", i, e.what()));
    }
    rho = cert.steps.back().rho_out;
    if (progress) progress(i + 1, n);
  }
  cert.final_rho = rho;
  cert.theorem_bound = round_up_4(rho);
  return cert;
}

double round_up_4(double rate) {
  double rounded = std::ceil(rate * 1e4) / 1e4;
  if (rounded < rate) rounded = (std::ceil(rate * 1e4) + 1.0) / 1e4;
  return rounded;
}

VerificationReport check_certificate(const BoundCertificate& cert, unsigned threads) {
  VerificationReport report;
  auto fail = [&report](std::string why) {
    report.ok = false;
    report.problems.push_back(std::move(why));
  };

  const Schedule& s = cert.schedule;
  const std::size_t n = cert.steps.size();
  if (n == 0) {
    fail("certificate has no steps");
    return report;
  }
  if (s.lambdas.size() != n + 1) fail("schedule size does not match step count");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("schedule: ") + e.what());
  }
  // Base case: c_k(2k) <= 2^(2k) is the only available anchor at lambda = 2.
  if (!(s.rho0 >= 2.0)) fail("rho0 below the base rate 2 at lambda = 2");
  if (cert.steps.front().rho_in != s.rho0) fail("first step does not start at rho0");
  if (!report.ok) return report;

  std::vector<char> bad(n, 0);
  std::mutex problems_mutex;
  parallel_for(n, threads, [&](std::size_t i) {
    const RhoStep& st = cert.steps[i];
    std::string why;
    if (st.lambda_lo != s.lambdas[i] || st.lambda_hi != s.lambdas[i + 1]) {
      why = "lambda bounds do not match the schedule";
    } else if (i > 0 && st.rho_in != cert.steps[i - 1].rho_out) {
      why = "rho_in does not chain from the previous rho_out";
    } else if (!(st.rho_out >= st.rho_in) || !(st.rho_out <= kRhoCap)) {
      why = "rho_out outside [rho_in, 2.5]";
    } else {
      const double gamma = gamma_from(st.rho_in, st.rho_out, st.lambda_lo, st.lambda_hi);
      if (!(gamma >= PhiQuery::kMinGamma) || !(gamma >= st.rho_in)) {
        why = "recomputed gamma below max(rho_in, 2.25)";
      } else if (!close_relative(gamma, st.gamma, 1e-12)) {
        why = fmt::format("stored gamma {:.17g} differs from recomputed {:.17g}", st.gamma, gamma);
      } else {
        const double phi = phi_value_at(gamma, st.lambda_lo);
        const bool same_phi =
            (phi == st.phi_value) || (std::isfinite(phi) && std::isfinite(st.phi_value) &&
                                      std::abs(phi - st.phi_value) <= 1e-12);
        if (!same_phi) {
          why = fmt::format("stored phi {:.17g} differs from recomputed {:.17g}", st.phi_value,
                            phi);
        } else if (!step_ok(st.rho_in, gamma, st.lambda_lo, s.delta)) {
          why = "margin below delta";
        } else if (!(st.margin >= s.delta)) {
          why = "stored margin below delta";
        }
      }
    }
    if (!why.empty()) {
      bad[i] = 1;
      std::lock_guard lock(problems_mutex);
      report.problems.push_back(fmt::format("step {}: {}", i, why));
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (bad[i]) report.failed_steps.push_back(i);
  }
  if (!report.failed_steps.empty()) report.ok = false;

  if (cert.final_rho != cert.steps.back().rho_out) fail("final_rho is not the last rho_out");
  if (cert.theorem_bound != round_up_4(cert.final_rho)) {
    fail("theorem_bound is not final_rho rounded up at the 4th decimal");
  }
  return report;
}

TheoremBound final_bound(const BoundCertificate& cert, unsigned threads) {
  const VerificationReport report = check_certificate(cert, threads);
  if (!report.ok) throw std::invalid_argument("certificate does not verify");
  if (cert.schedule.lambdas.back() < kLambdaMax) {
    throw std::invalid_argument("certificate stops before lambda = 3.6");
  }
  if (cert.final_rho < kExtensionRate) {
    throw std::invalid_argument("final rho below 2.25; the extension past n/k = 3.6 fails");
  }
  TheoremBound out;
  out.final_rho = cert.final_rho;
  out.bound = round_up_4(cert.final_rho);
  out.conditions = {
      "c_k(n) <= final_rho^n for 2 <= n/k <= 3.6 (certificate chain)",
      "n/k > 3.6: some p_i q_i > 1/2.25, so c_k(n) < 2.25 c_k(n-1) <= final_rho c_k(n-1)",
      "grid points are binary fractions, hence rational; k is a multiple of their common "
      "denominator M",
      "uniform to general pairs by the product-and-select reduction",
  };
  return out;
}

void write_certificate(std::ostream& out, const BoundCertificate& cert) {
  out << fmt::format("N={}\n", cert.steps.size());
  out << fmt::format("delta={:.17g}\n", cert.schedule.delta);
  out << fmt::format("rho0={:.17g}\n", cert.schedule.rho0);
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const RhoStep& s = cert.steps[i];
    out << fmt::format("{} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}\n", i,
                       s.lambda_lo, s.lambda_hi, s.rho_in, s.rho_out, s.gamma, s.phi_value,
                       s.margin);
  }
  out << fmt::format("final_rho={:.17g}\n", cert.final_rho);
  out << fmt::format("theorem_bound={:.4f}\n", cert.theorem_bound);
}

namespace {

double parse_real(std::string_view token, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw CertificateParseError(fmt::format("line {}: bad number '{}'", line, token));
  }
  return v;
}

std::size_t parse_count(std::string_view token, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw CertificateParseError(fmt::format("line {}: bad integer '{}'", line, token));
  }
  return v;
}

std::string_view expect_key(std::string_view text, std::string_view key, std::size_t line) {
  if (text.substr(0, key.size()) != key || text.size() <= key.size() || text[key.size()] != '=') {
    throw CertificateParseError(fmt::format("line {}: expected '{}='", line, key));
  }
  return text.substr(key.size() + 1);
}

}  // namespace

BoundCertificate read_certificate(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::string_view {
    if (!std::getline(in, text)) {
      throw CertificateParseError(fmt::format("line {}: unexpected end of file", line_no + 1));
    }
    ++line_no;
    return text;
  };

  BoundCertificate cert;
  const std::size_t n = parse_count(expect_key(next_line(), "N", line_no), line_no);
  if (n == 0) throw CertificateParseError("N must be positive");
  cert.schedule.delta = parse_real(expect_key(next_line(), "delta", line_no), line_no);
  cert.schedule.rho0 = parse_real(expect_key(next_line(), "rho0", line_no), line_no);
  cert.steps.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view rest = next_line();
    std::vector<std::string_view> fields;
    while (!rest.empty()) {
      const std::size_t sp = rest.find(' ');
      fields.push_back(rest.substr(0, sp));
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }
    if (fields.size() != 8) {
      throw CertificateParseError(fmt::format("line {}: expected 8 fields", line_no));
    }
    if (parse_count(fields[0], line_no) != i) {
      throw CertificateParseError(fmt::format("line {}: expected step index {}", line_no, i));
    }
    RhoStep& s = cert.steps[i];
    s.lambda_lo = parse_real(fields[1], line_no);
    s.lambda_hi = parse_real(fields[2], line_no);
    s.rho_in = parse_real(fields[3], line_no);
    s.rho_out = parse_real(fields[4], line_no);
    s.gamma = parse_real(fields[5], line_no);
    s.phi_value = parse_real(fields[6], line_no);
    s.margin = parse_real(fields[7], line_no);
  }
  cert.final_rho = parse_real(expect_key(next_line(), "final_rho", line_no), line_no);
  cert.theorem_bound = parse_real(expect_key(next_line(), "theorem_bound", line_no), line_no);
  if (std::getline(in, text) && !text.empty()) {
    throw CertificateParseError(fmt::format("line {}: trailing content", line_no + 1));
  }

  cert.schedule.lambdas.reserve(n + 1);
  cert.schedule.lambdas.push_back(cert.steps.front().lambda_lo);
  for (const RhoStep& s : cert.steps) cert.schedule.lambdas.push_back(s.lambda_hi);
  return cert;
}

}  // namespace canbound
