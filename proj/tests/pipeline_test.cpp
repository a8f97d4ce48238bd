#include "canbound/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "canbound/phi.hpp"

namespace canbound {
namespace {

TEST(GammaFrom, Identity) {
  EXPECT_EQ(gamma_from(2.2, 2.2, 2.5, 2.6), 2.2);
}

TEST(GammaFrom, DirectArithmetic) {
  // (2.1^2.5 / 2^2)^(1/0.5) = 2.1^5 / 2^4
  EXPECT_NEAR(gamma_from(2.0, 2.1, 2.0, 2.5), 2.552563125, 1e-12);
}

TEST(GammaFrom, RoundTripAndOrdering) {
  for (double r1 : {2.0, 2.1, 2.25}) {
    for (double dr : {1e-9, 1e-6, 1e-3, 0.05}) {
      for (double lam : {2.0, 2.7, 3.4}) {
        const double mu = lam + 0.01;
        const double r2 = r1 + dr;
        const double g = gamma_from(r1, r2, lam, mu);
        const double back = std::pow(r1, lam / mu) * std::pow(g, 1.0 - lam / mu);
        EXPECT_NEAR(back / r2, 1.0, 1e-12);
        EXPECT_GE(g, r2);
      }
    }
  }
}

TEST(GammaFrom, Preconditions) {
  EXPECT_THROW(gamma_from(2.2, 2.1, 2.0, 2.5), std::invalid_argument);
  EXPECT_THROW(gamma_from(1.9, 2.1, 2.0, 2.5), std::invalid_argument);
  EXPECT_THROW(gamma_from(2.0, 2.1, 2.5, 2.5), std::invalid_argument);
}

TEST(StepOk, Examples) {
  EXPECT_TRUE(step_ok(2.0, 4.5, 2.0, 1e-8));
  EXPECT_FALSE(step_ok(2.0, 4.0, 2.0, 1e-8));
  EXPECT_TRUE(step_ok(2.25, 2.26, 3.6, 1e-8));
  EXPECT_THROW(step_ok(2.3, 2.26, 3.0, 1e-8), std::invalid_argument);
}

TEST(NextRho, FirstGridStep) {
  const double mu = 2.0 + 1.6 / 100000;
  const RhoStep s = next_rho(2.0, 2.0, mu, 1e-8);
  EXPECT_GT(s.rho_out, 2.0);
  EXPECT_LT(s.rho_out, 2.0001);
  EXPECT_GT(gamma_from(2.0, s.rho_out, 2.0, mu), 4.0);
  EXPECT_GE(s.margin, 1e-8);
}

TEST(NextRho, MinimalToTolerance) {
  const RhoStep s = next_rho(2.1, 2.5, 2.51, 1e-8);
  EXPECT_TRUE(step_ok(s.rho_in, s.gamma, s.lambda_lo, 1e-8));
  const double below = s.rho_out - 2 * kRhoTolerance;
  const double g = gamma_from(s.rho_in, below, 2.5, 2.51);
  EXPECT_TRUE(g < PhiQuery::kMinGamma || !step_ok(s.rho_in, g, 2.5, 1e-8));
}

TEST(NextRho, MonotoneInRhoIn) {
  const double lam = 2.4;
  const double mu = 2.41;
  const RhoStep a = next_rho(2.0, lam, mu, 1e-8);
  const RhoStep b = next_rho(2.01, lam, mu, 1e-8);
  EXPECT_GE(b.rho_out, a.rho_out);
}

TEST(NextRho, TinyIntervalStaysFinite) {
  const RhoStep s = next_rho(2.1, 2.5, 2.5 + 1e-8, 1e-8);
  EXPECT_TRUE(std::isfinite(s.rho_out));
  EXPECT_TRUE(std::isfinite(s.gamma));
  EXPECT_GE(s.rho_out, s.rho_in);
}

TEST(NextRho, FailsWithoutHeadroom) {
  // log2(2) = 1 < delta, and phi(gamma, 2) >= 0 is never -inf at x = 2.
  EXPECT_THROW(next_rho(2.0, 2.0, 2.1, 1.5), ScheduleFailure);
}

TEST(Schedule, UniformGrid) {
  const Schedule s = Schedule::uniform(1000);
  EXPECT_EQ(s.intervals(), 1000u);
  EXPECT_EQ(s.lambdas.front(), 2.0);
  EXPECT_EQ(s.lambdas.back(), 3.6);
  EXPECT_NEAR(s.lambdas[500], 2.8, 1e-15);
  EXPECT_EQ(s.delta, 1e-8);
  EXPECT_EQ(s.rho0, 2.0);
  EXPECT_THROW(Schedule::uniform(0), std::invalid_argument);
  EXPECT_THROW(Schedule::uniform(10, 3.7), std::invalid_argument);
}

class SmallRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { cert_ = new BoundCertificate(run_schedule(Schedule::uniform(1000))); }
  static void TearDownTestSuite() {
    delete cert_;
    cert_ = nullptr;
  }
  static BoundCertificate* cert_;
};
BoundCertificate* SmallRun::cert_ = nullptr;

TEST_F(SmallRun, StepInvariants) {
  const BoundCertificate& c = *cert_;
  ASSERT_EQ(c.steps.size(), 1000u);
  EXPECT_EQ(c.steps.front().rho_in, 2.0);
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const RhoStep& s = c.steps[i];
    EXPECT_GE(s.rho_out, s.rho_in);
    EXPECT_GE(s.gamma, s.rho_in);
    EXPECT_GE(s.gamma, 2.25);
    EXPECT_GE(s.margin, c.schedule.delta);
    EXPECT_EQ(s.margin, std::log2(s.rho_in) - s.phi_value);
    const double g = std::pow(std::pow(s.rho_out, s.lambda_hi) / std::pow(s.rho_in, s.lambda_lo),
                              1.0 / (s.lambda_hi - s.lambda_lo));
    EXPECT_NEAR(g / s.gamma, 1.0, 1e-9) << i;  // pow route loses ~1e-11 to cancellation
    if (i + 1 < c.steps.size()) EXPECT_EQ(s.rho_out, c.steps[i + 1].rho_in);
  }
  EXPECT_EQ(c.final_rho, c.steps.back().rho_out);
}

TEST_F(SmallRun, WeakerThanFineGridButBeatsPriorBound) {
  EXPECT_GE(cert_->final_rho, 2.2676);
  EXPECT_LE(cert_->final_rho, 2.33);
  EXPECT_LT(cert_->final_rho, 2.3264);
  EXPECT_GE(cert_->final_rho, 2.25);
}

TEST_F(SmallRun, VerifiesAndRoundTrips) {
  EXPECT_TRUE(verify_certificate(*cert_));
  std::stringstream ss;
  write_certificate(ss, *cert_);
  const BoundCertificate back = read_certificate(ss);
  ASSERT_EQ(back.steps.size(), cert_->steps.size());
  for (std::size_t i = 0; i < back.steps.size(); ++i) {
    EXPECT_EQ(back.steps[i].rho_out, cert_->steps[i].rho_out);
    EXPECT_EQ(back.steps[i].gamma, cert_->steps[i].gamma);
    EXPECT_EQ(back.steps[i].phi_value, cert_->steps[i].phi_value);
    EXPECT_EQ(back.steps[i].margin, cert_->steps[i].margin);
  }
  EXPECT_EQ(back.schedule.lambdas, cert_->schedule.lambdas);
  EXPECT_EQ(back.final_rho, cert_->final_rho);
  EXPECT_EQ(back.theorem_bound, cert_->theorem_bound);
  EXPECT_TRUE(verify_certificate(back));
  std::stringstream again;
  write_certificate(again, back);
  std::stringstream first;
  write_certificate(first, *cert_);
  EXPECT_EQ(again.str(), first.str());
}

TEST_F(SmallRun, RejectsLoweredRho) {
  for (std::size_t i : {std::size_t{0}, std::size_t{400}, std::size_t{999}}) {
    BoundCertificate bad = *cert_;
    bad.steps[i].rho_out -= 1e-4;
    const VerificationReport r = check_certificate(bad);
    EXPECT_FALSE(r.ok) << i;
  }
}

TEST_F(SmallRun, RejectsLowBaseRate) {
  BoundCertificate bad = *cert_;
  bad.schedule.rho0 = 1.9;
  bad.steps[0].rho_in = 1.9;
  EXPECT_FALSE(verify_certificate(bad));
}

TEST_F(SmallRun, RejectsTamperedFinalValues) {
  BoundCertificate bad = *cert_;
  bad.theorem_bound = 2.2682;
  EXPECT_FALSE(verify_certificate(bad));
  BoundCertificate bad2 = *cert_;
  bad2.final_rho = 2.26;
  EXPECT_FALSE(verify_certificate(bad2));
}

TEST_F(SmallRun, ReportsFailingStep) {
  BoundCertificate bad = *cert_;
  bad.steps[500].phi_value -= 0.01;
  const VerificationReport r = check_certificate(bad);
  ASSERT_FALSE(r.ok);
  ASSERT_EQ(r.failed_steps.size(), 1u);
  EXPECT_EQ(r.failed_steps[0], 500u);
}

TEST_F(SmallRun, FinalBound) {
  const TheoremBound tb = final_bound(*cert_);
  EXPECT_GT(tb.bound, 2.2682);
  EXPECT_LT(tb.bound, 2.33);
  EXPECT_GE(tb.bound, cert_->final_rho);
  EXPECT_FALSE(tb.conditions.empty());
}

TEST(FinalBound, RejectsShortSchedules) {
  const BoundCertificate c = run_schedule(Schedule::uniform(50, 3.0));
  EXPECT_TRUE(verify_certificate(c));
  EXPECT_THROW(final_bound(c), std::invalid_argument);
}

TEST(RoundUp4, Values) {
  EXPECT_EQ(round_up_4(2.268166), 2.2682);
  EXPECT_EQ(round_up_4(2.25), 2.25);
  EXPECT_GE(round_up_4(2.26810000001), 2.26810000001);
}

TEST(RefinementMonotonicity, DoublingNeverHurts) {
  double prev = INFINITY;
  for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
    const double rho = run_schedule(Schedule::uniform(n)).final_rho;
    EXPECT_LE(rho, prev) << "N=" << n;
    prev = rho;
  }
}

TEST(ReadCertificate, RejectsMalformedInput) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_certificate(in);
  };
  EXPECT_THROW(parse(""), CertificateParseError);
  EXPECT_THROW(parse("N=1\ndelta=1e-8\nrho0=2\n"), CertificateParseError);
  EXPECT_THROW(parse("N=1\ndelta=1e-8\nrho0=2\n1 2 3.6 2 2.2 3 0.9 0.1\nfinal_rho=2.2\ntheorem_bound=2.2\n"),
               CertificateParseError);
  EXPECT_THROW(parse("N=1\ndelta=x\nrho0=2\n"), CertificateParseError);
  EXPECT_THROW(
      parse("N=1\ndelta=1e-8\nrho0=2\n0 2 3.6 2 2.2 3 0.9\nfinal_rho=2.2\ntheorem_bound=2.2\n"),
      CertificateParseError);
}

}  // namespace
}  // namespace canbound
