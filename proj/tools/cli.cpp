#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "canbound/curves.hpp"
#include "canbound/families.hpp"
#include "canbound/phi.hpp"
#include "canbound/pipeline.hpp"

namespace canbound::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  unsigned threads = 0;
  bool quiet = false;

  // bound
  std::size_t n_intervals = 100000;
  double delta = 1e-8;
  double lambda_max = kLambdaMax;
  std::string out_path = "-";

  // check / curve
  std::string cert_path;
  int samples = 200;

  // phi
  double gamma = 0.0;
  double x = 0.0;
  std::optional<int> oracle_resolution;

  // verify
  std::string family_path;
  bool recovering = false;

  // search
  int search_n = 0;
  std::optional<int> search_k;

  // construct
  std::optional<int> triple_blocks;
  std::vector<int> powerset_split;
};

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

// Writes through `fallback` when path is "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path == "-" || path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  fn(file);
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

BoundCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open certificate '" + path + "'");
  return read_certificate(in);
}

FamilyPair load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open family file '" + path + "'");
  return read_family_pair(in);
}

int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Schedule schedule =
      Schedule::uniform(cfg.n_intervals, cfg.lambda_max, cfg.delta, 2.0);
  ProgressFn progress;
  if (!cfg.quiet) {
    const std::size_t every = std::max<std::size_t>(1, schedule.intervals() / 10);
    progress = [&err, every](std::size_t done, std::size_t total) {
      if (done % every == 0 || done == total) err << "bound: " << done << "/" << total << "\n";
    };
  }
  BoundCertificate cert;
  try {
    cert = run_schedule(schedule, progress);
  } catch (const ScheduleFailure& e) {
    err << "bound: schedule failed at interval " << e.interval() << ": " << e.what() << "\n";
    return kExitFailed;
  }
  with_output(cfg.out_path, out, [&](std::ostream& os) { write_certificate(os, cert); });
  if (!cfg.quiet) {
    err << fmt::format("bound: final_rho={:.17g} theorem_bound={:.4f}\n", cert.final_rho,
                       cert.theorem_bound);
  }
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  BoundCertificate cert;
  try {
    cert = load_certificate(cfg.cert_path);
  } catch (const CertificateParseError& e) {
    err << "check: malformed certificate: " << e.what() << "\n";
    return kExitFailed;
  }
  const VerificationReport report = check_certificate(cert, cfg.threads);
  if (!report.ok) {
    for (const std::string& p : report.problems) err << "check: " << p << "\n";
    if (!report.failed_steps.empty()) {
      err << "check: failed steps:";
      for (std::size_t i : report.failed_steps) err << ' ' << i;
      err << "\n";
    }
    out << "FAIL\n";
    return kExitFailed;
  }
  out << fmt::format("OK steps={} final_rho={:.17g} theorem_bound={:.4f}\n", cert.steps.size(),
                     cert.final_rho, cert.theorem_bound);
  if (cert.schedule.lambdas.back() >= kLambdaMax && cert.final_rho >= kExtensionRate) {
    const TheoremBound tb = final_bound(cert, cfg.threads);
    out << fmt::format("all-n bound: |A||B| <= {:.4f}^n\n", tb.bound);
    if (!cfg.quiet) {
      for (const std::string& c : tb.conditions) err << "check: " << c << "\n";
    }
  } else if (!cfg.quiet) {
    err << "check: certificate does not cover [2, 3.6] with rate >= 2.25; no all-n bound\n";
  }
  return kExitOk;
}

int cmd_phi(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const PhiQuery query(cfg.gamma, cfg.x);
  const PhiBound bound = phi_upper(query);
  nlohmann::json line = {{"gamma", cfg.gamma},
                         {"x", cfg.x},
                         {"regime", std::string(to_string(bound.regime))},
                         {"value", number(bound.value)}};
  if (bound.certificate) {
    line["p0"] = number(bound.certificate->p0);
    line["q0"] = number(bound.certificate->q0);
    line["kappa"] = number(bound.certificate->kappa);
    line["psi"] = number(bound.certificate->psi);
  }
  out << line.dump() << "\n";
  if (cfg.oracle_resolution) {
    nlohmann::json oracle = {{"gamma", cfg.gamma}, {"x", cfg.x},
                             {"resolution", *cfg.oracle_resolution}};
    if (is_feasible(query)) {
      const OracleEstimate est = phi_oracle(query, *cfg.oracle_resolution);
      oracle["oracle_lower"] = est.lower;
      oracle["oracle_upper_hint"] = est.upper_hint;
    } else {
      oracle["oracle_lower"] = "-inf";
      oracle["oracle_upper_hint"] = "-inf";
    }
    out << oracle.dump() << "\n";
  }
  return kExitOk;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  BoundCertificate cert;
  try {
    cert = load_certificate(cfg.cert_path);
  } catch (const CertificateParseError& e) {
    err << "curve: malformed certificate: " << e.what() << "\n";
    return kExitFailed;
  }
  if (!verify_certificate(cert, cfg.threads)) {
    err << "curve: certificate does not verify; run `check` for details\n";
    return kExitFailed;
  }
  const std::vector<CurvePoint> points = emit_curve(cert, cfg.samples);
  with_output(cfg.out_path, out, [&](std::ostream& os) { write_curve_csv(os, points); });
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FamilyPair fp = [&] {
    try {
      return load_family(cfg.family_path);
    } catch (const FamilyParseError& e) {
      throw UsageError(std::string("malformed family file: ") + e.what());
    }
  }();
  out << fmt::format("n={} |A|={} |B|={} product={}\n", fp.n(), fp.a().size(), fp.b().size(),
                     fp.size_product());
  const bool cancellative = is_cancellative(fp);
  out << "cancellative: " << (cancellative ? "true" : "false") << "\n";
  bool ok = cancellative;
  if (cancellative) {
    const EntropyCheck ec = entropy_inequality_check(fp);
    out << fmt::format("entropy: lhs={:.12g} rhs={:.12g} holds: {}\n", ec.lhs, ec.rhs,
                       ec.holds ? "true" : "false");
    ok = ok && ec.holds;
  }
  if (cfg.recovering) {
    const bool rec = is_recovering(fp);
    out << "recovering: " << (rec ? "true" : "false") << "\n";
    ok = ok && rec;
  }
  if (!ok && !cfg.quiet) err << "verify: requested property does not hold\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_search(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const SearchResult result = cfg.search_k ? exhaustive_max_ck(cfg.search_n, *cfg.search_k)
                                           : exhaustive_max_c(cfg.search_n);
  out << "value=" << result.value << "\n";
  with_output(cfg.out_path, out, [&](std::ostream& os) { write_family_pair(os, result.witness); });
  return kExitOk;
}

int cmd_construct(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const bool triple = cfg.triple_blocks.has_value();
  const bool split = !cfg.powerset_split.empty();
  if (triple == split) {
    throw UsageError("construct needs exactly one of --triple-blocks or --powerset-split");
  }
  const FamilyPair fp = triple ? triple_blocks(*cfg.triple_blocks)
                               : powerset_split(cfg.powerset_split[0], cfg.powerset_split[1]);
  with_output(cfg.out_path, out, [&](std::ostream& os) { write_family_pair(os, fp); });
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Certified upper bounds for cancellative pairs of set families", "canbound"};
  app.require_subcommand(1);
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all available)");
  app.add_flag("--quiet", cfg.quiet, "Suppress progress output");

  auto* bound = app.add_subcommand("bound", "Run the rho-iteration and write a certificate");
  bound->add_option("--n-intervals", cfg.n_intervals, "Number of lambda intervals N")
      ->check(CLI::PositiveNumber);
  bound->add_option("--delta", cfg.delta, "Required margin")->check(CLI::PositiveNumber);
  bound->add_option("--lambda-max", cfg.lambda_max, "Last grid point (<= 3.6)")
      ->check(CLI::Range(2.0, kLambdaMax));
  bound->add_option("--out", cfg.out_path, "Certificate file ('-' for stdout)");

  auto* check = app.add_subcommand("check", "Independently re-verify a certificate");
  check->add_option("CERT", cfg.cert_path, "Certificate file")->required();

  auto* phi = app.add_subcommand("phi", "Bound phi(gamma, x)");
  phi->add_option("--gamma", cfg.gamma, "gamma >= 2.25")->required();
  phi->add_option("--x", cfg.x, "x >= 2")->required();
  phi->add_option("--oracle", cfg.oracle_resolution, "Also run the grid oracle (>= 100)");

  auto* curve = app.add_subcommand("curve", "Emit upper/lower rate curves as CSV");
  curve->add_option("--cert", cfg.cert_path, "Certificate file")->required();
  curve->add_option("--samples", cfg.samples, "Number of x samples")->check(CLI::Range(2, 1000000));
  curve->add_option("--out", cfg.out_path, "CSV file ('-' for stdout)");

  auto* verify = app.add_subcommand("verify", "Check a family-pair file");
  verify->add_option("FILE", cfg.family_path, "Family-pair file")->required();
  verify->add_flag("--recovering", cfg.recovering, "Also require the recovering property");

  auto* search = app.add_subcommand("search", "Exhaustive maximum of |A||B|");
  search->add_option("--n", cfg.search_n, "Ground set size")->required();
  search->add_option("--k", cfg.search_k, "Restrict to k-uniform pairs");
  search->add_option("--emit", cfg.out_path, "Write the witness to this file");

  auto* construct = app.add_subcommand("construct", "Write a known construction");
  construct->add_option("--triple-blocks", cfg.triple_blocks, "m blocks of size 3 (n = 3m)");
  construct->add_option("--powerset-split", cfg.powerset_split, "n s1: P([s1]) vs P([n] \\ [s1])")
      ->expected(2);
  construct->add_option("--out", cfg.out_path, "Output file ('-' for stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "canbound: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*bound) return cmd_bound(cfg, out, err);
    if (*check) return cmd_check(cfg, out, err);
    if (*phi) return cmd_phi(cfg, out, err);
    if (*curve) return cmd_curve(cfg, out, err);
    if (*verify) return cmd_verify(cfg, out, err);
    if (*search) return cmd_search(cfg, out, err);
    if (*construct) return cmd_construct(cfg, out, err);
  } catch (const UsageError& e) {
    err << "canbound: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "canbound: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "canbound: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    err << "canbound: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace canbound::cli
