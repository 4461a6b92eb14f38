// tfc: elliptic divisibility sequences from twisted Fermat cubics.
//
// Subcommands:
//   generate      emit W_1..W_max with companion columns, optionally cached
//   verify        run the divisibility and identity checks over the terms
//   certify-scan  build the perfect-power certificate and scan for hits
//
// Exit codes: 0 success, 1 mathematical violation (refutation-grade),
// 2 usage or input error. That contract is stable; scripts may rely on it.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "tfc/eds.hpp"
#include "tfc/io.hpp"
#include "tfc/power_cert.hpp"

using nlohmann::json;

namespace {

struct Options {
  std::string d_str;
  std::string point_str;
  unsigned long max_m = 10;
  std::vector<std::string> checks;
  unsigned long trial_bound = 100000;
  unsigned long rho_rounds = 200000;
  unsigned long seed = 1;
  std::string cache_path;
  std::string format = "text";
};

const std::set<std::string> kKnownChecks = {"strong-div", "valuation",
                                            "primitive", "identities"};

tfc::arith::Effort effort_of(const Options& o) {
  tfc::arith::Effort e;
  e.trial_bound = o.trial_bound;
  e.rho_rounds = o.rho_rounds;
  e.seed = o.seed;
  return e;
}

json config_json(const Options& o, const char* cmd) {
  return json{{"schema", tfc::io::kSchemaVersion},
              {"command", cmd},
              {"d", o.d_str},
              {"point", o.point_str},
              {"max_m", o.max_m},
              {"trial_bound", o.trial_bound},
              {"rho_rounds", o.rho_rounds},
              {"seed", o.seed}};
}

// Build the context from flags, or from the cache when flags are omitted.
// When both are present they must agree; a cached term contradicting its own
// invariants is a violation, not a usage error.
tfc::EdsContext make_context(Options& o, bool use_cache,
                             unsigned long* cached_upto) {
  if (use_cache && !o.cache_path.empty()) {
    std::ifstream probe(o.cache_path);
    if (probe.good()) {
      auto cache = tfc::io::load_cache(o.cache_path);
      if (!o.d_str.empty() &&
          tfc::io::parse_integer(o.d_str) != cache.d)
        throw tfc::inconsistency_error("cache header d disagrees with --d");
      if (!o.point_str.empty() &&
          !(tfc::io::parse_point(o.point_str) == cache.generator))
        throw tfc::inconsistency_error(
            "cache header point disagrees with --point");
      tfc::EdsContext ctx(tfc::CubicCurve(cache.d, effort_of(o)),
                          cache.generator, effort_of(o));
      for (const auto& t : cache.terms) ctx.adopt_term(t);
      if (cached_upto) *cached_upto = cache.terms.size();
      o.d_str = cache.d.get_str();
      return ctx;
    }
  }
  if (o.d_str.empty() || o.point_str.empty())
    throw std::invalid_argument("--d and --point are required without a cache");
  return tfc::EdsContext(
      tfc::CubicCurve(tfc::io::parse_integer(o.d_str), effort_of(o)),
      tfc::io::parse_point(o.point_str), effort_of(o));
}

int cmd_generate(Options& o) {
  auto ctx = make_context(o, false, nullptr);
  if (o.format == "json") {
    json terms = json::array();
    for (unsigned long m = 1; m <= o.max_m; ++m)
      terms.push_back(json::parse(tfc::io::term_json(ctx.term(m))));
    json out{{"config", config_json(o, "generate")}, {"terms", terms}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "m\tU\tV\tW\tA\tB\tC\n";
    for (unsigned long m = 1; m <= o.max_m; ++m) {
      const auto& t = ctx.term(m);
      std::cout << t.m << "\t" << t.U << "\t" << t.V << "\t" << t.W << "\t"
                << t.A << "\t" << t.B << "\t" << t.C << "\n";
    }
  }
  if (!o.cache_path.empty()) tfc::io::save_cache(ctx, o.max_m, o.cache_path);
  return 0;
}

int cmd_verify(Options& o) {
  auto ctx = make_context(o, true, nullptr);
  std::set<std::string> selected(o.checks.begin(), o.checks.end());
  if (selected.empty()) selected = kKnownChecks;
  for (const auto& c : selected)
    if (!kKnownChecks.count(c))
      throw std::invalid_argument("unknown check: " + c);

  std::vector<tfc::LawReport> reports;
  std::vector<tfc::PrimitiveEntry> primitive_entries;
  if (selected.count("strong-div"))
    reports.push_back(tfc::strong_divisibility_report(ctx, o.max_m));
  if (selected.count("valuation")) {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
      reports.push_back(tfc::valuation_report(ctx, p, o.max_m));
  }
  if (selected.count("primitive")) {
    auto prim = tfc::primitive_report(ctx, o.max_m);
    primitive_entries = prim.entries;
    reports.push_back(prim.law);
  }
  if (selected.count("identities"))
    reports.push_back(tfc::structural_identities_report(ctx, o.max_m));

  bool all_passed = true;
  for (const auto& r : reports) all_passed = all_passed && r.passed();

  if (o.format == "json") {
    json jreports = json::array();
    for (const auto& r : reports)
      jreports.push_back(json::parse(tfc::io::law_report_json(r)));
    json jprim = json::array();
    for (const auto& e : primitive_entries) {
      json je{{"m", e.m}, {"primitive_part", e.primitive_part.get_str()}};
      je["p0_candidate"] =
          e.p0_candidate ? json(e.p0_candidate->get_str()) : json(nullptr);
      jprim.push_back(je);
    }
    json out{{"config", config_json(o, "verify")},
             {"reports", jreports},
             {"primitive_parts", jprim},
             {"passed", all_passed}};
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      std::cout << (r.passed() ? "pass" : "FAIL") << "  " << r.law << "  ("
                << r.checks << " checks";
      if (!r.passed()) std::cout << ", " << r.violations.size() << " violations";
      std::cout << ")\n";
      for (const auto& v : r.violations) std::cout << "      " << v << "\n";
      for (const auto& n : r.notes) std::cout << "      note: " << n << "\n";
    }
    for (const auto& e : primitive_entries) {
      std::cout << "primitive part of W_" << e.m << " = " << e.primitive_part;
      if (e.p0_candidate) std::cout << "  (p0 candidate " << *e.p0_candidate << ")";
      std::cout << "\n";
    }
  }
  return all_passed ? 0 : 1;
}

int cmd_certify_scan(Options& o) {
  auto ctx = make_context(o, true, nullptr);
  auto cert = tfc::build_certificate(ctx);
  auto scan = tfc::scan_powers(ctx, o.max_m);
  auto cross = tfc::verify_scan_vs_certificate(scan, cert);

  if (o.format == "json") {
    json out{{"config", config_json(o, "certify-scan")},
             {"certificate", json::parse(tfc::io::certificate_json(cert))},
             {"scan", json::parse(tfc::io::scan_json(scan))},
             {"cross_check", json::parse(tfc::io::law_report_json(cross))}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "certificate:\n";
    for (const auto& n : cert.notes) std::cout << "  " << n << "\n";
    if (cert.l_bound)
      std::cout << "  bound: l <= " << cert.l_bound->integer_bound() << "\n";
    if (cert.allowed_l) {
      std::cout << "  allowed prime exponents:";
      if (cert.allowed_l->empty())
        std::cout << " none";
      else
        for (auto l : *cert.allowed_l) std::cout << " " << l;
      std::cout << "\n";
    }
    std::cout << "verdict: ";
    if (cert.no_powers_possible())
      std::cout << "no perfect powers possible\n";
    else if (cert.divisibility_applicable)
      std::cout << "perfect powers restricted to l | ord_2(W_1)\n";
    else if (cert.l_bound)
      std::cout << "perfect powers restricted to l <= "
                << cert.l_bound->integer_bound() << "\n";
    else if (cert.finiteness_applicable)
      std::cout << "finitely many perfect powers (no effective bound)\n";
    else
      std::cout << "no uniform statement applies\n";

    std::cout << "scan to m = " << o.max_m << ": " << scan.hits.size()
              << " hits, " << scan.unit_terms << " unit terms skipped\n";
    for (const auto& h : scan.hits)
      std::cout << "  W_" << h.m << " = " << h.root << "^" << h.l << "\n";
    std::cout << (cross.passed() ? "cross-check: pass\n"
                                 : "cross-check: VIOLATION\n");
    for (const auto& v : cross.violations) std::cout << "  " << v << "\n";
  }
  return cross.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptic divisibility sequences on u^3 + v^3 = d"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* cmd, bool with_checks) {
    cmd->add_option("--d", o.d_str, "curve coefficient d (cube-free integer)");
    cmd->add_option("--point", o.point_str,
                    "generator as \"u,v\" with rational entries like 5/3");
    cmd->add_option("--max-m", o.max_m, "largest index to compute")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--trial-bound", o.trial_bound, "trial division bound");
    cmd->add_option("--rho-rounds", o.rho_rounds,
                    "iteration budget for the random splitter");
    cmd->add_option("--seed", o.seed, "determinism seed for factoring");
    cmd->add_option("--cache", o.cache_path, "term cache file (JSON lines)");
    cmd->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_checks)
      cmd->add_option("--checks", o.checks,
                      "subset of strong-div,valuation,primitive,identities")
          ->delimiter(',');
  };

  auto* gen = app.add_subcommand("generate", "compute and print the sequence");
  add_common(gen, false);
  auto* ver = app.add_subcommand("verify", "check the divisibility laws");
  add_common(ver, true);
  auto* cs = app.add_subcommand("certify-scan",
                                "certificate, power scan and cross-check");
  add_common(cs, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (ver->parsed()) return cmd_verify(o);
    if (cs->parsed()) return cmd_certify_scan(o);
  } catch (const tfc::inconsistency_error& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
