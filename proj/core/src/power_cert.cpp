#include "tfc/power_cert.hpp"

#include <sstream>

namespace tfc {

ScanResult scan_powers(EdsContext& ctx, unsigned long max_m) {
  if (max_m < 1) throw std::invalid_argument("scan_powers: max_m >= 1");
  ScanResult out;
  out.max_m = max_m;
  for (unsigned long m = 1; m <= max_m; ++m) {
    const mpz_class& w = ctx.term(m).W;
    if (w == 1) {
      ++out.unit_terms;
      continue;
    }
    for (const auto& [l, root] : arith::perfect_power_exponents(w))
      out.hits.push_back({m, l, root});
  }
  return out;
}

PowerCertificate build_certificate(EdsContext& ctx) {
  PowerCertificate cert;
  const mpz_class& w1 = ctx.term(1).W;
  cert.ord2_w1 = arith::ord(2, w1);

  cert.finiteness_applicable = w1 > 1;
  cert.notes.push_back(
      cert.finiteness_applicable
          ? "W_1 = " + w1.get_str() +
                " > 1: finitely many perfect powers (qualitative; the "
                "underlying constant is not effective)"
          : "W_1 = 1: the finiteness statement does not apply");

  // Primitive divisor > 3 of W_2, from the gcd-stripped primitive part.
  auto prim = primitive_report(ctx, 2);
  if (!prim.entries.empty()) cert.p0 = prim.entries.front().p0_candidate;
  cert.notes.push_back(cert.p0
                           ? "p0 = " + cert.p0->get_str() +
                                 ": primitive divisor > 3 of W_2"
                           : "no primitive divisor > 3 of W_2 found within "
                             "budget; p0 absent");

  std::string reason;
  const Tri nonsing = nonsingular_at_all_bad_primes(ctx, &reason);
  const bool w1_even = mpz_even_p(w1.get_mpz_t()) != 0;

  cert.even_bound_applicable = w1_even && nonsing == Tri::yes;
  if (!w1_even) {
    cert.notes.push_back("exponent bound inapplicable: W_1 is odd");
  } else if (nonsing != Tri::yes) {
    cert.notes.push_back("exponent bound inapplicable: " + reason);
  } else {
    cert.notes.push_back("exponent bound hypotheses hold: W_1 even, " + reason);
  }
  if (cert.even_bound_applicable && cert.p0) {
    cert.l_bound = ExponentCeiling{cert.ord2_w1, *cert.p0};
    cert.notes.push_back(
        "any prime power exponent l satisfies l <= max{ord_2(W_1) = " +
        std::to_string(cert.ord2_w1) + ", (1+sqrt(" + cert.p0->get_str() +
        "))^2}, integer bound " + cert.l_bound->integer_bound().get_str());
  }

  const bool w1_div6 = mpz_divisible_ui_p(w1.get_mpz_t(), 6) != 0;
  if (!w1_div6) {
    cert.notes.push_back("divisibility statement inapplicable: 6 does not "
                         "divide W_1");
  } else if (nonsing == Tri::yes) {
    cert.divisibility_applicable = true;
    cert.notes.push_back("divisibility hypotheses hold: 6 | W_1 and " + reason);
  } else {
    // Fall back to the triple test; reduction status alone was not enough.
    auto triple = is_triple(ctx.wcurve(), ctx.wgenerator(), ctx.effort());
    if (triple.status == TripleStatus::found) {
      cert.divisibility_applicable = true;
      cert.notes.push_back(
          "divisibility hypotheses hold: 6 | W_1 and the generator is "
          "triple another rational point");
    } else {
      cert.notes.push_back(
          "divisibility statement inapplicable: " + reason +
          (triple.status == TripleStatus::unknown
               ? "; triple test exhausted its budget (unknown)"
               : "; generator is not triple another rational point"));
    }
  }
  if (cert.divisibility_applicable) {
    std::vector<unsigned long> allowed;
    for (unsigned long l = 2; l <= cert.ord2_w1; ++l)
      if (cert.ord2_w1 % l == 0 && arith::is_prime(mpz_class(l)))
        allowed.push_back(l);
    cert.allowed_l = std::move(allowed);
    cert.notes.push_back(
        cert.allowed_l->empty()
            ? "ord_2(W_1) = " + std::to_string(cert.ord2_w1) +
                  ": the sequence contains no perfect powers"
            : "any prime power exponent l divides ord_2(W_1) = " +
                  std::to_string(cert.ord2_w1));
  }
  return cert;
}

LawReport verify_scan_vs_certificate(const ScanResult& scan,
                                     const PowerCertificate& cert) {
  LawReport rep;
  rep.law = "perfect-power hits respect the certificate";
  if (!cert.even_bound_applicable && !cert.divisibility_applicable)
    rep.notes.push_back("no uniform statement applies; hits unconstrained");
  for (const auto& hit : scan.hits) {
    std::ostringstream id;
    id << "W_" << hit.m << " = " << hit.root << "^" << hit.l;
    if (cert.l_bound) {
      ++rep.checks;
      if (!cert.l_bound->allows(hit.l))
        rep.violations.push_back(id.str() + " violates l <= " +
                                 cert.l_bound->integer_bound().get_str());
    }
    if (cert.divisibility_applicable && cert.allowed_l) {
      ++rep.checks;
      bool ok = false;
      for (unsigned long l : *cert.allowed_l) ok = ok || l == hit.l;
      if (!ok)
        rep.violations.push_back(id.str() +
                                 " has exponent outside the allowed set");
    }
  }
  return rep;
}

CubeSumSearchResult cube_sum_power_search(const mpz_class& coefficient,
                                          unsigned long l_max,
                                          unsigned long w_bound,
                                          const arith::Effort& effort) {
  if (coefficient < 1)
    throw std::invalid_argument("cube_sum_power_search: coefficient >= 1");
  if (l_max < 2 || w_bound < 1)
    throw std::invalid_argument("cube_sum_power_search: l_max >= 2, w_bound >= 1");

  CubeSumSearchResult out;
  out.coefficient = coefficient;

  arith::Factorization coeff_f;
  if (coefficient > 1) coeff_f = arith::factor_with_effort(coefficient, effort);

  for (unsigned long wv = 1; wv <= w_bound; ++wv) {
    const mpz_class w(wv);
    arith::Factorization wf;
    bool w_ok = true;
    if (wv > 1) {
      wf = arith::factor_with_effort(w, effort);
      w_ok = wf.complete();
    }
    for (unsigned long l = 2; l <= l_max; ++l) {
      mpz_class n = coefficient * arith::pow_ui(w, 3 * l);
      if (!w_ok || !coeff_f.complete()) {
        out.unknown_cells.emplace_back(w, l);
        continue;
      }
      // N's divisors from the assembled factorization of coeff * W^(3l).
      arith::Factorization nf;
      if (coefficient > 1) nf = coeff_f;
      for (const auto& [p, e] : wf.factors)
        nf.factors.emplace_back(p, e * 3 * l);
      std::sort(nf.factors.begin(), nf.factors.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      // Merge duplicate primes between coefficient and W.
      {
        std::vector<std::pair<mpz_class, unsigned long>> merged;
        for (const auto& [p, e] : nf.factors) {
          if (!merged.empty() && merged.back().first == p)
            merged.back().second += e;
          else
            merged.emplace_back(p, e);
        }
        nf.factors = std::move(merged);
      }
      std::vector<mpz_class> divs;
      if (!arith::divisors(nf, effort.max_candidates, &divs)) {
        out.unknown_cells.emplace_back(w, l);
        continue;
      }
      // U + V = s > 0 with s^3 <= 4N: q = N/s = U^2 - UV + V^2 and
      // UV = (s^2 - q)/3, so U, V are roots of t^2 - s t + UV.
      for (const mpz_class& s : divs) {
        if (s * s * s > 4 * n) break;
        const mpz_class q = n / s;
        mpz_class t = s * s - q;
        if (!mpz_divisible_ui_p(t.get_mpz_t(), 3)) continue;
        const mpz_class uv = t / 3;
        mpz_class disc = s * s - 4 * uv;
        if (disc < 0 || !mpz_perfect_square_p(disc.get_mpz_t())) continue;
        const mpz_class r = arith::isqrt(disc);
        if (mpz_odd_p(mpz_class(s + r).get_mpz_t())) continue;
        const mpz_class u = (s + r) / 2, v = (s - r) / 2;
        mpz_class g = gcd(gcd(u, v), w);
        if (g != 1) continue;
        out.solutions.push_back({u, v, w, l});
      }
    }
  }
  return out;
}

}  // namespace tfc
