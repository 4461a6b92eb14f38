#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "tfc/eds.hpp"
#include "tfc/frey_descent.hpp"

namespace tfc {

struct PowerHit {
  unsigned long m = 0;   // index into the sequence
  unsigned long l = 0;   // prime exponent
  mpz_class root;        // root^l = W_m exactly
};

struct ScanResult {
  std::vector<PowerHit> hits;
  unsigned long unit_terms = 0;  // W_m = 1 terms, excluded by convention
  unsigned long max_m = 0;
};

// Every (m, l, root) with W_m >= 2, l prime and root^l = W_m for m <= max_m.
ScanResult scan_powers(EdsContext& ctx, unsigned long max_m);

// The exponent ceiling max{ord_2(W_1), (1 + sqrt(p0))^2}, compared exactly
// via the Z[sqrt p] predicate; no floating point enters any verdict.
struct ExponentCeiling {
  unsigned long ord2_w1 = 0;
  mpz_class p0;

  bool allows(const mpz_class& l) const {
    return l <= ord2_w1 || exponent_bound(p0, 1)(l);
  }
  mpz_class integer_bound() const {
    const mpz_class f = exponent_bound(p0, 1).integer_sup();
    return f > ord2_w1 ? f : mpz_class(ord2_w1);
  }
};

// Which uniform statements apply to this generator, and what they pin down.
//   finiteness:   W_1 > 1            => finitely many perfect powers
//                                       (qualitative: no effective bound).
//   even_bound:   W_1 even, non-singular reduction at all primes > 3
//                                       => l <= max{ord_2 W_1, (1+sqrt p0)^2}.
//   divisibility: 6 | W_1 and (generator is triple or non-singular as above)
//                                       => l | ord_2(W_1); empty set when
//                                       ord_2(W_1) = 1, i.e. no powers at all.
// Under even_bound the count of l-th powers for a fixed l > ord_2(W_1) is
// additionally uniformly bounded; no numeric value is computable from the
// recipe, so that fact stays documentation and never enters a verdict.
struct PowerCertificate {
  unsigned long ord2_w1 = 0;
  std::optional<mpz_class> p0;  // primitive divisor > 3 of W_2, when found

  bool finiteness_applicable = false;
  bool even_bound_applicable = false;
  bool divisibility_applicable = false;

  std::optional<ExponentCeiling> l_bound;          // iff even_bound and p0
  std::optional<std::vector<unsigned long>> allowed_l;  // iff divisibility

  std::vector<std::string> notes;  // hypothesis provenance, human-auditable

  bool no_powers_possible() const {
    return divisibility_applicable && allowed_l && allowed_l->empty();
  }
};

PowerCertificate build_certificate(EdsContext& ctx);

// Every hit must satisfy the applicable constraints; a violation refutes a
// proved statement and demands investigation.
LawReport verify_scan_vs_certificate(const ScanResult& scan,
                                     const PowerCertificate& cert);

struct CubeSumSolution {
  mpz_class U, V, W;
  unsigned long l = 0;
};

struct CubeSumSearchResult {
  mpz_class coefficient;
  std::vector<CubeSumSolution> solutions;
  // (W, l) cells whose divisor enumeration was cut off by the budget.
  std::vector<std::pair<mpz_class, unsigned long>> unknown_cells;
};

// Exhaustive solvability test for U^3 + V^3 = coeff * W^(3l) with
// gcd(U, V, W) = 1 over 1 <= W <= w_bound, 2 <= l <= l_max, by enumerating
// the divisors s = U + V of the right side (s > 0 and s^3 <= 4 N suffice).
CubeSumSearchResult cube_sum_power_search(const mpz_class& coefficient,
                                          unsigned long l_max,
                                          unsigned long w_bound,
                                          const arith::Effort& effort = {});

}  // namespace tfc
