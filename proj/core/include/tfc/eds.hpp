#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfc/curves.hpp"

namespace tfc {

// One row of the sequence: mP = (U/W, V/W) on the cubic in lowest terms
// with W >= 1, and x(mP) = A/B^2, y(mP) = C/B^3 on the Weierstrass model.
struct EdsTerm {
  unsigned long m = 0;
  mpz_class U, V, W;
  mpz_class A, B, C;
};

// Checks every internal invariant of a term against d; throws
// inconsistency_error naming the violated law. Used both after computing a
// term and before trusting one loaded from a cache.
void validate_term(const EdsTerm& t, const mpz_class& d);

// The sequence generator: a cube-free curve, a validated non-torsion point,
// and a memo of computed terms. Terms for distinct m are independent
// computations; the memo makes term() single-writer (wrap in a mutex or
// shard by m if you parallelize).
class EdsContext {
 public:
  EdsContext(CubicCurve curve, CubicPoint generator,
             arith::Effort effort = {});

  const CubicCurve& curve() const { return curve_; }
  const CubicPoint& generator() const { return generator_; }
  const WeierstrassCurve& wcurve() const { return wcurve_; }
  const WeierstrassPoint& wgenerator() const { return wgenerator_; }
  const arith::Effort& effort() const { return effort_; }

  // mP reduced to lowest terms in both coordinate systems, memoized.
  const EdsTerm& term(unsigned long m);

  // Primes > 3 dividing d, when the factoring budget settles them.
  const std::optional<std::vector<mpz_class>>& bad_primes_over_3();

  // Adopt an externally produced term (cache reload). Validates before
  // trusting; the m = 1 term must additionally match the generator.
  void adopt_term(const EdsTerm& t);

 private:
  CubicCurve curve_;
  CubicPoint generator_;
  WeierstrassCurve wcurve_;
  WeierstrassPoint wgenerator_;
  arith::Effort effort_;
  std::map<unsigned long, EdsTerm> memo_;
  bool bad_primes_computed_ = false;
  std::optional<std::vector<mpz_class>> bad_primes_;
};

struct LawReport {
  std::string law;
  unsigned long checks = 0;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  bool passed() const { return violations.empty(); }
};

// gcd(W_m, W_n) = W_gcd(m,n) over all 1 <= n < m <= max_m.
LawReport strong_divisibility_report(EdsContext& ctx, unsigned long max_m);

// ord_p(W_mn) = ord_p(W_n) + ord_p(m) whenever ord_p(W_n) > 0, nm <= max_m.
LawReport valuation_report(EdsContext& ctx, const mpz_class& p,
                           unsigned long max_m);

struct PrimitiveEntry {
  unsigned long m = 0;
  mpz_class primitive_part;
  std::optional<mpz_class> p0_candidate;  // only for m = 2, only when found
};

struct PrimitiveReport {
  LawReport law;
  std::vector<PrimitiveEntry> entries;
};

// Strips gcd(W_m, prod of W_k over proper divisors k of m) until coprime;
// strong divisibility guarantees any prime shared with an earlier index
// divides a proper-divisor term, so no factoring is needed for existence.
// The surviving part must exceed 1 for every 2 <= m <= max_m. For m = 2 the
// smallest prime > 3 dividing the primitive part is extracted within the
// factoring budget; absence is reported, never fabricated.
PrimitiveReport primitive_report(EdsContext& ctx, unsigned long max_m);

// For every m <= max_m: (i) p | W_m iff p does not divide A_m, for p = 2, 3;
// (ii) C^2 = A^3 - 432 d^2 B^6; (iii) the coordinate reconstruction
// U/W = (36 d B^3 + C)/(6AB), V/W = (36 d B^3 - C)/(6AB) holds exactly;
// (iv) when W_1 is even and the generator has non-singular reduction at all
// primes > 3, gcd(A_m^3, C_m^2) divides 3^(3 + 2 ord_3(d)). Hypothesis
// failure for (iv) skips it with a note.
LawReport structural_identities_report(EdsContext& ctx, unsigned long max_m);

enum class Tri { yes, no, unknown };

// Whether the generator has non-singular reduction at every prime > 3 of
// bad reduction (the primes > 3 dividing d). Unknown when d's factorization
// stays incomplete within budget.
Tri nonsingular_at_all_bad_primes(EdsContext& ctx, std::string* reason = nullptr);

}  // namespace tfc
