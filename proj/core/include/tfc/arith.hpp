#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tfc {

// Computed data contradicts a law the library asserts. This is the
// refutation-grade error class: callers must not swallow it silently.
// Bad caller input throws std::invalid_argument instead.
class inconsistency_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace arith {

// Budgets for all factoring-backed operations. Everything downstream of a
// budget is deterministic for a fixed seed, so parallel or repeated runs
// reproduce bit-identical results.
struct Effort {
  unsigned long trial_bound = 100000;    // trial division up to here
  unsigned long rho_rounds = 200000;     // Brent-rho iterations per composite
  unsigned long seed = 1;                // selects the rho polynomial sequence
  unsigned long max_candidates = 300000; // cap on candidate enumerations
};

// Deterministic Miller-Rabin for n < 2^64 (first 12 prime bases suffice
// there); the same fixed witness schedule extended to 25 bases above, which
// is probabilistic but reproducible.
bool is_prime(const mpz_class& n);

// ord_p(n), the exponent of p in n. Requires p prime and n nonzero; the two
// violations are reported distinctly.
unsigned long ord(const mpz_class& p, const mpz_class& n);

mpz_class pow_ui(const mpz_class& base, unsigned long exp);

// floor(sqrt(n)) for n >= 0.
mpz_class isqrt(const mpz_class& n);

struct Factorization {
  std::vector<std::pair<mpz_class, unsigned long>> factors;  // (prime, exponent)
  mpz_class cofactor = 1;  // unsplit remainder, 1 when complete

  bool complete() const { return cofactor == 1; }
  mpz_class reassemble() const;
};

// Trial division to trial_bound, then Brent's rho with at most rho_rounds
// iterations per remaining composite. Whatever does not split in budget goes
// to the cofactor; no operation built on top of this may loop forever.
Factorization factor_with_effort(const mpz_class& n, unsigned long trial_bound,
                                 unsigned long rho_rounds,
                                 unsigned long seed = 1);
Factorization factor_with_effort(const mpz_class& n, const Effort& effort = {});

// Product of the distinct odd primes dividing n (1 if none): the radical
// away from 2. Escalates the factoring budget internally until the
// factorization is complete; intended for desk-scale inputs.
mpz_class odd_radical(const mpz_class& n, const Effort& effort = {});

// All pairs (l, root) with l prime and root^l == n, for n >= 2. Composite
// exponents are implied by the prime ones.
std::vector<std::pair<unsigned long, mpz_class>> perfect_power_exponents(
    const mpz_class& n);

// All representations N = a^2 + 3 b^2 with a >= 0 and b >= 1, in increasing
// order of b. Sign choices are the caller's business. Representations with
// b = 0 (N a perfect square) are deliberately excluded: they are trivially
// detectable and never arise in the descent, where b = 0 forces a zero
// denominator.
std::vector<std::pair<mpz_class, mpz_class>> cornacchia_3(const mpz_class& N);

// All divisors of a completely factored integer, ascending, optionally
// capped (returns false if the cap was hit before enumerating all).
bool divisors(const Factorization& f, unsigned long cap,
              std::vector<mpz_class>* out);

}  // namespace arith
}  // namespace tfc
