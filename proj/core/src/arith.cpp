#include "tfc/arith.hpp"

#include <algorithm>
#include <cstdint>

namespace tfc::arith {

namespace {

constexpr unsigned long kWitnesses[] = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                        29, 31, 37, 41, 43, 47, 53, 59, 61,
                                        67, 71, 73, 79, 83, 89, 97};

// One Miller-Rabin round: true means "definitely composite".
bool mr_composite(const mpz_class& n, const mpz_class& q, unsigned long k,
                  unsigned long base) {
  const mpz_class a(base);
  mpz_class y;
  mpz_powm(y.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
  const mpz_class nm1 = n - 1;
  if (y == 1 || y == nm1) return false;
  for (unsigned long i = 1; i < k; ++i) {
    mpz_powm_ui(y.get_mpz_t(), y.get_mpz_t(), 2, n.get_mpz_t());
    if (y == nm1) return false;
    if (y == 1) return true;
  }
  return true;
}

// n > 1 odd after small-prime sieving.
bool mr_is_prime(const mpz_class& n) {
  mpz_class q = n - 1;
  const auto k = mpz_scan1(q.get_mpz_t(), 0);
  q >>= k;

  // 12 bases decide everything below 2^64; keep the full schedule above.
  const bool small = mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
  const std::size_t rounds = small ? 12 : 25;
  for (std::size_t i = 0; i < rounds; ++i) {
    if (n == kWitnesses[i]) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), kWitnesses[i])) return false;
    if (mr_composite(n, q, k, kWitnesses[i])) return false;
  }
  return true;
}

// Brent's cycle-finding variant of Pollard rho with batched gcds.
// Deterministic: the polynomial constant walks a fixed schedule derived from
// the seed. Returns a nontrivial factor or 0 on budget exhaustion.
mpz_class brent_rho(const mpz_class& n, unsigned long rounds,
                    unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  unsigned long budget = rounds;
  for (unsigned long attempt = 0; budget > 0; ++attempt) {
    const mpz_class c((seed + attempt) % 1000003 + 1);
    mpz_class y(2 + attempt), x, ys, q(1), g(1);
    unsigned long r = 1;
    const unsigned long cap = std::min<unsigned long>(budget, rounds / 4 + 64);
    unsigned long used = 0;
    bool exhausted = false;
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r && used < cap; ++i, ++used) {
        y = (y * y + c) % n;
      }
      unsigned long k = 0;
      while (k < r && g == 1 && !exhausted) {
        ys = y;
        const unsigned long lim = std::min<unsigned long>(128, r - k);
        for (unsigned long i = 0; i < lim; ++i, ++used) {
          if (used >= cap) {
            exhausted = true;
            break;
          }
          y = (y * y + c) % n;
          q = q * (x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
      }
      r *= 2;
      if (exhausted) break;
    }
    if (g == n) {
      // Backtrack one step at a time to split the batched gcd.
      do {
        ys = (ys * ys + c) % n;
        mpz_class t = x - ys;
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    budget -= std::min(budget, std::max<unsigned long>(used, 1));
    if (g != n && g != 1) return g;
  }
  return 0;
}

void factor_recurse(const mpz_class& n, unsigned long rho_rounds,
                    unsigned long seed, Factorization* out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out->factors.emplace_back(n, 1);
    return;
  }
  // Perfect powers defeat rho's birthday heuristic; peel them first.
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned long l = 2; l <= mpz_sizeinbase(n.get_mpz_t(), 2); ++l) {
      mpz_class root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), l) != 0) {
        Factorization base;
        factor_recurse(root, rho_rounds, seed, &base);
        for (auto& [p, e] : base.factors) out->factors.emplace_back(p, e * l);
        if (!base.complete()) {
          mpz_class rem;
          mpz_pow_ui(rem.get_mpz_t(), base.cofactor.get_mpz_t(), l);
          out->cofactor *= rem;
        }
        return;
      }
    }
  }
  const mpz_class g = brent_rho(n, rho_rounds, seed);
  if (g == 0) {
    out->cofactor *= n;
    return;
  }
  factor_recurse(g, rho_rounds, seed, out);
  factor_recurse(n / g, rho_rounds, seed, out);
}

void normalize(Factorization* f) {
  std::sort(f->factors.begin(), f->factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<mpz_class, unsigned long>> merged;
  for (const auto& [p, e] : f->factors) {
    if (!merged.empty() && merged.back().first == p) {
      merged.back().second += e;
    } else {
      merged.emplace_back(p, e);
    }
  }
  f->factors = std::move(merged);
}

}  // namespace

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  return mr_is_prime(n);
}

unsigned long ord(const mpz_class& p, const mpz_class& n) {
  if (n == 0) throw std::invalid_argument("ord: n must be nonzero");
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("ord: p must be prime");
  mpz_class rest;
  return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

mpz_class pow_ui(const mpz_class& base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

mpz_class isqrt(const mpz_class& n) {
  if (n < 0) throw std::invalid_argument("isqrt: n must be non-negative");
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

mpz_class Factorization::reassemble() const {
  mpz_class n = cofactor;
  for (const auto& [p, e] : factors) n *= pow_ui(p, e);
  return n;
}

Factorization factor_with_effort(const mpz_class& n, unsigned long trial_bound,
                                 unsigned long rho_rounds,
                                 unsigned long seed) {
  if (n < 2) throw std::invalid_argument("factor_with_effort: n must be >= 2");
  Factorization out;
  mpz_class cur = n;

  const auto twos = mpz_scan1(cur.get_mpz_t(), 0);
  if (twos) {
    out.factors.emplace_back(2, twos);
    cur >>= twos;
  }
  unsigned long e3 = 0;
  while (mpz_divisible_ui_p(cur.get_mpz_t(), 3)) {
    mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), 3);
    ++e3;
  }
  if (e3) out.factors.emplace_back(3, e3);

  // 6k+-1 wheel up to the trial bound (or sqrt, whichever comes first).
  for (unsigned long p = 5; p <= trial_bound && cur > 1; p += (p % 6 == 5) ? 2 : 4) {
    if (mpz_cmp_ui(cur.get_mpz_t(), p * p) < 0 && cur > 1) {
      // cur is prime: every factor below sqrt(cur) has been removed.
      out.factors.emplace_back(cur, 1);
      cur = 1;
      break;
    }
    unsigned long e = 0;
    while (mpz_divisible_ui_p(cur.get_mpz_t(), p)) {
      mpz_divexact_ui(cur.get_mpz_t(), cur.get_mpz_t(), p);
      ++e;
    }
    if (e) out.factors.emplace_back(p, e);
  }

  if (cur > 1) factor_recurse(cur, rho_rounds, seed, &out);
  normalize(&out);
  return out;
}

Factorization factor_with_effort(const mpz_class& n, const Effort& effort) {
  return factor_with_effort(n, effort.trial_bound, effort.rho_rounds,
                            effort.seed);
}

mpz_class odd_radical(const mpz_class& n, const Effort& effort) {
  if (n == 0) throw std::invalid_argument("odd_radical: n must be nonzero");
  mpz_class m = abs(n);
  if (m == 1) return 1;

  Factorization f = factor_with_effort(m, effort);
  for (int escalation = 0; !f.complete() && escalation < 16; ++escalation) {
    Effort harder = effort;
    harder.rho_rounds = effort.rho_rounds << (escalation + 1);
    harder.seed = effort.seed + 1 + escalation;
    Factorization g = factor_with_effort(f.cofactor, harder);
    f.cofactor = g.cofactor;
    for (auto& pe : g.factors) f.factors.push_back(std::move(pe));
  }
  if (!f.complete())
    throw std::runtime_error("odd_radical: factoring budget exhausted");

  mpz_class rad = 1;
  mpz_class last = 0;
  for (const auto& [p, e] : f.factors) {
    if (p != 2 && p != last) rad *= p;
    last = p;
  }
  return rad;
}

std::vector<std::pair<unsigned long, mpz_class>> perfect_power_exponents(
    const mpz_class& n) {
  if (n < 2)
    throw std::invalid_argument("perfect_power_exponents: n must be >= 2");
  std::vector<std::pair<unsigned long, mpz_class>> out;
  const unsigned long lmax = mpz_sizeinbase(n.get_mpz_t(), 2) - 1;  // log2(n)
  for (unsigned long l = 2; l <= lmax; ++l) {
    if (!is_prime(mpz_class(l))) continue;
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), l) != 0)
      out.emplace_back(l, root);
  }
  return out;
}

std::vector<std::pair<mpz_class, mpz_class>> cornacchia_3(const mpz_class& N) {
  if (N < 1) throw std::invalid_argument("cornacchia_3: N must be positive");
  std::vector<std::pair<mpz_class, mpz_class>> out;
  const mpz_class bmax = isqrt(N / 3);
  for (mpz_class b = 1; b <= bmax; ++b) {
    mpz_class r = N - 3 * b * b;
    if (r == 0) {
      out.emplace_back(0, b);
      continue;
    }
    if (mpz_perfect_square_p(r.get_mpz_t())) out.emplace_back(isqrt(r), b);
  }
  return out;
}

bool divisors(const Factorization& f, unsigned long cap,
              std::vector<mpz_class>* out) {
  out->assign(1, mpz_class(1));
  for (const auto& [p, e] : f.factors) {
    const std::size_t n = out->size();
    mpz_class pk = 1;
    for (unsigned long k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < n; ++i) {
        if (out->size() >= cap) return false;
        out->push_back((*out)[i] * pk);
      }
    }
  }
  std::sort(out->begin(), out->end());
  return true;
}

}  // namespace tfc::arith
