#include "tfc/frey_descent.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace tfc {

namespace {

mpz_class square(const mpz_class& n) { return n * n; }

mpz_class cube(const mpz_class& n) { return n * n * n; }

}  // namespace

mpz_class CubicForm::discriminant() const {
  return 18 * t0 * t1 * t2 * t3 - 4 * cube(t1) * t3 + square(t1) * square(t2) -
         4 * t0 * cube(t2) - 27 * square(t0) * square(t3);
}

mpz_class CubicForm::eval(const mpz_class& a, const mpz_class& b) const {
  return t0 * cube(a) + t1 * square(a) * b + t2 * a * square(b) + t3 * cube(b);
}

FreyCurve frey_from_cubic_form(const CubicForm& f, const mpz_class& a,
                               const mpz_class& b) {
  if (!f.separable())
    throw std::invalid_argument("frey_from_cubic_form: form is not separable");
  if (gcd(a, b) != 1)
    throw std::invalid_argument("frey_from_cubic_form: gcd(a, b) != 1");

  FreyCurve e;
  e.a2 = f.t1 * a - f.t2 * b;
  e.a4 = f.t0 * f.t2 * square(a) + (3 * f.t0 * f.t3 - f.t1 * f.t2) * a * b +
         f.t1 * f.t3 * square(b);
  e.a6 = square(f.t0) * f.t3 * cube(a) -
         f.t0 * (square(f.t2) - 2 * f.t1 * f.t3) * square(a) * b +
         f.t3 * (square(f.t1) - 2 * f.t0 * f.t2) * a * square(b) -
         f.t0 * square(f.t3) * cube(b);

  // Model discriminant for y^2 = x^3 + a2 x^2 + a4 x + a6:
  // b2 = 4 a2, b4 = 2 a4, b6 = 4 a6, b8 = 4 a2 a6 - a4^2.
  const mpz_class b2 = 4 * e.a2, b4 = 2 * e.a4, b6 = 4 * e.a6;
  const mpz_class b8 = 4 * e.a2 * e.a6 - square(e.a4);
  e.disc = -square(b2) * b8 - 8 * cube(b4) - 27 * square(b6) + 9 * b2 * b4 * b6;

  if (e.disc != 16 * f.discriminant() * square(f.eval(a, b)))
    throw inconsistency_error(
        "frey_from_cubic_form: discriminant != 16 disc(F) F(a,b)^2");
  return e;
}

unsigned kraus_alpha(unsigned long ord2_r, bool y_even) {
  if (ord2_r == 0 || ord2_r >= 5) return 1;
  if (y_even) return 1;            // 1 <= ord2(R) <= 4, y even
  if (ord2_r == 4) return 0;
  if (ord2_r >= 2) return 3;       // 2 or 3
  return 5;                        // ord2(R) = 1, y odd
}

unsigned kraus_beta(unsigned long ord2_r, bool y_even) {
  if (ord2_r == 0 || ord2_r >= 5) return 1;
  if (ord2_r == 4) return 0;       // either parity
  if (y_even) return 1;            // 1 <= ord2(R) <= 3
  if (ord2_r >= 2) return 3;       // 2 or 3, y odd
  return 5;                        // ord2(R) = 1, y odd
}

KrausData kraus_recipe(const mpz_class& A, const mpz_class& B,
                       const mpz_class& C, const mpz_class& x,
                       const mpz_class& y, const mpz_class& z,
                       unsigned long l, const arith::Effort& effort) {
  if (l < 5 || !arith::is_prime(mpz_class(l)))
    throw std::invalid_argument("kraus_recipe: l must be a prime >= 5");

  struct Entry {
    mpz_class coef, base, term;
  };
  std::array<Entry, 3> es = {{{A, x, {}}, {B, y, {}}, {C, z, {}}}};
  mpz_class sum = 0;
  for (auto& e : es) {
    if (e.coef == 0 || e.base == 0)
      throw std::invalid_argument("kraus_recipe: zero term");
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), e.base.get_mpz_t(), l);
    e.term = e.coef * p;
    sum += e.term;
  }
  if (sum != 0)
    throw std::invalid_argument("kraus_recipe: A x^l + B y^l + C z^l != 0");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (gcd(es[i].term, es[j].term) != 1)
        throw std::invalid_argument("kraus_recipe: terms are not pairwise coprime");

  // Pairwise coprime terms summing to zero: exactly one is even. Put it in
  // the middle slot, and flip the global sign if neither odd term is
  // -1 mod 4 (exactly then both are, after the flip).
  int even_idx = -1;
  for (int i = 0; i < 3; ++i)
    if (mpz_even_p(es[i].term.get_mpz_t())) even_idx = i;
  if (even_idx < 0)
    throw inconsistency_error("kraus_recipe: no even term in a zero sum");
  std::swap(es[1], es[even_idx]);

  auto mod4 = [](const mpz_class& n) {
    mpz_class r = n % 4;
    if (r < 0) r += 4;
    return r.get_ui();
  };
  if (mod4(es[0].term) != 3 && mod4(es[2].term) != 3) {
    for (auto& e : es) {
      e.coef = -e.coef;
      e.term = -e.term;
    }
  }
  if (mod4(es[0].term) != 3) std::swap(es[0], es[2]);
  if (mod4(es[0].term) != 3)
    throw inconsistency_error("kraus_recipe: normalization unreachable");

  KrausData k;
  k.A = es[0].coef;
  k.x = es[0].base;
  k.B = es[1].coef;
  k.y = es[1].base;
  k.C = es[2].coef;
  k.z = es[2].base;
  k.l = l;
  k.R = k.A * k.B * k.C;

  // ord_q(R) < l for every prime q, within the factoring budget.
  if (abs(k.R) != 1) {
    auto f = arith::factor_with_effort(abs(k.R), effort);
    for (const auto& [p, e] : f.factors) {
      if (e >= l)
        throw std::invalid_argument("kraus_recipe: ord_q(R) >= l at q = " +
                                    p.get_str());
    }
    if (!f.complete()) {
      k.valuations_verified = false;
      k.notes.push_back("cofactor " + f.cofactor.get_str() +
                        " of R left unfactored; ord_q(R) < l unverified there");
    }
  }

  const unsigned long ord2r = arith::ord(2, k.R);
  const bool y_even = mpz_even_p(k.y.get_mpz_t()) != 0;
  k.alpha = kraus_alpha(ord2r, y_even);
  k.beta = kraus_beta(ord2r, y_even);
  k.conductor = arith::pow_ui(2, k.alpha) *
                arith::odd_radical(k.R * k.x * k.y * k.z, effort);
  k.level = arith::pow_ui(2, k.beta) * arith::odd_radical(k.R, effort);
  return k;
}

ExponentBoundPredicate::ExponentBoundPredicate(mpz_class p, unsigned degree)
    : p_(std::move(p)), degree_(degree) {
  if (degree_ < 1)
    throw std::invalid_argument("ExponentBoundPredicate: degree >= 1");
  if (!arith::is_prime(p_))
    throw std::invalid_argument("ExponentBoundPredicate: p must be prime");
  // (1 + sqrt p)^2 = (1 + p) + 2 sqrt p; raise to the degree in Z[sqrt p].
  mpz_class a = 1 + p_, b = 2;
  mpz_class ra = 1, rb = 0;
  for (unsigned k = 0; k < degree_; ++k) {
    mpz_class na = ra * a + rb * b * p_;
    mpz_class nb = ra * b + rb * a;
    ra = std::move(na);
    rb = std::move(nb);
  }
  a_ = std::move(ra);
  b_ = std::move(rb);
}

bool ExponentBoundPredicate::operator()(const mpz_class& l) const {
  // l < a + b sqrt(p)  <=>  l - a < b sqrt(p); if l <= a this is immediate
  // (b sqrt p > 0), otherwise square both sides.
  if (l <= a_) return true;
  return square(l - a_) < square(b_) * p_;
}

mpz_class ExponentBoundPredicate::integer_sup() const {
  // floor(a + b sqrt p) = a + floor(sqrt(b^2 p)); the bound itself is
  // irrational, so sup = floor.
  return a_ + arith::isqrt(square(b_) * p_);
}

ExponentBoundPredicate exponent_bound(const mpz_class& p, unsigned degree) {
  return ExponentBoundPredicate(p, degree);
}

namespace {

// The linear parts of the three unit cases:
//   2^(s+3) (C + 12 d B^3 sqrt(-3)) = (-1 + sqrt(-3))^s (a + b sqrt(-3))^3.
// Each returns (real, imag/sqrt(-3)) of the right-hand side.
std::pair<mpz_class, mpz_class> case_rhs(int s, const mpz_class& a,
                                         const mpz_class& b) {
  const mpz_class X = a * (square(a) - 9 * square(b));
  const mpz_class Y = 3 * b * (square(a) - square(b));
  switch (s) {
    case 0:
      return {X, Y};
    case 1:
      return {-X - 3 * Y, X - Y};
    case 2:
      return {-2 * X + 6 * Y, -2 * X - 2 * Y};
    default:
      throw std::invalid_argument("case_rhs: s must be 0, 1 or 2");
  }
}

}  // namespace

std::vector<DescentSolution> descent_solve(const mpz_class& A,
                                           const mpz_class& B,
                                           const mpz_class& C,
                                           const mpz_class& d) {
  if (B < 1) throw std::invalid_argument("descent_solve: B must be >= 1");
  if (d == 0) throw std::invalid_argument("descent_solve: d must be nonzero");
  const mpz_class dd432 = 432 * square(d);
  if (square(C) != cube(A) - dd432 * cube(square(B)))
    throw std::invalid_argument("descent_solve: C^2 != A^3 - 432 d^2 B^6");

  const mpz_class lhs_im = 12 * d * cube(B);  // coefficient of sqrt(-3)
  std::vector<DescentSolution> out;
  const auto reps = arith::cornacchia_3(4 * A);
  for (const auto& [a0, b0] : reps) {
    for (int sa = 0; sa < (a0 == 0 ? 1 : 2); ++sa) {
      for (int sb = 0; sb < 2; ++sb) {
        const mpz_class a = sa ? mpz_class(-a0) : a0;
        const mpz_class b = sb ? mpz_class(-b0) : b0;
        for (int s = 0; s <= 2; ++s) {
          const auto [re, im] = case_rhs(s, a, b);
          const mpz_class scale = arith::pow_ui(2, s + 3);
          if (re != scale * C || im != scale * lhs_im) continue;
          DescentSolution sol;
          sol.s = s;
          sol.a = a;
          sol.b = b;
          sol.e = arith::ord(3, A);
          sol.f = arith::ord(3, cube(A) + 8 * dd432 * cube(square(B)));
          sol.g = C == 0 ? 0 : arith::ord(3, C);
          sol.A = A;
          sol.B = B;
          sol.C = C;
          sol.d = d;
          out.push_back(std::move(sol));
        }
      }
    }
  }
  if (out.empty())
    throw inconsistency_error(
        "descent_solve: no (s, a, b) satisfies the case equations; the "
        "factorization over Z[sqrt(-3)] fails on this input");
  return out;
}

namespace {

// Exact l-th root when one exists.
std::optional<mpz_class> exact_root(const mpz_class& n, unsigned long l) {
  if (n == 0) return mpz_class(0);
  if (n < 0 && l % 2 == 0) return std::nullopt;
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), l) != 0) return r;
  return std::nullopt;
}

}  // namespace

PowerDescentReport power_descent_equations(const DescentSolution& sol,
                                           unsigned long l, ParityCase pc) {
  if (l < 2 || !arith::is_prime(mpz_class(l)))
    throw std::invalid_argument("power_descent_equations: l must be prime");
  PowerDescentReport rep;

  const mpz_class dd432 = 432 * square(sol.d);
  const mpz_class D = cube(sol.A) + 8 * dd432 * cube(square(sol.B));

  // A_n = 3^e A^l, A_n^3 + 8*432 d^2 B_n^6 = 3^f Abar^l, C_n = +-3^g C^l.
  auto a_root = exact_root(sol.A / arith::pow_ui(3, sol.e), l);
  auto abar_root = exact_root(D / arith::pow_ui(3, sol.f), l);
  std::optional<mpz_class> c_root;
  if (sol.C != 0) c_root = exact_root(sol.C / arith::pow_ui(3, sol.g), l);

  if (!a_root || !abar_root || !c_root) {
    rep.reason = "no l-th power decomposition for ";
    rep.reason += !a_root ? "A_n" : (!abar_root ? "A_n^3 + 8*432 d^2 B_n^6"
                                                : "C_n");
    return rep;
  }
  rep.applicable = true;
  rep.A_root = *a_root;
  rep.Abar_root = *abar_root;
  rep.C_root = *c_root;

  // 3^f Abar^l + 2^3 3^(2g) C^(2l) = 3^(2+3e) A^(3l), then divided by 3^t so
  // that at most one term keeps a factor of 3.
  mpz_class t1 = arith::pow_ui(3, sol.f) * arith::pow_ui(*abar_root, l);
  mpz_class t2 = 8 * arith::pow_ui(3, 2 * sol.g) * arith::pow_ui(*c_root, 2 * l);
  mpz_class t3 = arith::pow_ui(3, 2 + 3 * sol.e) * arith::pow_ui(*a_root, 3 * l);
  rep.cube_identity_holds = (t1 + t2 == t3);
  const unsigned long t =
      std::min({sol.f, 2 * sol.g, static_cast<unsigned long>(2 + 3 * sol.e)});
  const mpz_class p3t = arith::pow_ui(3, t);
  t1 /= p3t;
  t2 /= p3t;
  t3 /= p3t;
  int div3 = 0;
  for (const mpz_class* term : {&t1, &t2, &t3})
    if (mpz_divisible_ui_p(term->get_mpz_t(), 3)) ++div3;
  rep.reduced_three_support = rep.cube_identity_holds && div3 <= 1;

  // The two-term identities in a and b.
  if (pc == ParityCase::odd_a) {
    if (mpz_even_p(sol.a.get_mpz_t())) {
      rep.applicable = false;
      rep.reason = "a is even but the odd case was requested";
      return rep;
    }
    auto c = exact_root(sol.a, l);
    const mpz_class rhs = square(sol.a) - 9 * square(sol.b);
    if (!c || !mpz_divisible_ui_p(rhs.get_mpz_t(), 8)) {
      rep.applicable = false;
      rep.reason = "a = C^l or 8 | a^2 - 9b^2 fails";
      return rep;
    }
    auto cbar = exact_root(rhs / 8, l);
    if (!cbar) {
      rep.applicable = false;
      rep.reason = "(a^2 - 9b^2)/8 is not an l-th power";
      return rep;
    }
    rep.Cbar_root = *cbar;
    rep.t_identity_holds =
        arith::pow_ui(*c, 2 * l) - 8 * arith::pow_ui(*cbar, l) ==
        9 * square(sol.b);
  } else {
    if (!mpz_even_p(sol.a.get_mpz_t())) {
      rep.applicable = false;
      rep.reason = "a is odd but the even case was requested";
      return rep;
    }
    auto c = exact_root(sol.a / 2, l);
    const mpz_class rhs = square(sol.a) - 9 * square(sol.b);
    if (!c || !mpz_divisible_ui_p(rhs.get_mpz_t(), 4)) {
      rep.applicable = false;
      rep.reason = "a = 2 C^l or 4 | a^2 - 9b^2 fails";
      return rep;
    }
    auto cbar = exact_root(rhs / 4, l);
    if (!cbar) {
      rep.applicable = false;
      rep.reason = "(a^2 - 9b^2)/4 is not an l-th power";
      return rep;
    }
    rep.Cbar_root = *cbar;
    rep.t_identity_holds =
        4 * arith::pow_ui(*c, 2 * l) - 4 * arith::pow_ui(*cbar, l) ==
        9 * square(sol.b);
  }
  return rep;
}

const char* aux_curve_name(AuxCurve c) {
  switch (c) {
    case AuxCurve::quintic1:       return "quintic1";
    case AuxCurve::quartic_plus:   return "quartic+";
    case AuxCurve::quartic_minus:  return "quartic-";
    case AuxCurve::quartic8_plus:  return "quartic8+";
    case AuxCurve::quartic8_minus: return "quartic8-";
    case AuxCurve::power5_e0:      return "power5e0";
    case AuxCurve::power5_e1:      return "power5e1";
    case AuxCurve::sextic:         return "sextic";
  }
  return "?";
}

std::optional<AuxCurve> aux_curve_from_name(const std::string& name) {
  for (AuxCurve c : {AuxCurve::quintic1, AuxCurve::quartic_plus,
                     AuxCurve::quartic_minus, AuxCurve::quartic8_plus,
                     AuxCurve::quartic8_minus, AuxCurve::power5_e0,
                     AuxCurve::power5_e1, AuxCurve::sextic}) {
    if (name == aux_curve_name(c)) return c;
  }
  return std::nullopt;
}

namespace {

std::optional<mpq_class> y_if_square(const mpz_class& num,
                                     const mpz_class& den) {
  // num/den must be the square of a rational; den is a power of q, hence
  // positive.
  if (num < 0) return std::nullopt;
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpq_class y(arith::isqrt(num));
  y /= arith::isqrt(den);
  y.canonicalize();
  return y;
}

}  // namespace

AuxScanResult aux_curve_scan(AuxCurve curve, unsigned long height_bound) {
  if (height_bound < 1)
    throw std::invalid_argument("aux_curve_scan: height_bound >= 1");
  AuxScanResult res;
  res.curve = curve;
  res.height_bound = height_bound;

  const long H = static_cast<long>(height_bound);

  if (curve == AuxCurve::sextic) {
    // Z^6 + X^3 = Y^2 over coprime integer pairs; Z >= 0 by symmetry.
    for (long zz = 0; zz <= H; ++zz) {
      for (long xx = -H; xx <= H; ++xx) {
        if (zz == 0 && xx == 0) continue;
        if (std::gcd(std::abs(xx), zz) != 1) continue;
        mpz_class n = arith::pow_ui(zz, 6) + cube(mpz_class(xx));
        if (n < 0 || !mpz_perfect_square_p(n.get_mpz_t())) continue;
        AuxPoint pt;
        pt.x = xx;
        pt.y = arith::isqrt(n);
        pt.z = mpq_class(zz);
        res.points.push_back(std::move(pt));
      }
    }
    return res;
  }

  for (long den = 1; den <= H; ++den) {
    for (long num = -H; num <= H; ++num) {
      if (std::gcd(std::abs(num), den) != 1) continue;
      const mpz_class p(num), q(den);
      std::optional<mpq_class> y;
      switch (curve) {
        case AuxCurve::quintic1: {
          // (p^5 - 6 p^3 q^2 - 27 p q^4) q is Y^2 q^6.
          mpz_class m =
              (arith::pow_ui(p, 5) - 6 * cube(p) * square(q) -
               27 * p * arith::pow_ui(q, 4)) * q;
          y = y_if_square(m, arith::pow_ui(q, 6));
          break;
        }
        case AuxCurve::quartic_plus:
        case AuxCurve::quartic_minus:
        case AuxCurve::quartic8_plus:
        case AuxCurve::quartic8_minus: {
          mpz_class m = arith::pow_ui(p, 4) + 2 * square(p) * square(q) -
                        3 * arith::pow_ui(q, 4);
          if (curve == AuxCurve::quartic_minus ||
              curve == AuxCurve::quartic8_minus)
            m = -m;
          if (curve == AuxCurve::quartic8_plus ||
              curve == AuxCurve::quartic8_minus) {
            // 8 Y^2 = m/q^4: Y = sqrt(2m)/(4 q^2).
            y = y_if_square(2 * m, 16 * arith::pow_ui(q, 4));
          } else {
            y = y_if_square(m, arith::pow_ui(q, 4));
          }
          break;
        }
        case AuxCurve::power5_e0:
        case AuxCurve::power5_e1: {
          const long scale = curve == AuxCurve::power5_e1 ? 8 : 1;
          mpz_class m = scale * arith::pow_ui(p, 5) * q + arith::pow_ui(q, 6);
          y = y_if_square(m, arith::pow_ui(q, 6));
          break;
        }
        case AuxCurve::sextic:
          break;  // handled above
      }
      if (!y) continue;
      AuxPoint pt;
      pt.x = mpq_class(p, q);
      pt.x.canonicalize();
      pt.y = *y;
      res.points.push_back(std::move(pt));
    }
  }
  return res;
}

}  // namespace tfc
