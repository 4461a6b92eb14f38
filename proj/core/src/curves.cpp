#include "tfc/curves.hpp"

#include <algorithm>

namespace tfc {

namespace {

mpz_class square(const mpz_class& n) { return n * n; }

mpz_class cube(const mpz_class& n) { return n * n * n; }

mpq_class cube(const mpq_class& q) { return q * q * q; }

}  // namespace

CubicCurve::CubicCurve(mpz_class d, const arith::Effort& effort)
    : d_(std::move(d)), cube_free_verified_(true) {
  if (d_ == 0) throw std::invalid_argument("CubicCurve: d must be nonzero");
  const mpz_class a = abs(d_);
  if (a == 1) return;
  auto f = arith::factor_with_effort(a, effort);
  for (const auto& [p, e] : f.factors) {
    if (e >= 3) throw std::invalid_argument("CubicCurve: d is not cube-free");
  }
  if (!f.complete()) {
    // The cofactor may hide a cube. A cofactor that is itself a perfect
    // cube is caught here; mixed cases stay unverified.
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), f.cofactor.get_mpz_t(), 3) != 0)
      throw std::invalid_argument("CubicCurve: d is not cube-free");
    cube_free_verified_ = false;
  }
}

bool CubicCurve::contains(const CubicPoint& p) const {
  if (p.is_identity()) return true;
  return cube(p.u()) + cube(p.v()) == d_;
}

WeierstrassPoint::WeierstrassPoint(const mpq_class& x, const mpq_class& y)
    : identity_(false), x_(x), y_(y) {
  x_.canonicalize();
  y_.canonicalize();
  const mpz_class xden = x_.get_den();
  if (!mpz_perfect_square_p(xden.get_mpz_t()))
    throw std::invalid_argument(
        "WeierstrassPoint: denominator of x is not a square");
  B_ = arith::isqrt(xden);
  if (y_.get_den() != cube(B_))
    throw std::invalid_argument(
        "WeierstrassPoint: denominator of y is not B^3");
  A_ = x_.get_num();
  C_ = y_.get_num();
}

WeierstrassCurve::WeierstrassCurve(mpz_class d) : d_(std::move(d)) {
  if (d_ == 0)
    throw std::invalid_argument("WeierstrassCurve: d must be nonzero");
  b_ = -432 * d_ * d_;
}

bool WeierstrassCurve::contains(const WeierstrassPoint& q) const {
  if (q.is_identity()) return true;
  return q.y() * q.y() == cube(q.x()) + b_;
}

WeierstrassPoint WeierstrassCurve::negate(const WeierstrassPoint& q) const {
  if (q.is_identity()) return q;
  return WeierstrassPoint(q.x(), -q.y());
}

WeierstrassPoint WeierstrassCurve::add(const WeierstrassPoint& p,
                                       const WeierstrassPoint& q) const {
  if (p.is_identity()) return q;
  if (q.is_identity()) return p;
  mpq_class lambda;
  if (p.x() == q.x()) {
    if (p.y() == -q.y()) return WeierstrassPoint::identity();
    // Tangent; y != 0 because y == -y was just excluded.
    lambda = 3 * p.x() * p.x() / (2 * p.y());
  } else {
    lambda = (q.y() - p.y()) / (q.x() - p.x());
  }
  mpq_class x3 = lambda * lambda - p.x() - q.x();
  mpq_class y3 = lambda * (p.x() - x3) - p.y();
  return WeierstrassPoint(x3, y3);
}

WeierstrassPoint WeierstrassCurve::multiply(long n,
                                            const WeierstrassPoint& q) const {
  if (!contains(q))
    throw std::invalid_argument("multiply: point is not on the curve");
  if (n == 0 || q.is_identity()) return WeierstrassPoint::identity();
  WeierstrassPoint base = n < 0 ? negate(q) : q;
  unsigned long e =
      n < 0 ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);

  WeierstrassPoint acc = WeierstrassPoint::identity();
  while (e > 0) {
    if (e & 1) acc = add(acc, base);
    e >>= 1;
    if (e) base = add(base, base);
  }
  return acc;
}

WeierstrassPoint to_weierstrass(const CubicCurve& curve, const CubicPoint& p) {
  if (!curve.contains(p))
    throw std::invalid_argument("to_weierstrass: point is not on the curve");
  if (p.is_identity()) return WeierstrassPoint::identity();
  const mpq_class s = p.u() + p.v();
  if (s == 0)
    throw inconsistency_error("to_weierstrass: u + v = 0 with d != 0");
  const mpz_class& d = curve.d();
  mpq_class x = 12 * d / s;
  mpq_class y = 36 * d * (p.u() - p.v()) / s;
  return WeierstrassPoint(x, y);
}

CubicPoint from_weierstrass(const WeierstrassCurve& curve,
                            const WeierstrassPoint& q) {
  if (!curve.contains(q))
    throw std::invalid_argument(
        "from_weierstrass: point is not on the curve");
  if (q.is_identity()) return CubicPoint::identity();
  if (q.x() == 0)
    throw inconsistency_error(
        "from_weierstrass: x = 0 cannot lie on y^2 = x^3 - 432 d^2");
  const mpz_class& d = curve.d();
  mpq_class u = (36 * d + q.y()) / (6 * q.x());
  mpq_class v = (36 * d - q.y()) / (6 * q.x());
  return CubicPoint(u, v);
}

std::pair<mpz_class, mpz_class> duplication_x(const mpz_class& A,
                                              const mpz_class& B,
                                              const mpz_class& C,
                                              const mpz_class& d) {
  if (B < 1) throw std::invalid_argument("duplication_x: B must be >= 1");
  const mpz_class dd432 = 432 * d * d;
  if (square(C) != cube(A) - dd432 * cube(square(B)))
    throw std::invalid_argument("duplication_x: C^2 != A^3 - 432 d^2 B^6");
  if (gcd(A, B) != 1)
    throw std::invalid_argument("duplication_x: gcd(A, B) != 1");

  mpz_class num = A * (cube(A) + 8 * dd432 * cube(square(B)));
  mpz_class den = 4 * square(B) * square(C);
  const mpz_class g = gcd(num, den);
  num /= g;
  den /= g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (!mpz_perfect_square_p(den.get_mpz_t()))
    throw inconsistency_error(
        "duplication_x: reduced denominator is not a square");
  return {num, arith::isqrt(den)};
}

bool nonsingular_reduction_at(const WeierstrassCurve& curve,
                              const WeierstrassPoint& q, const mpz_class& p) {
  if (p <= 3 || !arith::is_prime(p))
    throw std::invalid_argument(
        "nonsingular_reduction_at: p must be a prime > 3");
  if (!curve.contains(q))
    throw std::invalid_argument(
        "nonsingular_reduction_at: point is not on the curve");
  if (q.is_identity()) return true;  // [0:1:0] is always smooth

  // Projective point [X:Y:Z] = [AB : C : B^3]; the partials of
  // Y^2 Z - X^3 + 432 d^2 Z^3 are (-3X^2, 2YZ, Y^2 + 1296 d^2 Z^2).
  const mpz_class X = (q.A() * q.B()) % p;
  const mpz_class Y = q.C() % p;
  const mpz_class Z = cube(q.B()) % p;
  const mpz_class dX = (3 * X * X) % p;
  const mpz_class dY = (2 * Y * Z) % p;
  const mpz_class dZ = (Y * Y + 1296 * curve.d() * curve.d() * Z * Z) % p;
  return !(dX == 0 && dY == 0 && dZ == 0);
}

bool is_torsion(const WeierstrassCurve& curve, const WeierstrassPoint& q) {
  if (!curve.contains(q))
    throw std::invalid_argument("is_torsion: point is not on the curve");
  if (q.is_identity()) return true;
  WeierstrassPoint acc = q;
  for (int n = 2; n <= 12; ++n) {
    acc = curve.add(acc, q);
    if (acc.is_identity()) return true;
  }
  return false;
}

long point_count_ap(const WeierstrassCurve& curve, const mpz_class& p) {
  if (p <= 3 || !arith::is_prime(p))
    throw std::invalid_argument("point_count_ap: p must be a prime > 3");
  if (mpz_divisible_p(curve.d().get_mpz_t(), p.get_mpz_t()))
    throw std::invalid_argument("point_count_ap: bad reduction at p");
  if (!p.fits_ulong_p())
    throw std::invalid_argument("point_count_ap: p too large to enumerate");

  const unsigned long pl = p.get_ui();
  mpz_class b = curve.b_coeff() % p;
  if (b < 0) b += p;
  // #E = 1 + sum_x (1 + legendre(x^3 + b)); a_p = p + 1 - #E = -sum legendre.
  long sum = 0;
  mpz_class t;
  for (unsigned long x = 0; x < pl; ++x) {
    t = (mpz_class(x) * x * x + b) % p;
    sum += mpz_legendre(t.get_mpz_t(), p.get_mpz_t());
  }
  return -sum;
}

namespace {

// Multiplication-by-3 on y^2 = x^3 + b:
//   x(3R) = (t^9 - 96 b t^6 + 48 b^2 t^3 + 64 b^3) / (9 t^2 (t^3 + 4b)^2),
// t = x(R). Clearing x(3R) = A/B^2 gives a degree-9 integer polynomial;
// this evaluates it at t = r/e^2, scaled by e^18.
mpz_class triple_poly_at(const mpz_class& A, const mpz_class& B,
                         const mpz_class& b, const mpz_class& r,
                         const mpz_class& e) {
  const mpz_class B2 = square(B);
  const mpz_class coeff[10] = {
      64 * cube(b) * B2,     // t^0
      0,                     // t^1
      -144 * A * square(b),  // t^2
      48 * square(b) * B2,   // t^3
      0,                     // t^4
      -72 * A * b,           // t^5
      -96 * b * B2,          // t^6
      0,                     // t^7
      -9 * A,                // t^8
      B2,                    // t^9
  };
  const mpz_class e2 = square(e);
  mpz_class acc = 0;
  for (int k = 9; k >= 0; --k)
    acc = acc * r + coeff[k] * arith::pow_ui(e2, 9 - k);
  return acc;
}

}  // namespace

TripleResult is_triple(const WeierstrassCurve& curve,
                       const WeierstrassPoint& q,
                       const arith::Effort& effort) {
  if (q.is_identity()) throw std::invalid_argument("is_triple: identity input");
  if (!curve.contains(q))
    throw std::invalid_argument("is_triple: point is not on the curve");

  const mpz_class& b = curve.b_coeff();
  const mpz_class& A = q.A();
  const mpz_class& B = q.B();

  // Candidate roots r/e^2 have e | B and r | 64 b^3 B^2 = -2^18 3^9 d^6 B^2.
  // Assemble that constant's factorization from d and B; an incomplete
  // factorization means the candidate list may be missing divisors.
  bool complete = true;
  arith::Factorization constf;
  constf.factors = {{2, 18}, {3, 9}};
  auto fold = [&](const mpz_class& n, unsigned long mult) {
    if (n == 1) return;
    auto f = arith::factor_with_effort(n, effort);
    if (!f.complete()) complete = false;
    for (const auto& [p, e] : f.factors)
      constf.factors.emplace_back(p, e * mult);
  };
  fold(abs(curve.d()), 6);
  fold(B, 2);
  std::sort(constf.factors.begin(), constf.factors.end(),
            [](const auto& a, const auto& bb) { return a.first < bb.first; });

  std::vector<mpz_class> rs;
  if (!arith::divisors(constf, effort.max_candidates, &rs)) complete = false;

  std::vector<mpz_class> es{1};
  if (B != 1) {
    auto bf = arith::factor_with_effort(B, effort);
    if (!bf.complete()) complete = false;
    if (!arith::divisors(bf, effort.max_candidates, &es)) complete = false;
  }

  for (const mpz_class& e : es) {
    const mpz_class e2 = square(e);
    for (const mpz_class& r0 : rs) {
      if (gcd(r0, e) != 1) continue;
      for (int sign = 0; sign < 2; ++sign) {
        const mpz_class r = sign ? mpz_class(-r0) : r0;
        if (triple_poly_at(A, B, b, r, e) != 0) continue;
        // Root of the x-equation; R is rational iff x^3 + b is a square.
        mpq_class x(r);
        x /= e2;
        x.canonicalize();
        mpq_class yy = x * x * x + b;
        if (yy < 0) continue;
        const mpz_class ynum = yy.get_num(), yden = yy.get_den();
        if (!mpz_perfect_square_p(ynum.get_mpz_t()) ||
            !mpz_perfect_square_p(yden.get_mpz_t()))
          continue;
        mpq_class y(arith::isqrt(ynum));
        y /= arith::isqrt(yden);
        y.canonicalize();
        for (int ysign = 0; ysign < 2; ++ysign) {
          WeierstrassPoint cand(x, ysign ? mpq_class(-y) : y);
          if (!curve.contains(cand)) continue;
          if (curve.multiply(3, cand) == q) return {TripleStatus::found, cand};
        }
      }
    }
  }
  return {complete ? TripleStatus::not_triple : TripleStatus::unknown,
          std::nullopt};
}

}  // namespace tfc
