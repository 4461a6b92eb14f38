#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>

#include "tfc/arith.hpp"

namespace tfc {

// Affine-or-identity point on u^3 + v^3 = d. The identity is the projective
// point [1, -1, 0]; inversion is reflection in the line u = v.
class CubicPoint {
 public:
  static CubicPoint identity() { return CubicPoint(); }
  CubicPoint(mpq_class u, mpq_class v)
      : identity_(false), u_(std::move(u)), v_(std::move(v)) {
    u_.canonicalize();
    v_.canonicalize();
  }

  bool is_identity() const { return identity_; }
  const mpq_class& u() const { return u_; }
  const mpq_class& v() const { return v_; }

  CubicPoint inverse() const {
    return identity_ ? *this : CubicPoint(v_, u_);
  }

  friend bool operator==(const CubicPoint& a, const CubicPoint& b) {
    if (a.identity_ != b.identity_) return false;
    return a.identity_ || (a.u_ == b.u_ && a.v_ == b.v_);
  }

 private:
  CubicPoint() : identity_(true) {}
  bool identity_;
  mpq_class u_, v_;
};

// The twisted Fermat cubic u^3 + v^3 = d for a nonzero cube-free d. Cube
// freeness is checked at construction by bounded factoring; when the budget
// leaves an unfactored cofactor the check is recorded as unverified rather
// than silently assumed.
class CubicCurve {
 public:
  explicit CubicCurve(mpz_class d, const arith::Effort& effort = {});

  const mpz_class& d() const { return d_; }
  bool cube_free_verified() const { return cube_free_verified_; }
  bool contains(const CubicPoint& p) const;

 private:
  mpz_class d_;
  bool cube_free_verified_;
};

// Affine-or-identity point on y^2 = x^3 - 432 d^2 with the canonical
// decomposition x = A/B^2, y = C/B^3, gcd(A,B) = gcd(C,B) = 1, B >= 1.
// The constructor enforces the shape of the denominators; whether the
// point actually lies on a given curve is the curve's contains().
class WeierstrassPoint {
 public:
  static WeierstrassPoint identity() { return WeierstrassPoint(); }
  WeierstrassPoint(const mpq_class& x, const mpq_class& y);

  bool is_identity() const { return identity_; }
  const mpq_class& x() const { return x_; }
  const mpq_class& y() const { return y_; }
  const mpz_class& A() const { return A_; }
  const mpz_class& B() const { return B_; }
  const mpz_class& C() const { return C_; }

  friend bool operator==(const WeierstrassPoint& a, const WeierstrassPoint& b) {
    if (a.identity_ != b.identity_) return false;
    return a.identity_ || (a.x_ == b.x_ && a.y_ == b.y_);
  }

 private:
  WeierstrassPoint() : identity_(true) {}
  bool identity_;
  mpq_class x_, y_;
  mpz_class A_, B_, C_;
};

// y^2 = x^3 - 2^4 3^3 d^2, the Weierstrass model of the cubic. One group
// law lives here; cubic-model addition is transported through the
// birational maps.
class WeierstrassCurve {
 public:
  explicit WeierstrassCurve(mpz_class d);

  const mpz_class& d() const { return d_; }
  const mpz_class& b_coeff() const { return b_; }  // -432 d^2

  bool contains(const WeierstrassPoint& q) const;

  WeierstrassPoint negate(const WeierstrassPoint& q) const;
  WeierstrassPoint add(const WeierstrassPoint& p,
                       const WeierstrassPoint& q) const;
  // n q by double-and-add; negative n reflects, 0 q is the identity.
  WeierstrassPoint multiply(long n, const WeierstrassPoint& q) const;

 private:
  mpz_class d_, b_;
};

// x = 12 d/(u+v), y = 36 d (u-v)/(u+v); the identity maps to the identity.
WeierstrassPoint to_weierstrass(const CubicCurve& curve, const CubicPoint& p);

// u = (36 d + y)/(6x), v = (36 d - y)/(6x); inverse of to_weierstrass.
CubicPoint from_weierstrass(const WeierstrassCurve& curve,
                            const WeierstrassPoint& q);

// x-coordinate of the doubled point straight from the duplication formula
//   x(2Q) = A(A^3 + 8 * 432 d^2 B^6) / (4 B^2 C^2),
// reduced to lowest terms and returned as (A', B') with x = A'/B'^2.
// Must agree with the group law; inconsistent (A, B, C, d) are rejected.
std::pair<mpz_class, mpz_class> duplication_x(const mpz_class& A,
                                              const mpz_class& B,
                                              const mpz_class& C,
                                              const mpz_class& d);

// Whether the reduction of q mod p avoids the singular locus: the three
// partial derivatives of Y^2 Z = X^3 - 432 d^2 Z^3 must not vanish
// simultaneously at [AB : C : B^3] over F_p. Requires p > 3 prime (the
// model is minimal at such p).
bool nonsingular_reduction_at(const WeierstrassCurve& curve,
                              const WeierstrassPoint& q, const mpz_class& p);

// True iff n q is the identity for some 1 <= n <= 12, the uniform bound on
// rational torsion order.
bool is_torsion(const WeierstrassCurve& curve, const WeierstrassPoint& q);

// a_p = p + 1 - #E(F_p) by direct quadratic-residue counting. Requires a
// prime p > 3 of good reduction (p not dividing d).
long point_count_ap(const WeierstrassCurve& curve, const mpz_class& p);

enum class TripleStatus { found, not_triple, unknown };

struct TripleResult {
  TripleStatus status;
  std::optional<WeierstrassPoint> witness;  // R with 3R = Q when found
};

// Decides q in 3 E(Q) by solving x(3R) = x(q): the degree-9 equation in
// x(R) is cleared to an integer polynomial whose rational roots are
// enumerated via factorizations of the extreme coefficients. Returns
// unknown when a factoring budget or the candidate cap is exhausted.
TripleResult is_triple(const WeierstrassCurve& curve,
                       const WeierstrassPoint& q,
                       const arith::Effort& effort = {});

}  // namespace tfc
