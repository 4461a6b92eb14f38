#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "tfc/arith.hpp"

namespace tfc {

// Binary cubic form t0 x^3 + t1 x^2 y + t2 x y^2 + t3 y^3 with the classical
// covariant discriminant, normalized so that disc(x^3 + y^3) = -27.
struct CubicForm {
  mpz_class t0, t1, t2, t3;

  mpz_class discriminant() const;
  mpz_class eval(const mpz_class& a, const mpz_class& b) const;
  bool separable() const { return discriminant() != 0; }
};

// y^2 = x^3 + a2 x^2 + a4 x + a6 attached to a coprime pair (a, b); its
// discriminant equals 16 disc(F) F(a,b)^2 and the constructor asserts that
// identity on the nose.
struct FreyCurve {
  mpz_class a2, a4, a6;
  mpz_class disc;
};

FreyCurve frey_from_cubic_form(const CubicForm& f, const mpz_class& a,
                               const mpz_class& b);

// The 2-exponents of conductor and lowered level for A x^l + B y^l + C z^l,
// keyed on ord_2(ABC) and the parity of y. Total over all inputs.
unsigned kraus_alpha(unsigned long ord2_r, bool y_even);
unsigned kraus_beta(unsigned long ord2_r, bool y_even);

struct KrausData {
  // Normalized so that B y^l is even and A x^l = -1 mod 4: the input terms
  // permuted, possibly all flipped in sign.
  mpz_class A, B, C, x, y, z;
  unsigned long l = 0;
  mpz_class R;  // ABC after normalization
  unsigned alpha = 0;
  unsigned beta = 0;
  mpz_class conductor;  // 2^alpha * odd_radical(R x y z)
  mpz_class level;      // 2^beta * odd_radical(R)
  bool valuations_verified = true;  // ord_q(R) < l checked for every q
  std::vector<std::string> notes;
};

KrausData kraus_recipe(const mpz_class& A, const mpz_class& B,
                       const mpz_class& C, const mpz_class& x,
                       const mpz_class& y, const mpz_class& z,
                       unsigned long l, const arith::Effort& effort = {});

// Exact decision procedure for l < (1 + sqrt(p))^(2 k): the bound is kept
// as a + b sqrt(p) in Z[sqrt p] and compared by squaring, so no floating
// point enters any verdict.
class ExponentBoundPredicate {
 public:
  ExponentBoundPredicate(mpz_class p, unsigned degree);

  bool operator()(const mpz_class& l) const;
  // Largest integer below the bound (the bound itself is irrational).
  mpz_class integer_sup() const;
  const mpz_class& p() const { return p_; }
  unsigned degree() const { return degree_; }

 private:
  mpz_class p_;
  unsigned degree_;
  mpz_class a_, b_;  // (1 + sqrt p)^(2 degree) = a + b sqrt p
};

ExponentBoundPredicate exponent_bound(const mpz_class& p, unsigned degree);

// Writing C_n + 12 d B_n^3 sqrt(-3) = (-1 + sqrt(-3))^s (a + b sqrt(-3))^3
// / 2^(s+3) splits into three cases; a solution records which case held and
// the 3-adic valuations of A_n, A_n^3 + 8*432 d^2 B_n^6 and C_n.
struct DescentSolution {
  int s = 0;           // 0, 1 or 2
  mpz_class a, b;      // same parity, case equations hold exactly
  unsigned long e = 0, f = 0, g = 0;
  mpz_class A, B, C, d;  // the input data the solution describes
};

// Enumerates (a, b) with a^2 + 3 b^2 = 4 A_n over all sign choices and
// returns every (s, a, b) whose case equations hold exactly. An empty
// result is refutation-grade: the factorization failed on real curve data.
std::vector<DescentSolution> descent_solve(const mpz_class& A,
                                           const mpz_class& B,
                                           const mpz_class& C,
                                           const mpz_class& d);

enum class ParityCase { odd_a, even_a };

struct PowerDescentReport {
  bool applicable = false;  // all l-th power decompositions existed
  std::string reason;       // why not, when inapplicable
  mpz_class A_root, Abar_root, C_root, Cbar_root;
  bool cube_identity_holds = false;   // 3^f Abar^l + 8*3^2g C^2l = 3^(2+3e) A^3l
  bool reduced_three_support = false; // after /3^t at most one term is divisible by 3
  bool t_identity_holds = false;      // C^2l - 8 Cbar^l = 9b^2 (odd a) or the /4 variant
};

// Verifies the power-descent identities on a solution whose entries admit
// l-th power decompositions; absence of a decomposition is inapplicability,
// not an error.
PowerDescentReport power_descent_equations(const DescentSolution& sol,
                                           unsigned long l, ParityCase pc);

enum class AuxCurve {
  quintic1,        // Y^2 = X^5 - 6 X^3 - 27 X
  quartic_plus,    // Y^2 = X^4 + 2 X^2 - 3
  quartic_minus,   // -Y^2 = X^4 + 2 X^2 - 3
  quartic8_plus,   // 8 Y^2 = X^4 + 2 X^2 - 3
  quartic8_minus,  // -8 Y^2 = X^4 + 2 X^2 - 3
  power5_e0,       // Y^2 = X^5 + 1
  power5_e1,       // Y^2 = 8 X^5 + 1
  sextic,          // Z^6 + X^3 = Y^2, scanned over coprime integer (X, Z)
};

const char* aux_curve_name(AuxCurve c);
std::optional<AuxCurve> aux_curve_from_name(const std::string& name);

struct AuxPoint {
  mpq_class x, y;
  std::optional<mpq_class> z;  // sextic only
};

struct AuxScanResult {
  AuxCurve curve;
  unsigned long height_bound = 0;
  // A scan is a sanity check, never a proof of emptiness.
  bool conclusive = false;
  std::vector<AuxPoint> points;  // canonical representatives, y >= 0
};

// Naive enumeration of X = p/q with |p|, q <= height_bound (for the sextic,
// coprime integer pairs |X|, |Z| <= height_bound with Z >= 0) and an exact
// square test on the other side.
AuxScanResult aux_curve_scan(AuxCurve curve, unsigned long height_bound);

}  // namespace tfc
