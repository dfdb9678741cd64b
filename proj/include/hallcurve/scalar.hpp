#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "hallcurve/util.hpp"

namespace hc {

using Int = mpz_class;
using Rat = mpq_class;

enum class ScalarMode : uint8_t { Numeric, Symbolic };

// Sparse Laurent polynomial in the symbol v with integer coefficients,
// exponent -> coefficient, no zero coefficients stored.
using VPoly = std::map<int, Int>;

// Exact coefficient field.
//
// Numeric mode: a + b*sqrt(q) with rational a, b and q fixed; b is folded
// into a whenever q is a perfect square.  Symbolic mode: reduced fraction
// of integer Laurent polynomials in v, where v^2 plays the role of q.
class Scalar {
public:
    Scalar();  // symbolic zero

    static Scalar numeric(long q, const Rat& a = Rat(0), const Rat& b = Rat(0));
    static Scalar symbolic(const Rat& r);
    static Scalar symbolic(const VPoly& num, const VPoly& den);
    // v^k in the requested mode (numeric: sqrt(q)^k).
    static Scalar v_power(ScalarMode mode, long q, int k = 1);

    ScalarMode mode() const { return mode_; }
    long q() const { return q_; }

    bool is_zero() const;
    bool is_one() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    // Deterministic total order for use as a map key.
    bool operator<(const Scalar& o) const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar inverse() const;
    Scalar pow(long e) const;

    // Substitutes v -> sqrt(q); throws if the denominator vanishes there.
    Scalar eval_at(long q) const;

    // True if the value is a plain rational (no v part); `rational_value`
    // requires it.
    bool is_rational() const;
    Rat rational_value() const;

    std::string to_string() const;
    static Scalar parse(const std::string& text, ScalarMode mode, long q);

private:
    ScalarMode mode_;
    long q_ = 0;      // numeric only
    Rat a_, b_;       // numeric: a + b*sqrt(q)
    VPoly num_, den_; // symbolic fraction

    void normalize_numeric();
    void normalize_symbolic();
    void check_compatible(const Scalar& o) const;
};

// Mints constants of a fixed mode; the convenient way to write generic code.
struct ScalarField {
    ScalarMode mode = ScalarMode::Symbolic;
    long q = 0;

    static ScalarField numeric(long q) { return {ScalarMode::Numeric, q}; }
    static ScalarField symbolic() { return {ScalarMode::Symbolic, 0}; }

    Scalar zero() const { return integer(0); }
    Scalar one() const { return integer(1); }
    Scalar integer(long n) const { return rational(Rat(n)); }
    Scalar integer(const Int& n) const { return rational(Rat(n)); }
    Scalar rational(const Rat& r) const {
        return mode == ScalarMode::Numeric ? Scalar::numeric(q, r) : Scalar::symbolic(r);
    }
    // v (= sqrt(q) numerically), and q itself as a scalar (v^2 symbolically).
    Scalar v(int k = 1) const { return Scalar::v_power(mode, q, k); }
    Scalar q_scalar(int k = 1) const { return v(2 * k); }
    Scalar parse(const std::string& s) const { return Scalar::parse(s, mode, q); }

    bool operator==(const ScalarField&) const = default;
};

// Helpers shared with the polynomial layer.
bool is_perfect_square(long q, long* root);
VPoly vpoly_mul(const VPoly& a, const VPoly& b);
VPoly vpoly_add(const VPoly& a, const VPoly& b);

}  // namespace hc
