#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hallcurve/scalar.hpp"

namespace hc {

// Global registry of variable names; ids are stable within a process.
int var_id(const std::string& name);
const std::string& var_name(int id);

// Monomial with integer (possibly negative) exponents; zero exponents are
// never stored.  Ordered lexicographically by (id, exp) pairs, which is an
// arbitrary but deterministic total order for map keys.
struct Monomial {
    std::vector<std::pair<int, int>> e;  // sorted by variable id

    static Monomial one() { return {}; }
    static Monomial var(int id, int exp = 1);
    bool is_one() const { return e.empty(); }
    int exp_of(int id) const;
    Monomial operator*(const Monomial& o) const;
    Monomial inverse() const;
    Monomial pow(int k) const;
    std::vector<int> vars() const;
    auto operator<=>(const Monomial&) const = default;
    std::string to_string() const;
};

class LaurentPoly {
public:
    explicit LaurentPoly(ScalarField fld = ScalarField::symbolic()) : fld_(fld) {}
    static LaurentPoly constant(const Scalar& c);
    static LaurentPoly term(const Scalar& c, const Monomial& m);

    const ScalarField& field() const { return fld_; }
    const std::map<Monomial, Scalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }
    Scalar constant_value() const;
    size_t size() const { return t_.size(); }

    void add_term(const Monomial& m, const Scalar& c);
    LaurentPoly operator-() const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    bool operator==(const LaurentPoly& o) const { return t_ == o.t_; }

    LaurentPoly scaled(const Scalar& c) const;
    LaurentPoly shifted(const Monomial& m) const;
    // Monomial substitution var -> scale * target^power, power in {1,-1}.
    struct Subst {
        Scalar scale;
        int target;
        int power = 1;
    };
    LaurentPoly substitute(const std::map<int, Subst>& s) const;
    std::vector<int> vars() const;

    std::string to_string() const;

private:
    ScalarField fld_;
    std::map<Monomial, Scalar> t_;
};

// Fraction of Laurent polynomials; equality is by cross-multiplication.
// Light normalization only (scalar content, monomial shift, univariate gcd
// when both sides are univariate in the same variable).
class RationalFunction {
public:
    explicit RationalFunction(ScalarField fld = ScalarField::symbolic());
    RationalFunction(LaurentPoly num, LaurentPoly den);
    static RationalFunction constant(const Scalar& c);
    static RationalFunction from_poly(LaurentPoly p);

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    const ScalarField& field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction inverse() const;
    RationalFunction pow(long k) const;

    // Exact equality n1*d2 == n2*d1.
    bool eq(const RationalFunction& o) const;

    RationalFunction substitute(const std::map<int, LaurentPoly::Subst>& s) const;
    // Sum over all permutations of the listed variables.
    RationalFunction symmetrize(const std::vector<int>& vars) const;
    // Laurent polynomial test: true iff den divides num up to unit*monomial;
    // on success yields the polynomial.
    bool as_laurent_polynomial(LaurentPoly* out = nullptr) const;

    std::string to_string() const;
    static RationalFunction parse(const std::string& text, ScalarField fld);

private:
    LaurentPoly num_, den_;
    void normalize();
};

// Per-variable closed exponent window.
struct DegreeWindow {
    std::map<int, std::pair<int, int>> b;  // var -> [lo,hi]

    void set(int var, int lo, int hi);
    bool contains(const Monomial& m) const;
    std::string to_string() const;
};

// Region data: |t_order[0]| >> |t_order[1]| >> ... >> |t_order[n-1]|, all
// below 1.  A monomial is "small" iff reading exponents from the last
// variable backwards the first nonzero one is positive.
bool region_small(const Monomial& m, const std::vector<int>& order);

// Laurent expansion of f in the region, truncated to the window.  The
// denominator must factor as unit * prod(1 - alpha_i * m_i) with each m_i
// region-small; throws parse_error otherwise.
std::map<Monomial, Scalar> expand_region(const RationalFunction& f, const std::vector<int>& order,
                                         const DegreeWindow& window);

// Kernel of the matrix whose rows are the given polynomials' coefficient
// vectors: returns a basis of exact linear relations sum_i v_i row_i = 0.
std::vector<std::vector<Scalar>> linear_relations(const std::vector<LaurentPoly>& rows);
// optional multiplier: a function that clears every row's denominator (the
// rows times the multiplier must be Laurent polynomials); defaults to the
// product of the distinct denominators
std::vector<std::vector<Scalar>> linear_relations_ratfun(
    const std::vector<RationalFunction>& rows, const RationalFunction* multiplier = nullptr);

// Reduced row echelon form, for comparing relation lattices.
std::vector<std::vector<Scalar>> rref(std::vector<std::vector<Scalar>> m, const ScalarField& fld);

}  // namespace hc
