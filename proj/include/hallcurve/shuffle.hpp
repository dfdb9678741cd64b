#pragma once

#include <map>
#include <string>
#include <vector>

#include "hallcurve/polyrat.hpp"
#include "hallcurve/witt.hpp"

namespace hc {

// Disjoint union of multiplicative lines, one per component, with weights.
struct SigmaComponent {
    int id;
    int weight = 1;
    std::string name;
};

struct SigmaScheme {
    std::vector<SigmaComponent> components;
    static SigmaScheme single(int weight = 1);
};

// slot variable names t1..tn
int slot_var(int i);

// Kernel c on Sigma x Sigma: rational functions of the two reserved
// coordinates z1, z2 per component pair.
class Kernel {
public:
    explicit Kernel(ScalarField fld) : fld_(fld) {}

    static int z1();
    static int z2();

    void set(int i, int j, RationalFunction c) { c_[{i, j}] = std::move(c); }
    const RationalFunction& entry(int i, int j) const;
    bool has(int i, int j) const { return c_.count({i, j}) > 0; }
    const ScalarField& field() const { return fld_; }

    // entry evaluated at named variables (var_a, var_b)
    RationalFunction at(int i, int j, int var_a, int var_b) const;

    // c(i,j)(s,t) * c(j,i)(t,s) == 1, exactly, for all stored pairs
    bool verify_antisymmetric() const;

private:
    ScalarField fld_;
    std::map<std::pair<int, int>, RationalFunction> c_;
};

// Degree-graded shuffle element: multiset of component ids (sorted) ->
// rational function of t1..tn.  Functions on a multiset chart are
// R^c-twisted-symmetric for shuffle products; plain symmetric in the
// symmetric-shuffle representation.
struct ShuffleElement {
    std::map<std::vector<int>, RationalFunction> pieces;

    static ShuffleElement generator(int comp, int exponent, const ScalarField& fld);
    ShuffleElement& add(const std::vector<int>& comps, const RationalFunction& f);
    bool eq(const ShuffleElement& o) const;
    ShuffleElement operator+(const ShuffleElement& o) const;
    ShuffleElement scaled(const RationalFunction& c) const;
};

// Shuffle product mu_{r,s} over the (r,s)-shuffles with kernel factors.
ShuffleElement shuffle_mul(const ShuffleElement& phi, const ShuffleElement& psi, const Kernel& c);
// n-fold product of degree-1 generators
ShuffleElement shuffle_chain(const std::vector<std::pair<int, int>>& gens, const Kernel& c,
                             const ScalarField& fld);

// Symmetric shuffle xi_{m,n} for a coboundary kernel lambda.
ShuffleElement sym_shuffle_mul(const ShuffleElement& a, const ShuffleElement& b,
                               const Kernel& lambda);
ShuffleElement sym_shuffle_chain(const std::vector<std::pair<int, int>>& gens,
                                 const Kernel& lambda, const ScalarField& fld);

// Exact linear relations among a family of same-degree shuffle elements
// (single multiset piece each).
std::vector<std::vector<Scalar>> relation_space(const std::vector<ShuffleElement>& elements,
                                                const Kernel* kernel = nullptr);

// Quadratic commutation check: Q(t,s) E_i(t) E_j(s) = P(t,s) E_j(s) E_i(t)
// coefficientwise for |a|, |b| <= window, where c_{ij} = P/Q.
struct QuadraticCheckResult {
    bool pass;
    std::string witness;  // first failing coefficient
};
QuadraticCheckResult quadratic_check(int comp_i, int comp_j, const Kernel& c, int window);
// same check against an externally supplied ratio P/Q (negative controls)
QuadraticCheckResult quadratic_check_ratio(int comp_i, int comp_j, const Kernel& c,
                                           const RationalFunction& ratio, int window);

// Laurent-polynomial test for a shuffle element (all pieces).
bool is_laurent_polynomial(const ShuffleElement& e);
// Syntactic regularity of a coboundary kernel entry: regular off the
// diagonal with at most a first-order pole on it.
bool lambda_pole_ok(const RationalFunction& lam);
// Ideal-stability spot check: multiplier * element lies in the span of the
// supplied same-degree elements.
bool ideal_membership(const ShuffleElement& elem, const RationalFunction& multiplier,
                      const std::vector<ShuffleElement>& span);

// Curve kernels.  rank1: c(z1,z2) = q^{1-g} zeta(z2/z1)/zeta(z2/(q z1)).
Kernel curve_kernel_rank1(const CurveData& X, ScalarField fld);
// lambda / lambda~ coboundary kernels for P^1 (theta = O(-1)).
Kernel curve_kernel_lambda_p1(const CurveData& X, ScalarField fld, bool tilde);
// c_{X,r}: the product over r-th roots of unity, grouped through w^r; the
// zeta numerator coefficients may be symbolic (polyrat variables).
Kernel curve_kernel_elliptic(const std::vector<RationalFunction>& P_coeffs, long q, int r,
                             ScalarField fld);

}  // namespace hc
