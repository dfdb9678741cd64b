#pragma once

#include <optional>
#include <vector>

#include "hallcurve/polyrat.hpp"

namespace hc {

// Truncated big-Witt vector: the series 1 + b[0] t + b[1] t^2 + ... with
// coefficients trusted through t^trunc only.  `rank`, when set, asserts the
// series is the polynomial 1 + ... + b_{rank} t^rank with b_rank invertible.
struct WittVector {
    int trunc = 0;
    std::vector<Scalar> b;  // size == trunc
    std::optional<int> rank;

    static WittVector zero(ScalarField fld, int trunc);         // series 1
    static WittVector one(ScalarField fld, int trunc);          // series 1 - t
    static WittVector line(const Scalar& lambda, int trunc);    // 1 - lambda t
    static WittVector from_poly(const std::vector<Scalar>& coeffs_after_1, int trunc,
                                std::optional<int> rank = std::nullopt);

    ScalarField field() const;
    Scalar coeff(int i) const;  // coefficient of t^i, i >= 0 (coeff(0) == 1)
    bool operator==(const WittVector& o) const;
};

// Group law: product of the two series.
WittVector boxplus(const WittVector& u, const WittVector& v);
// Ring law via Newton power sums.
WittVector boxtimes(const WittVector& u, const WittVector& v);
// Involution on exact rank-r vectors: roots invert.
WittVector star(const WittVector& u);
// Euler factor: multiplicative inverse series 1/B(t), truncated.
std::vector<Scalar> euler_factor(const WittVector& u, int order);

// Plain truncated series utilities (index = power of t, s[0] is constant).
std::vector<Scalar> series_mul(const std::vector<Scalar>& a, const std::vector<Scalar>& b, int n);
std::vector<Scalar> series_inv(const std::vector<Scalar>& a, int n);
std::vector<Scalar> series_scale_var(const std::vector<Scalar>& a, const Scalar& lambda);

// Smooth projective curve over F_q given by its zeta numerator.
struct CurveData {
    long q = 2;
    int genus = 0;
    std::vector<Int> P;  // P(t) coefficients, constant term first, P[0] == 1

    static CurveData p1(long q);
    static CurveData elliptic(long q, const Int& trace_a);

    // number of closed points of degree 1..D
    std::vector<Int> place_counts(int D) const;
    // #X(F_{q^n}) for n = 1..D
    std::vector<Int> point_counts(int D) const;
    // P(t) / ((1-t)(1-qt)) in the named variable
    RationalFunction zeta_rational(ScalarField fld, int tvar) const;
    // series of zeta to order N (rational form)
    std::vector<Scalar> zeta_series(ScalarField fld, int N) const;
    // prod_{d<=D} (1-t^d)^{-a_d} to order N, from supplied or derived counts
    std::vector<Scalar> zeta_truncated_product(ScalarField fld, int D, int N,
                                               const std::vector<Int>* counts = nullptr) const;
    // Weil symmetry p_{2g-i} = q^{g-i} p_i; the FE-based identities need it
    bool weil_symmetric() const;
};

// kappa_x: (1+t)/(1+q_x t); global kappa: zeta(-t)/zeta(-qt).
WittVector kappa_local(ScalarField fld, long qx, int trunc);
WittVector kappa_global(const CurveData& X, ScalarField fld, int trunc);

// Rank-1 twist character lambda^deg of the trivial base character on X.
// Local root at a degree-d place is lambda^d, i.e. B_x(t) = 1 - (lambda t)^d
// after the t^deg substitution convention.
struct TwistCharacter {
    Scalar lambda;
};

// Rankin-Selberg LHom for rank-1 twists, closed form: zeta_X((mu/lambda) t).
RationalFunction lhom_closed(const CurveData& X, ScalarField fld, const Scalar& lambda,
                             const Scalar& mu, int tvar);
// Truncated Euler product over places of degree <= N (counts from the curve
// unless supplied).
std::vector<Scalar> lhom_truncated(const CurveData& X, ScalarField fld, const Scalar& lambda,
                                   const Scalar& mu, int N, const std::vector<Int>* counts = nullptr);
// General local-data version: product over the given places of
// L(chi_x^* boxtimes chi'_x; t^deg) to order N.
std::vector<Scalar> lhom_from_local(const std::vector<std::pair<int, WittVector>>& chi,
                                    const std::vector<std::pair<int, WittVector>>& chi_prime,
                                    ScalarField fld, int N);

// Value of the Pic-character of a rank-1 character of A with local root
// rho^deg(x) on the class c in Pic(P^1) = Z; used for epsilon and theta.
Scalar pic_character_value(const Scalar& rho, int pic_class);

// Rankin-Selberg kernel data for rank-1 components, in the two named
// coordinates: c(z1,z2) = q^{1-g} zeta(z2/z1) / zeta(z2/(q z1)).  lambda and
// lambda~ need a theta characteristic and are built for P^1 (theta = -1).
struct RSKernelData {
    RationalFunction c;
    RationalFunction lambda;        // theta * LHom
    RationalFunction lambda_tilde;  // f(t) * lambda
};
RSKernelData rs_kernel(const CurveData& X, ScalarField fld, int z1var, int z2var);

// LHom functional equation check for rank-1 twists on P^1 (symbolic lambda,
// mu as polyrat variables).  Returns pass flag plus the epsilon used.
struct FeqResult {
    bool pass;
    RationalFunction epsilon;
    std::string detail;
};
FeqResult feq_check(const CurveData& X, ScalarField fld, int tvar, int lvar, int mvar,
                    const RationalFunction* epsilon_override = nullptr);

}  // namespace hc
