#include "hallcurve/witt.hpp"

#include <algorithm>
#include <sstream>

namespace hc {

// --- WittVector ---------------------------------------------------------

WittVector WittVector::zero(ScalarField fld, int trunc) {
    WittVector w;
    w.trunc = trunc;
    w.b.assign(trunc, fld.zero());
    w.rank = 0;
    return w;
}

WittVector WittVector::one(ScalarField fld, int trunc) { return line(fld.one(), trunc); }

WittVector WittVector::line(const Scalar& lambda, int trunc) {
    ScalarField fld{lambda.mode(), lambda.q()};
    WittVector w = zero(fld, trunc);
    if (trunc >= 1) {
        w.b[0] = -lambda;
        w.rank = lambda.is_zero() ? 0 : 1;
    }
    return w;
}

WittVector WittVector::from_poly(const std::vector<Scalar>& coeffs, int trunc,
                                 std::optional<int> rank) {
    if (coeffs.empty()) throw parse_error("WittVector needs at least one coefficient");
    ScalarField fld{coeffs[0].mode(), coeffs[0].q()};
    WittVector w = zero(fld, trunc);
    for (int i = 0; i < trunc && i < static_cast<int>(coeffs.size()); ++i) w.b[i] = coeffs[i];
    w.rank = rank;
    if (rank) {
        for (int i = *rank; i < trunc; ++i)
            if (!w.b[i].is_zero()) throw parse_error("rank-r Witt vector with b_i != 0 above r");
        if (*rank >= 1 && *rank <= trunc && w.b[*rank - 1].is_zero())
            throw parse_error("rank-r Witt vector with b_r == 0");
    }
    return w;
}

ScalarField WittVector::field() const {
    if (b.empty()) return ScalarField::symbolic();
    return ScalarField{b[0].mode(), b[0].q()};
}

Scalar WittVector::coeff(int i) const {
    if (i == 0) return field().one();
    if (i < 1 || i > trunc) throw guard_error("Witt coefficient beyond truncation order");
    return b[i - 1];
}

bool WittVector::operator==(const WittVector& o) const { return trunc == o.trunc && b == o.b; }

WittVector boxplus(const WittVector& u, const WittVector& v) {
    if (u.trunc != v.trunc) throw parse_error("boxplus: truncation mismatch");
    ScalarField fld = u.field();
    WittVector r = WittVector::zero(fld, u.trunc);
    for (int n = 1; n <= u.trunc; ++n) {
        Scalar s = fld.zero();
        for (int i = 0; i <= n; ++i) s += u.coeff(i) * v.coeff(n - i);
        r.b[n - 1] = s;
    }
    if (u.rank && v.rank) r.rank = *u.rank + *v.rank <= u.trunc ? std::optional<int>(*u.rank + *v.rank)
                                                                : std::nullopt;
    return r;
}

namespace {

// power sums p_1..p_n of the inverse roots of 1 + sum b_k t^k, via Newton:
// p_n = -n b_n - sum_{i=1}^{n-1} b_i p_{n-i}   (with e_k = (-1)^k b_k)
std::vector<Scalar> power_sums(const WittVector& u) {
    ScalarField fld = u.field();
    std::vector<Scalar> p(u.trunc + 1, fld.zero());
    for (int n = 1; n <= u.trunc; ++n) {
        Scalar s = fld.integer(-n) * u.coeff(n);
        for (int i = 1; i < n; ++i) s -= u.coeff(i) * p[n - i];
        p[n] = s;
    }
    return p;
}

WittVector from_power_sums(const std::vector<Scalar>& p, ScalarField fld, int trunc) {
    WittVector r = WittVector::zero(fld, trunc);
    for (int n = 1; n <= trunc; ++n) {
        Scalar s = p[n];
        for (int i = 1; i < n; ++i) s += r.coeff(i) * p[n - i];
        r.b[n - 1] = s / fld.integer(-n);
    }
    return r;
}

}  // namespace

WittVector boxtimes(const WittVector& u, const WittVector& v) {
    if (u.trunc != v.trunc) throw parse_error("boxtimes: truncation mismatch");
    ScalarField fld = u.field();
    std::vector<Scalar> pu = power_sums(u), pv = power_sums(v), pw(u.trunc + 1, fld.zero());
    for (int n = 1; n <= u.trunc; ++n) pw[n] = pu[n] * pv[n];
    WittVector r = from_power_sums(pw, fld, u.trunc);
    if (u.rank && v.rank) {
        int rr = *u.rank * *v.rank;
        if (rr <= u.trunc) r.rank = rr;
    }
    return r;
}

WittVector star(const WittVector& u) {
    if (!u.rank || *u.rank < 1) throw parse_error("star needs an exact positive rank");
    int r = *u.rank;
    if (u.coeff(r).is_zero()) throw parse_error("star: top coefficient vanishes");
    Scalar top_inv = u.coeff(r).inverse();
    WittVector w = WittVector::zero(u.field(), u.trunc);
    for (int i = 1; i <= r; ++i) w.b[i - 1] = u.coeff(r - i) * top_inv;
    w.rank = r;
    return w;
}

std::vector<Scalar> series_mul(const std::vector<Scalar>& a, const std::vector<Scalar>& b, int n) {
    ScalarField fld{a.at(0).mode(), a.at(0).q()};
    std::vector<Scalar> r(n + 1, fld.zero());
    for (int i = 0; i < static_cast<int>(a.size()) && i <= n; ++i)
        for (int j = 0; j < static_cast<int>(b.size()) && i + j <= n; ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<Scalar> series_inv(const std::vector<Scalar>& a, int n) {
    ScalarField fld{a.at(0).mode(), a.at(0).q()};
    if (a[0].is_zero()) throw parse_error("series_inv: zero constant term");
    std::vector<Scalar> r(n + 1, fld.zero());
    Scalar c0 = a[0].inverse();
    r[0] = c0;
    for (int k = 1; k <= n; ++k) {
        Scalar s = fld.zero();
        for (int i = 1; i <= k && i < static_cast<int>(a.size()); ++i) s += a[i] * r[k - i];
        r[k] = -(s * c0);
    }
    return r;
}

std::vector<Scalar> series_scale_var(const std::vector<Scalar>& a, const Scalar& lambda) {
    std::vector<Scalar> r = a;
    Scalar p = ScalarField{lambda.mode(), lambda.q()}.one();
    for (size_t i = 1; i < r.size(); ++i) {
        p *= lambda;
        r[i] *= p;
    }
    return r;
}

std::vector<Scalar> euler_factor(const WittVector& u, int order) {
    std::vector<Scalar> B(u.trunc + 1, u.field().zero());
    B[0] = u.field().one();
    for (int i = 1; i <= u.trunc; ++i) B[i] = u.coeff(i);
    if (order > u.trunc && !u.rank)
        throw guard_error("euler_factor: order beyond truncation of a non-polynomial vector");
    if (order > u.trunc) B.resize(order + 1, u.field().zero());
    return series_inv(B, order);
}

// --- CurveData -----------------------------------------------------------

CurveData CurveData::p1(long q) { return CurveData{q, 0, {Int(1)}}; }

CurveData CurveData::elliptic(long q, const Int& a) {
    return CurveData{q, 1, {Int(1), -a, Int(q)}};
}

bool CurveData::weil_symmetric() const {
    if (static_cast<int>(P.size()) > 2 * genus + 1) return false;
    for (int i = 0; i <= 2 * genus; ++i) {
        Int pi = i < static_cast<int>(P.size()) ? P[i] : Int(0);
        Int pj = 2 * genus - i < static_cast<int>(P.size()) ? P[2 * genus - i] : Int(0);
        // p_{2g-i} = q^{g-i} p_i
        Int lhs = pj;
        Int rhs = pi;
        int e = genus - i;
        for (int k = 0; k < std::abs(e); ++k) (e > 0 ? rhs : lhs) *= q;
        if (lhs != rhs) return false;
    }
    return true;
}

std::vector<Int> CurveData::point_counts(int D) const {
    // N_n = q^n + 1 - p_n with p_n the power sums of inverse roots of P
    std::vector<Int> e(P.size(), 0);  // signed elementary: P = sum P[k] t^k
    std::vector<Int> p(D + 1, 0);
    for (int n = 1; n <= D; ++n) {
        Int s = (n < static_cast<int>(P.size())) ? Int(-n * P[n]) : Int(0);
        for (int i = 1; i < n && i < static_cast<int>(P.size()); ++i) s -= P[i] * p[n - i];
        p[n] = s;
    }
    std::vector<Int> N(D + 1, 0);
    Int qn = 1;
    for (int n = 1; n <= D; ++n) {
        qn *= q;
        N[n] = qn + 1 - p[n];
    }
    return N;
}

std::vector<Int> CurveData::place_counts(int D) const {
    std::vector<Int> N = point_counts(D);
    std::vector<Int> a(D + 1, 0);
    for (int d = 1; d <= D; ++d) {
        Int s = N[d];
        for (int e = 1; e < d; ++e)
            if (d % e == 0) s -= e * a[e];
        if (s % d != 0) throw internal_error("place counts are not integral");
        a[d] = s / d;
        if (a[d] < 0) throw internal_error("negative place count: bad zeta numerator");
    }
    return a;
}

RationalFunction CurveData::zeta_rational(ScalarField fld, int tvar) const {
    LaurentPoly num(fld), den(fld);
    Monomial t = Monomial::var(tvar);
    for (size_t k = 0; k < P.size(); ++k) num.add_term(t.pow(static_cast<int>(k)), fld.integer(P[k]));
    LaurentPoly f1(fld), f2(fld);
    f1.add_term(Monomial::one(), fld.one());
    f1.add_term(t, -fld.one());
    f2.add_term(Monomial::one(), fld.one());
    f2.add_term(t, -fld.q_scalar());
    den = f1 * f2;
    return RationalFunction(num, den);
}

std::vector<Scalar> CurveData::zeta_series(ScalarField fld, int N) const {
    std::vector<Scalar> p(N + 1, fld.zero());
    for (size_t k = 0; k < P.size() && static_cast<int>(k) <= N; ++k) p[k] = fld.integer(P[k]);
    std::vector<Scalar> g1(N + 1, fld.zero()), g2(N + 1, fld.zero());
    Scalar qs = fld.q_scalar(), acc = fld.one();
    for (int i = 0; i <= N; ++i) {
        g1[i] = fld.one();
        g2[i] = acc;
        acc *= qs;
    }
    return series_mul(series_mul(p, g1, N), g2, N);
}

std::vector<Scalar> CurveData::zeta_truncated_product(ScalarField fld, int D, int N,
                                                      const std::vector<Int>* counts) const {
    std::vector<Int> a = counts ? *counts : place_counts(D);
    std::vector<Scalar> r(N + 1, fld.zero());
    r[0] = fld.one();
    for (int d = 1; d <= D; ++d) {
        if (d >= static_cast<int>(a.size()) || a[d] == 0) continue;
        // (1 - t^d)^(-a_d) = sum_k binom(a_d + k - 1, k) t^{dk}
        std::vector<Scalar> f(N + 1, fld.zero());
        f[0] = fld.one();
        Int binom = 1;
        for (int k = 1; d * k <= N; ++k) {
            binom = binom * (a[d] + k - 1) / k;
            f[d * k] = fld.integer(binom);
        }
        r = series_mul(r, f, N);
    }
    return r;
}

WittVector kappa_local(ScalarField fld, long qx, int trunc) {
    std::vector<Scalar> num(trunc + 1, fld.zero()), den(trunc + 1, fld.zero());
    num[0] = fld.one();
    den[0] = fld.one();
    if (trunc >= 1) {
        num[1] = fld.one();
        den[1] = fld.integer(qx);
    }
    std::vector<Scalar> s = series_mul(num, series_inv(den, trunc), trunc);
    WittVector w = WittVector::zero(fld, trunc);
    for (int i = 1; i <= trunc; ++i) w.b[i - 1] = s[i];
    return w;
}

WittVector kappa_global(const CurveData& X, ScalarField fld, int trunc) {
    std::vector<Scalar> zm = series_scale_var(X.zeta_series(fld, trunc), -fld.one());
    std::vector<Scalar> zqm = series_scale_var(X.zeta_series(fld, trunc), -fld.q_scalar());
    std::vector<Scalar> s = series_mul(zm, series_inv(zqm, trunc), trunc);
    WittVector w = WittVector::zero(fld, trunc);
    for (int i = 1; i <= trunc; ++i) w.b[i - 1] = s[i];
    return w;
}

// --- LHom ---------------------------------------------------------------

RationalFunction lhom_closed(const CurveData& X, ScalarField fld, const Scalar& lambda,
                             const Scalar& mu, int tvar) {
    RationalFunction z = X.zeta_rational(fld, tvar);
    std::map<int, LaurentPoly::Subst> s;
    s[tvar] = {mu / lambda, tvar, 1};
    return z.substitute(s);
}

std::vector<Scalar> lhom_truncated(const CurveData& X, ScalarField fld, const Scalar& lambda,
                                   const Scalar& mu, int N, const std::vector<Int>* counts) {
    // local factor at a degree-d place: 1/(1 - ((mu/lambda) t)^d)
    std::vector<Int> a = counts ? *counts : X.place_counts(N);
    Scalar rho = mu / lambda;
    std::vector<Scalar> r(N + 1, fld.zero());
    r[0] = fld.one();
    for (int d = 1; d <= N; ++d) {
        if (d >= static_cast<int>(a.size()) || a[d] == 0) continue;
        std::vector<Scalar> f(N + 1, fld.zero());
        f[0] = fld.one();
        // (1 - (rho t)^d)^(-a_d)
        Int binom = 1;
        Scalar rd = rho.pow(d), rk = fld.one();
        for (int k = 1; d * k <= N; ++k) {
            binom = binom * (a[d] + k - 1) / k;
            rk *= rd;
            f[d * k] = fld.integer(binom) * rk;
        }
        r = series_mul(r, f, N);
    }
    return r;
}

std::vector<Scalar> lhom_from_local(const std::vector<std::pair<int, WittVector>>& chi,
                                    const std::vector<std::pair<int, WittVector>>& chi_prime,
                                    ScalarField fld, int N) {
    if (chi.size() != chi_prime.size()) throw parse_error("lhom_from_local: place lists differ");
    std::vector<Scalar> r(N + 1, fld.zero());
    r[0] = fld.one();
    for (size_t i = 0; i < chi.size(); ++i) {
        int d = chi[i].first;
        if (d != chi_prime[i].first) throw parse_error("lhom_from_local: degree mismatch");
        WittVector prod = boxtimes(star(chi[i].second), chi_prime[i].second);
        std::vector<Scalar> loc = euler_factor(prod, N);  // in the local variable
        // substitute t -> t^d
        std::vector<Scalar> f(N + 1, fld.zero());
        for (int k = 0; d * k <= N && k < static_cast<int>(loc.size()); ++k) f[d * k] = loc[k];
        r = series_mul(r, f, N);
    }
    return r;
}

Scalar pic_character_value(const Scalar& rho, int pic_class) {
    return (-rho).pow(-pic_class);
}

RSKernelData rs_kernel(const CurveData& X, ScalarField fld, int z1var, int z2var) {
    RSKernelData out{RationalFunction(fld), RationalFunction(fld), RationalFunction(fld)};
    // u = z2/z1; zeta evaluated at scale * u, assembled termwise
    Monomial u = Monomial::var(z2var) * Monomial::var(z1var, -1);
    auto zeta_at = [&](const Scalar& scale) {
        LaurentPoly num(fld), den(fld);
        for (size_t k = 0; k < X.P.size(); ++k)
            num.add_term(u.pow(static_cast<int>(k)), fld.integer(X.P[k]) * scale.pow(static_cast<long>(k)));
        LaurentPoly f1(fld), f2(fld);
        f1.add_term(Monomial::one(), fld.one());
        f1.add_term(u, -scale);
        f2.add_term(Monomial::one(), fld.one());
        f2.add_term(u, -(scale * fld.q_scalar()));
        return RationalFunction(num, f1 * f2);
    };
    Scalar one = fld.one();
    Scalar qinv = fld.q_scalar().inverse();
    RationalFunction zu = zeta_at(one), zuq = zeta_at(qinv);
    out.c = RationalFunction::constant(fld.v(2 * (1 - X.genus))) * zu / zuq;
    if (X.genus == 0) {
        // theta characteristic O(-1); theta_{chi,chi'} = pic value of the
        // rank-1 character with root z2/z1 at the class -1
        RationalFunction theta =
            -RationalFunction::from_poly(LaurentPoly::term(one, u));  // (-(z2/z1))^{+1}
        out.lambda = theta * zu;
        // f(t) = t^{-1} (1 - q t)(1 - t/q) evaluated at t = z2/z1
        LaurentPoly f1(fld), f2(fld);
        f1.add_term(Monomial::one(), one);
        f1.add_term(u, -fld.q_scalar());
        f2.add_term(Monomial::one(), one);
        f2.add_term(u, -qinv);
        RationalFunction f = RationalFunction::from_poly(f1 * f2) /
                             RationalFunction::from_poly(LaurentPoly::term(one, u));
        out.lambda_tilde = f * out.lambda;
    }
    return out;
}

FeqResult feq_check(const CurveData& X, ScalarField fld, int tvar, int lvar, int mvar,
                    const RationalFunction* epsilon_override) {
    // LHom(chi', chi; 1/(q t)) = eps (q^{1/2} t)^{2(1-g) r s} LHom(chi, chi'; t)
    if (X.genus != 0) throw guard_error("feq_check: implemented for P^1 only");
    Scalar one = fld.one();
    Monomial t = Monomial::var(tvar), l = Monomial::var(lvar), m = Monomial::var(mvar);
    // closed-form LHom(chi_l, chi_m; t) = zeta((m/l) t)
    int uvar = var_id("__fequ");
    RationalFunction z = X.zeta_rational(fld, uvar);
    auto lhom_in = [&](const Monomial& ratio_times_t) {
        LaurentPoly num(fld), den(fld);
        for (const auto& [mm, c] : z.num().terms())
            num.add_term(ratio_times_t.pow(mm.exp_of(uvar)), c);
        for (const auto& [mm, c] : z.den().terms())
            den.add_term(ratio_times_t.pow(mm.exp_of(uvar)), c);
        return RationalFunction(num, den);
    };
    auto lhom_scaled = [&](const Monomial& ratio_times_t, const Scalar& scale) {
        LaurentPoly num(fld), den(fld);
        for (const auto& [mm, c] : z.num().terms()) {
            int k = mm.exp_of(uvar);
            num.add_term(ratio_times_t.pow(k), c * scale.pow(k));
        }
        for (const auto& [mm, c] : z.den().terms()) {
            int k = mm.exp_of(uvar);
            den.add_term(ratio_times_t.pow(k), c * scale.pow(k));
        }
        return RationalFunction(num, den);
    };
    // RHS kernel: LHom(chi_l, chi_m; t) at argument (m/l) t
    Monomial arg_rhs = m * l.inverse() * t;
    RationalFunction rhs_lhom = lhom_in(arg_rhs);
    // LHS: LHom(chi_m, chi_l; 1/(qt)): argument (l/m) * (qt)^{-1}
    Monomial arg_lhs = l * m.inverse() * t.inverse();
    RationalFunction lhs = lhom_scaled(arg_lhs, fld.q_scalar().inverse());
    // epsilon = pic value of chi_l^* boxtimes chi_m (root m/l) at Omega^1 = -2
    RationalFunction eps =
        epsilon_override
            ? *epsilon_override
            : RationalFunction::from_poly(LaurentPoly::term(one, (m * l.inverse()).pow(2)));
    // (q^{1/2} t)^{2(1-g) r s} = q t^2 for P^1 rank (1,1)
    RationalFunction factor =
        RationalFunction::from_poly(LaurentPoly::term(fld.q_scalar(), t.pow(2)));
    RationalFunction rhs = eps * factor * rhs_lhom;
    FeqResult res;
    res.epsilon = eps;
    res.pass = lhs.eq(rhs);
    if (!res.pass) res.detail = "LHom functional equation mismatch";
    return res;
}

}  // namespace hc
