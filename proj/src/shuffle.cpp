#include "hallcurve/shuffle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hallcurve/util.hpp"

namespace hc {

SigmaScheme SigmaScheme::single(int weight) { return SigmaScheme{{{0, weight, "z"}}}; }

int slot_var(int i) { return var_id("t" + std::to_string(i + 1)); }

int Kernel::z1() { return var_id("z1"); }
int Kernel::z2() { return var_id("z2"); }

const RationalFunction& Kernel::entry(int i, int j) const {
    auto it = c_.find({i, j});
    if (it == c_.end()) throw guard_error("kernel entry missing for a component pair");
    return it->second;
}

RationalFunction Kernel::at(int i, int j, int var_a, int var_b) const {
    std::map<int, LaurentPoly::Subst> s;
    s[z1()] = {fld_.one(), var_a, 1};
    s[z2()] = {fld_.one(), var_b, 1};
    return entry(i, j).substitute(s);
}

bool Kernel::verify_antisymmetric() const {
    for (const auto& [key, c] : c_) {
        auto sw = c_.find({key.second, key.first});
        if (sw == c_.end()) return false;
        std::map<int, LaurentPoly::Subst> swap;
        swap[z1()] = {fld_.one(), z2(), 1};
        swap[z2()] = {fld_.one(), z1(), 1};
        if (!(c * sw->second.substitute(swap)).eq(RationalFunction::constant(fld_.one())))
            return false;
    }
    return true;
}

// --- elements ------------------------------------------------------------

ShuffleElement ShuffleElement::generator(int comp, int exponent, const ScalarField& fld) {
    ShuffleElement e;
    e.pieces[{comp}] =
        RationalFunction::from_poly(LaurentPoly::term(fld.one(), Monomial::var(slot_var(0), exponent)));
    return e;
}

ShuffleElement& ShuffleElement::add(const std::vector<int>& comps, const RationalFunction& f) {
    auto it = pieces.find(comps);
    if (it == pieces.end()) {
        if (!f.is_zero()) pieces.emplace(comps, f);
    } else {
        it->second += f;
        if (it->second.is_zero()) pieces.erase(it);
    }
    return *this;
}

bool ShuffleElement::eq(const ShuffleElement& o) const {
    for (const auto& [k, f] : pieces) {
        auto it = o.pieces.find(k);
        if (it == o.pieces.end()) {
            if (!f.is_zero()) return false;
        } else if (!f.eq(it->second)) {
            return false;
        }
    }
    for (const auto& [k, f] : o.pieces)
        if (!pieces.count(k) && !f.is_zero()) return false;
    return true;
}

ShuffleElement ShuffleElement::operator+(const ShuffleElement& o) const {
    ShuffleElement r = *this;
    for (const auto& [k, f] : o.pieces) r.add(k, f);
    return r;
}

ShuffleElement ShuffleElement::scaled(const RationalFunction& c) const {
    ShuffleElement r;
    for (const auto& [k, f] : pieces) r.add(k, f * c);
    return r;
}

// --- shuffle product -------------------------------------------------------

namespace {

// rename slot variables: slot i evaluated at t_{target[i]}
RationalFunction reslot(const RationalFunction& f, const std::vector<int>& target,
                        const ScalarField& fld) {
    // two-step rename through temporaries to avoid collisions
    std::map<int, LaurentPoly::Subst> s1, s2;
    for (size_t i = 0; i < target.size(); ++i) {
        int tmp = var_id("__slot" + std::to_string(i));
        s1[slot_var(static_cast<int>(i))] = {fld.one(), tmp, 1};
        s2[tmp] = {fld.one(), slot_var(target[i]), 1};
    }
    return f.substitute(s1).substitute(s2);
}

std::vector<std::vector<int>> shuffles(int r, int s) {
    // sigma in S_{r+s} increasing on 1..r and r+1..r+s; encode as the image
    // list sigma(1..n)
    std::vector<std::vector<int>> out;
    int n = r + s;
    std::vector<int> positions(n);
    std::iota(positions.begin(), positions.end(), 0);
    // choose positions of the first block
    std::vector<int> pick(r);
    std::function<void(int, int)> rec = [&](int idx, int start) {
        if (idx == r) {
            std::vector<int> sigma(n);
            std::vector<char> used(n, 0);
            for (int i = 0; i < r; ++i) {
                sigma[i] = pick[i];
                used[pick[i]] = 1;
            }
            int p = 0;
            for (int i = 0; i < s; ++i) {
                while (used[p]) ++p;
                sigma[r + i] = p;
                used[p] = 1;
            }
            out.push_back(std::move(sigma));
            return;
        }
        for (int p = start; p < n; ++p) {
            pick[idx] = p;
            rec(idx + 1, p + 1);
        }
    };
    rec(0, 0);
    return out;
}

}  // namespace

ShuffleElement shuffle_mul(const ShuffleElement& phi, const ShuffleElement& psi, const Kernel& c) {
    // The product is computed as the restriction of mu(phi,psi) to the
    // sorted chart of each target multiset: position p carries component
    // W[p], and a shuffle contributes only when the slot components match
    // the positions they land on.
    ShuffleElement out;
    const ScalarField& fld = c.field();
    for (const auto& [kphi, fphi] : phi.pieces)
        for (const auto& [kpsi, fpsi] : psi.pieces) {
            int r = static_cast<int>(kphi.size()), s = static_cast<int>(kpsi.size());
            int n = r + s;
            std::vector<int> W = kphi;
            W.insert(W.end(), kpsi.begin(), kpsi.end());
            std::sort(W.begin(), W.end());
            for (const auto& sigma : shuffles(r, s)) {
                bool compatible = true;
                for (int k = 0; k < r && compatible; ++k)
                    compatible = W[sigma[k]] == kphi[k];
                for (int k = 0; k < s && compatible; ++k)
                    compatible = W[sigma[r + k]] == kpsi[k];
                if (!compatible) continue;
                // kernel factor over inverted source pairs k < l,
                // sigma(k) > sigma(l): c(t_{sigma(l)}, t_{sigma(k)})
                RationalFunction factor = RationalFunction::constant(fld.one());
                for (int k = 0; k < n; ++k)
                    for (int l = k + 1; l < n; ++l)
                        if (sigma[k] > sigma[l])
                            factor *= c.at(W[sigma[l]], W[sigma[k]], slot_var(sigma[l]),
                                           slot_var(sigma[k]));
                std::vector<int> tphi(sigma.begin(), sigma.begin() + r);
                std::vector<int> tpsi(sigma.begin() + r, sigma.end());
                out.add(W, factor * reslot(fphi, tphi, fld) * reslot(fpsi, tpsi, fld));
            }
        }
    return out;
}

ShuffleElement shuffle_chain(const std::vector<std::pair<int, int>>& gens, const Kernel& c,
                             const ScalarField& fld) {
    ShuffleElement acc;
    acc.pieces[{}] = RationalFunction::constant(fld.one());
    for (const auto& [comp, exp] : gens)
        acc = shuffle_mul(acc, ShuffleElement::generator(comp, exp, fld), c);
    return acc;
}

// --- symmetric shuffle -------------------------------------------------------

namespace {

long factorial(int n) {
    long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

ShuffleElement sym_shuffle_mul(const ShuffleElement& a, const ShuffleElement& b,
                               const Kernel& lambda) {
    const ScalarField& fld = lambda.field();
    ShuffleElement out;
    for (const auto& [ka, fa] : a.pieces)
        for (const auto& [kb, fb] : b.pieces) {
            int m = static_cast<int>(ka.size()), n2 = static_cast<int>(kb.size());
            int n = m + n2;
            // b's slots move to positions m..n-1
            std::vector<int> tb(n2);
            std::iota(tb.begin(), tb.end(), m);
            RationalFunction prod = fa * reslot(fb, tb, fld);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n2; ++j)
                    prod *= lambda.at(ka[i], kb[j], slot_var(i), slot_var(m + j));
            // symmetrize over S_n and divide by m! n!
            std::vector<int> comps = ka;
            comps.insert(comps.end(), kb.begin(), kb.end());
            std::vector<int> sorted = comps;
            std::sort(sorted.begin(), sorted.end());
            bool uniform = sorted == comps;
            if (!uniform) throw guard_error("sym_shuffle_mul: mixed component order unsupported");
            std::vector<int> vars(n);
            for (int i = 0; i < n; ++i) vars[i] = slot_var(i);
            RationalFunction symm = prod.symmetrize(vars);
            Scalar denom = fld.integer(factorial(m)) * fld.integer(factorial(n2));
            out.add(sorted, symm / RationalFunction::constant(denom));
        }
    return out;
}

ShuffleElement sym_shuffle_chain(const std::vector<std::pair<int, int>>& gens,
                                 const Kernel& lambda, const ScalarField& fld) {
    ShuffleElement acc;
    acc.pieces[{}] = RationalFunction::constant(fld.one());
    for (const auto& [comp, exp] : gens)
        acc = sym_shuffle_mul(acc, ShuffleElement::generator(comp, exp, fld), lambda);
    return acc;
}

// --- relations ----------------------------------------------------------------

std::vector<std::vector<Scalar>> relation_space(const std::vector<ShuffleElement>& elements,
                                                const Kernel* kernel) {
    if (elements.empty()) return {};
    // all elements must live on the same multiset (single piece)
    std::vector<RationalFunction> rows;
    const std::vector<int>* key = nullptr;
    for (const auto& e : elements) {
        if (e.pieces.size() != 1) throw guard_error("relation_space: single-piece elements only");
        if (!key)
            key = &e.pieces.begin()->first;
        else if (*key != e.pieces.begin()->first)
            throw guard_error("relation_space: mixed multisets");
        rows.push_back(e.pieces.begin()->second);
    }
    if (kernel) {
        // every shuffle term's denominator divides the product of the
        // kernel-entry denominators over the slot pairs
        const ScalarField& fld = rows[0].field();
        RationalFunction D = RationalFunction::constant(fld.one());
        const std::vector<int>& W = *key;
        for (size_t i = 0; i < W.size(); ++i)
            for (size_t j = i + 1; j < W.size(); ++j) {
                RationalFunction cij =
                    kernel->at(W[i], W[j], slot_var(static_cast<int>(i)),
                               slot_var(static_cast<int>(j)));
                D *= RationalFunction::from_poly(cij.den());
            }
        return linear_relations_ratfun(rows, &D);
    }
    return linear_relations_ratfun(rows);
}

// --- quadratic check ------------------------------------------------------------

QuadraticCheckResult quadratic_check(int comp_i, int comp_j, const Kernel& c, int window) {
    return quadratic_check_ratio(comp_i, comp_j, c, c.entry(comp_i, comp_j), window);
}

QuadraticCheckResult quadratic_check_ratio(int comp_i, int comp_j, const Kernel& c,
                                           const RationalFunction& ratio, int window) {
    const ScalarField& fld = c.field();
    const RationalFunction& cij = ratio;
    // P/Q in the series variables: z1 ~ t (first series), z2 ~ s (second)
    const LaurentPoly &P = cij.num(), &Q = cij.den();
    auto coeff_of = [&](const LaurentPoly& p) {
        std::vector<std::pair<std::pair<int, int>, Scalar>> out;
        for (const auto& [m, cc] : p.terms())
            out.push_back({{m.exp_of(Kernel::z1()), m.exp_of(Kernel::z2())}, cc});
        return out;
    };
    auto Pc = coeff_of(P), Qc = coeff_of(Q);
    for (int a = -window; a <= window; ++a)
        for (int b = -window; b <= window; ++b) {
            // sum_{(c,d)} Q_{cd} mu(x^{a-c}, x^{b-d}) == sum P_{cd} mu(x^{b-d}, x^{a-c})
            ShuffleElement lhs, rhs;
            for (const auto& [cd, coeff] : Qc) {
                ShuffleElement t =
                    shuffle_mul(ShuffleElement::generator(comp_i, a - cd.first, fld),
                                ShuffleElement::generator(comp_j, b - cd.second, fld), c)
                        .scaled(RationalFunction::constant(coeff));
                lhs = lhs + t;
            }
            for (const auto& [cd, coeff] : Pc) {
                ShuffleElement t =
                    shuffle_mul(ShuffleElement::generator(comp_j, b - cd.second, fld),
                                ShuffleElement::generator(comp_i, a - cd.first, fld), c)
                        .scaled(RationalFunction::constant(coeff));
                rhs = rhs + t;
            }
            if (!lhs.eq(rhs)) {
                std::ostringstream os;
                os << "mismatch at coefficient t^" << a << " s^" << b;
                return {false, os.str()};
            }
        }
    return {true, ""};
}

// --- regularity ------------------------------------------------------------------

bool is_laurent_polynomial(const ShuffleElement& e) {
    for (const auto& [k, f] : e.pieces)
        if (!f.as_laurent_polynomial()) return false;
    return true;
}

bool lambda_pole_ok(const RationalFunction& lam) {
    // regular off the diagonal with at most a first-order pole on it:
    // (z1 - z2) * lam is a Laurent polynomial
    const ScalarField& fld = lam.field();
    LaurentPoly diag(fld);
    diag.add_term(Monomial::var(Kernel::z1()), fld.one());
    diag.add_term(Monomial::var(Kernel::z2()), -fld.one());
    return (RationalFunction::from_poly(diag) * lam).as_laurent_polynomial();
}

bool ideal_membership(const ShuffleElement& elem, const RationalFunction& multiplier,
                      const std::vector<ShuffleElement>& span) {
    if (elem.pieces.size() != 1) throw guard_error("ideal_membership: single piece only");
    std::vector<RationalFunction> rows;
    rows.push_back(elem.pieces.begin()->second * multiplier);
    for (const auto& e : span) {
        if (e.pieces.size() != 1 || e.pieces.begin()->first != elem.pieces.begin()->first)
            throw guard_error("ideal_membership: mismatched pieces");
        rows.push_back(e.pieces.begin()->second);
    }
    auto kernel = linear_relations_ratfun(rows);
    for (const auto& rel : kernel)
        if (!rel[0].is_zero()) return true;
    return false;
}

// --- curve kernels ----------------------------------------------------------------

Kernel curve_kernel_rank1(const CurveData& X, ScalarField fld) {
    Kernel k(fld);
    RSKernelData rs = rs_kernel(X, fld, Kernel::z1(), Kernel::z2());
    k.set(0, 0, rs.c);
    return k;
}

Kernel curve_kernel_lambda_p1(const CurveData& X, ScalarField fld, bool tilde) {
    if (X.genus != 0) throw guard_error("lambda kernels need a theta characteristic (P^1 here)");
    Kernel k(fld);
    RSKernelData rs = rs_kernel(X, fld, Kernel::z1(), Kernel::z2());
    k.set(0, 0, tilde ? rs.lambda_tilde : rs.lambda);
    return k;
}

Kernel curve_kernel_elliptic(const std::vector<RationalFunction>& P_coeffs, long q, int r,
                             ScalarField fld) {
    // B(W) = prod_{eps^r = 1} P(eps w) as a polynomial in W = w^r, via
    // power sums: p_n(B) = r p_n(P) when r | n, else 0
    if (P_coeffs.empty() || !P_coeffs[0].eq(RationalFunction::constant(fld.one())))
        throw parse_error("zeta numerator must have constant term 1");
    int degP = static_cast<int>(P_coeffs.size()) - 1;
    int N = degP * r;
    RationalFunction zero(fld), one = RationalFunction::constant(fld.one());
    auto coeff = [&](int i) { return i <= degP ? P_coeffs[i] : zero; };
    std::vector<RationalFunction> pP(N + 1, zero);
    for (int n = 1; n <= N; ++n) {
        RationalFunction s = coeff(n) * RationalFunction::constant(fld.integer(-n));
        for (int i = 1; i < n; ++i) s = s - coeff(i) * pP[n - i];
        pP[n] = s;
    }
    auto reconstruct = [&](const std::vector<RationalFunction>& p) {
        std::vector<RationalFunction> b(N + 1, zero);
        b[0] = one;
        for (int n = 1; n <= N; ++n) {
            RationalFunction s = p[n];
            for (int i = 1; i < n; ++i) s = s + b[i] * p[n - i];
            b[n] = s / RationalFunction::constant(fld.integer(-n));
        }
        return b;
    };
    std::vector<RationalFunction> pB(N + 1, zero), pBq(N + 1, zero);
    Scalar qs = fld.q_scalar();
    for (int n = r; n <= N; n += r) {
        pB[n] = pP[n] * RationalFunction::constant(fld.integer(r));
        // P(eps w / q): power sums scale by q^{-n}
        pBq[n] = pB[n] * RationalFunction::constant(qs.pow(-n));
    }
    std::vector<RationalFunction> B = reconstruct(pB), Bq = reconstruct(pBq);
    // assemble in W = (z2/z1)^r
    Monomial W = (Monomial::var(Kernel::z2()) * Monomial::var(Kernel::z1(), -1)).pow(r);
    auto as_poly = [&](const std::vector<RationalFunction>& b) {
        RationalFunction acc(fld);
        for (int n = 0; n <= N; n += r) {
            if (b[n].is_zero()) continue;
            acc += b[n] * RationalFunction::from_poly(LaurentPoly::term(fld.one(), W.pow(n / r)));
        }
        return acc;
    };
    RationalFunction BW = as_poly(B), BqW = as_poly(Bq);
    Int qr = 1;
    for (int i = 0; i < r; ++i) qr *= q;
    LaurentPoly f1(fld), f2(fld);
    f1.add_term(Monomial::one(), fld.one());
    f1.add_term(W, -fld.integer(qr).inverse());  // 1 - W/q^r
    f2.add_term(Monomial::one(), fld.one());
    f2.add_term(W, -fld.integer(qr));  // 1 - q^r W
    // genus 1: q^{r^2 (1-g)} = 1
    RationalFunction c = BW * RationalFunction::from_poly(f1) /
                         (BqW * RationalFunction::from_poly(f2));
    Kernel k(fld);
    k.set(0, 0, c);
    return k;
}

}  // namespace hc
