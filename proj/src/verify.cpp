#include "hallcurve/verify.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include "hallcurve/util.hpp"

namespace hc {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
    Clock::time_point t0 = Clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
};

void run_check(SuiteReport& rep, const std::string& name,
               const std::function<std::string()>& body) {
    Timer t;
    CheckResult r;
    r.name = name;
    try {
        r.witness = body();
        r.pass = r.witness.empty();
    } catch (const std::exception& e) {
        r.pass = false;
        r.witness = std::string("exception: ") + e.what();
    }
    r.ms = t.ms();
    rep.checks.push_back(std::move(r));
}

std::string scalar_diff(const char* what, const Scalar& a, const Scalar& b) {
    std::ostringstream os;
    os << what << ": " << a.to_string() << " != " << b.to_string();
    return os.str();
}

// expansion coefficients of the rational ratio q^{1-g} zeta(u)/zeta(u/q) of
// P^1 in nonnegative powers of u
std::vector<Scalar> ratio_series(const CohCtx& ctx, int order) {
    ScalarField fld = ctx.fld;
    // A(u) = (q - u)/(1 - q u): A_0 = q, A_k = q^{k+1} - q^{k-1} for k >= 1
    std::vector<Scalar> num{fld.q_scalar(), -fld.one()};
    std::vector<Scalar> den{fld.one(), -fld.q_scalar()};
    std::vector<Scalar> r(order + 1, fld.zero());
    for (int k = 0; k <= order; ++k) {
        Scalar s = k < 2 ? num[k] : fld.zero();
        for (int i = 1; i <= k && i < 2; ++i) s -= den[i] * r[k - i];
        r[k] = s;
    }
    return r;
}

}  // namespace

bool SuiteReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string SuiteReport::to_text() const {
    std::ostringstream os;
    os << "suite " << suite << (all_pass() ? ": PASS" : ": FAIL") << "\n";
    if (!convention.empty()) os << "  convention: " << convention << "\n";
    for (const auto& c : checks) {
        os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
        if (!c.pass && !c.witness.empty()) os << " -- " << c.witness;
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.1f ms)", c.ms);
        os << buf << "\n";
    }
    return os.str();
}

std::string SuiteReport::to_json() const {
    std::ostringstream os;
    os << "{\"suite\":\"" << suite << "\",\"pass\":" << (all_pass() ? "true" : "false");
    if (!convention.empty()) os << ",\"convention\":\"" << convention << "\"";
    os << ",\"checks\":[";
    for (size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        os << (i ? "," : "") << "{\"name\":\"" << c.name
           << "\",\"pass\":" << (c.pass ? "true" : "false");
        if (!c.witness.empty()) {
            std::string w = c.witness;
            for (auto& ch : w)
                if (ch == '"') ch = '\'';
            os << ",\"witness\":\"" << w << "\"";
        }
        os << ",\"ms\":" << c.ms << "}";
    }
    os << "]}";
    return os.str();
}

// --- Witt bihomomorphism ---------------------------------------------------

SuiteReport verify_witt_bihom(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "witt-bihom";
    if (cfg.q > 3) throw guard_error("witt-bihom: q <= 3");
    int N = std::min(cfg.trunc, 8);
    long qx = cfg.q;
    ScalarField fld = ScalarField::numeric(cfg.q);

    // brute torsion side at one degree-1 place, evaluated at sign * t; the
    // sign convention of the Psi-pairing is calibrated below
    auto torsion_sum = [&](const Scalar& r1, const Scalar& r2, const Scalar& s1, const Scalar& s2,
                           int sign) {
        std::vector<Scalar> series(N + 1, fld.zero());
        series[0] = fld.one();
        for (int n = 1; n <= N; ++n) {
            Scalar acc = fld.zero();
            for (const Partition& lam : partitions_of(n)) {
                Scalar chi = r2.is_zero() ? char_value_rank1(r1, lam)
                                          : char_value_rank2(r1, r2, lam, qx);
                if (chi.is_zero()) continue;
                Scalar chip = s2.is_zero() ? char_value_rank1(s1, lam)
                                           : char_value_rank2(s1, s2, lam, qx);
                if (chip.is_zero()) continue;
                acc += fld.integer(aut_count(lam, qx)) * chi * chip;
            }
            series[n] = (sign < 0 && n % 2) ? -acc : acc;
        }
        return series;
    };
    auto witt_side = [&](const Scalar& r1, const Scalar& r2, const Scalar& s1, const Scalar& s2) {
        WittVector chi = r2.is_zero() ? WittVector::line(r1, N)
                                      : boxplus(WittVector::line(r1, N), WittVector::line(r2, N));
        WittVector chip = s2.is_zero() ? WittVector::line(s1, N)
                                       : boxplus(WittVector::line(s1, N), WittVector::line(s2, N));
        WittVector prod = boxtimes(boxtimes(chi, chip), kappa_local(fld, qx, N));
        std::vector<Scalar> series(N + 1, fld.zero());
        series[0] = fld.one();
        for (int i = 1; i <= N; ++i) series[i] = prod.coeff(i);
        return series;
    };
    // calibrate the sign of the Psi-pairing on the smallest case
    int sign = 1;
    {
        auto plus = torsion_sum(fld.one(), fld.zero(), fld.one(), fld.zero(), 1);
        WittVector kx = kappa_local(fld, qx, 1);
        if (!(plus[1] == kx.coeff(1))) sign = -1;
    }
    rep.convention = sign > 0 ? "Psi paired at +t" : "Psi paired at -t (kappa recovery calibrated)";
    auto compare = [&](const std::string& name, const Scalar& r1, const Scalar& r2,
                       const Scalar& s1, const Scalar& s2) {
        run_check(rep, name, [&]() -> std::string {
            auto lhs = torsion_sum(r1, r2, s1, s2, sign);
            auto rhs = witt_side(r1, r2, s1, s2);
            for (int n = 0; n <= N; ++n)
                if (!(lhs[n] == rhs[n]))
                    return "t^" + std::to_string(n) + ": " +
                           scalar_diff("coefficient", lhs[n], rhs[n]);
            return "";
        });
    };

    // kappa recovery: chi = chi' = 1 (series 1 - t) reproduces the
    // coefficients of (1 + t)/(1 + q_x t)
    run_check(rep, "kappa recovery U(1,1) = kappa_x", [&]() -> std::string {
        auto lhs = torsion_sum(fld.one(), fld.zero(), fld.one(), fld.zero(), sign);
        WittVector kx = kappa_local(fld, qx, N);
        if (!(kx.coeff(1) == -fld.one() && kx.coeff(2) == fld.q_scalar()))
            return "kappa_x series is not (1+t)/(1+q t)";
        for (int n = 1; n <= N; ++n)
            if (!(lhs[n] == kx.coeff(n)))
                return "t^" + std::to_string(n) + ": " +
                       scalar_diff("coefficient", lhs[n], kx.coeff(n));
        return "";
    });
    // chi' = 0 (trivial character of the unit)
    compare("rank-1 x rank-0 base case", fld.integer(2), fld.zero(), fld.zero(), fld.zero());
    // rank-1 x rank-1 grid
    std::vector<Scalar> roots{fld.one(), fld.integer(2), fld.integer(-1)};
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = 0; j < roots.size(); ++j)
            compare("rank-1 grid (" + std::to_string(i) + "," + std::to_string(j) + ")", roots[i],
                    fld.zero(), roots[j], fld.zero());
    // rank-2 x rank-1 and rank-2 x rank-2 samples
    compare("rank-2 x rank-1", fld.one(), fld.integer(2), fld.integer(-1), fld.zero());
    compare("rank-2 x rank-2", fld.one(), fld.integer(-1), fld.integer(2), fld.one());
    return rep;
}

// --- constant term ----------------------------------------------------------

SuiteReport verify_constant_term(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "constant-term";
    CohCtx ctx = CohCtx::numeric(cfg.q);
    int w = cfg.window;
    std::vector<Scalar> A = ratio_series(ctx, 2 * w + 2);

    run_check(rep, "Delta_{1,1} of length-2 Eisenstein products", [&]() -> std::string {
        for (int a = -w; a <= w; ++a)
            for (int b = -w; b <= w; ++b) {
                HallElt prod = hall_mul({{CoherentP1::line(a), ctx.fld.one()}},
                                        {{CoherentP1::line(b), ctx.fld.one()}}, ctx);
                Tensor2 lhs = comult_window(prod, 1, 1, -w - 2, w + 2, ctx);
                for (const auto& [key, got] : lhs) {
                    int c = key.first.degree(), d = key.second.degree();
                    Scalar expect = ctx.fld.zero();
                    if (c == a && d == b) expect += ctx.fld.one();
                    int k = b - c;
                    if (k >= 0 && c + d == a + b && k < static_cast<int>(A.size())) expect += A[k];
                    if (!(got == expect)) {
                        std::ostringstream os;
                        os << "(a,b,c,d)=(" << a << "," << b << "," << c << "," << d << "): "
                           << scalar_diff("coefficient", got, expect);
                        return os.str();
                    }
                }
                // and nothing expected is missed
                for (int c = -w - 2; c <= w + 2; ++c) {
                    int d = a + b - c;
                    if (d < -w - 2 || d > w + 2) continue;
                    Scalar expect = ctx.fld.zero();
                    if (c == a && d == b) expect += ctx.fld.one();
                    int k = b - c;
                    if (k >= 0 && k < static_cast<int>(A.size())) expect += A[k];
                    auto it = lhs.find({CoherentP1::line(c), CoherentP1::line(d)});
                    Scalar got = it == lhs.end() ? ctx.fld.zero() : it->second;
                    if (!(got == expect))
                        return "missing coefficient at (" + std::to_string(c) + "," +
                               std::to_string(d) + ")";
                }
            }
        return "";
    });

    run_check(rep, "Delta_{2,0} boundary component", [&]() -> std::string {
        HallElt prod = hall_mul({{CoherentP1::line(1), ctx.fld.one()}},
                                {{CoherentP1::line(0), ctx.fld.one()}}, ctx);
        Tensor2 d20 = comult_window(prod, 2, 0, -w, w, ctx);
        for (const auto& [key, c] : d20) {
            if (key.second.rank() != 0 || !key.second.torsion.empty())
                return "nonzero second leg in Delta_{2,0}";
            auto it = prod.find(key.first);
            if (it == prod.end() || !(it->second == c)) return "Delta_{2,0} is not f (x) 1";
        }
        return "";
    });

    // symbolic characters: the lambda-powers on both sides cancel against
    // the kernel twist, exactly, as rational functions in lam1, lam2
    run_check(rep, "symbolic rank-1 characters", [&]() -> std::string {
        ScalarField fld = ctx.fld;
        int l1 = var_id("lam1"), l2 = var_id("lam2");
        auto lam_pow = [&](int var, int e) {
            return RationalFunction::from_poly(LaurentPoly::term(fld.one(), Monomial::var(var, e)));
        };
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                HallElt prod = hall_mul({{CoherentP1::line(a), ctx.fld.one()}},
                                        {{CoherentP1::line(b), ctx.fld.one()}}, ctx);
                Tensor2 lhs = comult_window(prod, 1, 1, -3, 3, ctx);
                for (const auto& [key, got] : lhs) {
                    int c = key.first.degree(), d = key.second.degree();
                    RationalFunction L =
                        RationalFunction::constant(got) * lam_pow(l1, -a) * lam_pow(l2, -b);
                    RationalFunction R(fld);
                    if (c == a && d == b) R += lam_pow(l1, -a) * lam_pow(l2, -b);
                    int k = b - c;
                    if (k >= 0 && c + d == a + b && k < static_cast<int>(A.size()))
                        R += RationalFunction::constant(A[k]) * lam_pow(l1, k - d) *
                             lam_pow(l2, -k - c);
                    if (!L.eq(R)) return "symbolic mismatch at (" + std::to_string(a) + "," +
                                         std::to_string(b) + ")";
                }
            }
        return "";
    });
    return rep;
}

// --- Eisenstein functional equation ------------------------------------------

namespace {

// coefficientwise check of sum Q_{cd} 1_{O(a-c)} * 1_{O(b-d)} =
// sum P_{cd} 1_{O(b-d)} * 1_{O(a-c)} over the window, for the ratio P/Q
// given in the kernel coordinates
std::string feq_hall_check(const CohCtx& ctx, const RationalFunction& ratio, int window) {
    auto coeffs = [&](const LaurentPoly& p) {
        std::vector<std::pair<std::pair<int, int>, Scalar>> out;
        for (const auto& [m, c] : p.terms())
            out.push_back({{m.exp_of(Kernel::z1()), m.exp_of(Kernel::z2())}, c});
        return out;
    };
    auto P = coeffs(ratio.num()), Q = coeffs(ratio.den());
    for (int a = -window; a <= window; ++a)
        for (int b = -window; b <= window; ++b) {
            HallElt lhs, rhs;
            for (const auto& [cd, coeff] : Q) {
                HallElt t = hall_mul({{CoherentP1::line(a - cd.first), coeff}},
                                     {{CoherentP1::line(b - cd.second), ctx.fld.one()}}, ctx);
                for (const auto& [k, c] : t) hall_add(lhs, k, c);
            }
            for (const auto& [cd, coeff] : P) {
                HallElt t = hall_mul({{CoherentP1::line(b - cd.second), coeff}},
                                     {{CoherentP1::line(a - cd.first), ctx.fld.one()}}, ctx);
                for (const auto& [k, c] : t) hall_add(rhs, k, c);
            }
            if (!(lhs == rhs))
                return "coefficient t^" + std::to_string(a) + " s^" + std::to_string(b);
        }
    return "";
}

}  // namespace

SuiteReport verify_eisenstein_feq(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "eisenstein-feq";
    CohCtx ctx = CohCtx::numeric(cfg.q);
    CurveData X = CurveData::p1(cfg.q);

    // calibration: orientation of the kernel arguments, pinned on the
    // smallest window
    Kernel k = curve_kernel_rank1(X, ctx.fld);
    RationalFunction c_fwd = k.entry(0, 0);
    std::map<int, LaurentPoly::Subst> swap;
    swap[Kernel::z1()] = {ctx.fld.one(), Kernel::z2(), 1};
    swap[Kernel::z2()] = {ctx.fld.one(), Kernel::z1(), 1};
    RationalFunction c_rev = c_fwd.substitute(swap);
    bool fwd = feq_hall_check(ctx, c_fwd, 1).empty();
    bool rev = feq_hall_check(ctx, c_rev, 1).empty();
    rep.convention = fwd ? "E(t)E(s) = c(t,s) E(s)E(t) with c(z1,z2) = q zeta(z2/z1)/zeta(z2/(q z1))"
                         : (rev ? "reversed kernel orientation" : "no orientation passed");
    const RationalFunction& ratio = fwd ? c_fwd : c_rev;

    run_check(rep, "functional equation on the window", [&]() -> std::string {
        return feq_hall_check(ctx, ratio, cfg.window);
    });
    run_check(rep, "quadratic shuffle relations match", [&]() -> std::string {
        auto res = quadratic_check(0, 0, k, std::min(cfg.window, 3));
        return res.pass ? "" : res.witness;
    });
    if (cfg.negative_controls) {
        run_check(rep, "negative control: dropped q-power fails", [&]() -> std::string {
            RationalFunction bad = ratio / RationalFunction::constant(ctx.fld.q_scalar());
            std::string w = feq_hall_check(ctx, bad, 1);
            return w.empty() ? "perturbed ratio unexpectedly passed" : "";
        });
        run_check(rep, "negative control: perturbed shuffle ratio fails", [&]() -> std::string {
            RationalFunction bad =
                k.entry(0, 0) * RationalFunction::parse("z1/z2", ctx.fld);
            auto res = quadratic_check_ratio(0, 0, k, bad, 1);
            return res.pass ? "perturbed ratio unexpectedly passed" : "";
        });
    }
    return rep;
}

// --- main theorem at P^1 ------------------------------------------------------

namespace {

std::vector<std::vector<int>> degree_tuples(int n, int lo, int hi, int total) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int rest) {
        if (left == 0) {
            if (rest == 0) out.push_back(cur);
            return;
        }
        for (int d = lo; d <= hi; ++d) {
            if (rest - d < lo * (left - 1) || rest - d > hi * (left - 1)) continue;
            cur.push_back(d);
            rec(left - 1, rest - d);
            cur.pop_back();
        }
    };
    rec(n, total);
    return out;
}

HallElt hall_chain(const std::vector<int>& degs, const CohCtx& ctx) {
    HallElt acc{{CoherentP1{}, ctx.fld.one()}};
    for (int d : degs) acc = hall_mul(acc, {{CoherentP1::line(d), ctx.fld.one()}}, ctx);
    return acc;
}

std::vector<std::vector<Scalar>> hall_relations(const std::vector<HallElt>& elems,
                                                const ScalarField& fld) {
    // coefficient matrix over the union of basis classes
    std::map<CoherentP1, size_t> cols;
    for (const auto& e : elems)
        for (const auto& [k, c] : e) cols.emplace(k, 0);
    size_t nc = 0;
    for (auto& [k, i] : cols) i = nc++;
    std::vector<LaurentPoly> rows;
    int xv = var_id("__class");
    for (const auto& e : elems) {
        LaurentPoly row(fld);
        for (const auto& [k, c] : e)
            row.add_term(Monomial::var(xv, static_cast<int>(cols[k]) + 1), c);
        rows.push_back(std::move(row));
    }
    return linear_relations(rows);
}

bool same_row_space(std::vector<std::vector<Scalar>> a, std::vector<std::vector<Scalar>> b,
                    const ScalarField& fld) {
    if (a.empty() && b.empty()) return true;
    size_t cols = a.empty() ? b[0].size() : a[0].size();
    for (const auto& r : a)
        if (r.size() != cols) return false;
    for (const auto& r : b)
        if (r.size() != cols) return false;
    return rref(std::move(a), fld) == rref(std::move(b), fld);
}

}  // namespace

SuiteReport verify_main_p1(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "main-p1";
    CohCtx ctx = CohCtx::numeric(cfg.q);
    CurveData X = CurveData::p1(cfg.q);
    Kernel k = curve_kernel_rank1(X, ctx.fld);
    int lo = cfg.gen_lo, hi = cfg.gen_hi;

    // calibration: generator orientation 1_{O(a)} <-> z^a versus z^{-a},
    // fixed by omega-intertwining on the smallest block
    auto omega_match = [&](bool inverted, int n, int total, int wlo, int whi) -> std::string {
        for (const auto& tup : degree_tuples(n, lo, hi, total)) {
            HallElt h = hall_chain(tup, ctx);
            auto om = omega(h, n, wlo, whi, ctx);
            std::vector<std::pair<int, int>> gens;
            for (int d : tup) gens.emplace_back(0, inverted ? -d : d);
            ShuffleElement sh = shuffle_chain(gens, k, ctx.fld);
            std::vector<int> order;
            for (int i = 0; i < n; ++i) order.push_back(slot_var(i));
            DegreeWindow win;
            for (int i = 0; i < n; ++i) win.set(slot_var(i), wlo, whi);
            if (sh.pieces.empty()) return "empty shuffle product";
            auto exp = expand_region(sh.pieces.begin()->second, order, win);
            // compare coefficient maps
            std::map<std::vector<int>, Scalar> shmap;
            for (const auto& [m, c] : exp) {
                std::vector<int> key;
                for (int i = 0; i < n; ++i)
                    key.push_back(inverted ? -m.exp_of(slot_var(i)) : m.exp_of(slot_var(i)));
                shmap[key] = c;
            }
            for (const auto& [key, c] : om) {
                auto it = shmap.find(key);
                Scalar want = it == shmap.end() ? ctx.fld.zero() : it->second;
                if (!(c == want)) {
                    std::ostringstream os;
                    os << "tuple (";
                    for (size_t i = 0; i < tup.size(); ++i) os << (i ? "," : "") << tup[i];
                    os << ") coefficient (";
                    for (size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << key[i];
                    os << "): " << scalar_diff("omega vs shuffle", c, want);
                    return os.str();
                }
            }
            for (const auto& [key, c] : shmap) {
                bool inwin = true;
                for (int x : key) inwin = inwin && x >= wlo && x <= whi;
                if (!inwin) continue;
                if (!om.count(key) && !c.is_zero()) {
                    std::ostringstream os;
                    os << "shuffle coefficient missing on the Hall side at (";
                    for (size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << key[i];
                    os << ")";
                    return os.str();
                }
            }
        }
        return "";
    };
    bool plain = omega_match(false, 2, 1, -2, 2).empty();
    bool inverted = !plain && omega_match(true, 2, 1, -2, 2).empty();
    rep.convention = plain ? "omega(1_{O(a)}) = z^a"
                           : (inverted ? "omega(1_{O(a)}) = z^{-a}" : "no orientation passed");
    bool inv = inverted;

    // (ii) omega-intertwining across lengths 2 and 3
    run_check(rep, "omega intertwines Hall and shuffle products (n=2)", [&]() -> std::string {
        for (int total = 2 * lo; total <= 2 * hi; ++total) {
            std::string w = omega_match(inv, 2, total, lo - cfg.window, hi + cfg.window);
            if (!w.empty()) return w;
        }
        return "";
    });
    run_check(rep, "omega intertwines Hall and shuffle products (n=3)", [&]() -> std::string {
        if (cfg.max_length < 3) return "";
        for (int total = 3 * lo; total <= 3 * hi; ++total) {
            std::string w = omega_match(inv, 3, total, lo - 1, hi + 1);
            if (!w.empty()) return w;
        }
        return "";
    });

    // (i) relation-lattice equality per (length, total degree) block
    auto lattice_block = [&](int n, int total, const Kernel& kk) -> std::string {
        auto tuples = degree_tuples(n, lo, hi, total);
        if (tuples.size() < 2) return "";
        std::vector<HallElt> hs;
        std::vector<ShuffleElement> shs;
        for (const auto& tup : tuples) {
            hs.push_back(hall_chain(tup, ctx));
            std::vector<std::pair<int, int>> gens;
            for (int d : tup) gens.emplace_back(0, inv ? -d : d);
            shs.push_back(shuffle_chain(gens, kk, ctx.fld));
        }
        auto hrel = hall_relations(hs, ctx.fld);
        auto srel = relation_space(shs, &kk);
        if (hrel.size() != srel.size())
            return "block n=" + std::to_string(n) + " deg=" + std::to_string(total) +
                   ": relation counts differ (" + std::to_string(hrel.size()) + " vs " +
                   std::to_string(srel.size()) + ")";
        if (!same_row_space(hrel, srel, ctx.fld))
            return "block n=" + std::to_string(n) + " deg=" + std::to_string(total) +
                   ": relation lattices differ";
        return "";
    };
    run_check(rep, "relation lattices agree (n=2)", [&]() -> std::string {
        for (int total = 2 * lo; total <= 2 * hi; ++total) {
            std::string w = lattice_block(2, total, k);
            if (!w.empty()) return w;
        }
        return "";
    });
    run_check(rep, "relation lattices agree (n=3)", [&]() -> std::string {
        if (cfg.max_length < 3) return "";
        for (int total = 3 * lo; total <= 3 * hi; ++total) {
            std::string w = lattice_block(3, total, k);
            if (!w.empty()) return w;
        }
        return "";
    });

    // (iii) injectivity: the omega coefficient matrix has full rank on the span
    run_check(rep, "omega matrix has full rank on the windowed span", [&]() -> std::string {
        for (int n = 2; n <= std::min(cfg.max_length, 3); ++n)
            for (int total = n * lo; total <= n * hi; ++total) {
                auto tuples = degree_tuples(n, lo, hi, total);
                if (tuples.empty()) continue;
                std::vector<HallElt> hs;
                std::vector<LaurentPoly> omrows;
                int xv = var_id("__omcol");
                std::map<std::vector<int>, int> cols;
                std::vector<std::map<std::vector<int>, Scalar>> oms;
                int wlo = n == 2 ? lo - cfg.window : lo - 1;
                int whi = n == 2 ? hi + cfg.window : hi + 1;
                for (const auto& tup : tuples) {
                    hs.push_back(hall_chain(tup, ctx));
                    oms.push_back(omega(hs.back(), n, wlo, whi, ctx));
                    for (const auto& [key, c] : oms.back()) cols.emplace(key, 0);
                }
                int nc = 0;
                for (auto& [key, i] : cols) i = ++nc;
                for (const auto& om : oms) {
                    LaurentPoly row(ctx.fld);
                    for (const auto& [key, c] : om) row.add_term(Monomial::var(xv, cols[key]), c);
                    omrows.push_back(std::move(row));
                }
                size_t hall_rank = tuples.size() - hall_relations(hs, ctx.fld).size();
                size_t om_rank = tuples.size() - linear_relations(omrows).size();
                if (hall_rank != om_rank)
                    return "rank drop in block n=" + std::to_string(n) +
                           " deg=" + std::to_string(total);
            }
        return "";
    });

    if (cfg.negative_controls) {
        run_check(rep, "negative control: wrong q-power breaks the lattice", [&]() -> std::string {
            Kernel bad(ctx.fld);
            bad.set(0, 0, k.entry(0, 0) * RationalFunction::constant(ctx.fld.q_scalar()));
            for (int total = 2 * lo; total <= 2 * hi; ++total) {
                std::string w = lattice_block(2, total, bad);
                if (!w.empty()) return "";  // difference detected, control works
            }
            return "perturbed kernel unexpectedly matched all blocks";
        });
    }
    return rep;
}

// --- Green / cross-product -----------------------------------------------------

SuiteReport verify_green_cross(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "green-cross";
    if (cfg.q > 3) throw guard_error("green-cross: q <= 3");
    CohCtx ctx = CohCtx::numeric(cfg.q);
    ScalarField fld = ctx.fld;
    long qx = cfg.q;

    using Tensor = std::map<std::pair<Partition, Partition>, Scalar>;
    auto comul_elt = [&](const LocalHallElement& f) {
        Tensor out;
        for (const auto& [lam, c] : f)
            for (const auto& [key, coeff] : hallx_comul(lam, qx, fld)) {
                Scalar v = c * coeff;
                auto [it, ins] = out.emplace(key, v);
                if (!ins) {
                    it->second += v;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        return out;
    };
    auto tensor_mul = [&](const Tensor& x, const Tensor& y) {
        Tensor out;
        for (const auto& [px, cx] : x)
            for (const auto& [py, cy] : y) {
                LocalHallElement l =
                    hallx_mul({{px.first, fld.one()}}, {{py.first, fld.one()}}, qx, fld);
                LocalHallElement r =
                    hallx_mul({{px.second, fld.one()}}, {{py.second, fld.one()}}, qx, fld);
                for (const auto& [pl, cl] : l)
                    for (const auto& [pr, cr] : r) {
                        Scalar c = cx * cy * cl * cr;
                        auto key = std::make_pair(pl, pr);
                        auto [it, ins] = out.emplace(key, c);
                        if (!ins) {
                            it->second += c;
                            if (it->second.is_zero()) out.erase(it);
                        }
                    }
            }
        return out;
    };

    run_check(rep, "Green compatibility on torsion pairs", [&]() -> std::string {
        for (int n1 = 1; n1 < cfg.torsion_max; ++n1)
            for (int n2 = 1; n1 + n2 <= cfg.torsion_max; ++n2)
                for (const Partition& mu : partitions_of(n1))
                    for (const Partition& nu : partitions_of(n2)) {
                        LocalHallElement x{{mu, fld.one()}}, y{{nu, fld.one()}};
                        Tensor lhs = comul_elt(hallx_mul(x, y, qx, fld));
                        Tensor rhs = tensor_mul(comul_elt(x), comul_elt(y));
                        if (!(lhs == rhs))
                            return "pair " + partition_to_string(mu) + " * " +
                                   partition_to_string(nu);
                    }
        return "";
    });

    run_check(rep, "cross-product identity 1_V * 1_F", [&]() -> std::string {
        auto pls = places(cfg.q, 2);
        std::vector<TorsionP1> Fs;
        for (int n = 1; n <= 2; ++n) {
            TorsionP1 cur;
            for (const auto& [T, aut] : torsion_census_global(cfg.q, n)) Fs.push_back(T);
        }
        for (const TorsionP1& F : Fs) {
            CoherentP1 Fc = CoherentP1::of_torsion(F);
            for (int vdeg = -1; vdeg <= 1; ++vdeg) {
                HallElt V{{CoherentP1::line(vdeg), fld.one()}};
                HallElt lhs = hall_mul(V, {{Fc, fld.one()}}, ctx);
                HallElt rhs;
                std::vector<std::pair<TorsionP1, TorsionP1>> splits{{TorsionP1{}, TorsionP1{}}};
                std::vector<Scalar> coeffs{fld.one()};
                for (const auto& [px, lam] : F) {
                    long qpx = 1;
                    for (int i = 0; i < px.degree(); ++i) qpx *= cfg.q;
                    auto local = hallx_comul(lam, qpx, fld);
                    std::vector<std::pair<TorsionP1, TorsionP1>> ns;
                    std::vector<Scalar> nc;
                    for (size_t i = 0; i < splits.size(); ++i)
                        for (const auto& [key, lc] : local) {
                            auto s = splits[i];
                            if (!key.first.empty()) s.first[px] = key.first;
                            if (!key.second.empty()) s.second[px] = key.second;
                            ns.push_back(std::move(s));
                            nc.push_back(coeffs[i] * lc);
                        }
                    splits = std::move(ns);
                    coeffs = std::move(nc);
                }
                for (size_t i = 0; i < splits.size(); ++i) {
                    HallElt tf = hecke_T(splits[i].second, V, ctx, -8, 8);
                    HallElt term = hall_mul(
                        {{CoherentP1::of_torsion(splits[i].first), coeffs[i]}}, tf, ctx);
                    for (const auto& [kk, cc] : term) hall_add(rhs, kk, cc);
                }
                if (!(lhs == rhs))
                    return "V deg " + std::to_string(vdeg) + ", F " + Fc.to_string();
            }
        }
        return "";
    });

    run_check(rep, "cross-product map is multiplicative on samples", [&]() -> std::string {
        // iota(a (x) x) = a * x; check iota(a (x) x) iota(a' (x) x') agrees
        // with the cross-product multiplication
        auto pls = places(cfg.q, 1);
        PlaceP1 x0 = pls[1];
        std::vector<LocalHallElement> as = {{{Partition{1}, fld.one()}},
                                            {{Partition{2}, fld.one()}}};
        for (const auto& a : as)
            for (const auto& ap : as)
                for (int d1 = 0; d1 <= 1; ++d1)
                    for (int d2 = 0; d2 <= 0; ++d2) {
                        auto lift = [&](const LocalHallElement& f) {
                            HallElt out;
                            for (const auto& [lam, c] : f)
                                out.emplace(CoherentP1::of_torsion({{x0, lam}}), c);
                            return out;
                        };
                        HallElt A = lift(a), Ap = lift(ap);
                        HallElt Xx{{CoherentP1::line(d1), fld.one()}};
                        HallElt Xp{{CoherentP1::line(d2), fld.one()}};
                        HallElt lhs = hall_mul(hall_mul(hall_mul(A, Xx, ctx), Ap, ctx), Xp, ctx);
                        // cross-product: (a (x) x)(a' (x) x') =
                        //   sum a a'_1 (x) T_{a'_2}(x) x'
                        HallElt rhs;
                        for (const auto& [lam, capc] : ap) {
                            for (const auto& [key, coeff] : hallx_comul(lam, qx, fld)) {
                                TorsionP1 a1t, a2t;
                                if (!key.first.empty()) a1t[x0] = key.first;
                                if (!key.second.empty()) a2t[x0] = key.second;
                                HallElt aa1 =
                                    hall_mul(A, {{CoherentP1::of_torsion(a1t), capc * coeff}}, ctx);
                                HallElt tx = hecke_T(a2t, Xx, ctx, -8, 8);
                                HallElt xterm = hall_mul(tx, Xp, ctx);
                                HallElt term = hall_mul(aa1, xterm, ctx);
                                for (const auto& [kk, cc] : term) hall_add(rhs, kk, cc);
                            }
                        }
                        if (!(lhs == rhs)) return "sample with degrees " + std::to_string(d1) +
                                                  "," + std::to_string(d2);
                    }
        return "";
    });
    return rep;
}

// --- Psi / M-operator -----------------------------------------------------------

SuiteReport verify_psif_mop(const SuiteConfig& cfg) {
    SuiteReport rep;
    rep.suite = "psif-mop";
    CohCtx ctx = CohCtx::numeric(cfg.q);
    ScalarField fld = ctx.fld;
    int B = std::min(cfg.window, 3);

    run_check(rep, "psi-series commutation with Eisenstein series", [&]() -> std::string {
        // (1 - q u) E_g(t) Psi_f(t') = (1 - u/q) Psi_f(t') E_g(t), u = t'/t,
        // trivial characters; coefficient at t^a t'^n
        Scalar lam = fld.one();
        for (int a = -B; a <= B; ++a)
            for (int n = 0; n <= B; ++n) {
                auto EP = [&](int aa, int nn) -> HallElt {
                    if (nn < 0) return {};
                    return hall_mul({{CoherentP1::line(aa), fld.one()}},
                                    psi_coefficient(lam, nn, ctx), ctx);
                };
                auto PE = [&](int aa, int nn) -> HallElt {
                    if (nn < 0) return {};
                    return hall_mul(psi_coefficient(lam, nn, ctx),
                                    {{CoherentP1::line(aa), fld.one()}}, ctx);
                };
                // u^k shifts (a, n) -> (a + k, n - k)
                HallElt lhs = EP(a, n);
                for (const auto& [k, c] : EP(a + 1, n - 1))
                    hall_add(lhs, k, -(fld.q_scalar() * c));
                HallElt rhs = PE(a, n);
                for (const auto& [k, c] : PE(a + 1, n - 1))
                    hall_add(rhs, k, -(c / fld.q_scalar()));
                if (!(lhs == rhs))
                    return "coefficient t^" + std::to_string(a) + " t'^" + std::to_string(n);
            }
        return "";
    });

    run_check(rep, "M operator reproduces the LHom-ratio expansion", [&]() -> std::string {
        std::vector<Scalar> A = ratio_series(ctx, B);
        for (int a = -B; a <= B; ++a)
            for (int b = -B; b <= B; ++b) {
                Tensor2 m = m_operator_pair(a, b, B, ctx);
                for (int delta = 0; delta <= B; ++delta) {
                    auto it = m.find({CoherentP1::line(b - delta), CoherentP1::line(a + delta)});
                    Scalar got = it == m.end() ? fld.zero() : it->second;
                    if (!(got == A[delta]))
                        return "pair (" + std::to_string(a) + "," + std::to_string(b) +
                               ") shift " + std::to_string(delta) + ": " +
                               scalar_diff("coefficient", got, A[delta]);
                }
                if (m.size() > static_cast<size_t>(B) + 1) return "unexpected extra M terms";
            }
        return "";
    });

    run_check(rep, "M is involutive at the rational level", [&]() -> std::string {
        // the M-ratio for (f,g) times the swapped ratio at 1/u is 1
        CurveData X = CurveData::p1(cfg.q);
        Kernel k = curve_kernel_rank1(X, fld);
        RationalFunction c = k.entry(0, 0);
        std::map<int, LaurentPoly::Subst> swap;
        swap[Kernel::z1()] = {fld.one(), Kernel::z2(), 1};
        swap[Kernel::z2()] = {fld.one(), Kernel::z1(), 1};
        if (!(c * c.substitute(swap)).eq(RationalFunction::constant(fld.one())))
            return "ratio times swapped ratio differs from 1";
        return "";
    });

    run_check(rep, "M on the degenerate pair is the identity", [&]() -> std::string {
        // rank-0 first slot: Delta_{coh,0,0} trivial, so M(1 (x) v) = v (x) 1
        Tensor2 x;
        x.emplace(std::make_pair(CoherentP1{}, CoherentP1{}), fld.one());
        HallElt vb{{CoherentP1::line(1), fld.one()}};
        Tensor2 y = comult_coh_r0(vb, B, ctx);
        Tensor2 m = tensor2_project_bundle(tensor2_twisted_mul(x, y, ctx));
        auto it = m.find({CoherentP1::line(1), CoherentP1{}});
        if (it == m.end() || !it->second.is_one()) return "leading identity term wrong";
        return "";
    });
    return rep;
}

std::vector<SuiteReport> run_suites(const std::string& selector, const SuiteConfig& cfg) {
    std::vector<SuiteReport> out;
    auto want = [&](const char* name) { return selector == "all" || selector == name; };
    if (want("witt-bihom")) out.push_back(verify_witt_bihom(cfg));
    if (want("constant-term")) out.push_back(verify_constant_term(cfg));
    if (want("eisenstein-feq")) out.push_back(verify_eisenstein_feq(cfg));
    if (want("main-p1")) out.push_back(verify_main_p1(cfg));
    if (want("green-cross")) out.push_back(verify_green_cross(cfg));
    if (want("psif-mop")) out.push_back(verify_psif_mop(cfg));
    if (out.empty()) throw parse_error("unknown suite: " + selector);
    return out;
}

}  // namespace hc
