#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hallcurve/polyrat.hpp"

using namespace hc;

namespace {

ScalarField SYM = ScalarField::symbolic();

RationalFunction rf(const std::string& s, ScalarField fld = SYM) {
    return RationalFunction::parse(s, fld);
}

// independent convolution oracle for products of one-ratio geometric series
std::vector<Rat> conv(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

}  // namespace

TEST_CASE("ratfun arithmetic basics") {
    CHECK(rf("t/s * s/t").eq(rf("1")));
    CHECK(rf("(t^2-s^2)/(t-s)").eq(rf("t+s")));
    CHECK((rf("1/(1-t)") + rf("1/(1+t)")).eq(rf("2/(1-t^2)")));
    CHECK_THROWS_AS(rf("1") / RationalFunction(SYM), parse_error);
}

TEST_CASE("monomial substitution") {
    int t = var_id("t"), s = var_id("s");
    RationalFunction f = rf("1/(1-t)");
    std::map<int, LaurentPoly::Subst> sub;
    sub[t] = {SYM.q_scalar(), t, 1};  // t -> q t
    CHECK(f.substitute(sub).eq(rf("1/(1-v^2*t)")));

    RationalFunction g = rf("t/s");
    std::map<int, LaurentPoly::Subst> swap;
    swap[t] = {SYM.one(), s, 1};
    swap[s] = {SYM.one(), t, 1};
    CHECK(g.substitute(swap).eq(rf("s/t")));

    std::map<int, LaurentPoly::Subst> inv;
    inv[t] = {SYM.one(), t, -1};
    CHECK(rf("t").substitute(inv).eq(rf("t^-1")));
}

TEST_CASE("symmetrize") {
    int t1 = var_id("t1"), t2 = var_id("t2");
    CHECK(rf("t1").symmetrize({t1, t2}).eq(rf("t1+t2")));
    CHECK(rf("t1/t2").symmetrize({t1, t2}).eq(rf("t1/t2+t2/t1")));
    RationalFunction symf = rf("t1*t2+t1+t2");
    CHECK(symf.symmetrize({t1, t2}).eq(symf * rf("2")));
    // output is invariant under every transposition
    RationalFunction h = rf("t1^2/(1-t2)").symmetrize({t1, t2});
    std::map<int, LaurentPoly::Subst> swap;
    swap[t1] = {SYM.one(), t2, 1};
    swap[t2] = {SYM.one(), t1, 1};
    CHECK(h.substitute(swap).eq(h));
}

TEST_CASE("expand_region: geometric series") {
    int t = var_id("t"), s = var_id("s");
    SUBCASE("1/(1 - s/t) in t >> s") {
        DegreeWindow w;
        w.set(t, -2, 2);
        w.set(s, -2, 2);
        auto m = expand_region(rf("1/(1-s*t^-1)"), {t, s}, w);
        CHECK(m.size() == 3);
        Monomial u = Monomial::var(s) * Monomial::var(t, -1);
        CHECK(m.at(Monomial::one()).is_one());
        CHECK(m.at(u).is_one());
        CHECK(m.at(u.pow(2)).is_one());
    }
    SUBCASE("single variable window [0,3]") {
        DegreeWindow w;
        w.set(t, 0, 3);
        auto m = expand_region(rf("1/(1-t)"), {t}, w);
        CHECK(m.size() == 4);
        for (int k = 0; k <= 3; ++k) CHECK(m.at(Monomial::var(t, k == 0 ? 0 : 1).pow(k)).is_one());
    }
}

TEST_CASE("zeta-type coefficient against convolution oracle") {
    // zeta_P1(u) = 1/((1-u)(1-q u)) with u = s/t; coefficient of u^2 is 1+q+q^2
    int t = var_id("t"), s = var_id("s");
    DegreeWindow w;
    w.set(t, -3, 0);
    w.set(s, 0, 3);
    auto m = expand_region(rf("1/((1-s*t^-1)*(1-v^2*s*t^-1))"), {t, s}, w);
    Monomial u = Monomial::var(s) * Monomial::var(t, -1);
    // oracle: convolve two geometric series with ratios 1 and q at q = 3
    std::vector<Rat> g1{1, 1, 1, 1}, gq{1, 3, 9, 27};
    auto c = conv(g1, gq);
    for (int k = 0; k <= 3; ++k) CHECK(m.at(u.pow(k)).eval_at(3) ==
                                       ScalarField::numeric(3).rational(c[k]));
    CHECK(m.at(u.pow(2)) == SYM.one() + SYM.q_scalar() + SYM.q_scalar(2));
}

TEST_CASE("expand_region multiplicativity on shrunk windows") {
    int t = var_id("t"), s = var_id("s");
    RationalFunction f = rf("1/(1-s*t^-1)"), g = rf("(1+s)/(1-v^2*s*t^-1)");
    DegreeWindow big, small;
    big.set(t, -8, 0);
    big.set(s, 0, 8);
    small.set(t, -3, 0);
    small.set(s, 0, 3);
    auto mf = expand_region(f, {t, s}, big);
    auto mg = expand_region(g, {t, s}, big);
    auto mfg = expand_region(f * g, {t, s}, small);
    std::map<Monomial, Scalar> convm;
    for (const auto& [m1, c1] : mf)
        for (const auto& [m2, c2] : mg) {
            Monomial m = m1 * m2;
            if (!small.contains(m)) continue;
            auto it = convm.find(m);
            if (it == convm.end())
                convm.emplace(m, c1 * c2);
            else
                it->second += c2 * c1;
        }
    for (auto it = convm.begin(); it != convm.end();)
        it = it->second.is_zero() ? convm.erase(it) : std::next(it);
    CHECK(convm == mfg);
}

TEST_CASE("substitute then expand equals expand then reindex") {
    int t = var_id("t");
    RationalFunction f = rf("1/(1-t)");
    std::map<int, LaurentPoly::Subst> sub;
    sub[t] = {SYM.q_scalar(), t, 1};
    DegreeWindow w;
    w.set(t, 0, 5);
    auto lhs = expand_region(f.substitute(sub), {t}, w);
    auto raw = expand_region(f, {t}, w);
    std::map<Monomial, Scalar> rhs;
    for (const auto& [m, c] : raw) rhs.emplace(m, c * SYM.q_scalar(m.exp_of(t)));
    CHECK(lhs == rhs);
}

TEST_CASE("expand_region handles a dominant non-constant unit") {
    // 1/(1 - t/s) in t >> s: unit is -t/s, series is -s/t (1 + s/t + ...)
    int t = var_id("t"), s = var_id("s");
    DegreeWindow w;
    w.set(t, -2, 2);
    w.set(s, -2, 2);
    auto m = expand_region(rf("1/(1-t*s^-1)"), {t, s}, w);
    Monomial u = Monomial::var(s) * Monomial::var(t, -1);
    CHECK(m.at(u) == -SYM.one());
    CHECK(m.at(u.pow(2)) == -SYM.one());
    CHECK(m.count(Monomial::one()) == 0);
}

TEST_CASE("expand_region rejects variables outside the region order") {
    int t = var_id("t"), s = var_id("s");
    DegreeWindow w;
    w.set(t, -2, 2);
    CHECK_THROWS_AS(expand_region(rf("1/(1-s*t^-1)"), {t}, w), parse_error);
    (void)s;
}

TEST_CASE("as_laurent_polynomial") {
    LaurentPoly p(SYM);
    CHECK(rf("(t^2-s^2)/(t-s)").as_laurent_polynomial(&p));
    CHECK(RationalFunction::from_poly(p).eq(rf("t+s")));
    CHECK_FALSE(rf("1/(1-t)").as_laurent_polynomial());
    CHECK(rf("(1-t^2)/(t*(1-t))").as_laurent_polynomial(&p));
    CHECK(RationalFunction::from_poly(p).eq(rf("(1+t)/t")));
}

TEST_CASE("linear relations: exact kernel") {
    // rows: t, s, t+s -> one relation (1,1,-1)
    std::vector<LaurentPoly> rows;
    rows.push_back(rf("t").num());
    rows.push_back(rf("s").num());
    rows.push_back(rf("t+s").num());
    auto k = linear_relations(rows);
    REQUIRE(k.size() == 1);
    Scalar a = k[0][0], b = k[0][1], c = k[0][2];
    CHECK((a == b));
    CHECK((a + c).is_zero());
    // independent rows: no relations
    rows.pop_back();
    CHECK(linear_relations(rows).empty());
}

TEST_CASE("ratfun parse round trip") {
    RationalFunction f = rf("1 | (1-s*t^-1)*(1-v^2*s*t^-1)");
    CHECK(RationalFunction::parse(f.to_string(), SYM).eq(f));
    RationalFunction g = rf("(3*v^2-1/2)*t | s^2");
    CHECK(RationalFunction::parse(g.to_string(), SYM).eq(g));
}
