#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hallcurve/shuffle.hpp"

using namespace hc;

namespace {

ScalarField N4 = ScalarField::numeric(4);
ScalarField N2 = ScalarField::numeric(2);

Kernel trivial_kernel(const ScalarField& fld) {
    Kernel k(fld);
    k.set(0, 0, RationalFunction::constant(fld.one()));
    return k;
}

RationalFunction rf(const std::string& s, const ScalarField& fld) {
    return RationalFunction::parse(s, fld);
}

}  // namespace

TEST_CASE("two-term shuffle of degree-1 generators") {
    Kernel k = curve_kernel_rank1(CurveData::p1(4), N4);
    ShuffleElement a = ShuffleElement::generator(0, 2, N4);
    ShuffleElement b = ShuffleElement::generator(0, 1, N4);
    ShuffleElement ab = shuffle_mul(a, b, k);
    REQUIRE(ab.pieces.size() == 1);
    RationalFunction expect =
        rf("t1^2*t2 + ((4*t1-t2)/(t1-4*t2))*t1*t2^2", N4);
    CHECK(ab.pieces.begin()->second.eq(expect));
}

TEST_CASE("trivial kernel gives the symmetric algebra") {
    Kernel k = trivial_kernel(N2);
    ShuffleElement ab = shuffle_mul(ShuffleElement::generator(0, 3, N2),
                                    ShuffleElement::generator(0, 1, N2), k);
    CHECK(ab.pieces.begin()->second.eq(rf("t1^3*t2 + t1*t2^3", N2)));
    // commutativity
    ShuffleElement ba = shuffle_mul(ShuffleElement::generator(0, 1, N2),
                                    ShuffleElement::generator(0, 3, N2), k);
    CHECK(ab.eq(ba));
}

TEST_CASE("the P^1 kernel is antisymmetric and the product is associative") {
    Kernel k = curve_kernel_rank1(CurveData::p1(4), N4);
    CHECK(k.verify_antisymmetric());
    for (int a = -1; a <= 1; ++a) {
        ShuffleElement ea = ShuffleElement::generator(0, a, N4);
        ShuffleElement e0 = ShuffleElement::generator(0, 0, N4);
        ShuffleElement e1 = ShuffleElement::generator(0, 1, N4);
        ShuffleElement lhs = shuffle_mul(shuffle_mul(ea, e0, k), e1, k);
        ShuffleElement rhs = shuffle_mul(ea, shuffle_mul(e0, e1, k), k);
        CHECK(lhs.eq(rhs));
    }
}

TEST_CASE("M-commutativity: mu of the braided swap reproduces mu") {
    // mu(M(u (x) v)) = mu(u,v) with M(u (x) v)(t1,t2) = c(t1,t2) u(t2) v(t1);
    // at degree (1,1) the product of a rational section h is h + R^c(h)
    Kernel k = curve_kernel_rank1(CurveData::p1(2), N2);
    RationalFunction u = RationalFunction::parse("t1", N2);      // slot function of x^1
    RationalFunction v = RationalFunction::parse("t1^-1", N2);   // x^{-1}
    std::map<int, LaurentPoly::Subst> to2, swap;
    to2[slot_var(0)] = {N2.one(), slot_var(1), 1};
    swap[slot_var(0)] = {N2.one(), slot_var(1), 1};
    swap[slot_var(1)] = {N2.one(), slot_var(0), 1};
    RationalFunction c12 = k.at(0, 0, slot_var(0), slot_var(1));
    RationalFunction g = c12 * u.substitute(to2) * v;  // c(t1,t2) u(t2) v(t1)
    RationalFunction muM = g + c12 * g.substitute(swap);
    ShuffleElement ab = shuffle_mul(ShuffleElement::generator(0, 1, N2),
                                    ShuffleElement::generator(0, -1, N2), k);
    CHECK(ab.pieces.begin()->second.eq(muM));
    // and the product itself is R^c-invariant
    RationalFunction f = ab.pieces.begin()->second;
    CHECK(f.eq(c12 * f.substitute(swap)));
}

TEST_CASE("coproduct compatibility on length-2 products") {
    // Delta_{1,1} of mu(a,b) equals a (x) b + R^c-term: at the function level
    // Delta_{r,s} is the identity map, so the check is that mu(a,b) equals
    // the sum of the two shuffle terms -- already structural; instead check
    // the graded pentagon on a triple: Delta_{1,2}(mu(a,b,c)) pieces
    // reassemble through mu_{1,1} (x) id.  Equivalent desk form: the
    // (1,2)-component of a length-3 product equals the sum over splittings.
    Kernel k = curve_kernel_rank1(CurveData::p1(2), N2);
    ShuffleElement abc = shuffle_chain({{0, 1}, {0, 0}, {0, -1}}, k, N2);
    // the function itself is the Delta-image; sanity: it is a sum of 6
    // shuffle terms, i.e. equals mu(a, mu(b,c)) computed independently
    ShuffleElement right = shuffle_mul(
        ShuffleElement::generator(0, 1, N2),
        shuffle_mul(ShuffleElement::generator(0, 0, N2), ShuffleElement::generator(0, -1, N2), k),
        k);
    CHECK(abc.eq(right));
}

TEST_CASE("relation space examples") {
    // c == 1: commutativity relation between x^0 shuffle x^1 and x^1 shuffle x^0
    Kernel k1 = trivial_kernel(N2);
    std::vector<ShuffleElement> prods;
    prods.push_back(shuffle_chain({{0, 0}, {0, 1}}, k1, N2));
    prods.push_back(shuffle_chain({{0, 1}, {0, 0}}, k1, N2));
    auto rel = relation_space(prods);
    REQUIRE(rel.size() == 1);
    CHECK(rel[0][0] == -rel[0][1]);
    // P^1 kernel: the quadratic relation lattice in a degree window has the
    // expected dimension: products (a,b) with a+b = 1, a,b in [-1,2]:
    // 4 products, relations = 4 - dim Sh^2-window
    Kernel k = curve_kernel_rank1(CurveData::p1(2), N2);
    std::vector<ShuffleElement> ps;
    for (int a = -1; a <= 2; ++a) ps.push_back(shuffle_chain({{0, a}, {0, 1 - a}}, k, N2));
    auto rel2 = relation_space(ps);
    CHECK(rel2.size() == 2);  // window span has dimension 2
}

TEST_CASE("quadratic commutation relations for the P^1 kernel") {
    for (long q : {2L, 4L}) {
        ScalarField fld = ScalarField::numeric(q);
        Kernel k = curve_kernel_rank1(CurveData::p1(q), fld);
        auto res = quadratic_check(0, 0, k, 2);
        CHECK(res.pass);
        // negative control: products with the true kernel against a
        // perturbed ratio
        RationalFunction bad = k.entry(0, 0) * RationalFunction::parse("z1/z2", fld);
        auto res2 = quadratic_check_ratio(0, 0, k, bad, 2);
        CHECK_FALSE(res2.pass);
        CHECK(!res2.witness.empty());
    }
}

TEST_CASE("symmetric shuffle: m=n=1 formula and regularity") {
    CurveData X = CurveData::p1(2);
    Kernel lt = curve_kernel_lambda_p1(X, N2, true);
    CHECK(lambda_pole_ok(lt.entry(0, 0)));
    // xi(f,g) = f(t1)g(t2)lambda(t1,t2) + f(t2)g(t1)lambda(t2,t1)
    ShuffleElement f = ShuffleElement::generator(0, 1, N2);
    ShuffleElement g = ShuffleElement::generator(0, 0, N2);
    ShuffleElement fg = sym_shuffle_mul(f, g, lt);
    RationalFunction expect = rf("t1", N2) * lt.at(0, 0, slot_var(0), slot_var(1)) +
                              rf("t2", N2) * lt.at(0, 0, slot_var(1), slot_var(0));
    CHECK(fg.pieces.begin()->second.eq(expect));
    // products of regular generators are Laurent polynomials
    CHECK(is_laurent_polynomial(fg));
    ShuffleElement fgh = sym_shuffle_chain({{0, 1}, {0, 0}, {0, -1}}, lt, N2);
    CHECK(is_laurent_polynomial(fgh));
    // negative control: a second-order diagonal pole
    Kernel bad(N2);
    bad.set(0, 0, lt.entry(0, 0) / rf("1-z2/z1", N2));
    CHECK_FALSE(lambda_pole_ok(bad.entry(0, 0)));
    ShuffleElement bad2 = sym_shuffle_mul(f, g, bad);
    CHECK_FALSE(is_laurent_polynomial(bad2));
    // plain lambda still has the q-shifted diagonal pole that f(t) cancels,
    // so only the tilde version passes the regularity precondition
    Kernel plain = curve_kernel_lambda_p1(X, N2, false);
    CHECK_FALSE(lambda_pole_ok(plain.entry(0, 0)));
}

TEST_CASE("coboundary: c = lambda / lambda-swap and the Psi intertwiner") {
    CurveData X = CurveData::p1(2);
    Kernel c = curve_kernel_rank1(X, N2);
    Kernel lt = curve_kernel_lambda_p1(X, N2, true);
    std::map<int, LaurentPoly::Subst> swap;
    swap[Kernel::z1()] = {N2.one(), Kernel::z2(), 1};
    swap[Kernel::z2()] = {N2.one(), Kernel::z1(), 1};
    CHECK(c.entry(0, 0).eq(lt.entry(0, 0) / lt.entry(0, 0).substitute(swap)));
    // Psi-intertwining: with Lambda = prod_{i<j} lambda(t_i,t_j),
    // mu-chain(a_1..a_n) = Lambda * Symm[Lambda^{-1} prod a_k(t_k)]
    // and xi-chain(a_1..a_n) = Symm[Lambda prod a_k(t_k)]
    for (auto gens : {std::vector<std::pair<int, int>>{{0, 1}, {0, 0}},
                      std::vector<std::pair<int, int>>{{0, 2}, {0, 0}, {0, -1}}}) {
        ShuffleElement mu = shuffle_chain(gens, c, N2);
        ShuffleElement xi = sym_shuffle_chain(gens, lt, N2);
        int n = static_cast<int>(gens.size());
        RationalFunction Lambda = RationalFunction::constant(N2.one());
        RationalFunction prod_a = RationalFunction::constant(N2.one());
        std::vector<int> vars;
        for (int i = 0; i < n; ++i) {
            vars.push_back(slot_var(i));
            prod_a *= RationalFunction::from_poly(
                LaurentPoly::term(N2.one(), Monomial::var(slot_var(i), gens[i].second)));
            for (int j = i + 1; j < n; ++j) Lambda *= lt.at(0, 0, slot_var(i), slot_var(j));
        }
        CHECK(mu.pieces.begin()->second.eq(Lambda * (prod_a / Lambda).symmetrize(vars)));
        CHECK(xi.pieces.begin()->second.eq((prod_a * Lambda).symmetrize(vars)));
    }
}

TEST_CASE("elliptic curve kernels c_{X,r}") {
    // integer trace first: antisymmetry at r = 1 and r = 2
    ScalarField fld = N2;
    std::vector<RationalFunction> P{RationalFunction::constant(fld.one()),
                                    RationalFunction::constant(fld.integer(-1)),
                                    RationalFunction::constant(fld.integer(2))};
    for (int r : {1, 2}) {
        Kernel k = curve_kernel_elliptic(P, 2, r, fld);
        CHECK(k.verify_antisymmetric());
    }
    // r = 1 matches the rank-1 construction
    Kernel k1 = curve_kernel_elliptic(P, 2, 1, fld);
    Kernel kr = curve_kernel_rank1(CurveData::elliptic(2, 1), fld);
    CHECK(k1.entry(0, 0).eq(kr.entry(0, 0)));
    // symbolic trace a: exact antisymmetry as rational functions in a
    std::vector<RationalFunction> Pa{
        RationalFunction::constant(fld.one()),
        -RationalFunction::parse("a", fld),
        RationalFunction::constant(fld.integer(2))};
    Kernel k2 = curve_kernel_elliptic(Pa, 2, 2, fld);
    CHECK(k2.verify_antisymmetric());
}

TEST_CASE("generalized semigroup grading: two components") {
    // weights realize the graded semigroup; the kernel extends by
    // bi-multiplicativity, here two copies of the P^1 kernel with the cross
    // entries trivial
    Kernel k(N2);
    RationalFunction c = curve_kernel_rank1(CurveData::p1(2), N2).entry(0, 0);
    k.set(0, 0, c);
    k.set(1, 1, c);
    k.set(0, 1, RationalFunction::constant(N2.one()));
    k.set(1, 0, RationalFunction::constant(N2.one()));
    CHECK(k.verify_antisymmetric());
    ShuffleElement a = ShuffleElement::generator(0, 1, N2);
    ShuffleElement b = ShuffleElement::generator(1, 2, N2);
    ShuffleElement ab = shuffle_mul(a, b, k);
    ShuffleElement ba = shuffle_mul(b, a, k);
    // distinct components with c = 1 commute
    CHECK(ab.eq(ba));
    REQUIRE(ab.pieces.count({0, 1}));
    // associativity across components
    ShuffleElement lhs = shuffle_mul(ab, a, k);
    ShuffleElement rhs = shuffle_mul(a, ba, k);
    // mu(a (x) b (x) a): both orders agree
    ShuffleElement mid = shuffle_mul(shuffle_mul(a, b, k), a, k);
    CHECK(lhs.eq(mid));
    CHECK(lhs.eq(rhs));
}
