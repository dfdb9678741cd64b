#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hallcurve/finmod.hpp"

using namespace hc;

namespace {
ScalarField N2 = ScalarField::numeric(2);

using Tensor = std::map<std::pair<Partition, Partition>, Scalar>;

Tensor tensor_mul(const Tensor& x, const Tensor& y, long qx, const ScalarField& fld) {
    // componentwise product on A_x (x) A_x; the torsion Cartan twist is 1
    Tensor out;
    for (const auto& [px, cx] : x)
        for (const auto& [py, cy] : y) {
            LocalHallElement l = hallx_mul({{px.first, fld.one()}}, {{py.first, fld.one()}}, qx, fld);
            LocalHallElement r = hallx_mul({{px.second, fld.one()}}, {{py.second, fld.one()}}, qx, fld);
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
}

Tensor comul_elt(const LocalHallElement& f, long qx, const ScalarField& fld) {
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
}
}  // namespace

TEST_CASE("field tables satisfy the axioms") {
    for (long q : {2L, 3L, 4L, 5L, 7L, 8L, 9L}) {
        Fq F(q);
        for (int a = 0; a < q; ++a) {
            CHECK(F.add(a, 0) == a);
            CHECK(F.mul(a, 1) == a);
            CHECK(F.add(a, F.neg(a)) == 0);
            if (a) CHECK(F.mul(a, F.inv(a)) == 1);
            for (int b = 0; b < q; ++b) {
                CHECK(F.add(a, b) == F.add(b, a));
                CHECK(F.mul(a, b) == F.mul(b, a));
                for (int c = 0; c < q; ++c) {
                    CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("submodule census base cases") {
    // (1,1) at q: q+1 lines with quotient (1)
    for (long q : {2L, 3L, 4L}) {
        const CensusTable& t = submodule_census({1, 1}, q);
        CHECK(t.at({{1}, {1}}) == q + 1);
        CHECK(t.at({{1, 1}, {}}) == 1);
        CHECK(t.at({{}, {1, 1}}) == 1);
        const CensusTable& t2 = submodule_census({2}, q);
        CHECK(t2.at({{1}, {1}}) == 1);
    }
    // census self-consistency: total count equals number of submodules
    FinModule M({2, 1}, 2);
    auto subs = enumerate_submodules(M);
    Int total = 0;
    for (const auto& [k, c] : submodule_census({2, 1}, 2)) total += c;
    CHECK(total == Int(subs.size()));
}

TEST_CASE("census duality g^l_{mu,nu} = g^l_{nu,mu}") {
    for (long q : {2L, 3L}) {
        for (int n = 1; n <= 4; ++n)
            for (const Partition& lam : partitions_of(n)) {
                const CensusTable& t = submodule_census(lam, q);
                for (const auto& [key, c] : t) {
                    auto sw = std::make_pair(key.second, key.first);
                    REQUIRE(t.count(sw));
                    CHECK(t.at(sw) == c);
                }
            }
    }
}

TEST_CASE("aut counts") {
    CHECK(aut_count({1}, 2) == 1);
    CHECK(aut_count({1, 1}, 2) == 6);
    CHECK(aut_count({2}, 2) == 2);
    CHECK(aut_count({1}, 3) == 2);
    CHECK(aut_count({1, 1}, 3) == 48);
    // brute vs span vs closed on the overlap
    for (long q : {2L, 3L}) {
        for (int n = 1; n <= 3; ++n)
            for (const Partition& p : partitions_of(n)) {
                Int spanned = aut_count(p, q);
                CHECK(spanned == aut_count_brute(p, q));
                CHECK(spanned == aut_count_closed(p, q));
            }
    }
    CHECK(aut_count({1, 1, 1, 1}, 2) == Int(20160));  // |GL_4(F_2)|
}

TEST_CASE("local Hall multiplication") {
    LocalHallElement e1{{Partition{1}, N2.one()}};
    LocalHallElement sq = hallx_mul(e1, e1, 2, N2);
    CHECK(sq.at({1, 1}) == N2.integer(3));
    CHECK(sq.at({2}) == N2.one());
    CHECK(sq.size() == 2);
    // unit
    LocalHallElement unit{{Partition{}, N2.one()}};
    CHECK(hallx_mul(unit, sq, 2, N2) == sq);
    // commutativity
    LocalHallElement e2{{Partition{2}, N2.one()}};
    CHECK(hallx_mul(e2, e1, 2, N2) == hallx_mul(e1, e2, 2, N2));
    // grading: |lambda| adds
    for (const auto& [lam, c] : hallx_mul(sq, e2, 2, N2)) CHECK(partition_weight(lam) == 4);
}

TEST_CASE("comultiplication and Hecke generators") {
    // Delta(1_{(1)}) = empty (x) (1) + (1) (x) empty
    auto d = hallx_comul({1}, 2, N2);
    CHECK(d.size() == 2);
    CHECK(d.at({{}, {1}}).is_one());
    CHECK(d.at({{1}, {}}).is_one());
    // counit: coefficient of (empty, lambda) is 1
    for (const Partition& lam : partitions_of(3)) CHECK(hallx_comul(lam, 2, N2).at({{}, lam}).is_one());
    // Delta(b_r) = sum b_i (x) b_{r-i} for r <= 3 here (acceptance runs r <= 4)
    for (long q : {2L, 3L}) {
        ScalarField fld = ScalarField::numeric(q);
        for (int r = 1; r <= 3; ++r) {
            Tensor lhs = comul_elt(hecke_generator(r, q, fld), q, fld);
            Tensor rhs;
            for (int i = 0; i <= r; ++i) {
                LocalHallElement bi = hecke_generator(i, q, fld), bj = hecke_generator(r - i, q, fld);
                for (const auto& [pi, ci] : bi)
                    for (const auto& [pj, cj] : bj) {
                        auto key = std::make_pair(pi, pj);
                        auto [it, ins] = rhs.emplace(key, ci * cj);
                        if (!ins) it->second += ci * cj;
                    }
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("Green compatibility on A_x, small pairs") {
    long q = 2;
    for (int n1 = 1; n1 <= 2; ++n1)
        for (int n2 = 1; n2 <= 2; ++n2)
            for (const Partition& mu : partitions_of(n1))
                for (const Partition& nu : partitions_of(n2)) {
                    LocalHallElement x{{mu, N2.one()}}, y{{nu, N2.one()}};
                    Tensor lhs = comul_elt(hallx_mul(x, y, q, N2), q, N2);
                    Tensor rhs = tensor_mul(comul_elt(x, q, N2), comul_elt(y, q, N2), q, N2);
                    CHECK(lhs == rhs);
                }
}

TEST_CASE("cyclic census agrees with the full census on the overlap") {
    for (long q : {2L, 3L}) {
        for (int n = 2; n <= 4; ++n)
            for (const Partition& lam : partitions_of(n)) {
                if (lam.size() > 2) continue;
                auto cc = cyclic_cyclic_census(lam, q);
                const CensusTable& full = submodule_census(lam, q);
                for (const auto& [mn, cnt] : cc) {
                    Partition mu = mn.first ? Partition{mn.first} : Partition{};
                    Partition nu = mn.second ? Partition{mn.second} : Partition{};
                    REQUIRE(full.count({mu, nu}));
                    CHECK(full.at({mu, nu}) == cnt);
                }
                // and nothing cyclic/cyclic is missed
                for (const auto& [key, cnt] : full) {
                    if (key.first.size() > 1 || key.second.size() > 1) continue;
                    int m = key.first.empty() ? 0 : key.first[0];
                    int n2 = key.second.empty() ? 0 : key.second[0];
                    REQUIRE(cc.count({m, n2}));
                    CHECK(cc.at({m, n2}) == cnt);
                }
            }
    }
}

TEST_CASE("rank <= 2 character values are multiplicative") {
    for (long q : {2L, 3L}) {
        ScalarField fld = ScalarField::numeric(q);
        std::vector<std::pair<Scalar, Scalar>> grid = {
            {fld.one(), fld.zero()},                  // rank 1, root 1
            {fld.integer(2), fld.zero()},             // rank 1, root 2
            {fld.one(), fld.one()},                   // rank 2, roots 1,1
            {fld.integer(2), fld.integer(-1)},        // rank 2
        };
        for (const auto& [r1, r2] : grid) {
            auto chi = [&](const Partition& lam) {
                return r2.is_zero() ? char_value_rank1(r1, lam)
                                    : char_value_rank2(r1, r2, lam, q);
            };
            // chi(1_mu * 1_nu) = chi(1_mu) chi(1_nu)
            for (int n1 = 1; n1 <= 2; ++n1)
                for (int n2 = 1; n2 <= 2; ++n2)
                    for (const Partition& mu : partitions_of(n1))
                        for (const Partition& nu : partitions_of(n2)) {
                            LocalHallElement prod =
                                hallx_mul({{mu, fld.one()}}, {{nu, fld.one()}}, q, fld);
                            Scalar lhs = fld.zero();
                            for (const auto& [lam, c] : prod) lhs += c * chi(lam);
                            CHECK(lhs == chi(mu) * chi(nu));
                        }
            // B-series coefficients: chi(b_1) = -(r1 + r2), chi(b_2) = r1 r2
            Scalar b1 = chi({1});
            CHECK(b1 == -(r1 + r2));
            Scalar b2 = fld.integer(q) * chi({1, 1});
            CHECK(b2 == r1 * r2);
        }
    }
}
