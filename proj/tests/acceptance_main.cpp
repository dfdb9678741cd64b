// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout (zero tolerance).  Exit code 0 iff everything passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "hallcurve/verify.hpp"

using namespace hc;

namespace {

int g_failures = 0;
using Clock = std::chrono::steady_clock;

void criterion(int number, const std::string& label, const std::function<std::string()>& body) {
    auto t0 = Clock::now();
    std::string witness;
    try {
        witness = body();
    } catch (const std::exception& e) {
        witness = std::string("exception: ") + e.what();
    }
    double sec = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = witness.empty();
    if (!pass) ++g_failures;
    std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", number,
                label.c_str(), sec, pass ? "" : " -- ", witness.c_str());
    std::fflush(stdout);
}

std::string suite_result(const SuiteReport& r) {
    if (r.all_pass()) return "";
    for (const auto& c : r.checks)
        if (!c.pass) return c.name + ": " + c.witness;
    return "suite failed";
}

}  // namespace

int main() {
    // 1. Hall-number base cases by exhaustive submodule enumeration
    criterion(1, "Hall numbers g^{(1,1)}_{(1),(1)} = q+1 and g^{(2)}_{(1),(1)} = 1, q in {2,3,4}",
              []() -> std::string {
                  for (long q : {2L, 3L, 4L}) {
                      const CensusTable& t11 = submodule_census({1, 1}, q);
                      auto it = t11.find({{1}, {1}});
                      if (it == t11.end() || it->second != q + 1)
                          return "g^{(1,1)} wrong at q=" + std::to_string(q);
                      const CensusTable& t2 = submodule_census({2}, q);
                      auto jt = t2.find({{1}, {1}});
                      if (jt == t2.end() || jt->second != 1)
                          return "g^{(2)} wrong at q=" + std::to_string(q);
                  }
                  return "";
              });

    // 2. Hecke generator coproduct
    criterion(2, "Delta(b_{x,r}) = sum b_i (x) b_{r-i} for r <= 4, q in {2,3}",
              []() -> std::string {
                  for (long q : {2L, 3L}) {
                      ScalarField fld = ScalarField::numeric(q);
                      for (int r = 1; r <= 4; ++r) {
                          std::map<std::pair<Partition, Partition>, Scalar> lhs;
                          for (const auto& [lam, c] : hecke_generator(r, q, fld))
                              for (const auto& [key, coeff] : hallx_comul(lam, q, fld)) {
                                  Scalar v = c * coeff;
                                  auto [it, ins] = lhs.emplace(key, v);
                                  if (!ins) it->second += v;
                              }
                          std::map<std::pair<Partition, Partition>, Scalar> rhs;
                          for (int i = 0; i <= r; ++i)
                              for (const auto& [pi, ci] : hecke_generator(i, q, fld))
                                  for (const auto& [pj, cj] : hecke_generator(r - i, q, fld)) {
                                      auto [it, ins] = rhs.emplace(std::make_pair(pi, pj), ci * cj);
                                      if (!ins) it->second += ci * cj;
                                  }
                          for (auto it = lhs.begin(); it != lhs.end();)
                              it = it->second.is_zero() ? lhs.erase(it) : std::next(it);
                          if (!(lhs == rhs))
                              return "mismatch at r=" + std::to_string(r) + ", q=" + std::to_string(q);
                      }
                  }
                  return "";
              });

    // 3. Green compatibility on torsion
    criterion(3, "Green compatibility on torsion pairs, total weight <= 4, q in {2,3}",
              []() -> std::string {
                  for (long q : {2L, 3L}) {
                      SuiteConfig cfg;
                      cfg.q = q;
                      cfg.torsion_max = 4;
                      SuiteReport r = verify_green_cross(cfg);
                      for (const auto& c : r.checks)
                          if (c.name.find("Green") != std::string::npos && !c.pass)
                              return "q=" + std::to_string(q) + ": " + c.witness;
                  }
                  return "";
              });

    // 4. Witt bihomomorphism
    criterion(4, "Witt bihomomorphism to order 8 with kappa recovery, q in {2,3}",
              []() -> std::string {
                  for (long q : {2L, 3L}) {
                      SuiteConfig cfg;
                      cfg.q = q;
                      cfg.trunc = 8;
                      std::string w = suite_result(verify_witt_bihom(cfg));
                      if (!w.empty()) return "q=" + std::to_string(q) + ": " + w;
                  }
                  return "";
              });

    // 5. Zeta consistency over enumerated places
    criterion(5, "truncated Euler product over enumerated places = rational zeta to order 10",
              []() -> std::string {
                  for (long q : {2L, 3L, 4L}) {
                      ScalarField fld = ScalarField::numeric(q);
                      CurveData X = CurveData::p1(q);
                      auto pls = places(q, 10);
                      std::vector<Int> a(11, 0);
                      for (const auto& x : pls)
                          if (x.degree() <= 10) a[x.degree()] += 1;
                      // place-count identity
                      Int qn = 1;
                      for (int n = 1; n <= 10; ++n) {
                          qn *= q;
                          Int s = 0;
                          for (int d = 1; d <= n; ++d)
                              if (n % d == 0) s += d * a[d];
                          if (s != qn + 1) return "place counts fail at q=" + std::to_string(q);
                      }
                      auto prod = X.zeta_truncated_product(fld, 10, 10, &a);
                      auto rat = X.zeta_series(fld, 10);
                      for (int n = 0; n <= 10; ++n)
                          if (!(prod[n] == rat[n]))
                              return "zeta coefficient t^" + std::to_string(n) +
                                     " at q=" + std::to_string(q);
                  }
                  return "";
              });

    // 6. Euler form against |Hom|/|Ext|
    criterion(6, "Euler form matches |Hom|/|Ext^1| for rank <= 2, |deg| <= 5",
              []() -> std::string {
                  for (long q : {2L, 3L, 4L}) {
                      CohCtx ctx = CohCtx::numeric(q);
                      std::vector<CoherentP1> cls;
                      for (int d = -5; d <= 5; ++d) cls.push_back(CoherentP1::line(d));
                      for (int d1 = -3; d1 <= 3; ++d1)
                          for (int d2 = -3; d2 <= d1; ++d2)
                              cls.push_back(CoherentP1::of_bundle({d1, d2}));
                      for (const auto& A : cls)
                          for (const auto& B : cls) {
                              auto [h, e] = hom_ext(A, B, q);
                              if (!(euler_form(A, B, ctx).pow(2) == ctx.fld.v(2 * (h - e))))
                                  return "pair " + A.to_string() + ", " + B.to_string();
                          }
                  }
                  return "";
              });

    // 7. LHom functional equation, symbolic
    criterion(7, "LHom functional equation for rank-1 twists on P^1, exact rational identity",
              []() -> std::string {
                  for (long q : {2L, 3L, 4L}) {
                      FeqResult r = feq_check(CurveData::p1(q), ScalarField::numeric(q),
                                              var_id("t"), var_id("lam"), var_id("mu"));
                      if (!r.pass) return "q=" + std::to_string(q) + ": " + r.detail;
                  }
                  FeqResult rs = feq_check(CurveData::p1(2), ScalarField::symbolic(), var_id("t"),
                                           var_id("lam"), var_id("mu"));
                  if (!rs.pass) return "symbolic mode: " + rs.detail;
                  return "";
              });

    // 8. Quadratic shuffle relations + Eisenstein functional equation
    criterion(8, "quadratic relations and Eisenstein functional equation, |d| <= 3, q in {2,4}",
              []() -> std::string {
                  for (long q : {2L, 4L}) {
                      SuiteConfig cfg;
                      cfg.q = q;
                      cfg.window = 3;
                      std::string w = suite_result(verify_eisenstein_feq(cfg));
                      if (!w.empty()) return "q=" + std::to_string(q) + ": " + w;
                  }
                  return "";
              });

    // 9. Constant-term formula
    criterion(9, "constant term of length-2 Eisenstein products, q=2, window |d| <= 3",
              []() -> std::string {
                  SuiteConfig cfg;
                  cfg.q = 2;
                  cfg.window = 3;
                  return suite_result(verify_constant_term(cfg));
              });

    // 10. Main theorem at P^1
    criterion(10, "main isomorphism: relation lattices, omega-intertwining, full rank; q in {2,4}",
              []() -> std::string {
                  for (long q : {2L, 4L}) {
                      SuiteConfig cfg;
                      cfg.q = q;
                      cfg.gen_lo = -2;
                      cfg.gen_hi = 2;
                      cfg.max_length = 3;
                      cfg.window = 3;
                      std::string w = suite_result(verify_main_p1(cfg));
                      if (!w.empty()) return "q=" + std::to_string(q) + ": " + w;
                  }
                  return "";
              });

    // 11. Psi-series lemma and M-operator involutivity
    criterion(11, "psi-series commutation to bidegree (3,3) and M-involutivity, q=2",
              []() -> std::string {
                  SuiteConfig cfg;
                  cfg.q = 2;
                  cfg.window = 3;
                  return suite_result(verify_psif_mop(cfg));
              });

    // 12. Regularity of symmetric-shuffle products
    criterion(12, "symmetric-shuffle products under lambda~ are Laurent polynomials",
              []() -> std::string {
                  ScalarField fld = ScalarField::numeric(2);
                  CurveData X = CurveData::p1(2);
                  Kernel lt = curve_kernel_lambda_p1(X, fld, true);
                  if (!lambda_pole_ok(lt.entry(0, 0))) return "lambda~ pole check failed";
                  for (auto gens : {std::vector<std::pair<int, int>>{{0, 1}, {0, 0}},
                                    std::vector<std::pair<int, int>>{{0, 2}, {0, -1}},
                                    std::vector<std::pair<int, int>>{{0, 1}, {0, 0}, {0, -1}},
                                    std::vector<std::pair<int, int>>{{0, 2}, {0, 0}, {0, -2}}}) {
                      if (!is_laurent_polynomial(sym_shuffle_chain(gens, lt, fld)))
                          return "product is not a Laurent polynomial";
                  }
                  // negative control: second-order diagonal pole
                  Kernel bad(fld);
                  bad.set(0, 0, lt.entry(0, 0) / RationalFunction::parse("1-z2/z1", fld));
                  if (lambda_pole_ok(bad.entry(0, 0))) return "bad kernel passed the pole check";
                  if (is_laurent_polynomial(sym_shuffle_mul(ShuffleElement::generator(0, 1, fld),
                                                            ShuffleElement::generator(0, 0, fld),
                                                            bad)))
                      return "second-order pole product unexpectedly regular";
                  return "";
              });

    std::printf("%s: %d of 12 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
