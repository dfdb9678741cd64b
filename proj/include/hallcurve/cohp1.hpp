#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallcurve/finmod.hpp"
#include "hallcurve/polyrat.hpp"
#include "hallcurve/witt.hpp"

namespace hc {

// Closed point of P^1 over F_q: infinity or a monic irreducible polynomial,
// coefficients low-to-high with the leading 1 included.
struct PlaceP1 {
    bool inf = false;
    std::vector<int> poly;  // empty when inf

    int degree() const { return inf ? 1 : static_cast<int>(poly.size()) - 1; }
    auto operator<=>(const PlaceP1&) const = default;
    std::string to_string() const;
    static PlaceP1 infinity() { return PlaceP1{true, {}}; }
    static PlaceP1 parse(const std::string& label, long q);
};

// inf plus all monic irreducibles of degree <= D.
std::vector<PlaceP1> places(long q, int D);

// Splitting type d_1 >= ... >= d_r.
using BundleP1 = std::vector<int>;
// Finite support map place -> partition (no empty partitions stored).
using TorsionP1 = std::map<PlaceP1, Partition>;

struct CoherentP1 {
    BundleP1 bundle;
    TorsionP1 torsion;

    int rank() const { return static_cast<int>(bundle.size()); }
    int degree() const;
    int torsion_degree() const;
    bool is_bundle() const { return torsion.empty(); }
    bool is_torsion() const { return bundle.empty(); }
    auto operator<=>(const CoherentP1&) const = default;
    std::string to_string() const;
    static CoherentP1 line(int d) { return CoherentP1{{d}, {}}; }
    static CoherentP1 of_bundle(BundleP1 b);
    static CoherentP1 of_torsion(TorsionP1 t);
    CoherentP1 dual() const;  // bundle degrees negate; torsion is self-dual
};

using HallElt = std::map<CoherentP1, Scalar>;
HallElt& hall_add(HallElt& a, const CoherentP1& key, const Scalar& c);
HallElt hall_scale(const HallElt& a, const Scalar& c);

struct CohGuards {
    long q_max = 4;
    int rank_max = 3;
    int degree_abs_max = 24;
    int torsion_degree_max = 6;
};
CohGuards& coh_guards();

// Session context: q plus the scalar field used for coefficients.
struct CohCtx {
    long q;
    ScalarField fld;

    static CohCtx numeric(long q) { return {q, ScalarField::numeric(q)}; }
};

// dim Hom / dim Ext^1 over F_q between coherent sheaves (closed forms,
// certified against explicit map enumeration for tiny inputs in the tests).
std::pair<int, int> hom_ext(const CoherentP1& a, const CoherentP1& b, long q);

// Euler form <(r,d),(r',d')> = v^{r d' - r' d + (1-g) r r'}.
Scalar euler_form_rd(std::pair<int, int> a, std::pair<int, int> b, int genus,
                     const ScalarField& fld);
Scalar euler_form(const CoherentP1& a, const CoherentP1& b, const CohCtx& ctx);
// Cartan form ((a,b)) = <a,b><b,a>.
Scalar cartan_form(const CoherentP1& a, const CoherentP1& b, const CohCtx& ctx);

// |Aut|: bundle part by the filtration formula, torsion by finmod, cross
// term q^{dim Hom(V,T)}.
Int aut_bundle(const BundleP1& b, long q);
Int aut_coherent(const CoherentP1& c, long q);

// --- saturated subsheaf counting (exact q-power recursions) ---------------
// number of coprime pairs/triples of homogeneous forms of the given degrees
Int coprime_tuples(const std::vector<int>& degs, long q);
// total number of line subsheaves O(e) of the bundle C (saturated or not is
// resolved by the caller); h = dim Hom(O(e), C)
int hom_dim_bundle_line(const BundleP1& C, int e);
// number of saturated line subsheaves isomorphic to O(e)
Int nsat_line_total(const BundleP1& C, int e, long q);
// saturated line subsheaves of a rank-3 bundle counted by quotient type
std::map<BundleP1, Int> nsat_line_by_quotient(const BundleP1& C, int e, long q);
// saturated rank-2 subsheaves of a rank-3 bundle counted by type, given the
// subsheaf degree
std::map<BundleP1, Int> nsat_rank2_by_type(const BundleP1& C, int vdeg, long q);

// g^C_{A,B}: subsheaves of C isomorphic to A with quotient isomorphic to B.
Int count_subsheaves(const CoherentP1& C, const CoherentP1& A, const CoherentP1& B, long q);

// Hall product (bilinear over supported basis-pair shapes; throws
// guard_error on unsupported ones).
HallElt hall_mul(const HallElt& f, const HallElt& g, const CohCtx& ctx);

// Torsion classes of degree n with their |Aut|.
std::vector<std::pair<TorsionP1, Int>> torsion_census_global(long q, int n);
// all effective divisors of degree n, as divisorial torsion classes
std::vector<std::pair<TorsionP1, Int>> divisor_census(long q, int n);

// Rank-1 twist character chi_lambda: eigenvalue data for eigenforms
// f(O(d)) = lambda^{-d}; chi value on a torsion class.
Scalar character_on_torsion(const Scalar& lambda, const TorsionP1& T, const CohCtx& ctx);

// Hecke operators on bundle-only elements of rank <= 2.
HallElt hecke_T(const TorsionP1& F, const HallElt& f, const CohCtx& ctx,
                int out_deg_lo, int out_deg_hi);
HallElt hecke_T_dual(const TorsionP1& F, const HallElt& f, const CohCtx& ctx,
                     int out_deg_lo, int out_deg_hi);

// Windowed comultiplication restricted to bundle (x) bundle output.
using Tensor2 = std::map<std::pair<CoherentP1, CoherentP1>, Scalar>;
Tensor2 comult_window(const HallElt& f, int r1, int r2, int deg_lo, int deg_hi,
                      const CohCtx& ctx);
// Delta_coh components keeping torsion: (r,0) split of a rank-r class
// (bundle subsheaf, torsion quotient), torsion degree <= tor_max.
Tensor2 comult_coh_r0(const HallElt& f, int tor_max, const CohCtx& ctx);

// omega_n = multidegree (1,...,1) part of the iterated comultiplication.
std::map<std::vector<int>, Scalar> omega(const HallElt& f, int n, int deg_lo, int deg_hi,
                                         const CohCtx& ctx);

// Eisenstein coefficients E_{f,d} = lambda^{-d} 1_{O(d)}.
Scalar eisenstein_coeff(const Scalar& lambda, int d);

// Psi series coefficient of degree n: sum over torsion classes of
// chi(T) |Aut T| 1_T.
HallElt psi_coefficient(const Scalar& lambda, int n, const CohCtx& ctx);

// Twisted product on H (x) H (eq. with the Cartan factor) followed by the
// bundle projection: the building block of the principal intertwiner.
Tensor2 tensor2_twisted_mul(const Tensor2& x, const Tensor2& y, const CohCtx& ctx);
Tensor2 tensor2_project_bundle(const Tensor2& x);

// M-operator on a rank-1 (x) rank-1 basis pair, torsion shifts <= delta_max.
Tensor2 m_operator_pair(int a, int b, int delta_max, const CohCtx& ctx);

}  // namespace hc
