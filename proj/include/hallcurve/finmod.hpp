#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hallcurve/scalar.hpp"

namespace hc {

// Partition: weakly decreasing positive parts.
using Partition = std::vector<int>;
int partition_weight(const Partition& p);
Partition conjugate_partition(const Partition& p);
std::string partition_to_string(const Partition& p);
std::vector<Partition> partitions_of(int n);

// F_q for q <= 9, elements encoded as 0..q-1 (base-p digit vectors over the
// built-in modulus), with dense add/mul tables.
class Fq {
public:
    explicit Fq(long q);
    long q() const { return q_; }
    int p() const { return p_; }
    int deg() const { return k_; }
    int add(int a, int b) const { return add_[a * q_ + b]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int inv(int a) const;
    const std::vector<int>& modulus() const { return mod_; }

private:
    long q_;
    int p_, k_;
    std::vector<int> mod_;  // monic irreducible, coefficient list, degree k
    std::vector<int> add_, mul_, neg_;
};

// Concrete finite module M_lambda = (+) O/pi^{lambda_i} over O = F_qx[[pi]].
// Elements are ids 0..q^{|lambda|}-1, mixed-radix over pi-adic digit strings.
class FinModule {
public:
    FinModule(Partition lambda, long qx);

    const Partition& lambda() const { return lam_; }
    const Fq& field() const { return F_; }
    long size() const { return size_; }
    int weight() const { return partition_weight(lam_); }

    long add(long a, long b) const;
    long neg(long a) const;
    long scalar_mul(int c, long a) const;  // field scalar
    long mul_pi(long a) const;
    // generator of the i-th cyclic summand
    long generator(size_t i) const;
    size_t parts() const { return lam_.size(); }

    // annihilator of pi^k: ids x with pi^k x = 0
    std::vector<long> annihilator(int k) const;

private:
    Partition lam_;
    Fq F_;
    long size_;
    std::vector<long> radix_;         // per-part sizes q^{lambda_i}
    std::vector<long> offset_;        // mixed-radix strides
    std::vector<const void*> rings_;  // cached per-part table sets
};

// Submodule as a sorted vector of element ids.
using Submodule = std::vector<long>;

// Closure of a set of elements under +, field scalars and pi.
Submodule submodule_closure(const FinModule& M, std::vector<long> gens);
// All submodules of M (BFS over single-generator extensions).
std::vector<Submodule> enumerate_submodules(const FinModule& M);

// Isomorphism type of a submodule / quotient via pi-power kernels.
Partition classify_submodule(const FinModule& M, const Submodule& N);
Partition classify_quotient(const FinModule& M, const Submodule& N);

// Feasibility guards, overridable.
struct FinmodGuards {
    long max_module_size = 1 << 14;    // census enumeration
    long max_aut_brute = 1 << 21;      // plain endomorphism enumeration
    int aut_certify_weight = 4;        // closed form certified up to here
};
FinmodGuards& finmod_guards();

// g^lambda_{mu,nu} for all (mu, nu): submodule type -> quotient type counts.
using CensusTable = std::map<std::pair<Partition, Partition>, Int>;
const CensusTable& submodule_census(const Partition& lambda, long qx);

// |Aut M_lambda|: span-memoized exhaustive count (census-sized inputs),
// plain enumeration for tiny inputs, closed form beyond the guard once it
// has been certified against the exhaustive count at this q.
Int aut_count(const Partition& lambda, long qx);
Int aut_count_brute(const Partition& lambda, long qx);
Int aut_count_closed(const Partition& lambda, long qx);

// Local Hall algebra A_x over the chosen scalar field.
using LocalHallElement = std::map<Partition, Scalar>;
LocalHallElement hallx_mul(const LocalHallElement& f, const LocalHallElement& g, long qx,
                           const ScalarField& fld);
// Delta(1_lambda) with the |Aut| weights; keys are (mu, nu) pairs.
std::map<std::pair<Partition, Partition>, Scalar> hallx_comul(const Partition& lambda, long qx,
                                                              const ScalarField& fld);
// b_{x,r} = q_x^{r(r-1)/2} 1_{(1^r)}
LocalHallElement hecke_generator(int r, long qx, const ScalarField& fld);

// Counts of pairs (cyclic submodule of type (m), cyclic quotient of type (n))
// inside a <= 2-row M_lambda; the basis of rank <= 2 character values.
std::map<std::pair<int, int>, Int> cyclic_cyclic_census(const Partition& lambda, long qx);

// chi(1_lambda) for the rank-1 character with local root rho: zero unless
// lambda is cyclic, (-rho)^{|lambda|} on (n).  Certified against the
// b-monomial expansion in the tests.
Scalar char_value_rank1(const Scalar& rho, const Partition& lambda);
// Rank-2 character boxplus of two rank-1 roots, via the comultiplication.
Scalar char_value_rank2(const Scalar& rho1, const Scalar& rho2, const Partition& lambda, long qx);

}  // namespace hc
