#include "hallcurve/finmod.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hallcurve/util.hpp"

namespace hc {

// --- partitions -----------------------------------------------------------

int partition_weight(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

Partition conjugate_partition(const Partition& p) {
    Partition c;
    for (int i = 1; p.empty() ? false : i <= p[0]; ++i) {
        int cnt = 0;
        for (int part : p) cnt += part >= i;
        c.push_back(cnt);
    }
    return c;
}

std::string partition_to_string(const Partition& p) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ']';
    return os.str();
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(rest, maxpart); k >= 1; --k) {
            cur.push_back(k);
            rec(rest - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

// --- finite fields ----------------------------------------------------------

namespace {

// built-in moduli, coefficients low-to-high; base fields have q <= 9 but
// local residue fields at higher-degree places go up to 81
std::vector<int> builtin_modulus(int p, int k) {
    if (k == 1) return {0, 1};  // x
    if (p == 2 && k == 2) return {1, 1, 1};              // x^2+x+1
    if (p == 2 && k == 3) return {1, 1, 0, 1};           // x^3+x+1
    if (p == 2 && k == 4) return {1, 1, 0, 0, 1};        // x^4+x+1
    if (p == 2 && k == 5) return {1, 0, 1, 0, 0, 1};     // x^5+x^2+1
    if (p == 2 && k == 6) return {1, 1, 0, 0, 0, 0, 1};  // x^6+x+1
    if (p == 3 && k == 2) return {1, 0, 1};              // x^2+1
    if (p == 3 && k == 3) return {1, 2, 0, 1};           // x^3+2x+1
    if (p == 3 && k == 4) return {2, 1, 0, 0, 1};        // x^4+x+2
    if (p == 5 && k == 2) return {1, 1, 1};              // x^2+x+1
    if (p == 7 && k == 2) return {3, 1, 1};              // x^2+x+3
    throw guard_error("no built-in field table for this prime power");
}

// irreducibility over F_p by trial division (k <= 6, p <= 7: cheap)
bool is_irreducible_fp(const std::vector<int>& f, int p) {
    int k = static_cast<int>(f.size()) - 1;
    // enumerate monic divisors of degree 1..k/2
    for (int d = 1; 2 * d <= k; ++d) {
        long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long idx = 0; idx < count; ++idx) {
            std::vector<int> g(d + 1, 0);
            g[d] = 1;
            long rest = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = static_cast<int>(rest % p);
                rest /= p;
            }
            // remainder of f mod g over F_p
            std::vector<int> a = f;
            while (static_cast<int>(a.size()) >= d + 1) {
                int c = a.back();
                size_t off = a.size() - g.size();
                for (size_t i = 0; i < g.size(); ++i)
                    a[off + i] = ((a[off + i] - c * g[i]) % p + p) % p;
                while (!a.empty() && a.back() == 0) a.pop_back();
            }
            if (a.empty()) return false;
        }
    }
    return true;
}

}  // namespace

Fq::Fq(long q) : q_(q) {
    if (q < 2 || q > 81) throw guard_error("finite field tables support 2 <= q <= 81");
    p_ = 2;
    while (q % p_ != 0) ++p_;
    k_ = 0;
    long t = q;
    while (t > 1) {
        if (t % p_ != 0) throw guard_error("q is not a prime power");
        t /= p_;
        ++k_;
    }
    mod_ = builtin_modulus(p_, k_);
    if (k_ >= 2 && !is_irreducible_fp(mod_, p_))
        throw internal_error("built-in modulus is reducible");
    auto digits = [&](int a) {
        std::vector<int> d(k_);
        for (int i = 0; i < k_; ++i) {
            d[i] = a % p_;
            a /= p_;
        }
        return d;
    };
    auto undig = [&](const std::vector<int>& d) {
        int a = 0;
        for (int i = k_ - 1; i >= 0; --i) a = a * p_ + d[i];
        return a;
    };
    add_.resize(q * q);
    mul_.resize(q * q);
    neg_.resize(q);
    for (int a = 0; a < q; ++a) {
        auto da = digits(a);
        std::vector<int> dn(k_);
        for (int i = 0; i < k_; ++i) dn[i] = (p_ - da[i]) % p_;
        neg_[a] = undig(dn);
        for (int b = 0; b < q; ++b) {
            auto db = digits(b);
            std::vector<int> ds(k_);
            for (int i = 0; i < k_; ++i) ds[i] = (da[i] + db[i]) % p_;
            add_[a * q + b] = undig(ds);
            std::vector<int> prod(2 * k_ - 1, 0);
            for (int i = 0; i < k_; ++i)
                for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
            for (int d = 2 * k_ - 2; d >= k_; --d) {
                int c = prod[d];
                if (c == 0) continue;
                prod[d] = 0;
                for (int i = 0; i < k_; ++i)
                    prod[d - k_ + i] = ((prod[d - k_ + i] - c * mod_[i]) % p_ + p_ * p_) % p_;
            }
            prod.resize(k_);
            mul_[a * q + b] = undig(prod);
        }
    }
}

int Fq::inv(int a) const {
    if (a == 0) throw parse_error("inverse of zero field element");
    for (int b = 1; b < q_; ++b)
        if (mul(a, b) == 1) return b;
    throw internal_error("field element without inverse");
}

// --- cyclic component rings O/pi^k ------------------------------------------
// One table set per (q, k): addition, multiplication by pi, field scalars.

namespace {

struct CyclicRing {
    long q, size;
    int len;
    std::vector<int32_t> add;   // size*size (only when size <= table cap)
    std::vector<int32_t> pi;    // size
    std::vector<int32_t> smul;  // q*size
    bool has_add_table = false;

    long add_slow(const Fq& F, long a, long b) const {
        long r = 0, mult = 1;
        for (int d = 0; d < len; ++d) {
            r += static_cast<long>(F.add(static_cast<int>(a % q), static_cast<int>(b % q))) * mult;
            a /= q;
            b /= q;
            mult *= q;
        }
        return r;
    }
};

constexpr long kAddTableCap = 4096;  // per-component dense addition tables

std::mutex g_ring_mu;
std::map<std::pair<long, int>, CyclicRing> g_rings;

const CyclicRing& cyclic_ring(const Fq& F, int len) {
    std::lock_guard lock(g_ring_mu);
    auto key = std::make_pair(F.q(), len);
    auto it = g_rings.find(key);
    if (it != g_rings.end()) return it->second;
    CyclicRing r;
    r.q = F.q();
    r.len = len;
    r.size = 1;
    for (int i = 0; i < len; ++i) r.size *= r.q;
    r.pi.resize(r.size);
    for (long a = 0; a < r.size; ++a) r.pi[a] = static_cast<int32_t>((a * r.q) % r.size);
    r.smul.resize(r.q * r.size);
    for (int c = 0; c < r.q; ++c)
        for (long a = 0; a < r.size; ++a) {
            long v = 0, aa = a, mult = 1;
            for (int d = 0; d < len; ++d) {
                v += static_cast<long>(F.mul(c, static_cast<int>(aa % r.q))) * mult;
                aa /= r.q;
                mult *= r.q;
            }
            r.smul[c * r.size + a] = static_cast<int32_t>(v);
        }
    if (r.size <= kAddTableCap) {
        r.has_add_table = true;
        r.add.resize(r.size * r.size);
        for (long a = 0; a < r.size; ++a)
            for (long b = 0; b < r.size; ++b)
                r.add[a * r.size + b] = static_cast<int32_t>(r.add_slow(F, a, b));
    }
    return g_rings.emplace(key, std::move(r)).first->second;
}

}  // namespace

// --- FinModule -------------------------------------------------------------

FinModule::FinModule(Partition lambda, long qx) : lam_(std::move(lambda)), F_(qx) {
    std::sort(lam_.begin(), lam_.end(), std::greater<int>());
    size_ = 1;
    for (int part : lam_) {
        long r = 1;
        for (int i = 0; i < part; ++i) r *= qx;
        radix_.push_back(r);
        offset_.push_back(size_);
        size_ *= r;
        rings_.push_back(&cyclic_ring(F_, part));
    }
    if (lam_.empty()) size_ = 1;
}

long FinModule::add(long a, long b) const {
    long r = 0;
    for (size_t i = 0; i < lam_.size(); ++i) {
        const CyclicRing& ring = *static_cast<const CyclicRing*>(rings_[i]);
        long pa = (a / offset_[i]) % radix_[i], pb = (b / offset_[i]) % radix_[i];
        long pr = ring.has_add_table ? ring.add[pa * ring.size + pb] : ring.add_slow(F_, pa, pb);
        r += pr * offset_[i];
    }
    return r;
}

long FinModule::neg(long a) const {
    // -a = (p-1) * a repeated: char p, so -1 = p-1 as a field scalar
    int m1 = F_.neg(1);
    return scalar_mul(m1, a);
}

long FinModule::scalar_mul(int c, long a) const {
    long r = 0;
    for (size_t i = 0; i < lam_.size(); ++i) {
        const CyclicRing& ring = *static_cast<const CyclicRing*>(rings_[i]);
        long pa = (a / offset_[i]) % radix_[i];
        r += static_cast<long>(ring.smul[c * ring.size + pa]) * offset_[i];
    }
    return r;
}

long FinModule::mul_pi(long a) const {
    long r = 0;
    for (size_t i = 0; i < lam_.size(); ++i) {
        long pa = (a / offset_[i]) % radix_[i];
        r += static_cast<long>((pa * F_.q()) % radix_[i]) * offset_[i];
    }
    return r;
}

long FinModule::generator(size_t i) const { return offset_[i]; }

std::vector<long> FinModule::annihilator(int k) const {
    std::vector<long> out;
    for (long x = 0; x < size_; ++x) {
        long y = x;
        for (int i = 0; i < k && y; ++i) y = mul_pi(y);
        if (y == 0) out.push_back(x);
    }
    return out;
}

// --- submodules -------------------------------------------------------------

namespace {

// O-span of a single element: all f(pi) * x
std::vector<long> cyclic_orbit(const FinModule& M, long x) {
    // pi-power multiples of x
    std::vector<long> basis;
    long y = x;
    while (y != 0) {
        basis.push_back(y);
        y = M.mul_pi(y);
    }
    std::vector<long> orbit{0};
    for (long b : basis) {
        std::vector<long> next;
        next.reserve(orbit.size() * M.field().q());
        for (long c : orbit)
            for (int coef = 0; coef < M.field().q(); ++coef)
                next.push_back(coef == 0 ? c : M.add(c, M.scalar_mul(coef, b)));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        orbit = std::move(next);
    }
    return orbit;
}

// join of a submodule (sorted, closed) with a cyclic orbit (closed)
Submodule join(const FinModule& M, const Submodule& S, const std::vector<long>& C) {
    std::vector<char> in(M.size(), 0);
    for (long c : C)
        for (long s : S) in[M.add(s, c)] = 1;
    Submodule out;
    out.reserve(S.size() * C.size());
    for (long x = 0; x < M.size(); ++x)
        if (in[x]) out.push_back(x);
    return out;
}

}  // namespace

Submodule submodule_closure(const FinModule& M, std::vector<long> gens) {
    Submodule S{0};
    for (long g : gens) {
        if (std::binary_search(S.begin(), S.end(), g)) continue;
        S = join(M, S, cyclic_orbit(M, g));
    }
    return S;
}

std::vector<Submodule> enumerate_submodules(const FinModule& M) {
    if (M.size() > finmod_guards().max_module_size)
        throw guard_error("submodule enumeration: module size " + std::to_string(M.size()) +
                          " exceeds guard");
    // distinct cyclic submodules are the join-generators of the lattice
    std::vector<std::vector<long>> atoms;
    {
        std::set<Submodule> seen;
        for (long x = 1; x < M.size(); ++x) {
            std::vector<long> orb = cyclic_orbit(M, x);
            Submodule s(orb.begin(), orb.end());
            if (seen.insert(s).second) atoms.push_back(orb);
        }
    }
    std::map<Submodule, size_t> seen;
    std::vector<Submodule> all;
    all.push_back(Submodule{0});
    seen.emplace(all[0], 0);
    std::vector<size_t> frontier{0};
    while (!frontier.empty()) {
        // parallel join candidates, deterministic ordered merge
        std::vector<std::vector<Submodule>> results(frontier.size());
        parallel_index(frontier.size(), [&](size_t fi) {
            const Submodule base = all[frontier[fi]];
            for (const auto& atom : atoms) {
                if (std::includes(base.begin(), base.end(), atom.begin(), atom.end())) continue;
                results[fi].push_back(join(M, base, atom));
            }
        });
        std::vector<size_t> next;
        for (auto& batch : results)
            for (auto& n : batch) {
                auto [it, inserted] = seen.emplace(std::move(n), all.size());
                if (inserted) {
                    all.push_back(it->first);
                    next.push_back(all.size() - 1);
                }
            }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    return all;
}

namespace {

int log_q(long n, long q) {
    int k = 0;
    while (n > 1) {
        if (n % q != 0) throw internal_error("subgroup size not a power of q");
        n /= q;
        ++k;
    }
    return k;
}

Partition partition_from_kernel_dims(const std::vector<int>& k) {
    // k[i] = dim ker(pi^i); conjugate parts are the increments
    Partition conj;
    for (size_t i = 1; i < k.size(); ++i) {
        int d = k[i] - k[i - 1];
        if (d > 0) conj.push_back(d);
    }
    return conjugate_partition(conj);
}

}  // namespace

Partition classify_submodule(const FinModule& M, const Submodule& N) {
    std::vector<int> dims{0};
    int maxlen = M.lambda().empty() ? 0 : M.lambda()[0];
    std::vector<long> cur(N.begin(), N.end());
    for (int i = 1; i <= maxlen; ++i) {
        long cnt = 0;
        for (long& x : cur) {
            x = M.mul_pi(x);
            cnt += x == 0;
        }
        dims.push_back(log_q(cnt, M.field().q()));
    }
    return partition_from_kernel_dims(dims);
}

Partition classify_quotient(const FinModule& M, const Submodule& N) {
    std::vector<char> in(M.size(), 0);
    for (long x : N) in[x] = 1;
    std::vector<int> dims{0};
    int maxlen = M.lambda().empty() ? 0 : M.lambda()[0];
    std::vector<long> cur(M.size());
    std::iota(cur.begin(), cur.end(), 0);
    for (int i = 1; i <= maxlen; ++i) {
        long cnt = 0;
        for (long& y : cur) {
            y = M.mul_pi(y);
            cnt += in[y];
        }
        dims.push_back(log_q(cnt / static_cast<long>(N.size()), M.field().q()));
    }
    return partition_from_kernel_dims(dims);
}

// --- guards / census cache ---------------------------------------------------

FinmodGuards& finmod_guards() {
    static FinmodGuards g;
    return g;
}

namespace {
std::mutex g_census_mu;
std::map<std::pair<Partition, long>, CensusTable> g_census;
}  // namespace

const CensusTable& submodule_census(const Partition& lambda, long qx) {
    Partition key = lambda;
    std::sort(key.begin(), key.end(), std::greater<int>());
    {
        std::lock_guard lock(g_census_mu);
        auto it = g_census.find({key, qx});
        if (it != g_census.end()) return it->second;
    }
    FinModule M(key, qx);
    std::vector<Submodule> subs = enumerate_submodules(M);
    std::vector<std::pair<Partition, Partition>> classified(subs.size());
    parallel_index(subs.size(), [&](size_t i) {
        classified[i] = {classify_submodule(M, subs[i]), classify_quotient(M, subs[i])};
    });
    CensusTable table;
    for (auto& kv : classified) table[kv] += 1;
    std::lock_guard lock(g_census_mu);
    return g_census.emplace(std::make_pair(key, qx), std::move(table)).first->second;
}

// --- automorphism counts ------------------------------------------------------

Int aut_count_brute(const Partition& lambda, long qx) {
    FinModule M(lambda, qx);
    if (lambda.empty()) return 1;
    std::vector<std::vector<long>> choices;
    double total = 1;
    for (size_t i = 0; i < lambda.size(); ++i) {
        choices.push_back(M.annihilator(M.lambda()[i]));
        total *= static_cast<double>(choices.back().size());
    }
    if (total > static_cast<double>(finmod_guards().max_aut_brute))
        throw guard_error("aut brute-force enumeration exceeds guard");
    Int count = 0;
    std::vector<long> img(lambda.size());
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == lambda.size()) {
            Submodule span = submodule_closure(M, img);
            if (static_cast<long>(span.size()) == M.size()) count += 1;
            return;
        }
        for (long x : choices[i]) {
            img[i] = x;
            rec(i + 1);
        }
    };
    rec(0);
    return count;
}

namespace {

// Exhaustive count of surjective generator tuples, organized by the span
// lattice: transition counts t_l(S,T) = #{x in ann(pi^{lambda_l}) with
// S + O x = T} are solved from subset counts a_l(T) = #(ann cap T) by
// inclusion over the interval [S, T].
Int aut_count_span(const Partition& lambda, long qx) {
    FinModule M(lambda, qx);
    if (lambda.empty()) return 1;
    std::vector<Submodule> subs = enumerate_submodules(M);
    size_t ns = subs.size();
    size_t full = 0;
    for (size_t i = 0; i < ns; ++i)
        if (static_cast<long>(subs[i].size()) == M.size()) full = i;
    // inclusion structure (subs sorted; S subset T possible only if |S| divides |T|)
    std::vector<std::vector<uint32_t>> supersets(ns);
    for (size_t s = 0; s < ns; ++s)
        for (size_t t = 0; t < ns; ++t)
            if (subs[t].size() >= subs[s].size() &&
                std::includes(subs[t].begin(), subs[t].end(), subs[s].begin(), subs[s].end()))
                supersets[s].push_back(static_cast<uint32_t>(t));
    // per level: a_l(T) = #(ann(pi^{lambda_l}) cap T)
    size_t levels = lambda.size();
    std::vector<std::vector<long>> acount(levels, std::vector<long>(ns, 0));
    for (size_t l = 0; l < levels; ++l) {
        std::vector<char> ann(M.size(), 0);
        for (long x : M.annihilator(M.lambda()[l])) ann[x] = 1;
        for (size_t t = 0; t < ns; ++t) {
            long c = 0;
            for (long x : subs[t]) c += ann[x];
            acount[l][t] = c;
        }
    }
    // transitions from S at level l: t(S,T) over supersets T of S
    // solved in increasing |T| order within the supersets list
    std::map<std::pair<size_t, size_t>, Int> memo;
    std::function<Int(size_t, size_t)> count = [&](size_t s, size_t level) -> Int {
        if (level == levels) return s == full ? Int(1) : Int(0);
        auto it = memo.find({s, level});
        if (it != memo.end()) return it->second;
        const auto& sup = supersets[s];
        // t(S,T) = a(T) - sum_{T' in [S,T)} t(S,T'), computed in size order
        std::vector<std::pair<size_t, Int>> trans;
        trans.reserve(sup.size());
        std::vector<uint32_t> ordered = sup;
        std::sort(ordered.begin(), ordered.end(), [&](uint32_t a, uint32_t b) {
            if (subs[a].size() != subs[b].size()) return subs[a].size() < subs[b].size();
            return a < b;
        });
        std::map<size_t, Int> tmap;
        for (uint32_t t : ordered) {
            Int val = acount[level][t];
            for (uint32_t tp : ordered) {
                if (tp == t) break;
                if (std::includes(subs[t].begin(), subs[t].end(), subs[tp].begin(),
                                  subs[tp].end())) {
                    auto f = tmap.find(tp);
                    if (f != tmap.end()) val -= f->second;
                }
            }
            if (val != 0) tmap[t] = val;
        }
        Int total = 0;
        for (const auto& [t, cnt] : tmap) total += cnt * count(t, level + 1);
        memo[{s, level}] = total;
        return total;
    };
    return count(0, 0);
}

// Macdonald's closed form: |Aut M_lambda| = q^{sum (lambda'_i)^2} *
// prod_i phi_{m_i}(1/q), phi_m(t) = prod_{j<=m}(1 - t^j)
Int aut_closed_formula(const Partition& lambda, long qx) {
    Partition conj = conjugate_partition(lambda);
    long e = 0;
    for (int c : conj) e += static_cast<long>(c) * c;
    Int qe = 1;
    for (long i = 0; i < e; ++i) qe *= qx;
    Rat r(qe);
    std::map<int, int> mult;
    for (int part : lambda) mult[part] += 1;
    for (const auto& [part, m] : mult) {
        Int qj = 1;
        for (int j = 1; j <= m; ++j) {
            qj *= qx;
            r *= Rat(qj - 1, qj);
        }
    }
    r.canonicalize();
    if (r.get_den() != 1) throw internal_error("aut closed form not integral");
    return r.get_num();
}

std::mutex g_aut_mu;
std::map<std::pair<Partition, long>, Int> g_aut_cache;
std::map<long, bool> g_aut_certified;

void certify_aut_closed(long qx) {
    {
        std::lock_guard lock(g_aut_mu);
        auto it = g_aut_certified.find(qx);
        if (it != g_aut_certified.end()) {
            if (!it->second) throw internal_error("aut closed form failed certification");
            return;
        }
    }
    bool ok = true;
    int limit = finmod_guards().aut_certify_weight;
    for (int n = 1; n <= limit && ok; ++n)
        for (const Partition& p : partitions_of(n)) {
            FinModule M(p, qx);
            if (M.size() > finmod_guards().max_module_size) continue;
            if (aut_count_span(p, qx) != aut_closed_formula(p, qx)) {
                ok = false;
                break;
            }
        }
    std::lock_guard lock(g_aut_mu);
    g_aut_certified[qx] = ok;
    if (!ok) throw internal_error("aut closed form failed certification");
}

}  // namespace

Int aut_count_closed(const Partition& lambda, long qx) {
    certify_aut_closed(qx);
    return aut_closed_formula(lambda, qx);
}

Int aut_count(const Partition& lambda, long qx) {
    Partition key = lambda;
    std::sort(key.begin(), key.end(), std::greater<int>());
    {
        std::lock_guard lock(g_aut_mu);
        auto it = g_aut_cache.find({key, qx});
        if (it != g_aut_cache.end()) return it->second;
    }
    Int result;
    FinModule M(key, qx);
    if (M.size() <= finmod_guards().max_module_size &&
        partition_weight(key) <= finmod_guards().aut_certify_weight) {
        result = aut_count_span(key, qx);
    } else {
        result = aut_count_closed(key, qx);
    }
    std::lock_guard lock(g_aut_mu);
    g_aut_cache[{key, qx}] = result;
    return result;
}

// --- local Hall algebra -------------------------------------------------------

LocalHallElement hallx_mul(const LocalHallElement& f, const LocalHallElement& g, long qx,
                           const ScalarField& fld) {
    LocalHallElement out;
    for (const auto& [mu, cf] : f)
        for (const auto& [nu, cg] : g) {
            int n = partition_weight(mu) + partition_weight(nu);
            for (const Partition& lam : partitions_of(n)) {
                const CensusTable& tab = submodule_census(lam, qx);
                auto it = tab.find({mu, nu});
                if (it == tab.end()) continue;
                Scalar c = cf * cg * fld.integer(it->second);
                auto [pos, inserted] = out.emplace(lam, c);
                if (!inserted) {
                    pos->second += c;
                    if (pos->second.is_zero()) out.erase(pos);
                }
            }
        }
    return out;
}

std::map<std::pair<Partition, Partition>, Scalar> hallx_comul(const Partition& lambda, long qx,
                                                              const ScalarField& fld) {
    std::map<std::pair<Partition, Partition>, Scalar> out;
    const CensusTable& tab = submodule_census(lambda, qx);
    Scalar aut_l = fld.integer(aut_count(lambda, qx));
    for (const auto& [key, cnt] : tab) {
        out[key] = fld.integer(cnt) * fld.integer(aut_count(key.first, qx)) *
                   fld.integer(aut_count(key.second, qx)) / aut_l;
    }
    return out;
}

LocalHallElement hecke_generator(int r, long qx, const ScalarField& fld) {
    LocalHallElement e;
    if (r == 0) {
        e[Partition{}] = fld.one();
        return e;
    }
    Int w = 1;
    for (int i = 0; i < r * (r - 1) / 2; ++i) w *= qx;
    e[Partition(r, 1)] = fld.integer(w);
    return e;
}

// --- cyclic census and character values ---------------------------------------

std::map<std::pair<int, int>, Int> cyclic_cyclic_census(const Partition& lambda, long qx) {
    Partition lam = lambda;
    std::sort(lam.begin(), lam.end(), std::greater<int>());
    std::map<std::pair<int, int>, Int> out;
    if (lam.empty()) {
        out[{0, 0}] = 1;
        return out;
    }
    if (lam.size() > 2) return {};
    if (lam.size() == 1) {
        // submodules of the cyclic module are pi^k M, one per k
        for (int k = 0; k <= lam[0]; ++k) out[{lam[0] - k, k}] += 1;
        return out;
    }
    // two generators: enumerate cyclic submodules O y directly
    int a = lam[0], b = lam[1];
    const Fq F(qx);
    const CyclicRing& A = cyclic_ring(F, a);
    const CyclicRing& B = cyclic_ring(F, b);
    long size = A.size * B.size;
    auto addp = [&](long x, long y) -> long {
        long xa = x / B.size, xb = x % B.size, ya = y / B.size, yb = y % B.size;
        long ra = A.has_add_table ? A.add[xa * A.size + ya] : A.add_slow(F, xa, ya);
        long rb = B.has_add_table ? B.add[xb * B.size + yb] : B.add_slow(F, xb, yb);
        return ra * B.size + rb;
    };
    auto pip = [&](long x) -> long {
        return static_cast<long>(A.pi[x / B.size]) * B.size + B.pi[x % B.size];
    };
    auto smulp = [&](int c, long x) -> long {
        return static_cast<long>(A.smul[c * A.size + x / B.size]) * B.size +
               B.smul[c * B.size + x % B.size];
    };
    // orbit of y: all F-combinations of pi^i y
    std::vector<char> mark(size, 0);
    std::set<std::vector<long>> seen;
    std::vector<std::pair<std::vector<long>, int>> cyclics;  // (sorted orbit, order m)
    for (long y = 1; y < size; ++y) {
        std::vector<long> basis;
        long t = y;
        while (t != 0) {
            basis.push_back(t);
            t = pip(t);
        }
        std::vector<long> orbit{0};
        for (long bs : basis) {
            std::vector<long> next;
            next.reserve(orbit.size() * qx);
            for (long c : orbit)
                for (int coef = 0; coef < qx; ++coef)
                    next.push_back(coef == 0 ? c : addp(c, smulp(coef, bs)));
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            orbit = std::move(next);
        }
        int m = static_cast<int>(basis.size());
        if (seen.insert(orbit).second) cyclics.emplace_back(std::move(orbit), m);
    }
    for (const auto& [N, m] : cyclics) {
        std::fill(mark.begin(), mark.end(), 0);
        for (long x : N) mark[x] = 1;
        long cnt = 0;
        for (long x = 0; x < size; ++x) cnt += mark[pip(x)];
        int k1 = log_q(cnt / static_cast<long>(N.size()), qx);
        if (k1 > 1) continue;  // quotient needs > 1 generator
        int n = log_q(size / static_cast<long>(N.size()), qx);
        out[{m, n}] += 1;
    }
    return out;
}

Scalar char_value_rank1(const Scalar& rho, const Partition& lambda) {
    ScalarField fld{rho.mode(), rho.q()};
    if (lambda.empty()) return fld.one();
    if (lambda.size() > 1) return fld.zero();
    return (-rho).pow(lambda[0]);
}

Scalar char_value_rank2(const Scalar& rho1, const Scalar& rho2, const Partition& lambda, long qx) {
    ScalarField fld{rho1.mode(), rho1.q()};
    if (lambda.empty()) return fld.one();
    if (lambda.size() > 2) return fld.zero();
    auto cc = cyclic_cyclic_census(lambda, qx);
    Scalar aut_l = fld.integer(aut_count(lambda, qx));
    Scalar acc = fld.zero();
    for (const auto& [mn, cnt] : cc) {
        auto [m, n] = mn;
        Partition mu = m ? Partition{m} : Partition{};
        Partition nu = n ? Partition{n} : Partition{};
        Scalar coeff = fld.integer(cnt) * fld.integer(aut_count(mu, qx)) *
                       fld.integer(aut_count(nu, qx)) / aut_l;
        acc += coeff * char_value_rank1(rho1, mu) * char_value_rank1(rho2, nu);
    }
    return acc;
}

}  // namespace hc
