#include "hallcurve/polyrat.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace hc {

// --- variable registry --------------------------------------------------

namespace {
std::mutex g_var_mu;
std::vector<std::string> g_var_names;
std::unordered_map<std::string, int> g_var_ids;
}  // namespace

int var_id(const std::string& name) {
    std::lock_guard lock(g_var_mu);
    auto it = g_var_ids.find(name);
    if (it != g_var_ids.end()) return it->second;
    int id = static_cast<int>(g_var_names.size());
    g_var_names.push_back(name);
    g_var_ids.emplace(name, id);
    return id;
}

const std::string& var_name(int id) {
    std::lock_guard lock(g_var_mu);
    return g_var_names.at(id);
}

// --- Monomial -------------------------------------------------------------

Monomial Monomial::var(int id, int exp) {
    Monomial m;
    if (exp != 0) m.e.emplace_back(id, exp);
    return m;
}

int Monomial::exp_of(int id) const {
    for (const auto& [v, x] : e)
        if (v == id) return x;
    return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    auto a = e.begin(), b = o.e.begin();
    while (a != e.end() || b != o.e.end()) {
        if (b == o.e.end() || (a != e.end() && a->first < b->first)) {
            r.e.push_back(*a++);
        } else if (a == e.end() || b->first < a->first) {
            r.e.push_back(*b++);
        } else {
            int x = a->second + b->second;
            if (x != 0) r.e.emplace_back(a->first, x);
            ++a;
            ++b;
        }
    }
    return r;
}

Monomial Monomial::inverse() const {
    Monomial r = *this;
    for (auto& [v, x] : r.e) x = -x;
    return r;
}

Monomial Monomial::pow(int k) const {
    Monomial r;
    if (k == 0) return r;
    r = *this;
    for (auto& [v, x] : r.e) x *= k;
    return r;
}

std::vector<int> Monomial::vars() const {
    std::vector<int> r;
    for (const auto& [v, x] : e) r.push_back(v);
    return r;
}

std::string Monomial::to_string() const {
    if (e.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, x] : e) {
        if (!first) os << '*';
        first = false;
        os << var_name(v);
        if (x != 1) os << '^' << x;
    }
    return os.str();
}

// --- LaurentPoly ------------------------------------------------------

LaurentPoly LaurentPoly::constant(const Scalar& c) {
    LaurentPoly p(ScalarField{c.mode(), c.q()});
    if (!c.is_zero()) p.t_[Monomial::one()] = c;
    return p;
}

LaurentPoly LaurentPoly::term(const Scalar& c, const Monomial& m) {
    LaurentPoly p(ScalarField{c.mode(), c.q()});
    if (!c.is_zero()) p.t_[m] = c;
    return p;
}

Scalar LaurentPoly::constant_value() const {
    if (t_.empty()) return fld_.zero();
    return t_.begin()->second;
}

void LaurentPoly::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(fld_);
    for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
    return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [m, c] : o.t_) r.add_term(m, c);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r(fld_);
    for (const auto& [m1, c1] : t_)
        for (const auto& [m2, c2] : o.t_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

LaurentPoly LaurentPoly::scaled(const Scalar& c) const {
    LaurentPoly r(fld_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : t_) r.t_.emplace(m, v * c);
    return r;
}

LaurentPoly LaurentPoly::shifted(const Monomial& m) const {
    LaurentPoly r(fld_);
    for (const auto& [mm, v] : t_) r.t_.emplace(mm * m, v);
    return r;
}

LaurentPoly LaurentPoly::substitute(const std::map<int, Subst>& s) const {
    LaurentPoly r(fld_);
    for (const auto& [m, c] : t_) {
        Scalar coeff = c;
        Monomial out;
        for (const auto& [v, x] : m.e) {
            auto it = s.find(v);
            if (it == s.end()) {
                out = out * Monomial::var(v, x);
            } else {
                coeff *= it->second.scale.pow(x);
                out = out * Monomial::var(it->second.target, it->second.power * x);
            }
        }
        r.add_term(out, coeff);
    }
    return r;
}

std::vector<int> LaurentPoly::vars() const {
    std::vector<int> r;
    for (const auto& [m, c] : t_)
        for (const auto& [v, x] : m.e)
            if (std::find(r.begin(), r.end(), v) == r.end()) r.push_back(v);
    std::sort(r.begin(), r.end());
    return r;
}

std::string LaurentPoly::to_string() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print in reverse map order so higher powers tend to come first
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        std::string cs = it->second.to_string();
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        os << (first ? (neg ? "-" : "") : (neg ? "-" : "+"));
        first = false;
        bool needs_paren = cs.find('+') != std::string::npos ||
                           cs.find('-') != std::string::npos || cs.find('/') != std::string::npos;
        if (it->first.is_one()) {
            os << (needs_paren ? "(" + cs + ")" : cs);
        } else {
            if (cs != "1") os << (needs_paren ? "(" + cs + ")" : cs) << '*';
            os << it->first.to_string();
        }
    }
    return os.str();
}

// --- RationalFunction ----------------------------------------------------

RationalFunction::RationalFunction(ScalarField fld)
    : num_(fld), den_(LaurentPoly::constant(fld.one())) {}

RationalFunction::RationalFunction(LaurentPoly num, LaurentPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw parse_error("rational function with zero denominator");
    normalize();
}

RationalFunction RationalFunction::constant(const Scalar& c) {
    return from_poly(LaurentPoly::constant(c));
}

RationalFunction RationalFunction::from_poly(LaurentPoly p) {
    ScalarField f = p.field();
    return RationalFunction(std::move(p), LaurentPoly::constant(f.one()));
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = LaurentPoly::constant(field().one());
        return;
    }
    // pull out the denominator's leading coefficient and monomial gcd
    const auto& lead = *den_.terms().rbegin();
    Scalar c = lead.second;
    Monomial g = den_.terms().begin()->first;  // any common monomial shift
    for (const auto& [m, v] : den_.terms()) {
        Monomial ng;
        for (const auto& [var, x] : g.e) {
            int y = m.exp_of(var);
            int keep = (x > 0) ? std::min(x, y) : std::max(x, y);
            if ((x > 0 && y > 0 && keep > 0) || (x < 0 && y < 0 && keep < 0))
                ng.e.emplace_back(var, keep);
        }
        g = ng;
        if (g.is_one()) break;
    }
    if (!c.is_one() || !g.is_one()) {
        Scalar ci = c.inverse();
        Monomial gi = g.inverse();
        num_ = num_.scaled(ci).shifted(gi);
        den_ = den_.scaled(ci).shifted(gi);
    }
    // cancel a common binomial denominator factor when num is a scalar
    // multiple of den (cheap blowup control; correctness never needs gcd)
    if (!num_.is_zero() && num_.terms().size() == den_.terms().size()) {
        Scalar ratio = num_.terms().begin()->second / den_.terms().begin()->second;
        Monomial shift = num_.terms().begin()->first * den_.terms().begin()->first.inverse();
        if ((num_ - den_.scaled(ratio).shifted(shift)).is_zero()) {
            num_ = LaurentPoly::term(ratio, shift);
            den_ = LaurentPoly::constant(field().one());
        }
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    return *this * o.inverse();
}

RationalFunction RationalFunction::inverse() const {
    if (num_.is_zero()) throw parse_error("division by zero rational function");
    return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::pow(long k) const {
    RationalFunction base = k < 0 ? inverse() : *this;
    long n = std::abs(k);
    RationalFunction r = RationalFunction::constant(field().one());
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

bool RationalFunction::eq(const RationalFunction& o) const {
    return (num_ * o.den_ - o.num_ * den_).is_zero();
}

RationalFunction RationalFunction::substitute(const std::map<int, LaurentPoly::Subst>& s) const {
    LaurentPoly d = den_.substitute(s);
    if (d.is_zero()) throw parse_error("substitution collapses denominator to zero");
    return RationalFunction(num_.substitute(s), d);
}

RationalFunction RationalFunction::symmetrize(const std::vector<int>& vars) const {
    std::vector<int> perm(vars.size());
    std::iota(perm.begin(), perm.end(), 0);
    RationalFunction acc(field());
    do {
        std::map<int, LaurentPoly::Subst> s;
        for (size_t i = 0; i < vars.size(); ++i)
            s[vars[i]] = {field().one(), vars[perm[i]], 1};
        acc += substitute(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

namespace {

// graded-lex monomial order: translation-invariant, so exact long division
// by a leading term terminates iff the division is exact
bool grlex_less(const Monomial& a, const Monomial& b) {
    long da = 0, db = 0;
    for (const auto& [v, x] : a.e) da += x;
    for (const auto& [v, x] : b.e) db += x;
    if (da != db) return da < db;
    auto ia = a.e.begin(), ib = b.e.begin();
    while (ia != a.e.end() || ib != b.e.end()) {
        int va = ia == a.e.end() ? INT32_MAX : ia->first;
        int vb = ib == b.e.end() ? INT32_MAX : ib->first;
        if (va < vb) return ia->second < 0;  // a has an extra (nonzero) exponent
        if (vb < va) return ib->second > 0;
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia;
        ++ib;
    }
    return false;
}

const std::pair<const Monomial, Scalar>& grlex_leading(const LaurentPoly& p) {
    auto best = p.terms().begin();
    for (auto it = std::next(p.terms().begin()); it != p.terms().end(); ++it)
        if (grlex_less(best->first, it->first)) best = it;
    return *best;
}

}  // namespace

bool RationalFunction::as_laurent_polynomial(LaurentPoly* out) const {
    if (num_.is_zero()) {
        if (out) *out = num_;
        return true;
    }
    LaurentPoly r = num_, q(field());
    const auto& dl = grlex_leading(den_);
    size_t steps = 0, cap = 65536;
    while (!r.is_zero()) {
        if (++steps > cap) return false;
        const auto& rl = grlex_leading(r);
        Monomial m = rl.first * dl.first.inverse();
        Scalar c = rl.second / dl.second;
        q.add_term(m, c);
        r = r - den_.scaled(c).shifted(m);
    }
    if (out) *out = q;
    return true;
}

std::string RationalFunction::to_string() const {
    std::ostringstream os;
    os << num_.to_string() << " | " << den_.to_string();
    return os.str();
}

// ratfun expression parser; accepts "num | den" or a single expression with
// scalars, named variables, + - * / ^ and parentheses.
namespace {

struct RfParser {
    const std::string& s;
    size_t pos = 0;
    ScalarField fld;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    long parse_int() {
        skip();
        bool neg = eat('-');
        skip();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw parse_error("ratfun parse: expected integer at " + std::to_string(pos));
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }
    RationalFunction atom() {
        skip();
        if (pos >= s.size()) throw parse_error("ratfun parse: unexpected end");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            RationalFunction e = expr();
            if (!eat(')')) throw parse_error("ratfun parse: missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int big = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                big = big * 10 + (s[pos++] - '0');
            return RationalFunction::constant(fld.integer(big));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                name += s[pos++];
            if (name == "v") return RationalFunction::constant(fld.v());
            return RationalFunction::from_poly(
                LaurentPoly::term(fld.one(), Monomial::var(var_id(name))));
        }
        throw parse_error(std::string("ratfun parse: unexpected character '") + c + "'");
    }
    RationalFunction factor() {
        skip();
        bool neg = false;
        while (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            if (s[pos] == '-') neg = !neg;
            ++pos;
            skip();
        }
        RationalFunction a = atom();
        skip();
        if (eat('^')) a = a.pow(parse_int());
        return neg ? -a : a;
    }
    RationalFunction term() {
        RationalFunction a = factor();
        for (;;) {
            skip();
            if (eat('*'))
                a = a * factor();
            else if (eat('/'))
                a = a / factor();
            else
                return a;
        }
    }
    RationalFunction expr() {
        RationalFunction a = term();
        for (;;) {
            skip();
            if (pos < s.size() && s[pos] == '+') {
                ++pos;
                a = a + term();
            } else if (pos < s.size() && s[pos] == '-') {
                ++pos;
                a = a - term();
            } else {
                return a;
            }
        }
    }
};

RationalFunction parse_side(const std::string& text, ScalarField fld) {
    RfParser p{text, 0, fld};
    RationalFunction r = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw parse_error("ratfun parse: trailing input at " + std::to_string(p.pos));
    return r;
}

}  // namespace

RationalFunction RationalFunction::parse(const std::string& text, ScalarField fld) {
    // top-level '|' splits numerator and denominator
    int depth = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (text[i] == '|' && depth == 0) {
            RationalFunction n = parse_side(text.substr(0, i), fld);
            RationalFunction d = parse_side(text.substr(i + 1), fld);
            return n / d;
        }
    }
    return parse_side(text, fld);
}

// --- window / region ---------------------------------------------------

void DegreeWindow::set(int var, int lo, int hi) {
    if (lo > hi) throw parse_error("degree window with lo > hi");
    b[var] = {lo, hi};
}

bool DegreeWindow::contains(const Monomial& m) const {
    for (const auto& [v, x] : m.e) {
        auto it = b.find(v);
        if (it == b.end()) {
            if (x != 0) return false;
        } else if (x < it->second.first || x > it->second.second) {
            return false;
        }
    }
    // variables with windows not containing 0 reject absent exponents
    for (const auto& [v, lh] : b)
        if ((lh.first > 0 || lh.second < 0) && m.exp_of(v) == 0) return false;
    return true;
}

std::string DegreeWindow::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, lh] : b) {
        if (!first) os << ',';
        first = false;
        os << var_name(v) << ":[" << lh.first << ',' << lh.second << ']';
    }
    return os.str();
}

bool region_small(const Monomial& m, const std::vector<int>& order) {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int x = m.exp_of(*it);
        if (x > 0) return true;
        if (x < 0) return false;
    }
    return false;
}

namespace {

// region total order: a < b iff b/a is region-small (b is "smaller in
// magnitude", i.e. later in the expansion)
bool region_precedes(const Monomial& a, const Monomial& b, const std::vector<int>& order) {
    return region_small(b * a.inverse(), order);
}

struct RegionRewrite {
    Scalar unit_c;
    Monomial unit_m;
    LaurentPoly g;  // den = unit_c * unit_m * (1 - g), every monomial of g region-small
};

RegionRewrite region_rewrite(const LaurentPoly& den, const std::vector<int>& order) {
    if (den.is_zero()) throw parse_error("expand_region: zero denominator");
    auto best = den.terms().begin();
    for (auto it = std::next(den.terms().begin()); it != den.terms().end(); ++it)
        if (region_precedes(it->first, best->first, order)) best = it;
    RegionRewrite rw{best->second, best->first, LaurentPoly(den.field())};
    LaurentPoly d = den.scaled(rw.unit_c.inverse()).shifted(rw.unit_m.inverse());
    for (const auto& [m, c] : d.terms()) {
        if (m.is_one()) continue;
        if (!region_small(m, order))
            throw parse_error("expand_region: denominator not expandable in region (term " +
                              m.to_string() + ")");
        rw.g.add_term(m, -c);
    }
    return rw;
}

}  // namespace

std::map<Monomial, Scalar> expand_region(const RationalFunction& f, const std::vector<int>& order,
                                         const DegreeWindow& window) {
    for (int v : f.num().vars())
        if (std::find(order.begin(), order.end(), v) == order.end())
            throw parse_error("expand_region: numerator variable outside region order");
    for (int v : f.den().vars())
        if (std::find(order.begin(), order.end(), v) == order.end())
            throw parse_error("expand_region: denominator variable outside region order");
    std::map<Monomial, Scalar> out;
    if (f.is_zero()) return out;

    RegionRewrite rw = region_rewrite(f.den(), order);
    // required contribution range per variable for the geometric part:
    // window minus numerator and unit shifts
    std::map<int, std::pair<long, long>> need;  // var -> [lo,hi]
    for (int v : order) {
        long lo = 0, hi = 0;
        auto it = window.b.find(v);
        if (it != window.b.end()) {
            lo = it->second.first;
            hi = it->second.second;
        }
        long nlo = 0, nhi = 0;
        bool first = true;
        for (const auto& [m, c] : f.num().terms()) {
            long x = m.exp_of(v);
            if (first) {
                nlo = nhi = x;
                first = false;
            } else {
                nlo = std::min(nlo, x);
                nhi = std::max(nhi, x);
            }
        }
        long u = rw.unit_m.exp_of(v);
        need[v] = {lo - u - nhi, hi - u - nlo};
    }
    // Per-monomial use bounds for the support of g, processing lead
    // variables from the region-dominant end: in any combination of
    // g-monomials landing in the window, monomial m is used at most
    // bound[m] times.  Total degree of the geometric expansion is then
    // K = sum of bounds.
    std::vector<Monomial> supp;
    for (const auto& [m, c] : rw.g.terms()) supp.push_back(m);
    size_t nf = supp.size();
    std::vector<long> bound(nf, 0);
    std::vector<int> lead(nf, -1);  // index into `order`
    for (size_t i = 0; i < nf; ++i)
        for (int j = static_cast<int>(order.size()) - 1; j >= 0; --j)
            if (supp[i].exp_of(order[j]) != 0) {
                lead[i] = j;
                break;
            }
    std::vector<char> done(nf, 0);
    for (int j = static_cast<int>(order.size()) - 1; j >= 0; --j) {
        int v = order[j];
        for (size_t i = 0; i < nf; ++i) {
            if (lead[i] != j) continue;
            long m_v = supp[i].exp_of(v);  // > 0 by region-smallness
            long budget = need[v].second;
            for (size_t k = 0; k < nf; ++k) {
                if (k == i || !done[k]) continue;
                long mk = supp[k].exp_of(v);
                if (mk < 0) budget += bound[k] * (-mk);
            }
            bound[i] = std::max(0L, budget / m_v);
            done[i] = 1;
        }
    }
    long K = 0;
    for (size_t i = 0; i < nf; ++i) K += bound[i];
    // pruning box: a partial monomial can still land in the window only if
    // it stays within the needed range widened by the remaining reachable
    // shifts
    std::map<int, std::pair<long, long>> box;
    for (int v : order) {
        long up = 0, down = 0;
        for (size_t i = 0; i < nf; ++i) {
            long x = supp[i].exp_of(v);
            if (x > 0) up += bound[i] * x;
            if (x < 0) down += bound[i] * (-x);
        }
        box[v] = {need[v].first - up, need[v].second + down};
    }
    auto in_box = [&](const Monomial& m) {
        for (const auto& [v, x] : m.e) {
            auto it = box.find(v);
            if (it == box.end()) return x == 0;
            if (x < it->second.first || x > it->second.second) return false;
        }
        return true;
    };
    // expand 1/(1-g) = sum g^k, k <= K, with box pruning
    LaurentPoly acc = LaurentPoly::constant(f.field().one());
    LaurentPoly gk = LaurentPoly::constant(f.field().one());
    for (long k = 1; k <= K && !gk.is_zero(); ++k) {
        LaurentPoly next(f.field());
        for (const auto& [m1, c1] : gk.terms())
            for (const auto& [m2, c2] : rw.g.terms()) {
                Monomial m = m1 * m2;
                if (in_box(m)) next.add_term(m, c1 * c2);
            }
        gk = std::move(next);
        acc += gk;
    }
    acc = acc * f.num();
    acc = acc.scaled(rw.unit_c.inverse()).shifted(rw.unit_m.inverse());
    for (const auto& [m, c] : acc.terms())
        if (window.contains(m)) out.emplace(m, c);
    return out;
}

// --- exact linear algebra ------------------------------------------------

std::vector<std::vector<Scalar>> rref(std::vector<std::vector<Scalar>> m, const ScalarField& fld) {
    if (m.empty()) return m;
    size_t rows = m.size(), cols = m[0].size(), lead = 0;
    for (size_t r = 0; r < rows && lead < cols; ++r) {
        size_t i = r;
        while (i < rows && m[i][lead].is_zero()) ++i;
        if (i == rows) {
            --r;
            ++lead;
            continue;
        }
        std::swap(m[i], m[r]);
        Scalar inv = m[r][lead].inverse();
        for (size_t c = 0; c < cols; ++c) m[r][c] *= inv;
        for (size_t k = 0; k < rows; ++k) {
            if (k == r || m[k][lead].is_zero()) continue;
            Scalar f = m[k][lead];
            for (size_t c = 0; c < cols; ++c) m[k][c] -= f * m[r][c];
        }
        ++lead;
    }
    // drop zero rows
    std::vector<std::vector<Scalar>> out;
    for (auto& row : m) {
        bool nz = false;
        for (auto& x : row) nz = nz || !x.is_zero();
        if (nz) out.push_back(std::move(row));
    }
    (void)fld;
    return out;
}

std::vector<std::vector<Scalar>> linear_relations(const std::vector<LaurentPoly>& rows) {
    if (rows.empty()) return {};
    ScalarField fld = rows[0].field();
    // column index = monomial
    std::map<Monomial, size_t> cols;
    for (const auto& p : rows)
        for (const auto& [m, c] : p.terms()) cols.emplace(m, 0);
    size_t nc = 0;
    for (auto& [m, idx] : cols) idx = nc++;
    size_t nr = rows.size();
    // build [A | I] and eliminate A; rows of I-part where A-part vanished
    // form a kernel basis
    std::vector<std::vector<Scalar>> m(nr, std::vector<Scalar>(nc + nr, fld.zero()));
    for (size_t r = 0; r < nr; ++r) {
        for (const auto& [mm, c] : rows[r].terms()) m[r][cols[mm]] = c;
        m[r][nc + r] = fld.one();
    }
    size_t lead = 0;
    for (size_t r = 0; r < nr && lead < nc; ++r) {
        size_t i = r;
        while (i < nr && m[i][lead].is_zero()) ++i;
        if (i == nr) {
            --r;
            ++lead;
            continue;
        }
        std::swap(m[i], m[r]);
        Scalar inv = m[r][lead].inverse();
        for (size_t c = 0; c < nc + nr; ++c) m[r][c] *= inv;
        for (size_t k = 0; k < nr; ++k) {
            if (k == r || m[k][lead].is_zero()) continue;
            Scalar f = m[k][lead];
            for (size_t c = 0; c < nc + nr; ++c) m[k][c] -= f * m[r][c];
        }
        ++lead;
    }
    std::vector<std::vector<Scalar>> kernel;
    for (size_t r = 0; r < nr; ++r) {
        bool zero = true;
        for (size_t c = 0; c < nc; ++c) zero = zero && m[r][c].is_zero();
        if (zero) kernel.emplace_back(m[r].begin() + nc, m[r].end());
    }
    return kernel;
}

std::vector<std::vector<Scalar>> linear_relations_ratfun(
    const std::vector<RationalFunction>& rows, const RationalFunction* multiplier) {
    if (rows.empty()) return {};
    RationalFunction common = RationalFunction::constant(rows[0].field().one());
    if (multiplier) {
        common = *multiplier;
    } else {
        std::vector<LaurentPoly> dens;
        for (const auto& r : rows) {
            bool seen = false;
            for (const auto& d : dens) seen = seen || d == r.den();
            if (!seen) {
                dens.push_back(r.den());
                common = common * RationalFunction::from_poly(r.den());
            }
        }
    }
    std::vector<LaurentPoly> cleared;
    cleared.reserve(rows.size());
    for (const auto& r : rows) {
        RationalFunction scaled = r * common;
        LaurentPoly p(r.field());
        if (!scaled.as_laurent_polynomial(&p))
            throw internal_error("linear_relations_ratfun: clearing failed");
        cleared.push_back(std::move(p));
    }
    return linear_relations(cleared);
}

}  // namespace hc
