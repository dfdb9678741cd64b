#include "hallcurve/scalar.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hc {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(); }
void set_parallel_enabled(bool on) { g_parallel.store(on); }
int worker_count() {
#ifdef _OPENMP
    return parallel_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

bool is_perfect_square(long q, long* root) {
    if (q < 0) return false;
    long r = static_cast<long>(std::sqrt(static_cast<double>(q)));
    while (r * r > q) --r;
    while ((r + 1) * (r + 1) <= q) ++r;
    if (root) *root = r;
    return r * r == q;
}

VPoly vpoly_add(const VPoly& a, const VPoly& b) {
    VPoly r = a;
    for (const auto& [e, c] : b) {
        Int& v = r[e];
        v += c;
        if (v == 0) r.erase(e);
    }
    return r;
}

VPoly vpoly_mul(const VPoly& a, const VPoly& b) {
    VPoly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Int& v = r[ea + eb];
            v += ca * cb;
            if (v == 0) r.erase(ea + eb);
        }
    return r;
}

namespace {

// Dense rational polynomials, for gcd only.
using QD = std::vector<Rat>;

QD to_dense(const VPoly& p, int shift) {
    int deg = 0;
    for (const auto& [e, c] : p) deg = std::max(deg, e - shift);
    QD d(deg + 1, Rat(0));
    for (const auto& [e, c] : p) d[e - shift] = Rat(c);
    return d;
}

void trim(QD& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QD qd_rem(QD a, const QD& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a.back() / b.back();
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        trim(a);
    }
    return a;
}

QD qd_gcd(QD a, QD b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QD r = qd_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Exact division of integer Laurent polys, caller guarantees divisibility.
VPoly vpoly_divexact(const VPoly& a, const VPoly& b) {
    if (a.empty()) return {};
    int sa = a.begin()->first, sb = b.begin()->first;
    QD da = to_dense(a, sa), db = to_dense(b, sb);
    QD q(da.size() - db.size() + 1, Rat(0));
    QD r = da;
    trim(r);
    while (r.size() >= db.size() && !r.empty()) {
        Rat f = r.back() / db.back();
        size_t off = r.size() - db.size();
        q[off] = f;
        for (size_t i = 0; i < db.size(); ++i) r[off + i] -= f * db[i];
        trim(r);
    }
    if (!r.empty()) throw internal_error("vpoly_divexact: not divisible");
    VPoly out;
    for (size_t i = 0; i < q.size(); ++i)
        if (q[i] != 0) {
            if (q[i].get_den() != 1) throw internal_error("vpoly_divexact: fraction");
            out[static_cast<int>(i) + sa - sb] = q[i].get_num();
        }
    return out;
}

Int vpoly_content(const VPoly& p) {
    Int g = 0;
    for (const auto& [e, c] : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

// gcd of two integer Laurent polys as a primitive integer polynomial
// (ignores v-shifts).
VPoly vpoly_gcd(const VPoly& a, const VPoly& b) {
    if (a.empty() || b.empty()) return {{0, Int(1)}};
    QD g = qd_gcd(to_dense(a, a.begin()->first), to_dense(b, b.begin()->first));
    if (g.empty()) return {{0, Int(1)}};
    // scale to primitive integer form
    Int lcm = 1;
    for (const auto& c : g) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    VPoly out;
    for (size_t i = 0; i < g.size(); ++i) {
        Rat c = g[i] * Rat(lcm);
        if (c != 0) out[static_cast<int>(i)] = c.get_num();
    }
    Int cont = vpoly_content(out);
    if (cont > 1)
        for (auto& [e, c] : out) c /= cont;
    return out;
}

}  // namespace

Scalar::Scalar() : mode_(ScalarMode::Symbolic) { den_[0] = 1; }

Scalar Scalar::numeric(long q, const Rat& a, const Rat& b) {
    if (q <= 0) throw parse_error("numeric mode needs positive q");
    Scalar s;
    s.mode_ = ScalarMode::Numeric;
    s.q_ = q;
    s.a_ = a;
    s.b_ = b;
    s.num_.clear();
    s.den_.clear();
    s.normalize_numeric();
    return s;
}

Scalar Scalar::symbolic(const Rat& r) {
    Scalar s;
    s.num_.clear();
    s.den_.clear();
    if (r.get_num() != 0) s.num_[0] = r.get_num();
    s.den_[0] = r.get_den();
    s.normalize_symbolic();
    return s;
}

Scalar Scalar::symbolic(const VPoly& num, const VPoly& den) {
    Scalar s;
    s.num_ = num;
    s.den_ = den;
    s.normalize_symbolic();
    return s;
}

Scalar Scalar::v_power(ScalarMode mode, long q, int k) {
    if (mode == ScalarMode::Symbolic) {
        VPoly n{{k, Int(1)}};
        return symbolic(n, VPoly{{0, Int(1)}});
    }
    long r;
    if (is_perfect_square(q, &r)) {
        Rat val(1);
        Rat base(r);
        if (k < 0) base = Rat(1) / base;
        for (int i = 0; i < std::abs(k); ++i) val *= base;
        return numeric(q, val, Rat(0));
    }
    // v^k = q^floor(k/2) * v^(k mod 2), exact for negative k as well
    int m = k >= 0 ? k / 2 : -((-k + 1) / 2);
    int odd = k - 2 * m;  // 0 or 1
    Rat qp(1);
    for (int i = 0; i < std::abs(m); ++i) qp *= Rat(q);
    if (m < 0) qp = Rat(1) / qp;
    return odd ? numeric(q, Rat(0), qp) : numeric(q, qp, Rat(0));
}

void Scalar::normalize_numeric() {
    long r;
    if (b_ != 0 && is_perfect_square(q_, &r)) {
        a_ += b_ * Rat(r);
        b_ = 0;
    }
    a_.canonicalize();
    b_.canonicalize();
}

void Scalar::normalize_symbolic() {
    for (auto it = num_.begin(); it != num_.end();)
        it = it->second == 0 ? num_.erase(it) : std::next(it);
    for (auto it = den_.begin(); it != den_.end();)
        it = it->second == 0 ? den_.erase(it) : std::next(it);
    if (den_.empty()) throw parse_error("division by zero scalar");
    if (num_.empty()) {
        den_.clear();
        den_[0] = 1;
        return;
    }
    // shift den to a genuine polynomial with nonzero constant term
    int s = den_.begin()->first;
    if (s != 0) {
        VPoly nd, nn;
        for (const auto& [e, c] : den_) nd[e - s] = c;
        for (const auto& [e, c] : num_) nn[e - s] = c;
        den_ = std::move(nd);
        num_ = std::move(nn);
    }
    VPoly g = vpoly_gcd(num_, den_);
    bool nontrivial = g.size() > 1 || g.begin()->first != 0 || g.begin()->second != 1;
    if (nontrivial) {
        num_ = vpoly_divexact(num_, g);
        den_ = vpoly_divexact(den_, g);
    }
    Int cn = vpoly_content(num_), cd = vpoly_content(den_);
    Int common;
    mpz_gcd(common.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (common > 1) {
        for (auto& [e, c] : num_) c /= common;
        for (auto& [e, c] : den_) c /= common;
    }
    if (den_.rbegin()->second < 0) {
        for (auto& [e, c] : num_) c = -c;
        for (auto& [e, c] : den_) c = -c;
    }
}

void Scalar::check_compatible(const Scalar& o) const {
    if (mode_ != o.mode_) throw parse_error("scalar mode mismatch");
    if (mode_ == ScalarMode::Numeric && q_ != o.q_) throw parse_error("scalar q mismatch");
}

bool Scalar::is_zero() const {
    return mode_ == ScalarMode::Numeric ? (a_ == 0 && b_ == 0) : num_.empty();
}

bool Scalar::is_one() const {
    if (mode_ == ScalarMode::Numeric) return a_ == 1 && b_ == 0;
    return num_.size() == 1 && num_.count(0) && num_.at(0) == 1 && den_.size() == 1 &&
           den_.count(0) && den_.at(0) == 1;
}

bool Scalar::operator==(const Scalar& o) const {
    check_compatible(o);
    if (mode_ == ScalarMode::Numeric) return a_ == o.a_ && b_ == o.b_;
    // both sides are in canonical reduced form
    return num_ == o.num_ && den_ == o.den_;
}

bool Scalar::operator<(const Scalar& o) const {
    if (mode_ != o.mode_) return mode_ < o.mode_;
    if (mode_ == ScalarMode::Numeric) {
        if (q_ != o.q_) return q_ < o.q_;
        if (a_ != o.a_) return a_ < o.a_;
        return b_ < o.b_;
    }
    if (num_ != o.num_) return num_ < o.num_;
    return den_ < o.den_;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    if (mode_ == ScalarMode::Numeric) {
        r.a_ = -a_;
        r.b_ = -b_;
    } else {
        for (auto& [e, c] : r.num_) c = -c;
    }
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_compatible(o);
    if (mode_ == ScalarMode::Numeric) return numeric(q_, a_ + o.a_, b_ + o.b_);
    return symbolic(vpoly_add(vpoly_mul(num_, o.den_), vpoly_mul(o.num_, den_)),
                    vpoly_mul(den_, o.den_));
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    check_compatible(o);
    if (mode_ == ScalarMode::Numeric)
        return numeric(q_, a_ * o.a_ + b_ * o.b_ * Rat(q_), a_ * o.b_ + b_ * o.a_);
    return symbolic(vpoly_mul(num_, o.num_), vpoly_mul(den_, o.den_));
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::inverse() const {
    if (is_zero()) throw parse_error("division by zero scalar");
    if (mode_ == ScalarMode::Numeric) {
        // (a + b sqrt(q))^-1 = (a - b sqrt(q)) / (a^2 - b^2 q)
        Rat n = a_ * a_ - b_ * b_ * Rat(q_);
        if (n == 0) throw internal_error("nonzero numeric scalar with zero norm");
        return numeric(q_, a_ / n, -b_ / n);
    }
    return symbolic(den_, num_);
}

Scalar Scalar::pow(long e) const {
    Scalar base = e < 0 ? inverse() : *this;
    long n = std::abs(e);
    Scalar r = mode_ == ScalarMode::Numeric ? numeric(q_, 1) : symbolic(Rat(1));
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

Scalar Scalar::eval_at(long q) const {
    if (mode_ == ScalarMode::Numeric)
        return q_ == q ? *this : throw parse_error("eval_at: q mismatch");
    auto eval_poly = [&](const VPoly& p) {
        Scalar acc = Scalar::numeric(q, 0);
        for (const auto& [e, c] : p) acc += Scalar::v_power(ScalarMode::Numeric, q, e) *
                                            Scalar::numeric(q, Rat(c));
        return acc;
    };
    Scalar d = eval_poly(den_);
    if (d.is_zero()) throw parse_error("eval_at: denominator vanishes at sqrt(q)");
    return eval_poly(num_) / d;
}

bool Scalar::is_rational() const {
    if (mode_ == ScalarMode::Numeric) return b_ == 0;
    if (den_.size() != 1 || !den_.count(0)) return false;
    return num_.empty() || (num_.size() == 1 && num_.count(0));
}

Rat Scalar::rational_value() const {
    if (!is_rational()) throw parse_error("scalar is not rational");
    if (mode_ == ScalarMode::Numeric) return a_;
    if (num_.empty()) return Rat(0);
    Rat r(num_.at(0), den_.at(0));
    r.canonicalize();
    return r;
}

namespace {

void print_term(std::ostream& os, bool& first, const Rat& coeff, int e) {
    if (coeff == 0) return;
    Rat c = coeff;
    if (first) {
        if (c < 0) {
            os << '-';
            c = -c;
        }
        first = false;
    } else {
        os << (c < 0 ? '-' : '+');
        if (c < 0) c = -c;
    }
    bool unit = (c == 1);
    if (!unit || e == 0) os << c;
    if (e != 0) {
        if (!unit) os << '*';
        os << 'v';
        if (e != 1) os << '^' << e;
    }
}

void print_vpoly(std::ostream& os, const VPoly& p) {
    if (p.empty()) {
        os << '0';
        return;
    }
    bool first = true;
    for (auto it = p.rbegin(); it != p.rend(); ++it) print_term(os, first, Rat(it->second), it->first);
}

}  // namespace

std::string Scalar::to_string() const {
    std::ostringstream os;
    if (mode_ == ScalarMode::Numeric) {
        bool first = true;
        if (b_ != 0) print_term(os, first, b_, 1);
        if (a_ != 0 || first) print_term(os, first, a_, 0);
        if (first) os << '0';
        return os.str();
    }
    bool denom_one = den_.size() == 1 && den_.count(0) && den_.at(0) == 1;
    if (denom_one) {
        print_vpoly(os, num_);
    } else {
        os << '(';
        print_vpoly(os, num_);
        os << ")/(";
        print_vpoly(os, den_);
        os << ')';
    }
    return os.str();
}

// --- expression parser -------------------------------------------------
// expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
// factor := ('-')* atom ('^' int)? ; atom := integer | 'v' | '(' expr ')'

namespace {

struct ScalarParser {
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
            throw parse_error("scalar parse: expected integer at position " + std::to_string(pos));
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }
    Scalar atom() {
        skip();
        if (pos >= s.size()) throw parse_error("scalar parse: unexpected end");
        if (s[pos] == '(') {
            ++pos;
            Scalar e = expr();
            if (!eat(')')) throw parse_error("scalar parse: missing ')'");
            return e;
        }
        if (s[pos] == 'v') {
            ++pos;
            return fld.v();
        }
        if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            Int big = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                big = big * 10 + (s[pos++] - '0');
            return fld.integer(big);
        }
        throw parse_error(std::string("scalar parse: unexpected character '") + s[pos] + "'");
    }
    Scalar factor() {
        skip();
        bool neg = false;
        while (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            if (s[pos] == '-') neg = !neg;
            ++pos;
            skip();
        }
        Scalar a = atom();
        skip();
        if (eat('^')) a = a.pow(parse_int());
        return neg ? -a : a;
    }
    Scalar term() {
        Scalar a = factor();
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
    Scalar expr() {
        Scalar a = term();
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

}  // namespace

Scalar Scalar::parse(const std::string& text, ScalarMode mode, long q) {
    ScalarParser p{text, 0, ScalarField{mode, q}};
    Scalar r = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw parse_error("scalar parse: trailing input at position " + std::to_string(p.pos));
    return r;
}

}  // namespace hc
