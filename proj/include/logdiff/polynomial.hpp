#pragma once

// Exact multivariate polynomials over Q in the 2n variables x_1..x_n,
// xi_1..xi_n.  Terms live in a flat vector sorted by plain lexicographic
// comparison of exponent vectors; that representation is canonical and
// independent of any monomial order, so equality is memcmp-like and every
// order-sensitive routine sorts a view instead.

#include "logdiff/monomial_order.hpp"
#include "logdiff/rational.hpp"
#include "logdiff/vartable.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace logdiff {

class Polynomial {
public:
    using Term = std::pair<Exponents, Rational>;

    Polynomial() = default;

    explicit Polynomial(VarTablePtr vars) : vars_(std::move(vars)) {}

    static Polynomial zero(VarTablePtr vars) { return Polynomial(std::move(vars)); }

    static Polynomial constant(VarTablePtr vars, Rational c) {
        Polynomial p(std::move(vars));
        if (!logdiff::is_zero(c)) p.terms_.emplace_back(Exponents(p.width(), 0), std::move(c));
        return p;
    }

    static Polynomial variable(VarTablePtr vars, int index, int power = 1) {
        Polynomial p(vars);
        if (index < 0 || index >= p.width()) throw std::out_of_range("Polynomial::variable");
        if (power < 0) throw std::invalid_argument("negative power");
        Exponents e(p.width(), 0);
        e[index] = power;
        p.terms_.emplace_back(std::move(e), Rational(1));
        return p;
    }

    static Polynomial monomial(VarTablePtr vars, Exponents e, Rational c) {
        Polynomial p(std::move(vars));
        if (static_cast<int>(e.size()) != p.width())
            throw std::invalid_argument("monomial: exponent width mismatch");
        if (!logdiff::is_zero(c)) p.terms_.emplace_back(std::move(e), std::move(c));
        return p;
    }

    const VarTablePtr& vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].first) == 0);
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::domain_error("constant_value on non-constant polynomial");
        return terms_[0].second;
    }

    // Coefficient of the constant monomial (the "value at the origin").
    Rational constant_term() const {
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == 0) return c;
        return Rational(0);
    }

    int degree() const {  // total degree, -1 for zero
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    // Degree counted in the xi block only.
    int xi_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, xi_part_degree(e));
        return d;
    }

    bool is_xi_free() const {
        for (const auto& [e, c] : terms_)
            if (xi_part_degree(e) != 0) return false;
        return true;
    }

    bool is_xi_homogeneous() const {
        if (terms_.empty()) return true;
        int d = xi_part_degree(terms_[0].first);
        for (const auto& [e, c] : terms_)
            if (xi_part_degree(e) != d) return false;
        return true;
    }

    Polynomial operator-() const {
        Polynomial out(vars_);
        out.terms_.reserve(terms_.size());
        for (const auto& [e, c] : terms_) out.terms_.emplace_back(e, -c);
        return out;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        return merge(a, b, false);
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        return merge(a, b, true);
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        require_compatible(a, b);
        Polynomial out(a.vars_ ? a.vars_ : b.vars_);
        if (a.is_zero() || b.is_zero()) return out;
        std::map<Exponents, Rational> acc;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Rational prod = ca * cb;
                auto [it, fresh] = acc.emplace(exp_mul(ea, eb), prod);
                if (!fresh) it->second += prod;
            }
        out.terms_.reserve(acc.size());
        for (auto& [e, c] : acc)
            if (!logdiff::is_zero(c)) out.terms_.emplace_back(e, std::move(c));
        return out;
    }

    Polynomial& operator+=(const Polynomial& b) { *this = *this + b; return *this; }
    Polynomial& operator-=(const Polynomial& b) { *this = *this - b; return *this; }
    Polynomial& operator*=(const Polynomial& b) { *this = *this * b; return *this; }

    Polynomial scaled(const Rational& c) const {
        Polynomial out(vars_);
        if (logdiff::is_zero(c)) return out;
        out.terms_.reserve(terms_.size());
        for (const auto& [e, k] : terms_) out.terms_.emplace_back(e, k * c);
        return out;
    }

    Polynomial pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative polynomial power");
        Polynomial result = constant(vars_, Rational(1));
        Polynomial base = *this;
        while (k > 0) {
            if (k & 1) result = result * base;
            base = k > 1 ? base * base : base;
            k >>= 1;
        }
        return result;
    }

    // Formal partial derivative with respect to variable `index`.
    Polynomial partial(int index) const {
        if (index < 0 || index >= width()) throw std::out_of_range("Polynomial::partial");
        Polynomial out(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[index] == 0) continue;
            Exponents d = e;
            d[index] -= 1;
            out.terms_.emplace_back(std::move(d), c * e[index]);
        }
        std::sort(out.terms_.begin(), out.terms_.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        return out;
    }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Strict weak order so polynomials can key maps; content-based.
    bool operator<(const Polynomial& o) const { return terms_ < o.terms_; }

    int width() const { return vars_ ? vars_->ring_vars() : 0; }

private:
    static void require_compatible(const Polynomial& a, const Polynomial& b) {
        if (a.vars_ && b.vars_) require_same_table(a.vars_, b.vars_);
    }

    int xi_part_degree(const Exponents& e) const {
        int n = vars_->dimension(), d = 0;
        for (int i = n; i < 2 * n; ++i) d += e[i];
        return d;
    }

    static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
        require_compatible(a, b);
        Polynomial out(a.vars_ ? a.vars_ : b.vars_);
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
                out.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
                const auto& [e, c] = b.terms_[j++];
                out.terms_.emplace_back(e, subtract ? -c : c);
            } else {
                Rational c = subtract ? a.terms_[i].second - b.terms_[j].second
                                      : a.terms_[i].second + b.terms_[j].second;
                if (!logdiff::is_zero(c)) out.terms_.emplace_back(a.terms_[i].first, std::move(c));
                ++i; ++j;
            }
        }
        return out;
    }

    VarTablePtr vars_;
    std::vector<Term> terms_;  // sorted ascending by Exponents::operator<
};

// ---------------------------------------------------------------------------
// Division and homogeneous decomposition

struct DivisionResult {
    bool exact = false;
    Polynomial quotient;   // valid when exact
    Polynomial remainder;  // nonzero witness when not exact
};

// Divide p by a single divisor d under degrevlex.  For one divisor the
// division algorithm decides membership in the principal ideal (d): the
// remainder is zero exactly when d divides p.
inline DivisionResult exact_divide(const Polynomial& p, const Polynomial& d) {
    if (d.is_zero()) throw std::domain_error("exact_divide: zero divisor");
    DivisionResult res;
    res.quotient = Polynomial::zero(p.vars() ? p.vars() : d.vars());
    res.remainder = res.quotient;
    if (p.is_zero()) { res.exact = true; return res; }

    MonomialOrder ord(MonomialOrder::Kind::degrevlex);
    auto leading = [&ord](const Polynomial& q) -> const Polynomial::Term& {
        const auto& ts = q.terms();
        size_t best = 0;
        for (size_t i = 1; i < ts.size(); ++i)
            if (ord.greater(ts[i].first, ts[best].first)) best = i;
        return ts[best];
    };

    const auto& [lt_d, lc_d] = leading(d);
    Polynomial rem = p;
    while (!rem.is_zero()) {
        const auto& [lt_r, lc_r] = leading(rem);
        if (!exp_divides(lt_d, lt_r)) {
            // Park the term in the remainder and keep dividing: the witness
            // produced on failure is the canonical division remainder.
            Polynomial t = Polynomial::monomial(rem.vars(), lt_r, lc_r);
            res.remainder += t;
            rem -= t;
            continue;
        }
        Polynomial t = Polynomial::monomial(rem.vars(), exp_div(lt_r, lt_d), lc_r / lc_d);
        res.quotient += t;
        rem -= t * d;
    }
    if (res.remainder.is_zero()) {
        res.exact = true;
    } else {
        res.quotient = Polynomial::zero(p.vars() ? p.vars() : d.vars());
    }
    return res;
}

inline bool divides(const Polynomial& d, const Polynomial& p) {
    return exact_divide(p, d).exact;
}

// Splits p into its xi-homogeneous pieces, highest xi-degree first.
inline std::vector<std::pair<int, Polynomial>> xi_homogeneous_components(const Polynomial& p) {
    std::map<int, Polynomial, std::greater<int>> buckets;
    const int n = p.vars() ? p.vars()->dimension() : 0;
    for (const auto& [e, c] : p.terms()) {
        int d = 0;
        for (int i = n; i < 2 * n; ++i) d += e[i];
        auto [it, fresh] = buckets.emplace(d, Polynomial::zero(p.vars()));
        it->second += Polynomial::monomial(p.vars(), e, c);
    }
    return {buckets.begin(), buckets.end()};
}

// The single xi-homogeneous piece of degree d (zero polynomial if absent).
inline Polynomial xi_component(const Polynomial& p, int d) {
    Polynomial out = Polynomial::zero(p.vars());
    const int n = p.vars() ? p.vars()->dimension() : 0;
    for (const auto& [e, c] : p.terms()) {
        int deg = 0;
        for (int i = n; i < 2 * n; ++i) deg += e[i];
        if (deg == d) out += Polynomial::monomial(p.vars(), e, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical text rendering (the interchange format): terms in descending
// monomial order, reduced fractional coefficients, explicit '*' and '^'.

inline std::string render_monomial(const VarTable& vt, const Exponents& e) {
    std::string out;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += vt.name(static_cast<int>(i));
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out;
}

inline std::string to_string(const Polynomial& p,
                             const MonomialOrder& ord = MonomialOrder()) {
    if (p.is_zero()) return "0";
    std::vector<Polynomial::Term> ts(p.terms().begin(), p.terms().end());
    std::sort(ts.begin(), ts.end(), [&](const auto& a, const auto& b) {
        return ord.greater(a.first, b.first);
    });
    std::string out;
    for (size_t i = 0; i < ts.size(); ++i) {
        const auto& [e, c] = ts[i];
        const bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (i == 0) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        std::string mono = render_monomial(*p.vars(), e);
        if (mono.empty()) {
            out += logdiff::to_string(a);
        } else {
            if (a != 1) out += logdiff::to_string(a) + "*";
            out += mono;
        }
    }
    return out;
}

}  // namespace logdiff
