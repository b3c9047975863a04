#pragma once

// The Weyl algebra D = O[d_1..d_n] with polynomial coefficients, kept in
// normal order: every term is c_alpha(x) * d^alpha with the coefficient on
// the left.  Composition expands the Leibniz rule on monomial generators;
// inputs here are desk scale, so no generating-function tricks.

#include "logdiff/polynomial.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace logdiff {

class DiffOp {
public:
    DiffOp() = default;
    explicit DiffOp(VarTablePtr vars) : vars_(std::move(vars)) {}

    static DiffOp zero(VarTablePtr vars) { return DiffOp(std::move(vars)); }

    // Multiplication operator by a function (order 0).
    static DiffOp function(Polynomial f) {
        DiffOp op(f.vars());
        op.add_term(Exponents(op.n(), 0), std::move(f));
        return op;
    }

    static DiffOp constant(VarTablePtr vars, Rational c) {
        return function(Polynomial::constant(std::move(vars), std::move(c)));
    }

    // d^alpha with a polynomial coefficient.
    static DiffOp monomial(Polynomial coeff, Exponents alpha) {
        DiffOp op(coeff.vars());
        if (static_cast<int>(alpha.size()) != op.n())
            throw std::invalid_argument("DiffOp::monomial: alpha must have length n");
        op.add_term(std::move(alpha), std::move(coeff));
        return op;
    }

    // d/dx_i as an operator.
    static DiffOp partial_op(VarTablePtr vars, int i) {
        DiffOp op(vars);
        if (i < 0 || i >= op.n()) throw std::out_of_range("DiffOp::partial_op");
        Exponents a(op.n(), 0);
        a[i] = 1;
        op.add_term(std::move(a), Polynomial::constant(vars, Rational(1)));
        return op;
    }

    const VarTablePtr& vars() const { return vars_; }
    const std::map<Exponents, Polynomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int order() const {
        int d = -1;
        for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
        return d;
    }

    Polynomial coefficient(const Exponents& alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? Polynomial::zero(vars_) : it->second;
    }

    DiffOp operator-() const {
        DiffOp out(vars_);
        for (const auto& [a, c] : terms_) out.terms_.emplace(a, -c);
        return out;
    }

    friend DiffOp operator+(const DiffOp& p, const DiffOp& q) {
        DiffOp out = p;
        for (const auto& [a, c] : q.terms_) out.add_term(a, c);
        return out;
    }
    friend DiffOp operator-(const DiffOp& p, const DiffOp& q) { return p + (-q); }

    DiffOp& operator+=(const DiffOp& q) { *this = *this + q; return *this; }
    DiffOp& operator-=(const DiffOp& q) { *this = *this - q; return *this; }

    DiffOp scaled(const Rational& c) const {
        DiffOp out(vars_);
        if (logdiff::is_zero(c)) return out;
        for (const auto& [a, k] : terms_) out.terms_.emplace(a, k.scaled(c));
        return out;
    }

    bool operator==(const DiffOp& o) const { return terms_ == o.terms_; }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    int n() const { return vars_ ? vars_->dimension() : 0; }

    // Internal building block; merges and drops zeros.
    void add_term(Exponents alpha, Polynomial coeff) {
        if (coeff.is_zero()) return;
        auto it = terms_.find(alpha);
        if (it == terms_.end()) {
            terms_.emplace(std::move(alpha), std::move(coeff));
        } else {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

private:
    VarTablePtr vars_;
    std::map<Exponents, Polynomial> terms_;  // alpha -> c_alpha(x), no zero entries
};

namespace detail {

// Iterates all gamma <= alpha componentwise, calling fn(gamma, binom) with
// binom = prod_i C(alpha_i, gamma_i).
template <typename Fn>
void for_each_subexponent(const Exponents& alpha, Fn&& fn) {
    Exponents gamma(alpha.size(), 0);
    // Running binomial per coordinate, recomputed incrementally on carry.
    auto binom = [](int a, int g) {
        long long b = 1;
        for (int i = 1; i <= g; ++i) b = b * (a - g + i) / i;
        return b;
    };
    while (true) {
        long long b = 1;
        for (size_t i = 0; i < alpha.size(); ++i) b *= binom(alpha[i], gamma[i]);
        fn(gamma, b);
        size_t i = 0;
        for (; i < alpha.size(); ++i) {
            if (gamma[i] < alpha[i]) { ++gamma[i]; break; }
            gamma[i] = 0;
        }
        if (i == alpha.size()) break;
    }
}

inline Polynomial iterated_partial(const Polynomial& p, const Exponents& gamma) {
    Polynomial out = p;
    for (size_t i = 0; i < gamma.size() && !out.is_zero(); ++i)
        for (int k = 0; k < gamma[i]; ++k) out = out.partial(static_cast<int>(i));
    return out;
}

}  // namespace detail

// Action of P on a polynomial without xi variables.
inline Polynomial apply(const DiffOp& p, const Polynomial& g) {
    if (!g.is_xi_free()) throw std::invalid_argument("apply: argument contains symbol variables");
    Polynomial out = Polynomial::zero(g.vars());
    for (const auto& [alpha, c] : p.terms()) {
        Exponents full(g.vars()->ring_vars(), 0);
        std::copy(alpha.begin(), alpha.end(), full.begin());
        out += c * detail::iterated_partial(g, full);
    }
    return out;
}

// Normal-ordered product P o Q via the Leibniz rule:
//   d^a o (c d^b) = sum_{g <= a} C(a,g) d^g(c) d^{a-g+b}.
inline DiffOp compose(const DiffOp& p, const DiffOp& q) {
    if (p.vars() && q.vars()) require_same_table(p.vars(), q.vars());
    DiffOp out(p.vars() ? p.vars() : q.vars());
    const int n = out.n();
    const int width = out.vars()->ring_vars();
    for (const auto& [alpha, ca] : p.terms()) {
        for (const auto& [beta, cb] : q.terms()) {
            detail::for_each_subexponent(alpha, [&](const Exponents& gamma, long long binom) {
                Exponents full(width, 0);
                std::copy(gamma.begin(), gamma.end(), full.begin());
                Polynomial deriv = detail::iterated_partial(cb, full);
                if (deriv.is_zero()) return;
                Exponents rest(n);
                for (int i = 0; i < n; ++i) rest[i] = alpha[i] - gamma[i] + beta[i];
                out.add_term(std::move(rest), (ca * deriv).scaled(Rational(binom)));
            });
        }
    }
    return out;
}

inline DiffOp commutator(const DiffOp& p, const DiffOp& q) {
    return compose(p, q) - compose(q, p);
}

inline DiffOp compose_power(const DiffOp& p, int k) {
    if (k < 0) throw std::invalid_argument("negative operator power");
    DiffOp out = DiffOp::constant(p.vars(), Rational(1));
    for (int i = 0; i < k; ++i) out = compose(out, p);
    return out;
}

// Total symbol: every d^alpha replaced by xi^alpha.
inline Polynomial full_symbol(const DiffOp& p) {
    Polynomial out = Polynomial::zero(p.vars());
    const int n = p.n();
    for (const auto& [alpha, c] : p.terms()) {
        Exponents xi(p.vars()->ring_vars(), 0);
        for (int i = 0; i < n; ++i) xi[n + i] = alpha[i];
        out += c * Polynomial::monomial(p.vars(), std::move(xi), Rational(1));
    }
    return out;
}

// Principal symbol: the top-order slice of the total symbol.
inline Polynomial principal_symbol(const DiffOp& p) {
    if (p.is_zero()) throw std::domain_error("principal_symbol of the zero operator");
    return xi_component(full_symbol(p), p.order());
}

struct OpDivisionResult {
    bool exact = false;
    DiffOp quotient;
    Exponents offending_alpha;  // first failing term when not exact
    Polynomial remainder;
};

// Q with f o Q = P.  Normal order makes this coefficient-wise.
inline OpDivisionResult left_divide_by_function(const DiffOp& p, const Polynomial& f) {
    if (f.is_zero()) throw std::domain_error("left division by the zero function");
    OpDivisionResult res;
    res.quotient = DiffOp::zero(p.vars() ? p.vars() : f.vars());
    for (const auto& [alpha, c] : p.terms()) {
        auto d = exact_divide(c, f);
        if (!d.exact) {
            res.offending_alpha = alpha;
            res.remainder = d.remainder;
            return res;
        }
        res.quotient.add_term(alpha, d.quotient);
    }
    res.exact = true;
    return res;
}

// Q' with Q' o f = P, solved top order down.  The coefficient of d^beta in
// Q' o f is sum_{alpha >= beta} C(alpha, beta) q_alpha d^{alpha-beta}(f), so
// each q_beta is determined once the strictly larger alphas are known.
inline std::optional<DiffOp> right_divide_by_function(const DiffOp& p, const Polynomial& f) {
    if (f.is_zero()) throw std::domain_error("right division by the zero function");
    DiffOp quotient(p.vars() ? p.vars() : f.vars());
    DiffOp rem = p;
    while (!rem.is_zero()) {
        // Take a term of maximal |alpha|; its q_alpha is forced.
        const Exponents* best = nullptr;
        int best_deg = -1;
        for (const auto& [a, c] : rem.terms()) {
            int d = total_degree(a);
            if (d > best_deg) { best_deg = d; best = &a; }
        }
        auto div = exact_divide(rem.coefficient(*best), f);
        if (!div.exact) return std::nullopt;
        DiffOp piece = DiffOp::monomial(div.quotient, *best);
        quotient += piece;
        rem -= compose(piece, DiffOp::function(f));
    }
    return quotient;
}

// Canonical operator text: terms distributed over coefficient monomials,
// "3/2*x^2*d_x^2*d_y" style, descending in (alpha, coefficient monomial).
inline std::string to_string(const DiffOp& p) {
    if (p.is_zero()) return "0";
    const auto& vt = *p.vars();
    const int n = p.n();
    MonomialOrder ord;

    struct Piece { Exponents alpha; Exponents mono; Rational coeff; };
    std::vector<Piece> pieces;
    for (const auto& [alpha, c] : p.terms())
        for (const auto& [e, k] : c.terms()) pieces.push_back({alpha, e, k});
    std::sort(pieces.begin(), pieces.end(), [&](const Piece& a, const Piece& b) {
        if (int c = ord.compare(a.alpha, b.alpha); c != 0) return c > 0;
        return ord.greater(a.mono, b.mono);
    });

    std::string out;
    for (size_t i = 0; i < pieces.size(); ++i) {
        const auto& [alpha, mono, coeff] = pieces[i];
        bool neg = coeff < 0;
        Rational a = neg ? Rational(-coeff) : coeff;
        out += (i == 0) ? (neg ? "-" : "") : (neg ? " - " : " + ");
        std::string body = render_monomial(vt, mono);
        for (int j = 0; j < n; ++j) {
            if (alpha[j] == 0) continue;
            if (!body.empty()) body += "*";
            body += "d_" + vt.base_names()[j];
            if (alpha[j] > 1) body += "^" + std::to_string(alpha[j]);
        }
        if (body.empty()) {
            out += logdiff::to_string(a);
        } else {
            if (a != 1) out += logdiff::to_string(a) + "*";
            out += body;
        }
    }
    return out;
}

}  // namespace logdiff
