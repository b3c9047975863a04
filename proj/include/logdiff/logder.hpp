#pragma once

// Logarithmic derivations and Saito frames.
//
// A Derivation is delta = sum a_i d_i with polynomial coefficients free of
// symbol variables.  A SaitoFrame packages n derivations that pass Saito's
// criterion for a divisor f: the coefficient determinant equals unit * f,
// every member is logarithmic, and the Lie brackets solve exactly against
// the basis (structure constants).

#include "logdiff/polynomial.hpp"
#include "logdiff/weyl.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace logdiff {

class Derivation {
public:
    Derivation() = default;
    Derivation(VarTablePtr vars, std::vector<Polynomial> coeffs)
        : vars_(std::move(vars)), coeffs_(std::move(coeffs)) {
        if (static_cast<int>(coeffs_.size()) != vars_->dimension())
            throw std::invalid_argument("Derivation: need exactly n coefficients");
        for (const auto& c : coeffs_)
            if (!c.is_xi_free())
                throw std::invalid_argument("Derivation: coefficients must not involve symbols");
    }

    const VarTablePtr& vars() const { return vars_; }
    const std::vector<Polynomial>& coeffs() const { return coeffs_; }
    int n() const { return vars_ ? vars_->dimension() : 0; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    // delta(g), the action on a polynomial.
    Polynomial operator()(const Polynomial& g) const {
        Polynomial out = Polynomial::zero(vars_);
        for (int i = 0; i < n(); ++i)
            out += coeffs_[i] * g.partial(i);
        return out;
    }

    DiffOp as_operator() const {
        DiffOp op(vars_);
        for (int i = 0; i < n(); ++i) {
            Exponents a(n(), 0);
            a[i] = 1;
            op.add_term(std::move(a), coeffs_[i]);
        }
        return op;
    }

    // sigma(delta) = sum a_i xi_i; zero polynomial for the zero derivation.
    Polynomial symbol() const {
        Polynomial out = Polynomial::zero(vars_);
        for (int i = 0; i < n(); ++i)
            out += coeffs_[i] * Polynomial::variable(vars_, vars_->symbol_index(i));
        return out;
    }

    friend Derivation operator+(const Derivation& a, const Derivation& b) {
        require_same_table(a.vars_, b.vars_);
        std::vector<Polynomial> c;
        for (int i = 0; i < a.n(); ++i) c.push_back(a.coeffs_[i] + b.coeffs_[i]);
        return Derivation(a.vars_, std::move(c));
    }

    Derivation scaled(const Rational& k) const {
        std::vector<Polynomial> c;
        for (const auto& a : coeffs_) c.push_back(a.scaled(k));
        return Derivation(vars_, std::move(c));
    }

    bool operator==(const Derivation& o) const { return coeffs_ == o.coeffs_; }

private:
    VarTablePtr vars_;
    std::vector<Polynomial> coeffs_;
};

// [d1, d2] as a derivation: coefficient i is d1(b_i) - d2(a_i).
inline Derivation lie_bracket(const Derivation& a, const Derivation& b) {
    require_same_table(a.vars(), b.vars());
    std::vector<Polynomial> c;
    for (int i = 0; i < a.n(); ++i)
        c.push_back(a(b.coeffs()[i]) - b(a.coeffs()[i]));
    return Derivation(a.vars(), std::move(c));
}

struct LogCheck {
    bool logarithmic = false;
    Polynomial quotient;   // q with delta(f) = q f, when logarithmic
    Polynomial remainder;  // division witness otherwise
};

inline LogCheck is_logarithmic(const Derivation& delta, const Polynomial& f) {
    if (f.is_zero()) throw std::invalid_argument("is_logarithmic: zero divisor");
    auto d = exact_divide(delta(f), f);
    LogCheck out;
    out.logarithmic = d.exact;
    if (d.exact) out.quotient = d.quotient; else out.remainder = d.remainder;
    return out;
}

// ---------------------------------------------------------------------------
// Small exact matrix helpers (cofactor scale; n stays tiny here).

using PolyMatrix = std::vector<std::vector<Polynomial>>;

inline Polynomial poly_det(const PolyMatrix& m, VarTablePtr vars) {
    const size_t n = m.size();
    if (n == 0) return Polynomial::constant(vars, Rational(1));
    if (n == 1) return m[0][0];
    Polynomial out = Polynomial::zero(vars);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        PolyMatrix minor;
        for (size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        Polynomial term = m[0][j] * poly_det(minor, vars);
        out += (j % 2 == 0) ? term : -term;
    }
    return out;
}

// Classical adjugate: m * adj(m) = adj(m) * m = det(m) * I.
inline PolyMatrix poly_adjugate(const PolyMatrix& m, VarTablePtr vars) {
    const size_t n = m.size();
    PolyMatrix adj(n, std::vector<Polynomial>(n, Polynomial::zero(vars)));
    if (n == 1) {
        adj[0][0] = Polynomial::constant(vars, Rational(1));
        return adj;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            PolyMatrix minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<Polynomial> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Polynomial cof = poly_det(minor, vars);
            adj[j][i] = ((i + j) % 2 == 0) ? cof : -cof;  // transpose of cofactors
        }
    return adj;
}

// ---------------------------------------------------------------------------

struct SaitoFailure {
    enum class Kind {
        not_logarithmic,      // some basis member fails delta(f) in (f)
        wrong_determinant,    // det(A) is not unit * f
        bracket_not_in_span,  // structure constants do not solve exactly
        wrong_count,
    };
    Kind kind;
    int index = -1;          // offending basis member / pair when applicable
    int index2 = -1;
    Polynomial witness;      // remainder or determinant
    std::string detail;
};

class SaitoFrame {
public:
    const Polynomial& divisor() const { return f_; }
    const std::vector<Derivation>& basis() const { return basis_; }
    const PolyMatrix& matrix_A() const { return A_; }
    const PolyMatrix& adjugate_B() const { return B_; }  // A * B = det * I
    const Polynomial& det_g() const { return det_; }

    // det = unit * f.  The strict (global) reading wants a nonzero rational;
    // a nonconstant unit with nonzero constant term still certifies freeness
    // near the origin and is tolerated with a flag.
    const Polynomial& unit() const { return unit_; }
    bool unit_is_constant() const { return unit_.is_constant(); }
    Rational unit_c() const { return unit_.constant_value(); }
    bool local_only() const { return !unit_is_constant(); }

    // a^k_{ij} with [delta_i, delta_j] = sum_k a^k_{ij} delta_k.
    const Polynomial& structure_constant(int i, int j, int k) const {
        return a_.at(i).at(j).at(k);
    }

    // delta_i(f) = q_i f; the logarithmicity quotients.
    const std::vector<Polynomial>& log_quotients() const { return quotients_; }

    int n() const { return static_cast<int>(basis_.size()); }
    const VarTablePtr& vars() const { return f_.vars(); }

    Polynomial symbol(int i) const { return basis_[i].symbol(); }

    friend std::variant<SaitoFrame, SaitoFailure> saito_frame(const Polynomial& f,
                                                              const std::vector<Derivation>& basis);

private:
    SaitoFrame() = default;

    Polynomial f_;
    std::vector<Derivation> basis_;
    PolyMatrix A_;
    PolyMatrix B_;
    Polynomial det_;
    Polynomial unit_;
    std::vector<Polynomial> quotients_;
    std::vector<std::vector<std::vector<Polynomial>>> a_;  // a_[i][j][k]
};

using SaitoResult = std::variant<SaitoFrame, SaitoFailure>;

inline SaitoResult saito_frame(const Polynomial& f, const std::vector<Derivation>& basis) {
    const auto vars = f.vars();
    const int n = vars->dimension();
    if (static_cast<int>(basis.size()) != n)
        return SaitoFailure{SaitoFailure::Kind::wrong_count, -1, -1, Polynomial::zero(vars),
                            "expected " + std::to_string(n) + " derivations"};

    SaitoFrame frame;
    frame.f_ = f;
    frame.basis_ = basis;

    for (int i = 0; i < n; ++i) {
        auto chk = is_logarithmic(basis[i], f);
        if (!chk.logarithmic)
            return SaitoFailure{SaitoFailure::Kind::not_logarithmic, i, -1, chk.remainder,
                                "basis member " + std::to_string(i + 1) + " is not logarithmic"};
        frame.quotients_.push_back(chk.quotient);
    }

    frame.A_.assign(n, std::vector<Polynomial>(n, Polynomial::zero(vars)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frame.A_[i][j] = basis[i].coeffs()[j];

    frame.det_ = poly_det(frame.A_, vars);
    auto div = exact_divide(frame.det_, f);
    if (frame.det_.is_zero() || !div.exact || div.quotient.is_zero() ||
        div.quotient.constant_term() == 0)
        return SaitoFailure{SaitoFailure::Kind::wrong_determinant, -1, -1, frame.det_,
                            "det(A) is not a unit multiple of f"};
    frame.unit_ = div.quotient;
    frame.B_ = poly_adjugate(frame.A_, vars);

    // Structure constants by Cramer: row = bracket coefficients, then
    // a = row * B / det.  Exactness of the division is the membership
    // certificate for the bracket lying in the O-span of the basis.
    frame.a_.assign(n, std::vector<std::vector<Polynomial>>(
                           n, std::vector<Polynomial>(n, Polynomial::zero(vars))));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Derivation br = lie_bracket(basis[i], basis[j]);
            for (int k = 0; k < n; ++k) {
                Polynomial dot = Polynomial::zero(vars);
                for (int l = 0; l < n; ++l) dot += br.coeffs()[l] * frame.B_[l][k];
                auto q = exact_divide(dot, frame.det_);
                if (!q.exact)
                    return SaitoFailure{SaitoFailure::Kind::bracket_not_in_span, i, j, q.remainder,
                                        "bracket [" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + "] leaves the span"};
                frame.a_[i][j][k] = q.quotient;
                frame.a_[j][i][k] = -q.quotient;
            }
            // The solved combination must reproduce the bracket exactly.
            for (int l = 0; l < n; ++l) {
                Polynomial lhs = br.coeffs()[l];
                for (int k = 0; k < n; ++k) lhs -= frame.a_[i][j][k] * basis[k].coeffs()[l];
                if (!lhs.is_zero())
                    return SaitoFailure{SaitoFailure::Kind::bracket_not_in_span, i, j, lhs,
                                        "Cramer solution fails to reproduce the bracket"};
            }
        }
    return frame;
}

// Convenience: the structure-constant solve for a bracket of two frame
// members, exposed for tests and for the Spencer construction.
inline std::vector<Polynomial> bracket_coefficients(const SaitoFrame& frame, int i, int j) {
    std::vector<Polynomial> out;
    for (int k = 0; k < frame.n(); ++k) out.push_back(frame.structure_constant(i, j, k));
    return out;
}

}  // namespace logdiff
