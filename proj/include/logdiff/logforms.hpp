#pragma once

// Logarithmic differential forms with poles along the divisor, the
// contraction pairing against derivations, dual bases of Saito frames,
// logarithmic connections given by matrices over the frame, and the
// logarithmic de Rham differential.
//
// Forms are stored over the dx basis with f-power denominators; the dual
// (omega) basis is derived data, which keeps wedge and derivative formulas
// denominator-local.

#include "logdiff/logder.hpp"
#include "logdiff/logops.hpp"
#include "logdiff/rational_function.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace logdiff {

// Index subsets of {0..n-1} as sorted vectors; the dx_J wedge basis.
using IndexSubset = std::vector<int>;

class LogForm {
public:
    LogForm() = default;
    // Degrees above n are allowed and necessarily zero (no index subsets of
    // that size exist); they appear transiently as d of a top-degree form.
    LogForm(VarTablePtr vars, Polynomial pole_base, int degree)
        : vars_(std::move(vars)), base_(std::move(pole_base)), degree_(degree) {
        if (degree_ < 0) throw std::invalid_argument("LogForm: negative degree");
    }

    static LogForm zero(VarTablePtr vars, Polynomial pole_base, int degree) {
        return LogForm(std::move(vars), std::move(pole_base), degree);
    }

    // dx_i as a 1-form.
    static LogForm dx(VarTablePtr vars, Polynomial pole_base, int i) {
        LogForm w(vars, pole_base, 1);
        w.set({i}, RationalFunction::from_polynomial(
                       Polynomial::constant(w.vars_, Rational(1)), w.base_));
        return w;
    }

    // A 0-form from a rational coefficient.
    static LogForm scalar(VarTablePtr vars, Polynomial pole_base, RationalFunction c) {
        LogForm w(vars, pole_base, 0);
        w.set({}, std::move(c));
        return w;
    }

    const VarTablePtr& vars() const { return vars_; }
    const Polynomial& pole_base() const { return base_; }
    int degree() const { return degree_; }
    const std::map<IndexSubset, RationalFunction>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    RationalFunction coefficient(const IndexSubset& j) const {
        auto it = coeffs_.find(j);
        return it == coeffs_.end() ? RationalFunction(Polynomial::zero(vars_), base_, 0)
                                   : it->second;
    }

    void set(IndexSubset j, RationalFunction c) {
        check_subset(j);
        if (c.is_zero()) {
            coeffs_.erase(j);
        } else {
            coeffs_.insert_or_assign(std::move(j), std::move(c));
        }
    }

    void accumulate(IndexSubset j, const RationalFunction& c) {
        check_subset(j);
        if (c.is_zero()) return;
        auto it = coeffs_.find(j);
        if (it == coeffs_.end()) {
            coeffs_.emplace(std::move(j), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    friend LogForm operator+(const LogForm& a, const LogForm& b) {
        if (a.degree_ != b.degree_) throw std::invalid_argument("form degrees differ");
        LogForm out = a;
        for (const auto& [j, c] : b.coeffs_) out.accumulate(j, c);
        return out;
    }
    friend LogForm operator-(const LogForm& a, const LogForm& b) { return a + b.scaled(Rational(-1)); }
    LogForm& operator+=(const LogForm& b) { *this = *this + b; return *this; }

    LogForm scaled(const Rational& k) const {
        LogForm out(vars_, base_, degree_);
        for (const auto& [j, c] : coeffs_) out.set(j, c.scaled(k));
        return out;
    }

    LogForm scaled(const RationalFunction& k) const {
        LogForm out(vars_, base_, degree_);
        for (const auto& [j, c] : coeffs_) out.set(j, c * k);
        return out;
    }

    bool operator==(const LogForm& o) const { return degree_ == o.degree_ && coeffs_ == o.coeffs_; }
    bool operator!=(const LogForm& o) const { return !(*this == o); }

private:
    void check_subset(const IndexSubset& j) const {
        if (static_cast<int>(j.size()) != degree_)
            throw std::invalid_argument("index subset size does not match form degree");
        for (size_t i = 0; i < j.size(); ++i) {
            if (j[i] < 0 || j[i] >= vars_->dimension()) throw std::out_of_range("form index");
            if (i + 1 < j.size() && j[i] >= j[i + 1])
                throw std::invalid_argument("index subset must be strictly increasing");
        }
    }

    VarTablePtr vars_;
    Polynomial base_;
    int degree_ = 0;
    std::map<IndexSubset, RationalFunction> coeffs_;
};

namespace detail {

// Merge two disjoint sorted subsets; returns the sign of the shuffle or 0 on
// overlap.
inline int merge_subsets(const IndexSubset& a, const IndexSubset& b, IndexSubset& out) {
    out.clear();
    int sign = 1;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            // b[j] jumps over the remaining entries of a.
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        } else {
            return 0;  // common index
        }
    }
    return sign;
}

}  // namespace detail

inline LogForm wedge(const LogForm& a, const LogForm& b) {
    if (a.pole_base() != b.pole_base()) throw std::invalid_argument("wedge: pole bases differ");
    const int q = a.degree() + b.degree();
    LogForm out(a.vars(), a.pole_base(), q);
    IndexSubset merged;
    for (const auto& [ja, ca] : a.coeffs())
        for (const auto& [jb, cb] : b.coeffs()) {
            int sign = detail::merge_subsets(ja, jb, merged);
            if (sign == 0) continue;
            RationalFunction c = ca * cb;
            out.accumulate(merged, sign > 0 ? c : -c);
        }
    return out;
}

// d(c dx_J) = sum_i dc/dx_i dx_i ^ dx_J.  On top-degree forms every shuffle
// collides and the result is the zero (q+1)-form.
inline LogForm exterior_derivative(const LogForm& a) {
    const int n = a.vars()->dimension();
    LogForm out(a.vars(), a.pole_base(), a.degree() + 1);
    IndexSubset merged;
    for (const auto& [j, c] : a.coeffs())
        for (int i = 0; i < n; ++i) {
            RationalFunction dc = c.partial(i);
            if (dc.is_zero()) continue;
            int sign = detail::merge_subsets({i}, j, merged);
            if (sign == 0) continue;
            out.accumulate(merged, sign > 0 ? dc : -dc);
        }
    return out;
}

// df as a (polynomial) 1-form over the pole base f.
inline LogForm differential_of(const Polynomial& f, const Polynomial& pole_base) {
    LogForm out(f.vars(), pole_base, 1);
    for (int i = 0; i < f.vars()->dimension(); ++i)
        out.accumulate({i}, RationalFunction::from_polynomial(f.partial(i), pole_base));
    return out;
}

struct FormLogCheck {
    bool logarithmic = false;
    std::string reason;
    IndexSubset witness_subset;
    RationalFunction witness;  // the coefficient that keeps a pole
};

// f*w and df^w must both be polynomial after reduction.
inline FormLogCheck is_logarithmic_form(const LogForm& w, const Polynomial& f) {
    FormLogCheck out;
    LogForm fw = w.scaled(RationalFunction::from_polynomial(f, w.pole_base()));
    for (const auto& [j, c] : fw.coeffs())
        if (!c.is_polynomial()) {
            out.reason = "f*w has a pole";
            out.witness_subset = j;
            out.witness = c;
            return out;
        }
    LogForm dfw = wedge(differential_of(f, w.pole_base()), w);
    for (const auto& [j, c] : dfw.coeffs())
        if (!c.is_polynomial()) {
            out.reason = "df^w has a pole";
            out.witness_subset = j;
            out.witness = c;
            return out;
        }
    out.logarithmic = true;
    return out;
}

// <w, delta> for a 1-form: sum_i c_i a_i.
inline RationalFunction contract(const LogForm& w, const Derivation& delta) {
    if (w.degree() != 1) throw std::invalid_argument("contract expects a 1-form");
    RationalFunction out(Polynomial::zero(w.vars()), w.pole_base(), 0);
    for (const auto& [j, c] : w.coeffs())
        out += delta.coeffs()[j[0]] * c;
    return out;
}

// gamma^p: full contraction of a p-form against p derivations.  On the
// basis, dx_J(d_1..d_p) is the determinant of the projected coefficients,
// which extends the det(<w_i, d_j>) formula by multilinearity.
inline RationalFunction gamma_pairing(const LogForm& w, const std::vector<Derivation>& deltas) {
    const int p = w.degree();
    if (static_cast<int>(deltas.size()) != p)
        throw std::invalid_argument("gamma_pairing: arity mismatch");
    RationalFunction out(Polynomial::zero(w.vars()), w.pole_base(), 0);
    if (p == 0) {
        for (const auto& [j, c] : w.coeffs()) out += c;
        return out;
    }
    for (const auto& [j, c] : w.coeffs()) {
        PolyMatrix m(p, std::vector<Polynomial>(p, Polynomial::zero(w.vars())));
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) m[a][b] = deltas[b].coeffs()[j[a]];
        out += poly_det(m, w.vars()) * c;
    }
    return out;
}

// Dual basis of a strict frame: omega_i = sum_l (B[l][i]/det) dx_l, so that
// <omega_i, delta_j> is Kronecker delta.
inline std::vector<LogForm> dual_basis(const SaitoFrame& frame) {
    if (frame.local_only())
        throw std::domain_error("dual_basis needs a constant Saito unit (strict frame)");
    const int n = frame.n();
    const auto& vars = frame.vars();
    const Rational inv_c = Rational(1) / frame.unit_c();
    std::vector<LogForm> out;
    for (int i = 0; i < n; ++i) {
        LogForm w(vars, frame.divisor(), 1);
        for (int l = 0; l < n; ++l)
            w.accumulate({l}, RationalFunction(frame.adjugate_B()[l][i].scaled(inv_c),
                                               frame.divisor(), 1));
        out.push_back(std::move(w));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Logarithmic connections over a frame

struct IntegrabilityFailure {
    int i = -1, j = -1, row = -1, col = -1;
    Polynomial witness;
};

class LogConnection {
public:
    // Gamma_i is the matrix of nabla_{delta_i} minus the derivation part:
    // nabla_{delta_i}(v) = delta_i(v) + Gamma_i v on coordinate columns.
    LogConnection(FramePtr frame, std::vector<PolyMatrix> gammas)
        : frame_(std::move(frame)), gammas_(std::move(gammas)) {
        if (static_cast<int>(gammas_.size()) != frame_->n())
            throw std::invalid_argument("LogConnection: need one Gamma per basis member");
        rank_ = gammas_.empty() ? 0 : static_cast<int>(gammas_[0].size());
        for (const auto& g : gammas_)
            if (static_cast<int>(g.size()) != rank_)
                throw std::invalid_argument("LogConnection: Gamma ranks differ");
    }

    static LogConnection trivial(FramePtr frame) {
        const auto vars = frame->vars();
        std::vector<PolyMatrix> gs(frame->n(),
                                   PolyMatrix(1, std::vector<Polynomial>(1, Polynomial::zero(vars))));
        return LogConnection(std::move(frame), std::move(gs));
    }

    // Rank-1 twist nabla = d + lambda df/f: Gamma_i = lambda delta_i(f)/f,
    // polynomial by logarithmicity.
    static LogConnection rank1_twist(FramePtr frame, const Rational& lambda) {
        std::vector<PolyMatrix> gs;
        for (int i = 0; i < frame->n(); ++i)
            gs.push_back(PolyMatrix(1, {frame->log_quotients()[i].scaled(lambda)}));
        return LogConnection(std::move(frame), std::move(gs));
    }

    const FramePtr& frame() const { return frame_; }
    int rank() const { return rank_; }
    const PolyMatrix& gamma(int i) const { return gammas_[i]; }

    // delta_i(Gamma_j) - delta_j(Gamma_i) + [Gamma_i, Gamma_j]
    //   = sum_k a^k_{ij} Gamma_k, entrywise exactly.
    std::optional<IntegrabilityFailure> integrability_failure() const {
        const int n = frame_->n();
        const auto vars = frame_->vars();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int r = 0; r < rank_; ++r)
                    for (int c = 0; c < rank_; ++c) {
                        Polynomial lhs = frame_->basis()[i](gammas_[j][r][c]) -
                                         frame_->basis()[j](gammas_[i][r][c]);
                        for (int m = 0; m < rank_; ++m)
                            lhs += gammas_[i][r][m] * gammas_[j][m][c] -
                                   gammas_[j][r][m] * gammas_[i][m][c];
                        for (int k = 0; k < n; ++k)
                            lhs -= frame_->structure_constant(i, j, k) * gammas_[k][r][c];
                        if (!lhs.is_zero())
                            return IntegrabilityFailure{i, j, r, c, lhs};
                    }
        return std::nullopt;
    }

    bool is_integrable() const { return !integrability_failure().has_value(); }

private:
    FramePtr frame_;
    int rank_ = 0;
    std::vector<PolyMatrix> gammas_;
};

// A section of Omega^p (M) for a rank-r connection: r coordinate p-forms.
using FormSection = std::vector<LogForm>;

struct NonIntegrable : std::runtime_error {
    explicit NonIntegrable(IntegrabilityFailure fail)
        : std::runtime_error("connection is not integrable"), failure(std::move(fail)) {}
    IntegrabilityFailure failure;
};

// nabla^p on component a:  d(s_a) + sum_i sum_b Gamma_i[a][b] omega_i ^ s_b,
// the local formula over the dual basis {omega_i}.
inline FormSection de_rham_differential(const LogConnection& conn, const FormSection& input) {
    if (auto fail = conn.integrability_failure()) throw NonIntegrable(*fail);
    if (static_cast<int>(input.size()) != conn.rank())
        throw std::invalid_argument("section rank mismatch");
    const auto& frame = *conn.frame();
    auto omegas = dual_basis(frame);
    FormSection out;
    for (int a = 0; a < conn.rank(); ++a) {
        LogForm acc = exterior_derivative(input[a]);
        for (int i = 0; i < frame.n(); ++i)
            for (int b = 0; b < conn.rank(); ++b) {
                const Polynomial& g = conn.gamma(i)[a][b];
                if (g.is_zero()) continue;
                acc += wedge(omegas[i], input[b])
                           .scaled(RationalFunction::from_polynomial(g, frame.divisor()));
            }
        out.push_back(std::move(acc));
    }
    return out;
}

}  // namespace logdiff
