#pragma once

// The structure theorem machinery for logarithmic operators:
//
//   * Poisson bracket on O[xi] and greedy symbol chains {R_k, f} = f R_{k+1}.
//   * Decomposition R_k = sum_j H_j^k sigma(delta_j) through the adjugate of
//     the Saito matrix.
//   * Lifting of chain-admitting symbols to operator words in the frame
//     derivations, and the PBW normal form beta_{i_1..i_n} delta^I that
//     rewrites any V_0 operator over a free basis.
//   * Direct V_0 membership probing (P(f^j) in (f^j)) as a cross-check.
//   * Meromorphic shifting f^{-p} P = Q f^{-k}.
//
// Membership is decided by success of the constructive rewrite; rejections
// carry machine-checkable witnesses (the indivisible remainder).

#include "logdiff/logder.hpp"
#include "logdiff/polynomial.hpp"
#include "logdiff/weyl.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace logdiff {

using FramePtr = std::shared_ptr<const SaitoFrame>;

inline FramePtr share(SaitoFrame frame) {
    return std::make_shared<const SaitoFrame>(std::move(frame));
}

// {F,G} = sum_i dF/dxi_i dG/dx_i - sum_i dF/dx_i dG/dxi_i.
inline Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g) {
    const auto& vt = f.vars() ? f.vars() : g.vars();
    Polynomial out = Polynomial::zero(vt);
    const int n = vt->dimension();
    for (int i = 0; i < n; ++i) {
        out += f.partial(vt->symbol_index(i)) * g.partial(vt->base_index(i));
        out -= f.partial(vt->base_index(i)) * g.partial(vt->symbol_index(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symbol chains

struct SymbolChain {
    Polynomial f;
    std::vector<Polynomial> terms;  // R_0 .. R_d, R_k xi-homogeneous of degree d-k or zero

    int leading_degree() const { return static_cast<int>(terms.size()) - 1; }
};

struct ChainFailure {
    int k = -1;            // {R_k, f} was not divisible by f
    Polynomial remainder;  // nonzero division witness
};

using ChainResult = std::variant<SymbolChain, ChainFailure>;

// Builds the chain greedily: R_{k+1} = {R_k, f} / f.  The chain is unique
// when it exists because O[xi] is a domain.
inline ChainResult symbol_chain(const Polynomial& r0, const Polynomial& f) {
    if (!r0.is_xi_homogeneous())
        throw std::invalid_argument("symbol_chain: R0 must be xi-homogeneous");
    SymbolChain chain;
    chain.f = f;
    chain.terms.push_back(r0);
    const int d = std::max(0, r0.xi_degree());
    for (int k = 0; k < d; ++k) {
        auto div = exact_divide(poisson_bracket(chain.terms.back(), f), f);
        if (!div.exact) return ChainFailure{k, div.remainder};
        chain.terms.push_back(div.quotient);
    }
    return chain;
}

struct InexactDivisionError : std::runtime_error {
    InexactDivisionError(std::string what, Polynomial witness_)
        : std::runtime_error(std::move(what)), witness(std::move(witness_)) {}
    Polynomial witness;
};

// H matrix of the decomposition: row k (0 <= k < d), column j (basis index),
// with H_j^k = G_j^k / d where (G^k)_j = ((R_k)_xi . B)_j / det.  The uniform
// 1/d scaling keeps every column an honest symbol chain; at k = 0 it also
// gives R_0 = sum_j H_j^0 sigma(delta_j).
inline std::vector<std::vector<Polynomial>> decompose_symbol(const SymbolChain& chain,
                                                             const SaitoFrame& frame) {
    const int d = chain.leading_degree();
    if (d < 1) throw std::invalid_argument("decompose_symbol: chain must have leading degree >= 1");
    const auto vars = frame.vars();
    const int n = frame.n();
    std::vector<std::vector<Polynomial>> h(d, std::vector<Polynomial>(n, Polynomial::zero(vars)));
    const Rational inv_d = Rational(1) / d;
    for (int k = 0; k < d; ++k) {
        const Polynomial& rk = chain.terms[k];
        if (rk.is_zero()) continue;
        std::vector<Polynomial> r_xi;
        for (int i = 0; i < n; ++i) r_xi.push_back(rk.partial(vars->symbol_index(i)));
        for (int j = 0; j < n; ++j) {
            Polynomial dot = Polynomial::zero(vars);
            for (int l = 0; l < n; ++l) dot += r_xi[l] * frame.adjugate_B()[l][j];
            auto div = exact_divide(dot, frame.det_g());
            if (!div.exact)
                throw InexactDivisionError("decompose_symbol: (R_xi . B) not divisible by det",
                                           div.remainder);
            h[k][j] = div.quotient.scaled(inv_d);
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Words in the frame derivations

struct WordPoly {
    FramePtr frame;
    std::map<std::vector<int>, Polynomial> words;  // word (basis indices) -> O-coefficient

    void add(std::vector<int> word, const Polynomial& c) {
        if (c.is_zero()) return;
        auto it = words.find(word);
        if (it == words.end()) {
            words.emplace(std::move(word), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) words.erase(it);
        }
    }
};

inline DiffOp expand(const WordPoly& w) {
    const auto& frame = *w.frame;
    DiffOp out = DiffOp::zero(frame.vars());
    for (const auto& [word, coeff] : w.words) {
        DiffOp term = DiffOp::function(coeff);
        for (int j : word) term = compose(term, frame.basis()[j].as_operator());
        out += term;
    }
    return out;
}

namespace detail {

// Unfolds a chain into sum_{words w of length d} c_w sigma^w; `emit` receives
// each (word, coefficient).  Columns of the H matrix are chains again, which
// is what drives the recursion.
template <typename Emit>
void unfold_chain(const SymbolChain& chain, const SaitoFrame& frame, std::vector<int>& word,
                  Emit&& emit) {
    const int d = chain.leading_degree();
    if (d == 0) {
        if (!chain.terms[0].is_zero()) emit(word, chain.terms[0]);
        return;
    }
    auto h = decompose_symbol(chain, frame);
    const int n = frame.n();
    for (int j = 0; j < n; ++j) {
        if (h[0][j].is_zero()) continue;  // whole column vanishes with its head
        SymbolChain column;
        column.f = chain.f;
        for (int k = 0; k < d; ++k) column.terms.push_back(h[k][j]);
        word.push_back(j);
        unfold_chain(column, frame, word, emit);
        word.pop_back();
    }
}

}  // namespace detail

// Symbol lifting: a word polynomial Q in the frame derivations whose
// expansion has principal symbol R0.  Returns words; only normal_form
// commits to sorted PBW monomials.
inline std::variant<WordPoly, ChainFailure> symbol_to_logop(const Polynomial& r0,
                                                            const FramePtr& frame) {
    auto chain = symbol_chain(r0, frame->divisor());
    if (std::holds_alternative<ChainFailure>(chain)) return std::get<ChainFailure>(chain);
    WordPoly out;
    out.frame = frame;
    std::vector<int> word;
    detail::unfold_chain(std::get<SymbolChain>(chain), *frame, word,
                         [&](const std::vector<int>& w, const Polynomial& c) {
                             // Words are emitted leaf-coefficient first; the
                             // recorded word reads left to right as written.
                             std::vector<int> rev(w.rbegin(), w.rend());
                             out.add(std::move(rev), c);
                         });
    return out;
}

// ---------------------------------------------------------------------------
// PBW normal form

class PBWForm {
public:
    PBWForm() = default;
    explicit PBWForm(FramePtr frame) : frame_(std::move(frame)) {}

    const FramePtr& frame() const { return frame_; }
    const std::map<Exponents, Polynomial>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : coeffs_) d = std::max(d, logdiff::total_degree(e));
        return d;
    }

    void add(Exponents exps, const Polynomial& c) {
        if (c.is_zero()) return;
        auto it = coeffs_.find(exps);
        if (it == coeffs_.end()) {
            coeffs_.emplace(std::move(exps), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    bool operator==(const PBWForm& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const PBWForm& o) const { return !(*this == o); }

private:
    FramePtr frame_;
    std::map<Exponents, Polynomial> coeffs_;  // (i_1..i_n) -> beta, no zero entries
};

// Composes out the PBW monomials in the Weyl algebra.
inline DiffOp expand(const PBWForm& w) {
    const auto& frame = *w.frame();
    DiffOp out = DiffOp::zero(frame.vars());
    for (const auto& [exps, beta] : w.coeffs()) {
        DiffOp term = DiffOp::function(beta);
        for (int i = 0; i < frame.n(); ++i)
            for (int k = 0; k < exps[i]; ++k) term = compose(term, frame.basis()[i].as_operator());
        out += term;
    }
    return out;
}

struct NotLogarithmic {
    enum class Stage { commutator_division, chain };
    Stage stage = Stage::commutator_division;
    int order_level = -1;       // order of the remainder being rewritten
    int step = -1;              // chain index k at which division failed
    Exponents offending_alpha;  // for commutator_division
    Polynomial witness;         // nonzero remainder
};

using NormalFormResult = std::variant<PBWForm, NotLogarithmic>;

namespace detail {

// Collects the chain unfolding into commuting symbol monomials: the words of
// unfold_chain merged by multiset, i.e. R_0 = sum_{|I|=d} C_I sigma^I.
inline std::map<Exponents, Polynomial> collect_in_symbols(const SymbolChain& chain,
                                                          const SaitoFrame& frame) {
    std::map<Exponents, Polynomial> out;
    const int n = frame.n();
    const int d = chain.leading_degree();
    if (d == 0) {
        if (!chain.terms[0].is_zero()) out.emplace(Exponents(n, 0), chain.terms[0]);
        return out;
    }
    std::vector<int> word;
    unfold_chain(chain, frame, word, [&](const std::vector<int>& w, const Polynomial& c) {
        Exponents exps(n, 0);
        for (int j : w) exps[j] += 1;
        auto it = out.find(exps);
        if (it == out.end()) {
            out.emplace(std::move(exps), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    });
    return out;
}

}  // namespace detail

// The structure-theorem rewrite: repeatedly certify [P_k, f] = f P_{k+1}, descend on
// symbols, and subtract the lifted top part.  Success is the membership
// decision; the returned form expands back to P exactly.
inline NormalFormResult normal_form(const DiffOp& p, const FramePtr& frame) {
    const auto& f = frame->divisor();
    const DiffOp f_op = DiffOp::function(f);
    PBWForm out(frame);
    DiffOp rem = p;
    while (!rem.is_zero()) {
        const int d = rem.order();
        if (d == 0) {
            out.add(Exponents(frame->n(), 0), rem.coefficient(Exponents(frame->n(), 0)));
            break;
        }
        // Operator chain [P_k, f] = f P_{k+1}, k = 0..d-1.
        std::vector<DiffOp> ops{rem};
        for (int k = 0; k < d; ++k) {
            auto div = left_divide_by_function(commutator(ops.back(), f_op), f);
            if (!div.exact)
                return NotLogarithmic{NotLogarithmic::Stage::commutator_division, d, k,
                                      div.offending_alpha, div.remainder};
            ops.push_back(div.quotient);
        }
        // Induced symbol chain: R_k is the xi-degree-(d-k) slice of the total
        // symbol of P_k.  The Poisson identity makes it a chain; the division
        // below re-verifies that instead of trusting it.
        SymbolChain chain;
        chain.f = f;
        for (int k = 0; k <= d; ++k) chain.terms.push_back(xi_component(full_symbol(ops[k]), d - k));
        for (int k = 0; k < d; ++k) {
            auto div = exact_divide(poisson_bracket(chain.terms[k], f), f);
            if (!div.exact || div.quotient != chain.terms[k + 1])
                return NotLogarithmic{NotLogarithmic::Stage::chain, d, k, Exponents{},
                                      div.exact ? div.quotient - chain.terms[k + 1] : div.remainder};
        }
        auto collected = detail::collect_in_symbols(chain, *frame);
        PBWForm top(frame);
        for (auto& [exps, c] : collected) top.add(exps, c);
        DiffOp lifted = expand(top);
        for (auto& [exps, c] : collected) out.add(exps, c);
        rem -= lifted;
        // The lifted part carries the full principal symbol, so the order
        // drops; anything else is a broken invariant, not an input error.
        if (!rem.is_zero() && rem.order() >= d)
            throw std::logic_error("normal_form: descent failed to reduce the order");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Direct V_0 probing

struct V0Report {
    bool passed = false;
    int failing_j = -1;
    Polynomial remainder;  // P(f^j) mod f^j at the first failure
};

// Checks P(f^j) in (f^j) for j = 0..order(P).  A cross-check for the
// constructive rewrite, not the primary decision procedure.
inline V0Report v0_membership_witness(const DiffOp& p, const Polynomial& f) {
    V0Report rep;
    const int d = std::max(0, p.order());
    Polynomial f_power = Polynomial::constant(f.vars(), Rational(1));
    for (int j = 0; j <= d; ++j) {
        if (j > 0) f_power *= f;
        auto div = exact_divide(apply(p, f_power), f_power);
        if (!div.exact) {
            rep.failing_j = j;
            rep.remainder = div.remainder;
            return rep;
        }
    }
    rep.passed = true;
    return rep;
}

// ---------------------------------------------------------------------------
// Meromorphic shifting (f^{-p} P = Q f^{-k})

struct ShiftResult {
    PBWForm q;
    int k = 0;
};

using ShiftOrFailure = std::variant<ShiftResult, NotLogarithmic>;

namespace detail {

// Inductive construction: with C = [P, f^p] of lower order and
// f^{-p} C = Q_C f^{-k_C}, the pair Q = P f^{k_C} + Q_C, k = k_C + p works.
inline std::pair<DiffOp, int> shift_raw(const DiffOp& p, int pow, const Polynomial& f) {
    if (p.order() <= 0) return {p, pow};
    const DiffOp fp_op = DiffOp::function(f.pow(pow));
    auto [qc, kc] = shift_raw(commutator(p, fp_op), pow, f);
    DiffOp q = compose(p, DiffOp::function(f.pow(kc))) + qc;
    return {std::move(q), kc + pow};
}

}  // namespace detail

// Returns the minimal k reachable from the inductive construction: the raw
// pair is reduced by right division while Q stays divisible AND stays
// logarithmic.  (Q = Q' f with Q' in D \ V_0 can happen, e.g.
// x^{-1} (x d_x) = d_x; the lemma wants the shifted operator inside V_0.)
inline ShiftOrFailure meromorphic_shift(const DiffOp& p, int pow, const FramePtr& frame) {
    if (pow < 1) throw std::invalid_argument("meromorphic_shift: p must be >= 1");
    const auto& f = frame->divisor();
    auto [q, k] = detail::shift_raw(p, pow, f);
    auto nf = normal_form(q, frame);
    if (std::holds_alternative<NotLogarithmic>(nf)) return std::get<NotLogarithmic>(nf);
    while (k > 0) {
        auto reduced = right_divide_by_function(q, f);
        if (!reduced) break;
        auto nf_reduced = normal_form(*reduced, frame);
        if (std::holds_alternative<NotLogarithmic>(nf_reduced)) break;
        q = std::move(*reduced);
        nf = std::move(nf_reduced);
        --k;
    }
    return ShiftResult{std::get<PBWForm>(nf), k};
}

// The cleared-denominator identity P o f^k = f^p o Q, compared exactly in D.
inline bool verify_shift(const DiffOp& p, int pow, const DiffOp& q_expanded, int k,
                         const Polynomial& f) {
    DiffOp lhs = compose(p, DiffOp::function(f.pow(k)));
    DiffOp rhs = compose(DiffOp::function(f.pow(pow)), q_expanded);
    return lhs == rhs;
}

}  // namespace logdiff
