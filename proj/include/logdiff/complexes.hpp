#pragma once

// Finite complexes of free modules: the logarithmic Spencer complex over the
// Weyl ring, its graded companion over O[xi], and generic Koszul complexes.
// Wedge bases are indexed by increasing subsets; the alternating-sum sign
// convention is fixed once here and every other sign is derived from it.
//
// Differentials are recorded as matrices of entries acting by right
// multiplication on row coordinates: composing two steps multiplies
// M_p (rank_p x rank_{p-1}) into M_{p-1} entrywise via the entry ring.

#include "logdiff/logder.hpp"
#include "logdiff/weyl.hpp"

#include <functional>
#include <string>
#include <vector>

namespace logdiff {

inline std::vector<std::vector<int>> increasing_subsets(int m, int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < m; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

namespace detail {

inline int subset_index(const std::vector<std::vector<int>>& basis, const std::vector<int>& s) {
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == s) return static_cast<int>(i);
    throw std::logic_error("subset not in basis");
}

// Sign of sorting k into the sorted set `rest` (k not in rest): (-1)^{#smaller}.
inline int insertion_sign(int k, const std::vector<int>& rest, std::vector<int>& merged) {
    merged.clear();
    int before = 0;
    for (int r : rest)
        if (r < k) ++before;
    merged = rest;
    merged.insert(std::lower_bound(merged.begin(), merged.end(), k), k);
    return before % 2 == 0 ? 1 : -1;
}

inline DiffOp ring_mul(const DiffOp& a, const DiffOp& b) { return compose(a, b); }
inline Polynomial ring_mul(const Polynomial& a, const Polynomial& b) { return a * b; }

}  // namespace detail

template <typename Entry>
struct FreeComplex {
    // ranks[p] = rank of the module in homological degree -p, p = 0..length.
    std::vector<int> ranks;
    // differentials[p]: matrix of the map from degree -p to degree -(p-1),
    // indexed [source][target]; differentials[0] is unused and empty.
    std::vector<std::vector<std::vector<Entry>>> differentials;

    int length() const { return static_cast<int>(ranks.size()) - 1; }
};

using WeylComplex = FreeComplex<DiffOp>;
using PolyComplex = FreeComplex<Polynomial>;

// Koszul complex of a sequence of ring elements: the first-sum differential
// e_J -> sum_i (-1)^{i-1} g_{j_i} e_{J \ j_i}.
inline PolyComplex koszul_complex(const std::vector<Polynomial>& elements) {
    if (elements.empty()) throw std::invalid_argument("koszul_complex: empty sequence");
    const int m = static_cast<int>(elements.size());
    const auto vars = elements[0].vars();
    PolyComplex cx;
    cx.differentials.emplace_back();
    for (int p = 0; p <= m; ++p)
        cx.ranks.push_back(static_cast<int>(increasing_subsets(m, p).size()));
    for (int p = 1; p <= m; ++p) {
        auto src = increasing_subsets(m, p);
        auto dst = increasing_subsets(m, p - 1);
        std::vector<std::vector<Polynomial>> mat(
            src.size(), std::vector<Polynomial>(dst.size(), Polynomial::zero(vars)));
        for (size_t r = 0; r < src.size(); ++r) {
            for (size_t i = 0; i < src[r].size(); ++i) {
                std::vector<int> rest = src[r];
                rest.erase(rest.begin() + static_cast<long>(i));
                int c = detail::subset_index(dst, rest);
                Polynomial term = elements[src[r][i]];
                mat[r][c] += (i % 2 == 0) ? term : -term;
            }
        }
        cx.differentials.push_back(std::move(mat));
    }
    return cx;
}

// Logarithmic Spencer complex of a frame, over the Weyl ring.  Entries are
// right-multiplication operators: frame derivations from the contraction
// sum, structure-constant coefficients from the bracket sum.
inline WeylComplex spencer_complex(const SaitoFrame& frame) {
    const int n = frame.n();
    const auto vars = frame.vars();
    WeylComplex cx;
    cx.differentials.emplace_back();
    for (int p = 0; p <= n; ++p)
        cx.ranks.push_back(static_cast<int>(increasing_subsets(n, p).size()));
    for (int p = 1; p <= n; ++p) {
        auto src = increasing_subsets(n, p);
        auto dst = increasing_subsets(n, p - 1);
        std::vector<std::vector<DiffOp>> mat(src.size(),
                                             std::vector<DiffOp>(dst.size(), DiffOp::zero(vars)));
        std::vector<int> merged;
        for (size_t r = 0; r < src.size(); ++r) {
            const auto& J = src[r];
            for (size_t i = 0; i < J.size(); ++i) {
                std::vector<int> rest = J;
                rest.erase(rest.begin() + static_cast<long>(i));
                int c = detail::subset_index(dst, rest);
                DiffOp term = frame.basis()[J[i]].as_operator();
                mat[r][c] += (i % 2 == 0) ? term : -term;
            }
            for (size_t i = 0; i < J.size(); ++i)
                for (size_t j = i + 1; j < J.size(); ++j) {
                    std::vector<int> rest;
                    for (size_t l = 0; l < J.size(); ++l)
                        if (l != i && l != j) rest.push_back(J[l]);
                    const int sign_ij = ((i + 1) + (j + 1)) % 2 == 0 ? 1 : -1;
                    for (int k = 0; k < n; ++k) {
                        const Polynomial& a = frame.structure_constant(J[i], J[j], k);
                        if (a.is_zero()) continue;
                        if (std::find(rest.begin(), rest.end(), k) != rest.end()) continue;
                        int s = detail::insertion_sign(k, rest, merged);
                        int c = detail::subset_index(dst, merged);
                        DiffOp term = DiffOp::function(a);
                        mat[r][c] += (sign_ij * s > 0) ? term : -term;
                    }
                }
        }
        cx.differentials.push_back(std::move(mat));
    }
    return cx;
}

// Graded Spencer complex: the Koszul complex on the frame symbols.
inline PolyComplex graded_spencer(const SaitoFrame& frame) {
    std::vector<Polynomial> sigmas;
    for (int i = 0; i < frame.n(); ++i) sigmas.push_back(frame.symbol(i));
    return koszul_complex(sigmas);
}

template <typename Entry>
struct CompositionReport {
    bool pass = true;
    int degree_p = 0;  // failing pair: d_{p-1} o d_p
    int row = -1, col = -1;
    Entry witness;
};

// Verifies d_{p-1} o d_p = 0 for all consecutive pairs, in the entry ring.
template <typename Entry>
CompositionReport<Entry> check_zero_composition(const FreeComplex<Entry>& cx) {
    CompositionReport<Entry> rep;
    for (int p = cx.length(); p >= 2; --p) {
        const auto& top = cx.differentials[p];
        const auto& bottom = cx.differentials[p - 1];
        const size_t cols = bottom.empty() ? 0 : bottom[0].size();
        for (size_t r = 0; r < top.size(); ++r)
            for (size_t c = 0; c < cols; ++c) {
                Entry acc{};
                for (size_t m = 0; m < bottom.size(); ++m)
                    acc += detail::ring_mul(top[r][m], bottom[m][c]);
                if (!acc.is_zero()) {
                    rep.pass = false;
                    rep.degree_p = p;
                    rep.row = static_cast<int>(r);
                    rep.col = static_cast<int>(c);
                    rep.witness = acc;
                    return rep;
                }
            }
    }
    return rep;
}

// Entrywise order-1 symbol slice of a Weyl complex; on the Spencer complex
// this recovers the graded (Koszul) matrices.
inline PolyComplex symbol_complex(const WeylComplex& cx, const VarTablePtr& vars) {
    PolyComplex out;
    out.ranks = cx.ranks;
    out.differentials.emplace_back();
    for (int p = 1; p <= cx.length(); ++p) {
        const auto& mat = cx.differentials[p];
        std::vector<std::vector<Polynomial>> sym(
            mat.size(), std::vector<Polynomial>(mat.empty() ? 0 : mat[0].size(),
                                                Polynomial::zero(vars)));
        for (size_t r = 0; r < mat.size(); ++r)
            for (size_t c = 0; c < mat[r].size(); ++c)
                sym[r][c] = xi_component(full_symbol(mat[r][c]), 1);
        out.differentials.push_back(std::move(sym));
    }
    return out;
}

struct AugmentationReport {
    bool pass = true;
    int index = -1;
    Polynomial witness;
};

// epsilon_0(P) = P(1); the augmented complex needs epsilon_0 o epsilon_{-1} = 0,
// i.e. each epsilon_{-1}(e_i) = delta_i kills constants.
inline AugmentationReport augmented_spencer_check(const SaitoFrame& frame) {
    AugmentationReport rep;
    const auto one = Polynomial::constant(frame.vars(), Rational(1));
    for (int i = 0; i < frame.n(); ++i) {
        Polynomial val = apply(frame.basis()[i].as_operator(), one);
        if (!val.is_zero()) {
            rep.pass = false;
            rep.index = i;
            rep.witness = val;
            return rep;
        }
    }
    return rep;
}

}  // namespace logdiff
