#pragma once

// Independent brute-force homology of a polynomial FreeComplex with
// homogeneous generators, truncated at a total-degree bound.  Pure linear
// algebra over Q on monomial bases; shares nothing with the library's
// Groebner or Koszul machinery beyond the complex's matrices themselves.

#include <logdiff/complexes.hpp>
#include <logdiff/polynomial.hpp>

#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using logdiff::Exponents;
using logdiff::Polynomial;
using logdiff::Rational;

// Exact rank by rational Gaussian elimination.
inline int matrix_rank(std::vector<std::vector<Rational>> m) {
    int rank = 0;
    const int rows = static_cast<int>(m.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!logdiff::is_zero(m[r][c])) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        const Rational inv = Rational(1) / m[rank][c];
        for (int cc = c; cc < cols; ++cc) m[rank][cc] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || logdiff::is_zero(m[r][c])) continue;
            const Rational factor = m[r][c];
            for (int cc = c; cc < cols; ++cc) m[r][cc] -= factor * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

inline std::vector<Exponents> monomials_of_degree(int width, int degree) {
    std::vector<Exponents> out;
    Exponents cur(width, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == width - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[pos] = k;
            rec(pos + 1, left - k);
        }
    };
    if (width == 0) return out;
    rec(0, degree);
    return out;
}

struct TruncatedHomology {
    // homology dimension summed over internal degrees <= bound, per slot p
    // (p = 1..length; degree-0 slot excluded on purpose).
    std::vector<int> dims;

    bool vanishes() const {
        for (int d : dims)
            if (d != 0) return false;
        return true;
    }
};

// The complex must have homogeneous entries; gen_degrees[p][i] gives the
// internal degree of the i-th generator in slot p.  For a Koszul complex on
// homogeneous elements these are subset degree sums.
inline TruncatedHomology truncated_homology(const logdiff::PolyComplex& cx,
                                            const std::vector<std::vector<int>>& gen_degrees,
                                            int degree_bound) {
    const int width = [&] {
        for (int p = 1; p <= cx.length(); ++p)
            for (const auto& row : cx.differentials[p])
                for (const auto& e : row)
                    if (e.vars()) return e.vars()->ring_vars();
        return 0;
    }();

    // Basis slice of slot p at internal degree t: (generator, monomial) pairs.
    struct Slice {
        std::vector<std::pair<int, Exponents>> basis;
        std::map<std::pair<int, Exponents>, int> index;
    };
    auto slice_of = [&](int p, int t) {
        Slice s;
        for (size_t g = 0; g < gen_degrees[p].size(); ++g) {
            int rem = t - gen_degrees[p][g];
            if (rem < 0) continue;
            for (auto& m : monomials_of_degree(width, rem)) {
                s.index[{static_cast<int>(g), m}] = static_cast<int>(s.basis.size());
                s.basis.emplace_back(static_cast<int>(g), m);
            }
        }
        return s;
    };

    TruncatedHomology out;
    out.dims.assign(cx.length() + 1, 0);

    for (int t = 0; t <= degree_bound; ++t) {
        std::vector<Slice> slices;
        for (int p = 0; p <= cx.length(); ++p) slices.push_back(slice_of(p, t));

        // Matrix of d_p restricted to the degree-t slice.
        auto matrix_of = [&](int p) {
            const Slice& src = slices[p];
            const Slice& dst = slices[p - 1];
            std::vector<std::vector<Rational>> m(
                src.basis.size(), std::vector<Rational>(dst.basis.size(), Rational(0)));
            for (size_t r = 0; r < src.basis.size(); ++r) {
                const auto& [g, mono] = src.basis[r];
                const auto& row = cx.differentials[p][g];
                for (size_t tgt = 0; tgt < row.size(); ++tgt) {
                    for (const auto& [e, c] : row[tgt].terms()) {
                        Exponents prod(width);
                        for (int i = 0; i < width; ++i) prod[i] = e[i] + mono[i];
                        auto it = dst.index.find({static_cast<int>(tgt), prod});
                        if (it != dst.index.end()) m[r][it->second] += c;
                    }
                }
            }
            return m;
        };

        std::vector<int> ranks(cx.length() + 2, 0);
        for (int p = 1; p <= cx.length(); ++p) ranks[p] = matrix_rank(matrix_of(p));
        for (int p = 1; p <= cx.length(); ++p) {
            int kernel = static_cast<int>(slices[p].basis.size()) - ranks[p];
            int image_in = (p + 1 <= cx.length()) ? ranks[p + 1] : 0;
            out.dims[p] += kernel - image_in;
        }
    }
    return out;
}

// Convenience for Koszul complexes on homogeneous elements.
inline TruncatedHomology truncated_koszul_homology(const std::vector<Polynomial>& elements,
                                                   int degree_bound) {
    for (const auto& e : elements)
        if (e.degree() < 1) throw std::invalid_argument("oracle needs nonconstant elements");
    auto cx = logdiff::koszul_complex(elements);
    const int m = static_cast<int>(elements.size());
    std::vector<std::vector<int>> degs;
    for (int p = 0; p <= m; ++p) {
        std::vector<int> row;
        for (const auto& subset : logdiff::increasing_subsets(m, p)) {
            int d = 0;
            for (int i : subset) d += elements[i].degree();
            row.push_back(d);
        }
        degs.push_back(std::move(row));
    }
    return truncated_homology(cx, degs, degree_bound);
}

}  // namespace oracle
