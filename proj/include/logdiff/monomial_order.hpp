#pragma once

// Monomial orders on exponent vectors.
//
// Term comparison is detached from Polynomial storage: values store their
// terms in a fixed representation and every order-sensitive computation
// (division, Groebner bases, rendering) sorts through one of these.

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace logdiff {

using Exponents = std::vector<int32_t>;

inline int total_degree(const Exponents& e) {
    int d = 0;
    for (int32_t v : e) d += v;
    return d;
}

inline Exponents exp_mul(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

// a/b, or nothing when b does not divide a.
inline bool exp_divides(const Exponents& b, const Exponents& a) {
    for (size_t i = 0; i < a.size(); ++i)
        if (b[i] > a[i]) return false;
    return true;
}

inline Exponents exp_div(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Exponents exp_lcm(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
    return out;
}

inline bool exp_coprime(const Exponents& a, const Exponents& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

class MonomialOrder {
public:
    enum class Kind { degrevlex, lex, block_symbol_first };

    explicit MonomialOrder(Kind kind = Kind::degrevlex, int dimension = 0)
        : kind_(kind), n_(dimension) {
        if (kind == Kind::block_symbol_first && dimension <= 0)
            throw std::invalid_argument("block order needs the base dimension n");
    }

    Kind kind() const { return kind_; }

    // Strict "a comes before b" (a > b in the order, i.e. descending sort).
    bool greater(const Exponents& a, const Exponents& b) const {
        return compare(a, b) > 0;
    }

    // Three-way: >0 when a > b.
    int compare(const Exponents& a, const Exponents& b) const {
        switch (kind_) {
            case Kind::degrevlex:
                return degrevlex(a, b, 0, static_cast<int>(a.size()));
            case Kind::lex: {
                for (size_t i = 0; i < a.size(); ++i)
                    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
                return 0;
            }
            case Kind::block_symbol_first: {
                // xi-block decides first (eliminates the symbols), degrevlex
                // within each block.
                int c = degrevlex(a, b, n_, static_cast<int>(a.size()));
                if (c != 0) return c;
                return degrevlex(a, b, 0, n_);
            }
        }
        return 0;
    }

    static MonomialOrder from_name(const std::string& name, int dimension) {
        if (name == "degrevlex") return MonomialOrder(Kind::degrevlex);
        if (name == "lex") return MonomialOrder(Kind::lex);
        if (name == "block") return MonomialOrder(Kind::block_symbol_first, dimension);
        throw std::invalid_argument("unknown monomial order '" + name + "'");
    }

private:
    static int degrevlex(const Exponents& a, const Exponents& b, int lo, int hi) {
        int da = 0, db = 0;
        for (int i = lo; i < hi; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da > db ? 1 : -1;
        // Equal degree: last variable with differing exponent, smaller wins.
        for (int i = hi - 1; i >= lo; --i)
            if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        return 0;
    }

    Kind kind_;
    int n_;
};

}  // namespace logdiff
