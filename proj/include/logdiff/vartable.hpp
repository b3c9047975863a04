#pragma once

// Variable bookkeeping for the 2n-variable ring O[xi].
//
// Base variables x_1..x_n come first (indices 0..n-1), their paired symbol
// variables xi_1..xi_n follow (indices n..2n-1).  Exponent vectors everywhere
// in the library have length 2n and use this indexing.

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace logdiff {

class VarTable {
public:
    VarTable(std::vector<std::string> base_vars, std::vector<std::string> symbol_vars)
        : base_(std::move(base_vars)), symbol_(std::move(symbol_vars)) {
        if (base_.empty()) throw std::invalid_argument("VarTable: need at least one variable");
        if (symbol_.size() != base_.size())
            throw std::invalid_argument("VarTable: base/symbol variable counts differ");
        std::set<std::string> seen;
        for (const auto& lists : {base_, symbol_})
            for (const auto& name : lists) {
                if (name.empty()) throw std::invalid_argument("VarTable: empty variable name");
                if (!seen.insert(name).second)
                    throw std::invalid_argument("VarTable: duplicate variable name '" + name + "'");
            }
    }

    // Symbol names default to xi_<base>.
    explicit VarTable(std::vector<std::string> base_vars)
        : VarTable(base_vars, derive_symbol_names(base_vars)) {}

    int dimension() const { return static_cast<int>(base_.size()); }  // n
    int ring_vars() const { return 2 * dimension(); }                 // 2n

    const std::vector<std::string>& base_names() const { return base_; }
    const std::vector<std::string>& symbol_names() const { return symbol_; }

    int base_index(int i) const { return i; }
    int symbol_index(int i) const { return dimension() + i; }
    bool is_symbol_index(int idx) const { return idx >= dimension(); }

    const std::string& name(int idx) const {
        int n = dimension();
        if (idx < 0 || idx >= 2 * n) throw std::out_of_range("VarTable::name");
        return idx < n ? base_[idx] : symbol_[idx - n];
    }

    // Index of a variable by name, -1 if unknown.
    int find(const std::string& name) const {
        for (int i = 0; i < dimension(); ++i)
            if (base_[i] == name) return i;
        for (int i = 0; i < dimension(); ++i)
            if (symbol_[i] == name) return dimension() + i;
        return -1;
    }

    bool operator==(const VarTable& other) const {
        return base_ == other.base_ && symbol_ == other.symbol_;
    }
    bool operator!=(const VarTable& other) const { return !(*this == other); }

private:
    static std::vector<std::string> derive_symbol_names(const std::vector<std::string>& base) {
        std::vector<std::string> out;
        out.reserve(base.size());
        for (const auto& b : base) out.push_back("xi_" + b);
        return out;
    }

    std::vector<std::string> base_;
    std::vector<std::string> symbol_;
};

// Values of every algebraic type share the table through a shared_ptr; copies
// are cheap and comparisons are by content.
using VarTablePtr = std::shared_ptr<const VarTable>;

inline VarTablePtr make_vars(std::vector<std::string> base) {
    return std::make_shared<const VarTable>(std::move(base));
}

inline VarTablePtr make_vars(std::vector<std::string> base, std::vector<std::string> symbols) {
    return std::make_shared<const VarTable>(std::move(base), std::move(symbols));
}

inline void require_same_table(const VarTablePtr& a, const VarTablePtr& b) {
    if (a == b) return;
    if (!a || !b || !(*a == *b))
        throw std::invalid_argument("operands use different variable tables");
}

}  // namespace logdiff
