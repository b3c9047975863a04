#pragma once

// Commutative Groebner machinery over Q[x, xi]:
//
//   * Buchberger with normal pair selection, the coprimality criterion
//     (ideal case) and the chain criterion, ending in a reduced basis.
//     The engine works on submodules of a free module R^c; ideals are the
//     one-component case.
//   * Syzygies through the e_0 elimination trick: the module generated by
//     g_i e_0 + e_i is a cofactor tracker, and the basis elements with no
//     e_0 part generate the syzygy module.
//   * Krull dimension of a quotient via maximal independent variable sets
//     against the leading-term ideal.
//   * Der(log f) computed as syzygies of (df/dx_1, .., df/dx_n, f), frame
//     selection by bounded subset search, certified through saito_frame.
//   * The perversity certificate: freeness + regularity of the symbol
//     sequence (sufficient condition; in the plane it always holds).
//
// Buchberger runs single-threaded per call for determinism; a deadline
// aborts long runs with a Timeout distinct from mathematical verdicts.

#include "logdiff/logder.hpp"
#include "logdiff/monomial_order.hpp"
#include "logdiff/polynomial.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace logdiff {

struct GbTimeout : std::runtime_error {
    GbTimeout() : std::runtime_error("Groebner computation hit its deadline") {}
};

struct GbOptions {
    MonomialOrder order{MonomialOrder::Kind::degrevlex};
    std::optional<std::chrono::milliseconds> deadline;
};

namespace gb {

// One term of a free-module element: component, ring monomial, coefficient.
struct Term {
    int comp;
    Exponents mono;
    Rational coeff;
};

using Vec = std::vector<Term>;  // strictly descending under the module order

class ModuleOrder {
public:
    ModuleOrder(MonomialOrder ring, bool eliminate_comp0)
        : ring_(std::move(ring)), elim0_(eliminate_comp0) {}

    // >0 when a > b.
    int compare(const Term& a, const Term& b) const {
        if (elim0_ && (a.comp == 0) != (b.comp == 0)) return a.comp == 0 ? 1 : -1;
        if (int c = ring_.compare(a.mono, b.mono); c != 0) return c;
        if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
        return 0;
    }
    bool greater(const Term& a, const Term& b) const { return compare(a, b) > 0; }

    const MonomialOrder& ring() const { return ring_; }

private:
    MonomialOrder ring_;
    bool elim0_;
};

inline Vec normalize(std::vector<Term> terms, const ModuleOrder& ord) {
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return ord.greater(a, b); });
    Vec out;
    for (auto& t : terms) {
        if (is_zero(t.coeff)) continue;
        if (!out.empty() && out.back().comp == t.comp && out.back().mono == t.mono) {
            out.back().coeff += t.coeff;
            if (is_zero(out.back().coeff)) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    return out;
}

// a - c * x^shift * b, both sorted; result sorted.
inline Vec subtract_scaled(const Vec& a, const Rational& c, const Exponents& shift, const Vec& b,
                           const ModuleOrder& ord) {
    Vec out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    auto shifted = [&](size_t jj) {
        Term t = b[jj];
        t.mono = exp_mul(t.mono, shift);
        t.coeff = -c * t.coeff;
        return t;
    };
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) { out.push_back(a[i++]); continue; }
        Term tb = shifted(j);
        if (i == a.size()) { if (!is_zero(tb.coeff)) out.push_back(std::move(tb)); ++j; continue; }
        int cmp = ord.compare(a[i], tb);
        if (cmp > 0) {
            out.push_back(a[i++]);
        } else if (cmp < 0) {
            if (!is_zero(tb.coeff)) out.push_back(std::move(tb));
            ++j;
        } else {
            Rational sum = a[i].coeff + tb.coeff;
            if (!is_zero(sum)) out.push_back(Term{a[i].comp, a[i].mono, std::move(sum)});
            ++i; ++j;
        }
    }
    return out;
}

// Full normal form of h against basis.
inline Vec reduce(Vec h, const std::vector<Vec>& basis, const ModuleOrder& ord) {
    Vec remainder;
    while (!h.empty()) {
        const Term& lead = h.front();
        const Vec* red = nullptr;
        for (const auto& g : basis) {
            if (g.empty()) continue;
            if (g.front().comp == lead.comp && exp_divides(g.front().mono, lead.mono)) {
                red = &g;
                break;
            }
        }
        if (red) {
            h = subtract_scaled(h, lead.coeff / red->front().coeff,
                                exp_div(lead.mono, red->front().mono), *red, ord);
        } else {
            remainder.push_back(h.front());
            h.erase(h.begin());
        }
    }
    return remainder;
}

inline Vec make_monic(Vec v) {
    if (v.empty()) return v;
    const Rational inv = Rational(1) / v.front().coeff;
    for (auto& t : v) t.coeff *= inv;
    return v;
}

// Buchberger on module elements.  Deterministic: normal strategy (minimal
// lcm degree, then insertion indices).
inline std::vector<Vec> buchberger_module(std::vector<Vec> gens, const ModuleOrder& ord,
                                          const std::optional<std::chrono::milliseconds>& deadline,
                                          bool ideal_case) {
    const auto started = std::chrono::steady_clock::now();
    auto check_deadline = [&] {
        if (deadline && std::chrono::steady_clock::now() - started > *deadline) throw GbTimeout();
    };

    std::vector<Vec> basis;
    for (auto& g : gens)
        if (!g.empty()) basis.push_back(make_monic(std::move(g)));

    struct Pair {
        int i, j, degree;
    };
    auto lcm_of = [&](int i, int j) {
        return exp_lcm(basis[i].front().mono, basis[j].front().mono);
    };
    std::vector<Pair> queue;
    std::set<std::pair<int, int>> handled;
    auto push_pairs_for = [&](int t) {
        for (int i = 0; i < t; ++i)
            if (basis[i].front().comp == basis[t].front().comp)
                queue.push_back(Pair{i, t, total_degree(lcm_of(i, t))});
    };
    for (int t = 0; t < static_cast<int>(basis.size()); ++t) push_pairs_for(t);

    while (!queue.empty()) {
        check_deadline();
        auto best = std::min_element(queue.begin(), queue.end(), [](const Pair& a, const Pair& b) {
            if (a.degree != b.degree) return a.degree < b.degree;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        Pair pr = *best;
        queue.erase(best);
        handled.insert({pr.i, pr.j});

        const Vec& gi = basis[pr.i];
        const Vec& gj = basis[pr.j];

        // Coprimality criterion (valid for ideals, not modules in general).
        if (ideal_case && exp_coprime(gi.front().mono, gj.front().mono)) continue;

        // Chain criterion.
        Exponents u = lcm_of(pr.i, pr.j);
        bool chained = false;
        for (int k = 0; k < static_cast<int>(basis.size()) && !chained; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (basis[k].front().comp != gi.front().comp) continue;
            if (!exp_divides(basis[k].front().mono, u)) continue;
            auto key = [&](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
            if (handled.count(key(pr.i, k)) && handled.count(key(pr.j, k))) chained = true;
        }
        if (chained) continue;

        Vec s = subtract_scaled(
            subtract_scaled(Vec{}, Rational(-1), exp_div(u, gi.front().mono), gi, ord), Rational(1),
            exp_div(u, gj.front().mono), gj, ord);
        Vec r = reduce(std::move(s), basis, ord);
        if (!r.empty()) {
            basis.push_back(make_monic(std::move(r)));
            push_pairs_for(static_cast<int>(basis.size()) - 1);
        }
    }

    // Minimalize: drop elements whose lead divides by another lead.
    std::vector<Vec> minimal;
    for (size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const auto& li = basis[i].front();
            const auto& lj = basis[j].front();
            if (li.comp == lj.comp && exp_divides(lj.mono, li.mono) &&
                !(lj.mono == li.mono && j > i))
                redundant = true;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    // Tail-reduce each against the others.
    std::vector<Vec> reduced;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Vec> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        reduced.push_back(make_monic(reduce(minimal[i], others, ord)));
    }
    std::sort(reduced.begin(), reduced.end(),
              [&](const Vec& a, const Vec& b) { return ord.greater(a.front(), b.front()); });
    return reduced;
}

}  // namespace gb

// ---------------------------------------------------------------------------
// Ring-level interface

class GroebnerBasis {
public:
    GroebnerBasis() = default;
    GroebnerBasis(std::vector<Polynomial> gens, MonomialOrder order, VarTablePtr vars)
        : generators_(std::move(gens)), order_(order), vars_(std::move(vars)) {}

    const std::vector<Polynomial>& generators() const { return generators_; }
    const MonomialOrder& order() const { return order_; }
    const VarTablePtr& vars() const { return vars_; }

    bool contains_unit() const {
        for (const auto& g : generators_)
            if (g.is_constant() && !g.is_zero()) return true;
        return false;
    }

private:
    std::vector<Polynomial> generators_;
    MonomialOrder order_{MonomialOrder::Kind::degrevlex};
    VarTablePtr vars_;
};

namespace gb {

inline Vec from_polynomial(const Polynomial& p, const ModuleOrder& ord) {
    std::vector<Term> terms;
    for (const auto& [e, c] : p.terms()) terms.push_back(Term{0, e, c});
    return normalize(std::move(terms), ord);
}

inline Polynomial component_to_polynomial(const Vec& v, int comp, const VarTablePtr& vars) {
    Polynomial out = Polynomial::zero(vars);
    for (const auto& t : v)
        if (t.comp == comp) out += Polynomial::monomial(vars, t.mono, t.coeff);
    return out;
}

}  // namespace gb

// Reduced Groebner basis of an ideal.
inline GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const GbOptions& opt = {}) {
    if (gens.empty()) throw std::invalid_argument("buchberger: no generators");
    const auto vars = gens[0].vars();
    gb::ModuleOrder ord(opt.order, false);
    std::vector<gb::Vec> in;
    for (const auto& g : gens) in.push_back(gb::from_polynomial(g, ord));
    auto out = gb::buchberger_module(std::move(in), ord, opt.deadline, true);
    std::vector<Polynomial> polys;
    for (const auto& v : out) polys.push_back(gb::component_to_polynomial(v, 0, vars));
    return GroebnerBasis(std::move(polys), opt.order, vars);
}

// Normal form of p against a reduced basis.
inline Polynomial reduce_modulo(const Polynomial& p, const GroebnerBasis& basis) {
    gb::ModuleOrder ord(basis.order(), false);
    std::vector<gb::Vec> vs;
    for (const auto& g : basis.generators()) vs.push_back(gb::from_polynomial(g, ord));
    auto r = gb::reduce(gb::from_polynomial(p, ord), vs, ord);
    return gb::component_to_polynomial(r, 0, basis.vars());
}

struct UnitIdeal : std::domain_error {
    UnitIdeal() : std::domain_error("quotient by the unit ideal has no dimension") {}
};

// Krull dimension of R/I restricted to the variables in `mask` (indices into
// the exponent vector); dimension = size of the largest variable subset that
// meets no leading monomial.  Defaults to all 2n variables.
inline int ideal_dimension(const GroebnerBasis& basis, std::optional<std::vector<int>> mask = {}) {
    if (basis.contains_unit()) throw UnitIdeal();
    const int width = basis.vars()->ring_vars();
    std::vector<int> vars;
    if (mask) {
        vars = *mask;
    } else {
        vars.resize(width);
        for (int i = 0; i < width; ++i) vars[i] = i;
    }

    // Leading monomial supports, restricted to `vars`.
    MonomialOrder ord = basis.order();
    std::vector<std::vector<int>> supports;
    for (const auto& g : basis.generators()) {
        if (g.is_zero()) continue;
        const Exponents* lead = nullptr;
        for (const auto& [e, c] : g.terms())
            if (!lead || ord.greater(e, *lead)) lead = &e;
        std::vector<int> supp;
        for (int v : vars)
            if ((*lead)[v] > 0) supp.push_back(v);
        supports.push_back(std::move(supp));
        // A leading monomial supported outside `vars` cannot block any subset
        // of `vars`; it ends up as an empty support, handled below.
    }

    // A subset S is independent iff no support is contained in S.  Empty
    // supports would mean a lead monomial using none of `vars`; those come
    // from generators in the complementary variables and never block.
    const int m = static_cast<int>(vars.size());
    int best = 0;
    for (uint32_t bits = 0; bits < (1u << m); ++bits) {
        int size = __builtin_popcount(bits);
        if (size <= best) continue;
        bool independent = true;
        for (const auto& supp : supports) {
            if (supp.empty()) continue;
            bool contained = true;
            for (int v : supp) {
                int pos = static_cast<int>(std::find(vars.begin(), vars.end(), v) - vars.begin());
                if (!(bits & (1u << pos))) { contained = false; break; }
            }
            if (contained) { independent = false; break; }
        }
        if (independent) best = size;
    }
    return best;
}

// Regularity of n xi-degree-1 symbols in the 2n-variable ring, decided by
// quotient codimension (n homogeneous elements in a Cohen-Macaulay graded
// ring are regular exactly when the quotient has codimension n).
inline bool is_regular_sequence(const std::vector<Polynomial>& sigmas, const GbOptions& opt = {}) {
    if (sigmas.empty()) throw std::invalid_argument("is_regular_sequence: empty sequence");
    const auto vars = sigmas[0].vars();
    const int n = vars->dimension();
    for (const auto& s : sigmas)
        if (!s.is_xi_homogeneous() || s.xi_degree() != 1)
            throw std::invalid_argument("is_regular_sequence: symbols must be xi-degree 1");
    auto basis = buchberger(sigmas, opt);
    return ideal_dimension(basis) == n;
}

// ---------------------------------------------------------------------------
// Syzygies

// Generators of {(c_1..c_m) : sum c_i g_i = 0} via the e_0 elimination
// module <g_i e_0 + e_i>.
inline std::vector<std::vector<Polynomial>> module_syzygies(const std::vector<Polynomial>& gens,
                                                            const GbOptions& opt = {}) {
    if (gens.empty()) throw std::invalid_argument("module_syzygies: no generators");
    const auto vars = gens[0].vars();
    const int m = static_cast<int>(gens.size());
    gb::ModuleOrder ord(opt.order, true);

    std::vector<gb::Vec> in;
    for (int i = 0; i < m; ++i) {
        std::vector<gb::Term> terms;
        for (const auto& [e, c] : gens[i].terms()) terms.push_back(gb::Term{0, e, c});
        terms.push_back(gb::Term{i + 1, Exponents(vars->ring_vars(), 0), Rational(1)});
        in.push_back(gb::normalize(std::move(terms), ord));
    }
    auto basis = gb::buchberger_module(std::move(in), ord, opt.deadline, false);

    std::vector<std::vector<Polynomial>> out;
    for (const auto& v : basis) {
        bool touches_e0 = false;
        for (const auto& t : v)
            if (t.comp == 0) { touches_e0 = true; break; }
        if (touches_e0) continue;
        std::vector<Polynomial> syz;
        for (int i = 1; i <= m; ++i) syz.push_back(gb::component_to_polynomial(v, i, vars));
        out.push_back(std::move(syz));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Der(log f) and the perversity certificate

struct NotFreeDiagnosis {
    int candidate_count = 0;
    std::optional<Polynomial> best_determinant;  // lowest-degree nonzero det seen
    std::string reason;
};

struct LogDerivationsResult {
    std::variant<NotFreeDiagnosis, SaitoFrame> outcome;
    bool non_reduced_warning = false;

    bool is_free() const { return std::holds_alternative<SaitoFrame>(outcome); }
    const SaitoFrame& frame() const { return std::get<SaitoFrame>(outcome); }
    const NotFreeDiagnosis& diagnosis() const { return std::get<NotFreeDiagnosis>(outcome); }
};

struct LogDerivationsOptions {
    int candidate_bound = 12;  // degree-sorted candidates entering the search
    GbOptions gb;
};

inline LogDerivationsResult log_derivations(const Polynomial& f,
                                            const LogDerivationsOptions& opt = {}) {
    if (f.is_zero() || f.is_constant())
        throw std::invalid_argument("log_derivations: divisor must be nonconstant");
    if (!f.is_xi_free())
        throw std::invalid_argument("log_derivations: divisor must not involve symbols");
    const auto vars = f.vars();
    const int n = vars->dimension();

    LogDerivationsResult result;

    // Squarefreeness probe: dim of (f, grad f) in the x-block is n-1 exactly
    // when f has a repeated factor (the gcd cuts a hypersurface).
    {
        std::vector<Polynomial> sing{f};
        for (int i = 0; i < n; ++i)
            if (!f.partial(i).is_zero()) sing.push_back(f.partial(i));
        auto basis = buchberger(sing, opt.gb);
        if (!basis.contains_unit()) {
            std::vector<int> xmask(n);
            for (int i = 0; i < n; ++i) xmask[i] = i;
            if (ideal_dimension(basis, xmask) >= n - 1) result.non_reduced_warning = true;
        }
    }

    // Syzygies of (f_{x_1}, .., f_{x_n}, f); components 1..n give derivation
    // candidates, the last cofactor is the logarithmicity quotient.
    std::vector<Polynomial> gens;
    for (int i = 0; i < n; ++i) gens.push_back(f.partial(i));
    gens.push_back(f);
    auto syzygies = module_syzygies(gens, opt.gb);

    std::vector<Derivation> candidates;
    for (const auto& s : syzygies) {
        std::vector<Polynomial> coeffs(s.begin(), s.begin() + n);
        Derivation d(vars, std::move(coeffs));
        if (d.is_zero()) continue;
        // Scale so the first nonzero coefficient is monic under degrevlex.
        for (const auto& c : d.coeffs()) {
            if (c.is_zero()) continue;
            MonomialOrder ord;
            const Exponents* lead = nullptr;
            Rational lc;
            for (const auto& [e, k] : c.terms())
                if (!lead || ord.greater(e, *lead)) { lead = &e; lc = k; }
            d = d.scaled(Rational(1) / lc);
            break;
        }
        candidates.push_back(std::move(d));
    }
    auto degree_of = [](const Derivation& d) {
        int deg = 0;
        for (const auto& c : d.coeffs()) deg = std::max(deg, c.degree());
        return deg;
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const Derivation& a, const Derivation& b) {
                         if (degree_of(a) != degree_of(b)) return degree_of(a) < degree_of(b);
                         return false;
                     });
    if (static_cast<int>(candidates.size()) > opt.candidate_bound)
        candidates.resize(opt.candidate_bound);

    // All n-subsets in lexicographic order; Saito's determinant decides.
    std::optional<Polynomial> best_det;
    const int c = static_cast<int>(candidates.size());
    std::vector<int> idx;
    std::optional<SaitoFrame> found;
    std::function<bool(int)> search = [&](int start) {
        if (static_cast<int>(idx.size()) == n) {
            PolyMatrix a(n, std::vector<Polynomial>(n, Polynomial::zero(vars)));
            for (int r = 0; r < n; ++r)
                for (int cidx = 0; cidx < n; ++cidx) a[r][cidx] = candidates[idx[r]].coeffs()[cidx];
            Polynomial det = poly_det(a, vars);
            if (!det.is_zero() && (!best_det || det.degree() < best_det->degree()))
                best_det = det;
            auto div = exact_divide(det, f);
            if (div.exact && !div.quotient.is_zero() && div.quotient.is_constant()) {
                std::vector<Derivation> chosen;
                for (int r : idx) chosen.push_back(candidates[r]);
                auto res = saito_frame(f, chosen);
                if (std::holds_alternative<SaitoFrame>(res)) {
                    found = std::get<SaitoFrame>(res);
                    return true;
                }
            }
            return false;
        }
        for (int i = start; i < c; ++i) {
            idx.push_back(i);
            if (search(i + 1)) return true;
            idx.pop_back();
        }
        return false;
    };
    search(0);

    if (found) {
        result.outcome = std::move(*found);
    } else {
        NotFreeDiagnosis diag;
        diag.candidate_count = c;
        diag.best_determinant = best_det;
        diag.reason = c < n ? "fewer than n derivation candidates within the search bound"
                            : "no candidate subset satisfies Saito's criterion within the bound";
        result.outcome = std::move(diag);
    }
    return result;
}

// ---------------------------------------------------------------------------

struct PerversityReport {
    Polynomial divisor;
    bool free = false;
    std::optional<SaitoFrame> frame;
    std::optional<NotFreeDiagnosis> diagnosis;
    bool non_reduced_warning = false;
    std::vector<Polynomial> symbols;
    int quotient_dimension = -1;  // -1: not computed
    bool regular = false;
    enum class Verdict { perverse_certified, inconclusive } verdict = Verdict::inconclusive;
    std::string note;
};

inline PerversityReport perversity_certificate(const Polynomial& f,
                                               const LogDerivationsOptions& opt = {}) {
    PerversityReport rep;
    rep.divisor = f;
    auto der = log_derivations(f, opt);
    rep.non_reduced_warning = der.non_reduced_warning;
    if (!der.is_free()) {
        rep.diagnosis = der.diagnosis();
        rep.note = "freeness not established within the search bound; "
                   "the sufficient condition does not apply";
        return rep;
    }
    rep.free = true;
    rep.frame = der.frame();
    for (int i = 0; i < rep.frame->n(); ++i) rep.symbols.push_back(rep.frame->symbol(i));
    auto basis = buchberger(rep.symbols, opt.gb);
    rep.quotient_dimension = ideal_dimension(basis);
    rep.regular = rep.quotient_dimension == f.vars()->dimension();
    if (rep.regular) {
        rep.verdict = PerversityReport::Verdict::perverse_certified;
    } else {
        rep.verdict = PerversityReport::Verdict::inconclusive;
        rep.note = "free, but the symbol sequence is not regular; regularity is "
                   "sufficient, not necessary, so no verdict (holonomicity of "
                   "D/D(delta_1..delta_n) is not decided here)";
    }
    return rep;
}

}  // namespace logdiff
