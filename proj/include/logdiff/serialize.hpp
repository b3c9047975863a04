#pragma once

// JSON interchange for frames, PBW forms, differential forms, complexes and
// perversity reports.  Polynomial-valued fields carry the canonical text
// rendering, so every document can be re-parsed and re-validated.

#include "logdiff/complexes.hpp"
#include "logdiff/groebner.hpp"
#include "logdiff/logforms.hpp"
#include "logdiff/logops.hpp"

#include <json.hpp>

#include <string>

namespace logdiff {

using Json = nlohmann::ordered_json;

inline Json vars_to_json(const VarTable& vt) {
    return Json{{"base", vt.base_names()}, {"symbols", vt.symbol_names()}};
}

inline Json frame_to_json(const SaitoFrame& frame) {
    Json j;
    j["vars"] = vars_to_json(*frame.vars());
    j["divisor"] = to_string(frame.divisor());
    Json basis = Json::array();
    for (const auto& d : frame.basis()) {
        Json row = Json::array();
        for (const auto& c : d.coeffs()) row.push_back(to_string(c));
        basis.push_back(row);
    }
    j["basis"] = basis;
    j["det"] = to_string(frame.det_g());
    j["unit"] = to_string(frame.unit());
    j["unit_is_constant"] = frame.unit_is_constant();
    if (frame.local_only()) j["warning"] = "unit is a local unit only (nonconstant)";
    Json sc = Json::array();
    for (int i = 0; i < frame.n(); ++i) {
        Json row = Json::array();
        for (int jj = 0; jj < frame.n(); ++jj) {
            Json cell = Json::array();
            for (int k = 0; k < frame.n(); ++k)
                cell.push_back(to_string(frame.structure_constant(i, jj, k)));
            row.push_back(cell);
        }
        sc.push_back(row);
    }
    j["structure_constants"] = sc;
    return j;
}

inline Json pbw_to_json(const PBWForm& w) {
    Json j;
    j["frame"] = to_string(w.frame()->divisor());
    Json terms = Json::array();
    for (const auto& [exps, c] : w.coeffs())
        terms.push_back(Json{{"exponents", exps}, {"coefficient", to_string(c)}});
    j["terms"] = terms;
    return j;
}

// Index subsets as 1-based digit strings ("13" for dx_1^dx_3).
inline std::string subset_key(const IndexSubset& s) {
    std::string key;
    for (int i : s) key += std::to_string(i + 1);
    return key;
}

inline Json form_to_json(const LogForm& w) {
    Json j;
    j["degree"] = w.degree();
    Json coeffs = Json::object();
    for (const auto& [s, c] : w.coeffs()) coeffs[subset_key(s)] = to_string(c);
    j["coefficients"] = coeffs;
    return j;
}

template <typename Entry>
Json complex_to_json(const FreeComplex<Entry>& cx, const std::string& ring) {
    Json j;
    j["entry_ring"] = ring;
    j["ranks"] = cx.ranks;
    Json diffs = Json::array();
    for (int p = 1; p <= cx.length(); ++p) {
        Json mat = Json::array();
        for (const auto& row : cx.differentials[p]) {
            Json r = Json::array();
            for (const auto& e : row) r.push_back(to_string(e));
            mat.push_back(r);
        }
        diffs.push_back(mat);
    }
    j["differentials"] = diffs;
    return j;
}

inline Json complex_to_json(const WeylComplex& cx) { return complex_to_json(cx, "weyl"); }
inline Json complex_to_json(const PolyComplex& cx) { return complex_to_json(cx, "polynomial"); }

inline Json diagnosis_to_json(const NotFreeDiagnosis& d) {
    Json j;
    j["candidate_count"] = d.candidate_count;
    if (d.best_determinant) j["best_determinant"] = to_string(*d.best_determinant);
    j["reason"] = d.reason;
    return j;
}

inline Json perversity_to_json(const PerversityReport& rep) {
    Json j;
    j["divisor"] = to_string(rep.divisor);
    j["free"] = rep.free;
    if (rep.frame) j["frame"] = frame_to_json(*rep.frame);
    if (rep.diagnosis) j["diagnosis"] = diagnosis_to_json(*rep.diagnosis);
    if (rep.non_reduced_warning) j["non_reduced_warning"] = true;
    Json sig = Json::array();
    for (const auto& s : rep.symbols) sig.push_back(to_string(s));
    j["symbols"] = sig;
    if (rep.quotient_dimension >= 0) j["quotient_dimension"] = rep.quotient_dimension;
    j["regular"] = rep.regular;
    j["verdict"] = rep.verdict == PerversityReport::Verdict::perverse_certified
                       ? "perverse-certified"
                       : "inconclusive";
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

inline Json chain_to_json(const SymbolChain& chain) {
    Json j;
    j["f"] = to_string(chain.f);
    Json terms = Json::array();
    for (const auto& r : chain.terms) terms.push_back(to_string(r));
    j["chain"] = terms;
    return j;
}

}  // namespace logdiff
