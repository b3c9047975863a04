// Command line surface for the logarithmic operator toolkit.
//
// Exit codes: 0 mathematical yes / success, 1 mathematical no (witness on
// stdout), 2 input or usage error, 3 timeout or search bound exhausted.

#include <logdiff/complexes.hpp>
#include <logdiff/groebner.hpp>
#include <logdiff/logforms.hpp>
#include <logdiff/logops.hpp>
#include <logdiff/parse.hpp>
#include <logdiff/serialize.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <random>

namespace {

using namespace logdiff;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBound = 3;

struct Session {
    std::string vars_csv;
    std::string divisor_src;
    std::vector<std::string> delta_srcs;
    std::string operator_src;
    std::string symbol_src;
    std::string manifest_path;
    std::string order_name = "degrevlex";
    bool json = false;
    int deadline_ms = 0;  // 0: none
    unsigned long long seed = 20260809;
    int bound = 12;
    int shift_power = 1;
    std::string lambda_src = "1/2";
    int corpus = 100;

    VarTablePtr vars;
    Polynomial f;
};

void add_common(CLI::App* cmd, Session& s, bool needs_divisor = true) {
    cmd->add_option("--vars", s.vars_csv, "comma separated base variables, e.g. x,y,t");
    if (needs_divisor) cmd->add_option("-f,--divisor", s.divisor_src, "divisor polynomial f");
    cmd->add_option("--manifest", s.manifest_path, "JSON manifest supplying vars/divisor/basis");
    cmd->add_option("--order", s.order_name, "monomial order: degrevlex, lex or block")
        ->check(CLI::IsMember({"degrevlex", "lex", "block"}));
    cmd->add_flag("--json", s.json, "emit JSON");
    cmd->add_option("--deadline-ms", s.deadline_ms, "abort Groebner runs after this many ms");
    cmd->add_option("--seed", s.seed, "seed for randomized checks");
    cmd->add_option("--bound", s.bound, "candidate bound for the freeness search");
}

void load_manifest(Session& s) {
    std::ifstream in(s.manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest '" + s.manifest_path + "'");
    Json j = Json::parse(in);
    if (s.vars_csv.empty() && j.contains("vars")) {
        std::string csv;
        for (const auto& v : j["vars"]) csv += (csv.empty() ? "" : ",") + v.get<std::string>();
        s.vars_csv = csv;
    }
    if (s.divisor_src.empty() && j.contains("divisor")) s.divisor_src = j["divisor"];
    if (s.delta_srcs.empty() && j.contains("basis"))
        for (const auto& b : j["basis"]) s.delta_srcs.push_back(b.get<std::string>());
}

void finish_session(Session& s, bool needs_divisor = true) {
    if (!s.manifest_path.empty()) load_manifest(s);
    if (s.vars_csv.empty()) throw std::runtime_error("--vars (or a manifest) is required");
    std::vector<std::string> names;
    std::string cur;
    for (char c : s.vars_csv + ",") {
        if (c == ',') {
            if (!cur.empty()) names.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    s.vars = make_vars(names);
    if (needs_divisor) {
        if (s.divisor_src.empty()) throw std::runtime_error("-f (or a manifest) is required");
        s.f = parse_polynomial(s.divisor_src, s.vars);
        if (s.f.is_zero()) throw std::runtime_error("divisor must be nonzero");
    }
}

GbOptions gb_options(const Session& s) {
    GbOptions opt;
    opt.order = MonomialOrder::from_name(s.order_name, s.vars->dimension());
    if (s.deadline_ms > 0) opt.deadline = std::chrono::milliseconds(s.deadline_ms);
    return opt;
}

// Frame from explicit --delta options, or computed from f.
FramePtr resolve_frame(Session& s, int* exit_code) {
    if (!s.delta_srcs.empty()) {
        std::vector<Derivation> deltas;
        for (const auto& src : s.delta_srcs) deltas.push_back(parse_derivation(src, s.vars));
        auto res = saito_frame(s.f, deltas);
        if (std::holds_alternative<SaitoFailure>(res)) {
            const auto& fail = std::get<SaitoFailure>(res);
            std::cout << "saito failure: " << fail.detail
                      << "; witness: " << to_string(fail.witness) << "\n";
            *exit_code = kExitNo;
            return nullptr;
        }
        return share(std::get<SaitoFrame>(res));
    }
    LogDerivationsOptions opt;
    opt.candidate_bound = s.bound;
    opt.gb = gb_options(s);
    auto res = log_derivations(s.f, opt);
    if (res.non_reduced_warning) std::cerr << "warning: divisor does not look reduced\n";
    if (!res.is_free()) {
        std::cout << "not free within the search bound: " << res.diagnosis().reason << "\n";
        *exit_code = kExitBound;
        return nullptr;
    }
    return share(res.frame());
}

void emit(const Session& s, const Json& j, const std::string& text) {
    if (s.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

// ---------------------------------------------------------------------------

int cmd_check_log(Session& s) {
    finish_session(s);
    if (s.delta_srcs.size() != 1) throw std::runtime_error("check-log needs exactly one -d");
    auto delta = parse_derivation(s.delta_srcs[0], s.vars);
    auto res = is_logarithmic(delta, s.f);
    if (res.logarithmic) {
        emit(s, Json{{"logarithmic", true}, {"quotient", to_string(res.quotient)}},
             "yes: delta(f) = (" + to_string(res.quotient) + ") * f\n");
        return kExitYes;
    }
    emit(s, Json{{"logarithmic", false}, {"remainder", to_string(res.remainder)}},
         "no: remainder " + to_string(res.remainder) + "\n");
    return kExitNo;
}

int cmd_saito(Session& s) {
    finish_session(s);
    std::vector<Derivation> deltas;
    for (const auto& src : s.delta_srcs) deltas.push_back(parse_derivation(src, s.vars));
    auto res = saito_frame(s.f, deltas);
    if (std::holds_alternative<SaitoFailure>(res)) {
        const auto& fail = std::get<SaitoFailure>(res);
        emit(s, Json{{"ok", false}, {"detail", fail.detail}, {"witness", to_string(fail.witness)}},
             "saito failure: " + fail.detail + "; witness: " + to_string(fail.witness) + "\n");
        return kExitNo;
    }
    const auto& frame = std::get<SaitoFrame>(res);
    emit(s, frame_to_json(frame),
         "saito frame certified: det = " + to_string(frame.det_g()) + " = (" +
             to_string(frame.unit()) + ") * f\n");
    return kExitYes;
}

int cmd_basis(Session& s) {
    finish_session(s);
    LogDerivationsOptions opt;
    opt.candidate_bound = s.bound;
    opt.gb = gb_options(s);
    auto res = log_derivations(s.f, opt);
    if (res.non_reduced_warning) std::cerr << "warning: divisor does not look reduced\n";
    if (!res.is_free()) {
        emit(s, diagnosis_to_json(res.diagnosis()),
             "not free within the search bound: " + res.diagnosis().reason + "\n");
        return kExitBound;
    }
    emit(s, frame_to_json(res.frame()),
         "free; det = " + to_string(res.frame().det_g()) + "\n");
    return kExitYes;
}

int cmd_normal_form(Session& s) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    auto p = parse_operator(s.operator_src, s.vars);
    auto nf = normal_form(p, frame);
    if (std::holds_alternative<NotLogarithmic>(nf)) {
        const auto& fail = std::get<NotLogarithmic>(nf);
        std::string stage = fail.stage == NotLogarithmic::Stage::commutator_division
                                ? "commutator-division"
                                : "chain";
        // Both verdicts are recorded: the rewrite failure and the direct
        // f-power probe.
        auto probe = v0_membership_witness(p, s.f);
        Json j{{"logarithmic", false},
               {"stage", stage},
               {"level", fail.order_level},
               {"step", fail.step},
               {"witness", to_string(fail.witness)},
               {"v0_power_test",
                probe.passed ? Json("pass")
                             : Json{{"failing_j", probe.failing_j},
                                    {"remainder", to_string(probe.remainder)}}}};
        emit(s, j,
             "not logarithmic (stage " + stage + ", witness " + to_string(fail.witness) +
                 "); f-power probe: " + (probe.passed ? "pass" : "fail") + "\n");
        return kExitNo;
    }
    const auto& form = std::get<PBWForm>(nf);
    std::string text;
    for (const auto& [exps, c] : form.coeffs()) {
        std::string mono;
        for (int i = 0; i < frame->n(); ++i) {
            if (exps[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "delta_" + std::to_string(i + 1);
            if (exps[i] > 1) mono += "^" + std::to_string(exps[i]);
        }
        if (mono.empty()) mono = "1";
        text += mono + " : " + to_string(c) + "\n";
    }
    if (form.coeffs().empty()) text = "0\n";
    emit(s, pbw_to_json(form), text);
    return kExitYes;
}

int cmd_symbol_chain(Session& s) {
    finish_session(s);
    auto r0 = parse_polynomial(s.symbol_src, s.vars);
    auto res = symbol_chain(r0, s.f);
    if (std::holds_alternative<ChainFailure>(res)) {
        const auto& fail = std::get<ChainFailure>(res);
        emit(s, Json{{"ok", false}, {"k", fail.k}, {"remainder", to_string(fail.remainder)}},
             "chain fails at k = " + std::to_string(fail.k) + ", remainder " +
                 to_string(fail.remainder) + "\n");
        return kExitNo;
    }
    const auto& chain = std::get<SymbolChain>(res);
    std::string text;
    for (size_t k = 0; k < chain.terms.size(); ++k)
        text += "R_" + std::to_string(k) + " = " + to_string(chain.terms[k]) + "\n";
    emit(s, chain_to_json(chain), text);
    return kExitYes;
}

int cmd_shift(Session& s) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    auto p = parse_operator(s.operator_src, s.vars);
    auto res = meromorphic_shift(p, s.shift_power, frame);
    if (std::holds_alternative<NotLogarithmic>(res)) {
        std::cout << "operator is not logarithmic; witness "
                  << to_string(std::get<NotLogarithmic>(res).witness) << "\n";
        return kExitNo;
    }
    const auto& [q, k] = std::get<ShiftResult>(res);
    Json j = pbw_to_json(q);
    j["k"] = k;
    emit(s, j, "k = " + std::to_string(k) + "\nQ = " + to_string(expand(q)) + "\n");
    return kExitYes;
}

int cmd_dual_basis(Session& s) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    auto duals = dual_basis(*frame);
    Json arr = Json::array();
    std::string text;
    for (size_t i = 0; i < duals.size(); ++i) {
        arr.push_back(form_to_json(duals[i]));
        text += "omega_" + std::to_string(i + 1) + ":\n";
        for (const auto& [sub, c] : duals[i].coeffs())
            text += "  dx_" + subset_key(sub) + " : " + to_string(c) + "\n";
    }
    emit(s, arr, text);
    return kExitYes;
}

int cmd_derham_check(Session& s) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    const auto vars = s.vars;
    const int n = frame->n();
    std::mt19937_64 rng(s.seed);

    auto random_poly = [&](int maxdeg) {
        std::uniform_int_distribution<int> coeff(-3, 3), deg(0, maxdeg), pick(0, n - 1),
            terms(0, 2);
        Polynomial p = Polynomial::zero(vars);
        int t = terms(rng);
        for (int i = 0; i <= t; ++i) {
            Exponents e(vars->ring_vars(), 0);
            int budget = deg(rng);
            for (int b = 0; b < budget; ++b) e[pick(rng)] += 1;
            p += Polynomial::monomial(vars, e, Rational(coeff(rng)));
        }
        return p;
    };
    auto omegas = dual_basis(*frame);
    auto random_form = [&](int p) {
        LogForm out(vars, s.f, p);
        std::function<void(int, std::vector<int>&)> rec = [&](int start, std::vector<int>& subset) {
            if (static_cast<int>(subset.size()) == p) {
                LogForm w = LogForm::scalar(vars, s.f,
                                            RationalFunction::from_polynomial(random_poly(2), s.f));
                for (int i : subset) w = wedge(w, omegas[i]);
                out += w;
                return;
            }
            for (int i = start; i < n; ++i) {
                subset.push_back(i);
                rec(i + 1, subset);
                subset.pop_back();
            }
        };
        std::vector<int> subset;
        rec(0, subset);
        return out;
    };

    auto lambda = parse_rational(s.lambda_src);
    auto trivial = LogConnection::trivial(frame);
    auto twist = LogConnection::rank1_twist(frame, lambda);
    if (!twist.is_integrable()) {
        std::cout << "twist connection failed integrability\n";
        return kExitNo;
    }

    int failures = 0;
    for (int rep = 0; rep < s.corpus; ++rep) {
        int p = rep % n;
        FormSection sec{random_form(p)};
        for (const auto* conn : {&trivial, &twist}) {
            auto first = de_rham_differential(*conn, sec);
            auto second = de_rham_differential(*conn, first);
            if (!second[0].is_zero()) ++failures;
        }
        if (!exterior_derivative(exterior_derivative(sec[0])).is_zero()) ++failures;
    }
    Json j{{"corpus", s.corpus}, {"lambda", to_string(lambda)}, {"failures", failures}};
    emit(s, j,
         "nabla^2 = 0 and d^2 = 0 on " + std::to_string(s.corpus) + " random sections; failures: " +
             std::to_string(failures) + "\n");
    return failures == 0 ? kExitYes : kExitNo;
}

int cmd_spencer(Session& s, bool graded) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    if (graded) {
        auto cx = graded_spencer(*frame);
        emit(s, complex_to_json(cx), "graded Spencer (Koszul) complex emitted; use --json\n");
    } else {
        auto cx = spencer_complex(*frame);
        emit(s, complex_to_json(cx), "Spencer complex emitted; use --json\n");
    }
    return kExitYes;
}

int cmd_koszul(Session& s, const std::vector<std::string>& element_srcs) {
    finish_session(s, /*needs_divisor=*/false);
    std::vector<Polynomial> elements;
    for (const auto& src : element_srcs) elements.push_back(parse_polynomial(src, s.vars));
    auto cx = koszul_complex(elements);
    emit(s, complex_to_json(cx), "Koszul complex emitted; use --json\n");
    return kExitYes;
}

int cmd_complex_check(Session& s) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    auto spencer = spencer_complex(*frame);
    auto graded = graded_spencer(*frame);
    auto rep1 = check_zero_composition(spencer);
    auto rep2 = check_zero_composition(graded);
    bool symbols_match = true;
    auto sym = symbol_complex(spencer, frame->vars());
    for (int p = 1; p <= graded.length(); ++p)
        if (sym.differentials[p] != graded.differentials[p]) symbols_match = false;
    bool aug = augmented_spencer_check(*frame).pass;
    Json j{{"spencer_zero_composition", rep1.pass},
           {"graded_zero_composition", rep2.pass},
           {"symbols_match_koszul", symbols_match},
           {"augmentation", aug}};
    std::string text = std::string("spencer d.d = 0: ") + (rep1.pass ? "pass" : "FAIL") +
                       "\ngraded d.d = 0: " + (rep2.pass ? "pass" : "FAIL") +
                       "\nsymbol(spencer) = koszul: " + (symbols_match ? "pass" : "FAIL") +
                       "\naugmentation eps0.eps-1 = 0: " + (aug ? "pass" : "FAIL") + "\n";
    emit(s, j, text);
    return rep1.pass && rep2.pass && symbols_match && aug ? kExitYes : kExitNo;
}

int cmd_regular(Session& s) {
    finish_session(s);
    int code = kExitYes;
    auto frame = resolve_frame(s, &code);
    if (!frame) return code;
    std::vector<Polynomial> sigmas;
    for (int i = 0; i < frame->n(); ++i) sigmas.push_back(frame->symbol(i));
    bool regular = is_regular_sequence(sigmas, gb_options(s));
    Json j{{"regular", regular}};
    emit(s, j, std::string(regular ? "regular\n" : "not regular\n"));
    return regular ? kExitYes : kExitNo;
}

int cmd_perversity(Session& s) {
    finish_session(s);
    LogDerivationsOptions opt;
    opt.candidate_bound = s.bound;
    opt.gb = gb_options(s);
    auto rep = perversity_certificate(s.f, opt);
    std::string verdict = rep.verdict == PerversityReport::Verdict::perverse_certified
                              ? "perverse-certified"
                              : "inconclusive";
    std::string text = "free: " + std::string(rep.free ? "yes" : "no") + "\n";
    if (rep.quotient_dimension >= 0)
        text += "quotient dimension: " + std::to_string(rep.quotient_dimension) + "\n";
    text += "regular: " + std::string(rep.regular ? "yes" : "no") + "\n";
    text += "verdict: " + verdict + "\n";
    if (!rep.note.empty()) text += "note: " + rep.note + "\n";
    emit(s, perversity_to_json(rep), text);
    return rep.verdict == PerversityReport::Verdict::perverse_certified ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logdiff: logarithmic differential operators along free divisors"};
    app.require_subcommand(1);
    Session s;
    std::vector<std::string> koszul_elements;

    auto* check_log = app.add_subcommand("check-log", "is delta logarithmic for f?");
    add_common(check_log, s);
    check_log->add_option("-d,--delta", s.delta_srcs, "derivation, e.g. \"x*d_x\"");

    auto* saito = app.add_subcommand("saito", "certify a Saito frame");
    add_common(saito, s);
    saito->add_option("-d,--delta", s.delta_srcs, "basis derivations (repeat n times)");

    auto* basis = app.add_subcommand("basis", "compute a free basis of Der(log f)");
    add_common(basis, s);

    auto* nf = app.add_subcommand("normal-form", "PBW normal form of an operator");
    add_common(nf, s);
    nf->add_option("-P,--operator", s.operator_src, "operator, e.g. \"x^2*d_x^2\"")->required();
    nf->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* chain = app.add_subcommand("symbol-chain", "greedy chain {R_k,f} = f R_{k+1}");
    add_common(chain, s);
    chain->add_option("-R,--symbol", s.symbol_src, "xi-homogeneous polynomial R_0")->required();

    auto* shift = app.add_subcommand("shift", "meromorphic shift f^{-p} P = Q f^{-k}");
    add_common(shift, s);
    shift->add_option("-P,--operator", s.operator_src)->required();
    shift->add_option("-p,--power", s.shift_power, "pole power p >= 1");
    shift->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* duals = app.add_subcommand("dual-basis", "dual 1-forms of the frame");
    add_common(duals, s);
    duals->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* derham = app.add_subcommand("derham-check", "nabla^2 = 0 spot checks");
    add_common(derham, s);
    derham->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");
    derham->add_option("--lambda", s.lambda_src, "twist parameter lambda");
    derham->add_option("--count", s.corpus, "corpus size");

    auto* spencer = app.add_subcommand("spencer", "emit the Spencer complex");
    add_common(spencer, s);
    spencer->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* graded = app.add_subcommand("graded-spencer", "emit the graded (Koszul) complex");
    add_common(graded, s);
    graded->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* koszul = app.add_subcommand("koszul", "Koszul complex of given elements");
    add_common(koszul, s, /*needs_divisor=*/false);
    koszul->add_option("--elements", koszul_elements, "ring elements (repeat)")->required();

    auto* ccheck = app.add_subcommand("complex-check", "zero-composition and symbol checks");
    add_common(ccheck, s);
    ccheck->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* regular = app.add_subcommand("regular", "is the symbol sequence regular?");
    add_common(regular, s);
    regular->add_option("-d,--delta", s.delta_srcs, "optional explicit frame");

    auto* perversity = app.add_subcommand("perversity", "full perversity certificate");
    add_common(perversity, s);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check_log->parsed()) return cmd_check_log(s);
        if (saito->parsed()) return cmd_saito(s);
        if (basis->parsed()) return cmd_basis(s);
        if (nf->parsed()) return cmd_normal_form(s);
        if (chain->parsed()) return cmd_symbol_chain(s);
        if (shift->parsed()) return cmd_shift(s);
        if (duals->parsed()) return cmd_dual_basis(s);
        if (derham->parsed()) return cmd_derham_check(s);
        if (spencer->parsed()) return cmd_spencer(s, false);
        if (graded->parsed()) return cmd_spencer(s, true);
        if (koszul->parsed()) return cmd_koszul(s, koszul_elements);
        if (ccheck->parsed()) return cmd_complex_check(s);
        if (regular->parsed()) return cmd_regular(s);
        if (perversity->parsed()) return cmd_perversity(s);
    } catch (const GbTimeout& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return kExitBound;
    } catch (const SyntaxError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const UnknownVariable& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
