// A short tour: certify the cusp frame, rewrite an operator into the PBW
// basis, print the dual 1-forms and run the perversity pipeline.

#include <logdiff/groebner.hpp>
#include <logdiff/logforms.hpp>
#include <logdiff/logops.hpp>
#include <logdiff/parse.hpp>

#include <iostream>

using namespace logdiff;

int main() {
    auto vars = make_vars({"x", "y"});
    auto f = parse_polynomial("x^2-y^3", vars);

    auto frame_result = saito_frame(f, {parse_derivation("3*x*d_x+2*y*d_y", vars),
                                        parse_derivation("3*y^2*d_x+2*x*d_y", vars)});
    auto frame = share(std::get<SaitoFrame>(frame_result));
    std::cout << "det(A) = " << to_string(frame->det_g()) << " = " << to_string(frame->unit())
              << " * f\n";

    auto p = parse_operator("x^2*d_x^2", vars);
    auto nf = normal_form(p, frame);
    if (std::holds_alternative<PBWForm>(nf)) {
        std::cout << "x^2*d_x^2 in PBW coordinates:\n";
        for (const auto& [exps, c] : std::get<PBWForm>(nf).coeffs()) {
            std::cout << "  delta^(" << exps[0] << "," << exps[1] << ") : " << to_string(c)
                      << "\n";
        }
    } else {
        std::cout << "x^2*d_x^2 is not logarithmic for the cusp\n";
    }

    auto duals = dual_basis(*frame);
    for (size_t i = 0; i < duals.size(); ++i) {
        std::cout << "omega_" << i + 1 << ":";
        for (const auto& [sub, c] : duals[i].coeffs())
            std::cout << "  dx_" << sub[0] + 1 << " -> " << to_string(c) << ";";
        std::cout << "\n";
    }

    auto report = perversity_certificate(f);
    std::cout << "perversity: "
              << (report.verdict == PerversityReport::Verdict::perverse_certified
                      ? "perverse-certified"
                      : "inconclusive")
              << " (quotient dimension " << report.quotient_dimension << ")\n";
    return 0;
}
