// Operator-side tour: symbol chains, lifting, normal forms and the
// meromorphic shift over the normal crossing divisor f = xy.

#include <logdiff/logops.hpp>
#include <logdiff/parse.hpp>

#include <iostream>

using namespace logdiff;

int main() {
    auto vars = make_vars({"x", "y"});
    auto f = parse_polynomial("x*y", vars);
    auto frame = share(std::get<SaitoFrame>(
        saito_frame(f, {parse_derivation("x*d_x", vars), parse_derivation("y*d_y", vars)})));

    // A symbol that admits a chain, and its lift back to an operator.
    auto r0 = parse_polynomial("x^2*xi_x^2", vars);
    auto chain = std::get<SymbolChain>(symbol_chain(r0, f));
    std::cout << "chain:";
    for (const auto& r : chain.terms) std::cout << "  " << to_string(r) << ";";
    std::cout << "\n";

    auto lifted = std::get<WordPoly>(symbol_to_logop(r0, frame));
    std::cout << "lift has symbol " << to_string(principal_symbol(expand(lifted))) << "\n";

    // The same operator in sorted PBW coordinates.
    auto p = parse_operator("x^2*d_x^2", vars);
    auto nf = std::get<PBWForm>(normal_form(p, frame));
    std::cout << "x^2*d_x^2 = ";
    bool first = true;
    for (const auto& [exps, c] : nf.coeffs()) {
        std::cout << (first ? "" : " + ") << "(" << to_string(c) << ")*delta^(" << exps[0] << ","
                  << exps[1] << ")";
        first = false;
    }
    std::cout << "\n";

    // Move a pole across: f^{-1} P = Q f^{-k}.
    auto shifted = std::get<ShiftResult>(meromorphic_shift(p, 1, frame));
    std::cout << "f^-1 (x^2*d_x^2) = (" << to_string(expand(shifted.q)) << ") f^-"
              << shifted.k << "\n";
    return 0;
}
