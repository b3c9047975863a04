#include <catch2/catch_amalgamated.hpp>

#include <logdiff/logder.hpp>

#include "support/generators.hpp"

using namespace logdiff;

namespace {

VarTablePtr xy() { return make_vars({"x", "y"}); }

Derivation deriv(const VarTablePtr& v, std::vector<Polynomial> c) {
    return Derivation(v, std::move(c));
}

// The two stock plane frames.
struct Fixtures {
    VarTablePtr v = xy();
    Polynomial x = Polynomial::variable(v, 0);
    Polynomial y = Polynomial::variable(v, 1);
    Polynomial zero = Polynomial::zero(v);

    Polynomial f_nc = x * y;
    Derivation nc1 = deriv(v, {x, zero});
    Derivation nc2 = deriv(v, {zero, y});

    Polynomial f_cusp = x * x - y * y * y;
    Derivation cusp1 = deriv(v, {x.scaled(Rational(3)), y.scaled(Rational(2))});
    Derivation cusp2 = deriv(v, {(y * y).scaled(Rational(3)), x.scaled(Rational(2))});
};

}  // namespace

TEST_CASE("is_logarithmic decides with witnesses") {
    Fixtures fx;
    auto yes = is_logarithmic(fx.nc1, fx.f_nc);
    REQUIRE(yes.logarithmic);
    CHECK(yes.quotient == Polynomial::constant(fx.v, Rational(1)));

    auto no = is_logarithmic(deriv(fx.v, {Polynomial::constant(fx.v, Rational(1)), fx.zero}), fx.f_nc);
    REQUIRE_FALSE(no.logarithmic);
    CHECK(no.remainder == fx.y);

    auto tangent = is_logarithmic(fx.cusp2, fx.f_cusp);  // 6xy^2 - 6xy^2 = 0
    REQUIRE(tangent.logarithmic);
    CHECK(tangent.quotient.is_zero());
}

TEST_CASE("saito_frame certifies the stock frames") {
    Fixtures fx;

    auto nc = saito_frame(fx.f_nc, {fx.nc1, fx.nc2});
    REQUIRE(std::holds_alternative<SaitoFrame>(nc));
    const auto& ncf = std::get<SaitoFrame>(nc);
    CHECK(ncf.det_g() == fx.f_nc);
    CHECK(ncf.unit_c() == 1);
    for (int k = 0; k < 2; ++k) CHECK(ncf.structure_constant(0, 1, k).is_zero());

    auto cusp = saito_frame(fx.f_cusp, {fx.cusp1, fx.cusp2});
    REQUIRE(std::holds_alternative<SaitoFrame>(cusp));
    const auto& cf = std::get<SaitoFrame>(cusp);
    CHECK(cf.det_g() == fx.f_cusp.scaled(Rational(6)));
    CHECK(cf.unit_c() == 6);

    auto degenerate = saito_frame(fx.f_nc, {fx.nc1, fx.nc1});
    REQUIRE(std::holds_alternative<SaitoFailure>(degenerate));
    CHECK(std::get<SaitoFailure>(degenerate).kind == SaitoFailure::Kind::wrong_determinant);
}

TEST_CASE("saito_frame rejects corrupted bases with a witness") {
    Fixtures fx;
    // Corrupt one coefficient: x d_x + d_y is not logarithmic for xy.
    auto bad = deriv(fx.v, {fx.x, Polynomial::constant(fx.v, Rational(1))});
    auto res = saito_frame(fx.f_nc, {fx.nc1, bad});
    REQUIRE(std::holds_alternative<SaitoFailure>(res));
    const auto& fail = std::get<SaitoFailure>(res);
    CHECK(fail.kind == SaitoFailure::Kind::not_logarithmic);
    CHECK_FALSE(fail.witness.is_zero());
}

TEST_CASE("lie brackets") {
    Fixtures fx;
    CHECK(lie_bracket(fx.nc1, fx.nc2).is_zero());

    auto br = lie_bracket(fx.cusp1, fx.cusp2);
    CHECK(br == fx.cusp2);  // cusp frame closes onto delta_2

    auto ddx = deriv(fx.v, {Polynomial::constant(fx.v, Rational(1)), fx.zero});
    CHECK(lie_bracket(ddx, fx.nc1) == ddx);
}

TEST_CASE("structure constants") {
    Fixtures fx;
    auto cusp = std::get<SaitoFrame>(saito_frame(fx.f_cusp, {fx.cusp1, fx.cusp2}));
    CHECK(cusp.structure_constant(0, 1, 0).is_zero());
    CHECK(cusp.structure_constant(0, 1, 1) == Polynomial::constant(fx.v, Rational(1)));

    // f = x with frame {x d_x, d_y}: commuting, all constants vanish.
    auto fx2 = saito_frame(fx.x, {fx.nc1, deriv(fx.v, {fx.zero, Polynomial::constant(fx.v, Rational(1))})});
    REQUIRE(std::holds_alternative<SaitoFrame>(fx2));
    for (int k = 0; k < 2; ++k) CHECK(std::get<SaitoFrame>(fx2).structure_constant(0, 1, k).is_zero());
}

TEST_CASE("frame invariants") {
    Fixtures fx;
    for (const auto& frame : {std::get<SaitoFrame>(saito_frame(fx.f_nc, {fx.nc1, fx.nc2})),
                              std::get<SaitoFrame>(saito_frame(fx.f_cusp, {fx.cusp1, fx.cusp2}))}) {
        const int n = frame.n();
        // A * B = det * I
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Polynomial dot = Polynomial::zero(fx.v);
                for (int l = 0; l < n; ++l) dot += frame.matrix_A()[i][l] * frame.adjugate_B()[l][j];
                if (i == j)
                    CHECK(dot == frame.det_g());
                else
                    CHECK(dot.is_zero());
            }
        // antisymmetry and closure
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k)
                    CHECK(frame.structure_constant(i, j, k) == -frame.structure_constant(j, i, k));
                auto closed = is_logarithmic(lie_bracket(frame.basis()[i], frame.basis()[j]),
                                             frame.divisor());
                CHECK(closed.logarithmic);
            }
    }
}

TEST_CASE("unimodular change of basis preserves validity and rescales the unit") {
    Fixtures fx;
    // U = [[1, 1], [0, -2]], det U = -2.
    Derivation u1 = fx.cusp1 + fx.cusp2;
    Derivation u2 = fx.cusp2.scaled(Rational(-2));
    auto res = saito_frame(fx.f_cusp, {u1, u2});
    REQUIRE(std::holds_alternative<SaitoFrame>(res));
    CHECK(std::get<SaitoFrame>(res).unit_c() == Rational(6) * Rational(-2));

    // random invertible constant mixes, both stock frames
    gen::Rng rng(321);
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int rep = 0; rep < 25; ++rep) {
        int a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
        Rational det_u = Rational(a) * d - Rational(b) * c;
        if (is_zero(det_u)) continue;
        for (const auto& [f, b1, b2] :
             {std::tuple{fx.f_nc, fx.nc1, fx.nc2}, std::tuple{fx.f_cusp, fx.cusp1, fx.cusp2}}) {
            Derivation m1 = b1.scaled(Rational(a)) + b2.scaled(Rational(b));
            Derivation m2 = b1.scaled(Rational(c)) + b2.scaled(Rational(d));
            auto base = std::get<SaitoFrame>(saito_frame(f, {b1, b2}));
            auto mixed = saito_frame(f, {m1, m2});
            REQUIRE(std::holds_alternative<SaitoFrame>(mixed));
            CHECK(std::get<SaitoFrame>(mixed).unit_c() == base.unit_c() * det_u);
        }
    }
}

TEST_CASE("local-only units are flagged, not silently accepted as global") {
    Fixtures fx;
    // f = x over {(1+x) x d_x, d_y}: det = (1+x) x, unit 1+x has nonzero
    // constant term but is not constant.
    auto one = Polynomial::constant(fx.v, Rational(1));
    auto res = saito_frame(fx.x, {deriv(fx.v, {(one + fx.x) * fx.x, fx.zero}),
                                  deriv(fx.v, {fx.zero, one})});
    REQUIRE(std::holds_alternative<SaitoFrame>(res));
    const auto& frame = std::get<SaitoFrame>(res);
    CHECK(frame.local_only());
    CHECK_FALSE(frame.unit_is_constant());
    CHECK(frame.unit() == one + fx.x);
}
