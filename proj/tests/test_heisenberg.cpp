#include <doctest.h>

#include <cmath>

#include "cvqc/heisenberg.hpp"
#include "cvqc/rng.hpp"

using namespace cvqc;

namespace {

GateOp random_gate(Rng& rng, int n_modes, bool allow_u3 = false, bool allow_two_mode = true) {
    const double a = uniform(rng, -1.0, 1.0);
    const int mode = static_cast<int>(uniform(rng, 0.0, 1.0) * n_modes) % n_modes;
    std::vector<GateKind> kinds = {GateKind::X, GateKind::Z, GateKind::U2, GateKind::Fourier,
                                   GateKind::Squeeze, GateKind::Rotate};
    if (allow_u3) kinds.push_back(GateKind::U3);
    if (allow_two_mode && n_modes >= 2) kinds.push_back(GateKind::CZ);
    const auto kind = kinds[static_cast<size_t>(uniform(rng, 0.0, 1.0) * kinds.size()) % kinds.size()];
    GateOp g{kind, a, 0.0, mode, (mode + 1) % n_modes};
    return g;
}

} // namespace

TEST_CASE("heisenberg basics") {
    // displacements commute once phases are dropped
    PolyMap a = heisenberg({gate_x(0.7), gate_z(-1.3)});
    PolyMap b = heisenberg({gate_z(-1.3), gate_x(0.7)});
    CHECK(a.equals(b));

    // F^4 = identity on phase space
    PolyMap f4 = heisenberg({gate_fourier(), gate_fourier(), gate_fourier(), gate_fourier()});
    CHECK(f4.equals(PolyMap::identity(1)));

    // cubic gate: p -> p + 3 T q^2, q fixed
    const double t = 0.37;
    PolyMap u3 = heisenberg({gate_u3(t)});
    Poly q = Poly::variable(2, 0), p = Poly::variable(2, 1);
    CHECK(u3.images[0].equals(q));
    CHECK(u3.images[1].equals(p + Poly::constant(2, 3.0L * (long double)t) * q * q));

    // phase elements act as the identity map
    CHECK(heisenberg({gate_phase(0.9)}).equals(PolyMap::identity(1)));
}

TEST_CASE("poisson brackets preserved by every word") {
    Rng rng = make_rng(42);
    for (int i = 0; i < 40; ++i) {
        GateWord w;
        const int len = 1 + static_cast<int>(uniform(rng, 0.0, 1.0) * 4);
        for (int k = 0; k < len; ++k) w.push_back(random_gate(rng, 2, /*allow_u3=*/true));
        CHECK(heisenberg(w, 2).preserves_brackets());
    }
}

TEST_CASE("table rows verify for fuzzed keys") {
    Rng rng = make_rng(1234);
    for (int i = 0; i < 200; ++i) {
        const EncKeyPair k1{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        const EncKeyPair k2{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        const double t = uniform(rng, -1.5, 1.5);
        CHECK(verify_correction(gate_z(t), {k1}).ok);
        CHECK(verify_correction(gate_x(t), {k1}).ok);
        CHECK(verify_correction(gate_u2(t), {k1}).ok);
        CHECK(verify_correction(gate_u3(t), {k1}).ok);
        CHECK(verify_correction(gate_fourier(), {k1}).ok);
        CHECK(verify_correction(gate_cz(0, 1), {k1, k2}).ok);
    }
}

TEST_CASE("zero keys need no correction") {
    VerifyReport rep = verify_word(gate_u2(0.8), {{0.0, 0.0}}, {});
    CHECK(rep.ok);
}

TEST_CASE("corrupted correction is rejected with a residual") {
    // sign flip on the Z argument of the U2 row
    const double Q = 0.9, P = -0.4, T = 0.6;
    GateWord bad = {gate_z(2.0 * Q * T + P), gate_x(-Q)};
    VerifyReport rep = verify_word(gate_u2(T), {{Q, P}}, bad);
    CHECK_FALSE(rep.ok);
    CHECK(rep.residual.find("p0") != std::string::npos);

    // the residual is the doubled Z argument 2*(2QT + P) on the p image
    PolyMap lhs = heisenberg({gate_displace(Q, P), gate_u2(T), gate_z(2.0 * Q * T + P), gate_x(-Q)});
    PolyMap rhs = heisenberg({gate_u2(T)});
    Poly diff = lhs.images[1] - rhs.images[1];
    CHECK(diff.equals(Poly::constant(2, 2.0L * (2.0L * (long double)Q * (long double)T + (long double)P))));
}

TEST_CASE("slide identities") {
    // X through Z survives unchanged
    GateWord s1 = slide({gate_x(0.8)}, gate_z(1.1));
    CHECK(heisenberg(s1).equals(heisenberg({gate_x(0.8)})));

    // X(Q) through U2(T) picks up Z(-2QT)
    const double Q = 0.8, T = -0.6;
    GateWord s2 = slide({gate_x(Q)}, gate_u2(T));
    PolyMap expect = heisenberg({gate_x(Q), gate_z(-2.0 * Q * T)});
    CHECK(heisenberg(s2).equals(expect));

    // Z through any q-diagonal gate is untouched
    for (GateOp g : {gate_u2(0.7), gate_u3(0.4), gate_z(2.0)}) {
        GateWord s = slide({gate_z(0.5)}, g);
        CHECK(heisenberg(s).equals(heisenberg({gate_z(0.5)})));
    }

    // U2 element refuses to slide through Fourier
    CHECK_THROWS(slide({gate_u2(0.3)}, gate_fourier()));
}

TEST_CASE("slide soundness (fuzzed)") {
    Rng rng = make_rng(5150);
    for (int i = 0; i < 120; ++i) {
        GateWord corr;
        const int len = 1 + static_cast<int>(uniform(rng, 0.0, 1.0) * 3);
        for (int k = 0; k < len; ++k) {
            const double a = uniform(rng, -1.0, 1.0);
            switch (static_cast<int>(uniform(rng, 0.0, 4.0))) {
                case 0: corr.push_back(gate_x(a)); break;
                case 1: corr.push_back(gate_z(a)); break;
                case 2: corr.push_back(gate_displace(a, uniform(rng, -1.0, 1.0))); break;
                default: corr.push_back(gate_u2(a)); break;
            }
        }
        GateOp g = random_gate(rng, 1, /*allow_u3=*/true, /*allow_two_mode=*/false);
        const bool corr_has_u2 = std::any_of(corr.begin(), corr.end(), [](const GateOp& c) {
            return c.kind == GateKind::U2;
        });
        if (corr_has_u2 && (g.kind == GateKind::Fourier || g.kind == GateKind::Rotate)) {
            CHECK_THROWS(slide(corr, g));
            continue;
        }
        GateWord lhs_word = slide(corr, g);
        lhs_word.push_back(g);
        GateWord rhs_word = {g};
        rhs_word.insert(rhs_word.end(), corr.begin(), corr.end());
        CHECK(heisenberg(lhs_word).equals(heisenberg(rhs_word)));
    }
}

TEST_CASE("program correction composition") {
    Rng rng = make_rng(808);

    SUBCASE("gaussian program reduces to a displacement-only correction") {
        for (int i = 0; i < 60; ++i) {
            const int n = 2;
            GateWord prog;
            const int len = 1 + static_cast<int>(uniform(rng, 0.0, 1.0) * 5);
            for (int k = 0; k < len; ++k) prog.push_back(random_gate(rng, n));
            std::vector<EncKeyPair> enc = {{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)},
                                           {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}};
            ProgramCorrection pc = compose_program_correction(prog, enc);
            CHECK(pc.server_shears.empty());
            for (const auto& c : pc.correction)
                CHECK((c.kind == GateKind::X || c.kind == GateKind::Z));

            GateWord full = encryption_word(enc);
            full.insert(full.end(), prog.begin(), prog.end());
            full.insert(full.end(), pc.correction.begin(), pc.correction.end());
            CHECK(heisenberg(full, n).equals(heisenberg(prog, n)));
        }
    }

    SUBCASE("empty program undoes the encryption") {
        ProgramCorrection pc = compose_program_correction({}, {{0.7, -0.2}});
        GateWord full = encryption_word({{0.7, -0.2}});
        full.insert(full.end(), pc.correction.begin(), pc.correction.end());
        CHECK(heisenberg(full, 1).equals(PolyMap::identity(1)));
    }

    SUBCASE("fixed example F, U2, CZ") {
        GateWord prog = {gate_fourier(0), gate_u2(0.45, 0), gate_cz(0, 1)};
        std::vector<EncKeyPair> enc = {{0.3, -0.8}, {-0.5, 0.2}};
        ProgramCorrection pc = compose_program_correction(prog, enc);
        GateWord full = encryption_word(enc);
        full.insert(full.end(), prog.begin(), prog.end());
        full.insert(full.end(), pc.correction.begin(), pc.correction.end());
        CHECK(heisenberg(full, 2).equals(heisenberg(prog, 2)));
    }

    SUBCASE("U3 program: gadget shear discharges the cubic correction") {
        for (int i = 0; i < 40; ++i) {
            GateWord prog;
            prog.push_back(random_gate(rng, 1, false, false));
            prog.push_back(gate_u3(uniform(rng, -0.5, 0.5)));
            std::vector<EncKeyPair> enc = {{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}};
            ProgramCorrection pc = compose_program_correction(prog, enc);
            REQUIRE(pc.server_shears.size() == 1);
            // augmented program: the server's shear U2(A+B) right after the U3
            GateWord augmented;
            for (int k = 0; k < static_cast<int>(prog.size()); ++k) {
                augmented.push_back(prog[k]);
                if (k == pc.server_shears[0].first)
                    augmented.push_back(gate_u2(pc.server_shears[0].second, prog[k].mode));
            }
            GateWord full = encryption_word(enc);
            full.insert(full.end(), augmented.begin(), augmented.end());
            full.insert(full.end(), pc.correction.begin(), pc.correction.end());
            CHECK(heisenberg(full, 1).equals(heisenberg(prog, 1)));
        }
    }

    SUBCASE("squeeze program correction matches the gain rule") {
        const double r = 0.55, Q = 0.4, P = -0.9;
        ProgramCorrection pc = compose_program_correction({gate_squeeze(r)}, {{Q, P}});
        CHECK(pc.pending(0) == doctest::Approx(std::exp(-r) * Q).epsilon(1e-14));
        CHECK(pc.pending(1) == doctest::Approx(std::exp(r) * P).epsilon(1e-14));
    }
}
