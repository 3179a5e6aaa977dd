#include <catch2/catch_amalgamated.hpp>

#include "hypflow/group.hpp"
#include "hypflow/sampling.hpp"
#include "test_support.hpp"

using namespace hypflow;

TEST_CASE("bracket table matches the structure constants") {
    AlgebraVector Z{0, 1, 0}, Xp{0, 0, 1}, Xm{1, 0, 0};
    AlgebraVector zxp = bracket(Z, Xp);   // 2 X+
    AlgebraVector zxm = bracket(Z, Xm);   // -2 X-
    AlgebraVector xpxm = bracket(Xp, Xm); // Z
    CHECK(zxp.cPlus == 2.0);
    CHECK(zxp.cMinus == 0.0);
    CHECK(zxp.cZ == 0.0);
    CHECK(zxm.cMinus == -2.0);
    CHECK(xpxm.cZ == 1.0);
    CHECK(xpxm.cMinus == 0.0);
    CHECK(xpxm.cPlus == 0.0);
}

TEST_CASE("generator exponentials in closed form") {
    CHECK(pslDistance(expGenerator(FlowKind::XPlus, 0.0), identityFrame()) == 0.0);
    GroupElement u = expGenerator(FlowKind::XPlus, 0.37);
    CHECK(u.b() == Catch::Approx(0.37).margin(1e-16));
    CHECK(u.a() == 1.0);
    GroupElement a = expGenerator(FlowKind::Z, 2.0 * std::log(2.0));
    CHECK(a.a() == Catch::Approx(2.0).margin(1e-14));
    CHECK(a.d() == Catch::Approx(0.5).margin(1e-14));
    CHECK_THROWS_AS(expGenerator(FlowKind::XPlus, std::nan("")), std::domain_error);
}

TEST_CASE("flow is a one-parameter group") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        GroupElement v = haarLikeFrame(rng);
        double s = rng.uniform(-2, 2), t = rng.uniform(-2, 2);
        for (FlowKind k : {FlowKind::Z, FlowKind::XPlus, FlowKind::XMinus}) {
            CHECK(pslDistance(flow(flow(v, k, s), k, t), flow(v, k, s + t)) < 1e-12);
            CHECK(pslDistance(flow(flow(v, k, s), k, -s), v) < 1e-12);
        }
    }
}

TEST_CASE("pushforward rates: X+ contracts, X- expands, rate exactly one") {
    Rng rng(12);
    for (double t : {-1.5, 0.3, 2.0}) {
        AlgebraVector p = geodesicPushforward(FlowConvention::stableGenerator(), t);
        CHECK(p.cPlus == Catch::Approx(std::exp(-t)).epsilon(1e-13));
        CHECK(std::abs(p.cMinus) + std::abs(p.cZ) < 1e-15);
        AlgebraVector m = geodesicPushforward(FlowConvention::unstableGenerator(), t);
        CHECK(m.cMinus == Catch::Approx(std::exp(t)).epsilon(1e-13));
        AlgebraVector g = geodesicPushforward(FlowConvention::geodesicGenerator(), t);
        CHECK(g.cZ == Catch::Approx(0.5).epsilon(1e-14));
    }
    (void)rng;
}

TEST_CASE("flow commutation carries horocycle displacement through the flow") {
    // pushing an X+ displacement backward through time t scales it by e^{t}
    Rng rng(13);
    for (int i = 0; i < 30; ++i) {
        GroupElement v = haarLikeFrame(rng);
        double t = rng.uniform(-5.0, 5.0), r = rng.uniform(-1.0, 1.0);
        GroupElement lhsP = flow(flow(v, FlowKind::Z, t), FlowKind::XPlus, r);
        GroupElement rhsP = flow(flow(v, FlowKind::XPlus, std::exp(t) * r), FlowKind::Z, t);
        CHECK(pslDistance(lhsP, rhsP) < 1e-11);
        GroupElement lhsM = flow(flow(v, FlowKind::Z, t), FlowKind::XMinus, r);
        GroupElement rhsM = flow(flow(v, FlowKind::XMinus, std::exp(-t) * r), FlowKind::Z, t);
        CHECK(pslDistance(lhsM, rhsM) < 1e-11);
    }
}

TEST_CASE("determinant stays pinned over a million-step composition chain") {
    Rng rng(14);
    GroupElement g = identityFrame();
    for (int i = 0; i < 1000000; ++i) {
        switch (i % 3) {
            case 0: g = flow(g, FlowKind::XPlus, rng.uniform(-0.01, 0.01)); break;
            case 1: g = flow(g, FlowKind::XMinus, rng.uniform(-0.01, 0.01)); break;
            default: g = flow(g, FlowKind::Z, rng.uniform(-0.01, 0.01)); break;
        }
    }
    CHECK(std::abs(g.mat().det() - 1.0) < 1e-12);
}

TEST_CASE("quadrilateral closes exactly and matches the closed forms") {
    for (double d : {0.1, 0.01, 0.001}) {
        Quintuple q = quadrilateralClose(d, d);
        CHECK(std::abs(q.d3 + d / (1.0 + d * d)) < 1e-13);
        CHECK(std::abs(q.d4 + d * (1.0 + d * d)) < 1e-13);
        CHECK(std::abs(q.d5 + 2.0 * std::log(1.0 + d * d)) < 1e-15);
        // brute force: the composed product must be the diagonal flow matrix
        Mat2 M = expGeneratorMat(FlowKind::XMinus, q.d1) *
                 expGeneratorMat(FlowKind::XPlus, q.d2) *
                 expGeneratorMat(FlowKind::XMinus, q.d3) *
                 expGeneratorMat(FlowKind::XPlus, q.d4);
        CHECK(frobeniusDistance(M, expGeneratorMat(FlowKind::Z, q.d5)) < 1e-14);
    }
    // d3 equals the kappa-corrected value identically
    double d = 0.1, kappa = d * d * d / (1.0 + d * d);
    CHECK(std::abs(quadrilateralClose(d, d).d3 - (-d + kappa)) < 1e-16);
    // d4 sits half a cube inside the third-order window
    CHECK(std::abs(quadrilateralClose(d, d).d4 - (-(d + 0.5 * d * d * d))) ==
          Catch::Approx(0.5 * d * d * d).epsilon(1e-10));
}

TEST_CASE("holonomy closure is base-point independent") {
    Rng rng(15);
    Quintuple q = quadrilateralClose(0.07, 0.07);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
        worst = std::max(worst, holonomyClosureCheck(haarLikeFrame(rng), q));
    CHECK(worst < 1e-12);
    Quintuple ref = referenceQuintuple(0.1);
    for (int i = 0; i < 10; ++i) {
        double gap = holonomyClosureCheck(haarLikeFrame(rng), ref);
        CHECK(gap < 2.0 * 1e-3);
    }
}
