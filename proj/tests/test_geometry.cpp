#include <catch2/catch_amalgamated.hpp>

#include "hypflow/halfplane.hpp"
#include "hypflow/sampling.hpp"
#include "test_support.hpp"

using namespace hypflow;

namespace {
// independent oracle: renormalized distance along the ray, evaluated at
// finite time (error below e^{-t})
double busemannOracle(const Uhp& p, const Uhp& q, const BoundaryPoint& xi, double t = 30.0) {
    GroupElement ray = frameAt(p, xi);
    return hypDistance(q, footpoint(flow(ray, FlowKind::Z, t))) - t;
}
}  // namespace

TEST_CASE("Busemann closed forms against the limit oracle") {
    const Uhp i0(0.0, 1.0);
    CHECK(busemann(i0, i0, BoundaryPoint::at(0.3)) == 0.0);
    CHECK(busemann(i0, Uhp(0.0, 2.0), BoundaryPoint::infinity()) ==
          Catch::Approx(-std::log(2.0)).margin(1e-15));
    Rng rng(21);
    for (int k = 0; k < 25; ++k) {
        Uhp p(rng.uniform(-1, 1), std::exp(rng.uniform(-0.5, 0.5)));
        Uhp q(rng.uniform(-1, 1), std::exp(rng.uniform(-0.5, 0.5)));
        BoundaryPoint xi = BoundaryPoint::at(rng.uniform(-3, 3));
        CHECK(std::abs(busemann(p, q, xi) - busemannOracle(p, q, xi)) < 2e-13);
    }
}

TEST_CASE("Busemann cocycle identity") {
    Rng rng(22);
    for (int k = 0; k < 100; ++k) {
        Uhp p(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        Uhp q(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        Uhp r(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        BoundaryPoint xi = k % 4 ? BoundaryPoint::at(rng.uniform(-4, 4))
                                 : BoundaryPoint::infinity();
        CHECK(std::abs(busemann(p, q, xi) + busemann(q, r, xi) - busemann(p, r, xi)) < 1e-12);
    }
}

TEST_CASE("far boundary points go through the inversion cleanly") {
    Uhp p(0.3, 1.2), q(-0.4, 0.7);
    BoundaryPoint far = BoundaryPoint::at(3.0e7);
    CHECK(std::abs(busemann(p, q, far) - busemannOracle(p, q, far, 34.0)) < 1e-9);
}

TEST_CASE("Gromov product worked values and base change") {
    const Uhp i0(0.0, 1.0);
    CHECK(gromovProduct(i0, BoundaryPoint::at(0.0), BoundaryPoint::infinity()) < 1e-15);
    CHECK(gromovProduct(i0, BoundaryPoint::infinity(), BoundaryPoint::at(1.0)) ==
          Catch::Approx(std::log(2.0)).margin(1e-14));
    // the raw sums are never positive in this model, and satisfy the base
    // change identity exactly
    Rng rng(23);
    for (int k = 0; k < 200; ++k) {
        Uhp p(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        Uhp q(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        BoundaryPoint xi = BoundaryPoint::at(rng.uniform(-4, 4));
        BoundaryPoint eta = BoundaryPoint::at(rng.uniform(-4, 4));
        if (std::abs(xi.x - eta.x) < 0.05) continue;
        CHECK(gromovProductRaw(p, xi, eta) <= 1e-12);
        double lhs = gromovProductRaw(p, xi, eta) - gromovProductRaw(q, xi, eta);
        CHECK(std::abs(lhs - (busemann(p, q, xi) + busemann(p, q, eta))) < 1e-12);
    }
    CHECK_THROWS_AS(gromovProduct(i0, BoundaryPoint::at(1.0), BoundaryPoint::at(1.0)),
                    std::domain_error);
}

TEST_CASE("cross ratio: degenerate pairs, symmetries, cocycle, invariance, oracle") {
    CHECK(crossRatio(BoundaryPoint::at(0), BoundaryPoint::at(2), BoundaryPoint::at(1),
                     BoundaryPoint::at(1)) == 0.0);
    // worked value: translation length one along the imaginary axis
    double bosc = crossRatio(BoundaryPoint::at(0.0), BoundaryPoint::infinity(),
                             BoundaryPoint::at(std::exp(1.0)), BoundaryPoint::at(1.0));
    CHECK(bosc == Catch::Approx(2.0).margin(1e-13));
    Rng rng(24);
    for (int k = 0; k < 1000; ++k) {
        auto pick = [&]() { return BoundaryPoint::at(rng.uniform(-5, 5)); };
        BoundaryPoint a = pick(), b = pick(), c = pick(), d = pick(), e = pick();
        if (std::abs(a.x - b.x) < 0.05 || std::abs(c.x - d.x) < 0.05 ||
            std::abs(c.x - e.x) < 0.05 || std::abs(d.x - e.x) < 0.05)
            continue;
        double cr = crossRatio(a, b, c, d);
        CHECK(std::abs(cr - crossRatio(c, d, a, b)) < 1e-11);
        CHECK(std::abs(cr + crossRatio(a, b, d, c)) < 1e-11);
        CHECK(std::abs(cr + crossRatio(a, b, d, e) - crossRatio(a, b, c, e)) < 1e-11);
        CHECK(std::abs(cr - crossRatio(a, b, c, d, Uhp(0.7, 3.1))) < 1e-11);
        double oracle = 2.0 * std::log(std::abs(a.x - c.x) * std::abs(b.x - d.x) /
                                       (std::abs(a.x - d.x) * std::abs(b.x - c.x)));
        CHECK(std::abs(cr - oracle) < 1e-11);
        GroupElement g = haarLikeFrame(rng);
        CHECK(std::abs(cr - crossRatio(mobius(g, a), mobius(g, b), mobius(g, c),
                                       mobius(g, d))) < 1e-10);
    }
}

TEST_CASE("marked length spectrum identity over random hyperbolic elements") {
    Rng rng(25);
    for (int k = 0; k < 20; ++k) {
        double len = rng.uniform(0.3, 2.5);
        GroupElement h = haarLikeFrame(rng);
        GroupElement gamma = h * expGenerator(FlowKind::Z, len) * h.inverse();
        Axis ax = axis(gamma);
        CHECK(ax.length == Catch::Approx(len).margin(1e-11));
        BoundaryPoint eta = BoundaryPoint::at(rng.uniform(-4, 4));
        if (nearlyEqual(eta, ax.backward, 1e-3) || nearlyEqual(eta, ax.forward, 1e-3))
            continue;
        double cr = crossRatio(ax.backward, ax.forward, mobius(gamma, eta), eta);
        CHECK(std::abs(cr - 2.0 * len) < 1e-9);
    }
}

TEST_CASE("axis rejects non-hyperbolic elements") {
    CHECK_THROWS_AS(axis(rotationAboutI(1.0)), std::domain_error);
    CHECK_THROWS_AS(axis(identityFrame()), std::domain_error);
}

TEST_CASE("endpoints and stable horocycle share the forward endpoint") {
    auto [m0, p0] = endpoints(identityFrame());
    CHECK(m0.x == 0.0);
    CHECK(p0.isInf);
    auto [mt, pt] = endpoints(expGenerator(FlowKind::Z, 3.7));
    CHECK(mt.x == 0.0);
    CHECK(pt.isInf);
    Rng rng(26);
    for (int k = 0; k < 100; ++k) {
        GroupElement v = haarLikeFrame(rng);
        double r = rng.uniform(-2, 2);
        auto [vm, vp] = endpoints(v);
        auto [wm, wp] = endpoints(flow(v, FlowKind::XPlus, r));
        CHECK(nearlyEqual(vp, wp, 1e-9));
        auto [um, up] = endpoints(flow(v, FlowKind::XMinus, r));
        CHECK(nearlyEqual(vm, um, 1e-9));
    }
}

TEST_CASE("leaf intersections: self, residual, flow commutation, circuit") {
    Rng rng(27);
    for (int k = 0; k < 30; ++k) {
        GroupElement v = haarLikeFrame(rng);
        auto [vm, vp] = endpoints(v);
        CHECK(pslDistance(leafIntersection(v, vm, LeafKind::Stable), v) < 1e-9);
        BoundaryPoint other = BoundaryPoint::at(rng.uniform(-6, 6));
        if (nearlyEqual(other, vp, 1e-2) || nearlyEqual(other, vm, 1e-2)) continue;
        GroupElement w = leafIntersection(v, other, LeafKind::Stable);
        CHECK(std::abs(busemann(footpoint(v), footpoint(w), vp)) < 1e-11);
        GroupElement u = leafIntersection(v, other, LeafKind::Unstable);
        CHECK(std::abs(busemann(footpoint(v), footpoint(u), vm)) < 1e-11);
        double t = rng.uniform(-1, 1);
        GroupElement a = flow(w, FlowKind::Z, t);
        GroupElement b = leafIntersection(flow(v, FlowKind::Z, t), other, LeafKind::Stable);
        CHECK(std::abs(busemann(footpoint(a), footpoint(b), endpoints(a).second)) < 1e-10);
    }
    // the unstable-first circuit recovers the cross ratio
    for (int k = 0; k < 20; ++k) {
        double pts[4];
        for (double& p : pts) p = rng.uniform(-4, 4);
        bool ok = true;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(pts[i] - pts[j]) < 0.25) ok = false;
        if (!ok) continue;
        BoundaryPoint xi = BoundaryPoint::at(pts[0]), xip = BoundaryPoint::at(pts[1]);
        BoundaryPoint eta = BoundaryPoint::at(pts[2]), etap = BoundaryPoint::at(pts[3]);
        double formula = crossRatio(xi, xip, eta, etap);
        double circuit = dynamicalCrossRatio(xi, xip, eta, etap, rng.uniform(-0.5, 0.5));
        CHECK(std::abs(formula - circuit) < 1e-9);
    }
    // the exact quadrilateral's endpoints are a cross-ratio worked value
    double d = 0.05;
    GroupElement v2 = expGenerator(FlowKind::XMinus, d) * expGenerator(FlowKind::XPlus, d);
    auto [v2m, v2p] = endpoints(v2);
    double cr = crossRatio(BoundaryPoint::at(0.0), v2m, BoundaryPoint::infinity(), v2p);
    CHECK(cr == Catch::Approx(quadrilateralClose(d, d).d5).margin(1e-13));
}

TEST_CASE("frames on geodesics and frameAt invariants") {
    Rng rng(28);
    for (int k = 0; k < 50; ++k) {
        double a = rng.uniform(-4, 4), b = rng.uniform(-4, 4);
        if (std::abs(a - b) < 0.1) continue;
        GroupElement g = frameOnGeodesic(BoundaryPoint::at(a), BoundaryPoint::at(b));
        auto [gm, gp] = endpoints(g);
        CHECK(nearlyEqual(gm, BoundaryPoint::at(a), 1e-10));
        CHECK(nearlyEqual(gp, BoundaryPoint::at(b), 1e-10));
        Uhp p(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        GroupElement f = frameAt(p, BoundaryPoint::at(a));
        CHECK(std::abs(footpoint(f) - p) < 1e-9);
        CHECK(nearlyEqual(endpoints(f).second, BoundaryPoint::at(a), 1e-9));
    }
}
