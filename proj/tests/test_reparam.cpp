#include <catch2/catch_amalgamated.hpp>

#include "hypflow/reparam.hpp"
#include "test_support.hpp"

using namespace hypflow;

namespace {
std::shared_ptr<const OctagonGroup> theGroup() {
    static auto g = std::make_shared<OctagonGroup>();
    return g;
}
const InvariantObservable& bumpPsi() {
    static InvariantObservable psi(
        theGroup(), 1.0,
        {{flow(flow(identityFrame(), FlowKind::XMinus, 0.12), FlowKind::Z, 0.23), 0.1, 0.7}});
    return psi;
}
const QuadratureSpec kSpec{};
}  // namespace

TEST_CASE("time change: trivial, linear, group property, clock identity") {
    auto g = theGroup();
    InvariantObservable one = InvariantObservable::constant(g, 1.0);
    InvariantObservable c = InvariantObservable::constant(g, 2.4);
    Rng rng(41);
    GroupElement v = haarLikeFrame(rng);
    CHECK(pslDistance(reparamFlow(v, 1.3, one), flow(v, FlowKind::Z, 1.3)) < 1e-12);
    CHECK(pslDistance(reparamFlow(v, 1.3, c), flow(v, FlowKind::Z, 1.3 / 2.4)) < 1e-12);

    const InvariantObservable& psi = bumpPsi();
    for (int i = 0; i < 5; ++i) {
        GroupElement w = haarLikeFrame(rng);
        double s = rng.uniform(-1.5, 1.5), t = rng.uniform(-1.5, 1.5);
        CHECK(pslDistance(reparamFlow(reparamFlow(w, s, psi), t, psi),
                          reparamFlow(w, s + t, psi)) < 1e-9);
        // elapsed geodesic time integrates psi back to the requested time
        double sigma = geodesicTimeFor(w, psi, t);
        Mat2 base = psi.group().reduceMat(w.mat());
        auto along = [&](double u) {
            return psi.valueMat(base * expGeneratorMat(FlowKind::Z, u));
        };
        CHECK(std::abs(integrateSimpson(along, 0.0, sigma, 0.002) - t) < 1e-9);
    }
}

TEST_CASE("parry cocycles: constants vanish, truncation, transport") {
    auto g = theGroup();
    InvariantObservable c = InvariantObservable::constant(g, 1.7);
    Rng rng(42);
    GroupElement v = haarLikeFrame(rng);
    CHECK(parryCocycle(v, c, CocycleSide::Plus) == 0.0);
    CHECK(parryCocycle(v, c, CocycleSide::Minus) == 0.0);

    const InvariantObservable& psi = bumpPsi();
    QuadratureSpec sT = kSpec, s2T = kSpec;
    sT.tailTolerance = 1e-300;
    sT.maxTime = 12.0;
    s2T.tailTolerance = 1e-300;
    s2T.maxTime = 24.0;
    for (int i = 0; i < 5; ++i) {
        GroupElement w = haarLikeFrame(rng);
        for (CocycleSide side : {CocycleSide::Plus, CocycleSide::Minus}) {
            double a = parryCocycle(w, psi, side, sT);
            double b = parryCocycle(w, psi, side, s2T);
            CHECK(std::abs(a - b) <= std::exp(-12.0) * psi.c1Bound());
        }
        // transport: h+(f^t v) = e^t (h+(v) - int_0^t e^{-u} X+psi(f^u v) du)
        double t = rng.uniform(0.2, 1.0);
        double hp = parryCocycle(w, psi, CocycleSide::Plus, kSpec);
        auto strip = [&](double u) {
            return std::exp(-u) * psi.derivative(flow(w, FlowKind::Z, u), FlowKind::XPlus);
        };
        double lhs = parryCocycle(flow(w, FlowKind::Z, t), psi, CocycleSide::Plus, kSpec);
        CHECK(std::abs(lhs - std::exp(t) * (hp - integrateSimpson(strip, 0.0, t, 0.005))) <
              1e-8);
    }
}

TEST_CASE("psi-Busemann: degenerations, level rate, cocycle") {
    auto g = theGroup();
    InvariantObservable one = InvariantObservable::constant(g, 1.0);
    InvariantObservable c = InvariantObservable::constant(g, 2.2);
    const InvariantObservable& psi = bumpPsi();
    Rng rng(43);
    for (int i = 0; i < 8; ++i) {
        Uhp p(rng.uniform(-1, 1), std::exp(rng.uniform(-0.6, 0.6)));
        Uhp q(rng.uniform(-1, 1), std::exp(rng.uniform(-0.6, 0.6)));
        BoundaryPoint xi = i % 3 ? BoundaryPoint::at(rng.uniform(-3, 3))
                                 : BoundaryPoint::infinity();
        double b = busemann(p, q, xi);
        CHECK(busemannPsi(p, q, xi, one) == Catch::Approx(b).margin(1e-12));
        CHECK(busemannPsi(p, q, xi, c) == Catch::Approx(2.2 * b).margin(1e-12));
        // level-set invariance of the reparametrized Busemann function
        double B = busemannPsi(p, q, xi, psi, kSpec);
        GroupElement w = frameAt(q, xi);
        GroupElement w2 = reparamFlow(w, B, psi);
        CHECK(std::abs(busemannPsi(p, footpoint(w2), xi, psi, kSpec)) < 1e-8);
        // cocycle
        Uhp r(rng.uniform(-1, 1), std::exp(rng.uniform(-0.6, 0.6)));
        CHECK(std::abs(busemannPsi(p, q, xi, psi, kSpec) + busemannPsi(q, r, xi, psi, kSpec) -
                       busemannPsi(p, r, xi, psi, kSpec)) < 1e-9);
    }
}

TEST_CASE("psi leaf intersections sit on the psi-horospheres") {
    const InvariantObservable& psi = bumpPsi();
    Rng rng(44);
    for (int i = 0; i < 6; ++i) {
        GroupElement v = haarLikeFrame(rng);
        auto [vm, vp] = endpoints(v);
        BoundaryPoint other = BoundaryPoint::at(rng.uniform(-5, 5));
        if (nearlyEqual(other, vp, 1e-2) || nearlyEqual(other, vm, 1e-2)) continue;
        GroupElement ws = leafIntersectionPsi(v, other, LeafKind::Stable, psi, kSpec);
        CHECK(std::abs(busemannPsi(footpoint(v), footpoint(ws), vp, psi, kSpec)) < 1e-8);
        CHECK(nearlyEqual(endpoints(ws).second, vp, 1e-8));
        GroupElement wu = leafIntersectionPsi(v, other, LeafKind::Unstable, psi, kSpec);
        CHECK(std::abs(busemannPsi(footpoint(v), footpoint(wu), vm, psi, kSpec, true)) < 1e-8);
        CHECK(nearlyEqual(endpoints(wu).first, vm, 1e-8));
    }
}

TEST_CASE("psi cross ratio: degenerations and cocycle identity") {
    auto g = theGroup();
    InvariantObservable one = InvariantObservable::constant(g, 1.0);
    const InvariantObservable& psi = bumpPsi();
    CHECK(crossRatioPsi(BoundaryPoint::at(0), BoundaryPoint::at(0), BoundaryPoint::at(1),
                        BoundaryPoint::at(2), psi) == 0.0);
    Rng rng(45);
    for (int i = 0; i < 4; ++i) {
        double pts[5];
        for (double& p : pts) p = rng.uniform(-4, 4);
        bool ok = true;
        for (int a = 0; a < 5; ++a)
            for (int b = a + 1; b < 5; ++b)
                if (std::abs(pts[a] - pts[b]) < 0.3) ok = false;
        if (!ok) continue;
        BoundaryPoint xi = BoundaryPoint::at(pts[0]), xip = BoundaryPoint::at(pts[1]);
        BoundaryPoint eta = BoundaryPoint::at(pts[2]), etap = BoundaryPoint::at(pts[3]);
        BoundaryPoint eta2 = BoundaryPoint::at(pts[4]);
        CHECK(std::abs(crossRatioPsi(xi, xip, eta, etap, one, kSpec) -
                       crossRatio(xi, xip, eta, etap)) < 1e-9);
        double lhs = crossRatioPsi(xi, xip, eta, etap, psi, kSpec) +
                     crossRatioPsi(xi, xip, etap, eta2, psi, kSpec);
        CHECK(std::abs(lhs - crossRatioPsi(xi, xip, eta, eta2, psi, kSpec)) < 1e-6);
    }
}

TEST_CASE("tau: constants vanish, truncation bound, drift compensation") {
    auto g = theGroup();
    InvariantObservable c = InvariantObservable::constant(g, 1.7);
    const InvariantObservable& psi = bumpPsi();
    Rng rng(46);
    GroupElement v = haarLikeFrame(rng);
    TauResult tc = tauDelta(v, 0.05, c, kSpec);
    CHECK(tc.tau == 0.0);
    CHECK(tc.tauTruncated == 0.0);
    double c1 = psi.c1Bound();
    for (double delta : {0.1, 0.05}) {
        for (int i = 0; i < 5; ++i) {
            GroupElement w = haarLikeFrame(rng);
            TauResult r = tauDelta(w, delta, psi, kSpec);
            CHECK(std::abs(r.tauTruncated - r.tau) <= 4.0 * c1 * delta * delta * delta);
            CHECK(std::abs(r.tau - (r.tauPlus + r.tauMinus)) < 1e-15);
        }
    }
    // drift: tau(f^T v) - tau(v) compensates d5 * (psi drift)
    double delta = 0.03, T = 1.0;
    double K = std::max({psi.c0Bound(), psi.c1Bound(), psi.c2Bound()});
    Quintuple q = quadrilateralClose(delta, delta);
    for (int i = 0; i < 5; ++i) {
        GroupElement w = haarLikeFrame(rng);
        GroupElement wT = flow(w, FlowKind::Z, T);
        double lhs = std::abs(tauDelta(wT, delta, psi, kSpec, false).tau -
                              tauDelta(w, delta, psi, kSpec, false).tau +
                              q.d5 * (psi.value(wT) - psi.value(w))) /
                     (delta * delta);
        CHECK(lhs <= 2.0 * (std::exp(K) + 4.0 * c1) * T * delta);
    }
    CHECK_THROWS_AS(tauDelta(v, 0.5, psi, kSpec), std::domain_error);
}

TEST_CASE("temporal distance: degenerations and the two routes") {
    auto g = theGroup();
    InvariantObservable one = InvariantObservable::constant(g, 1.0);
    InvariantObservable c = InvariantObservable::constant(g, 1.7);
    const InvariantObservable& psi = bumpPsi();
    Rng rng(47);
    GroupElement v = haarLikeFrame(rng);
    double delta = 0.05;
    double d5 = quadrilateralClose(delta, delta).d5;
    CHECK(hDelta(v, delta, one, kSpec, HDeltaRoute::Integral) ==
          Catch::Approx(d5).margin(1e-10));
    CHECK(hDelta(v, delta, one, kSpec, HDeltaRoute::CrossRatio) ==
          Catch::Approx(d5).margin(1e-9));
    CHECK(hDelta(v, delta, c, kSpec, HDeltaRoute::Integral) ==
          Catch::Approx(1.7 * d5).margin(1e-10));
    CHECK(hDelta(v, delta, c, kSpec, HDeltaRoute::CrossRatio) ==
          Catch::Approx(1.7 * d5).margin(1e-9));
    for (int i = 0; i < 5; ++i) {
        GroupElement w = haarLikeFrame(rng);
        double a = hDelta(w, delta, psi, kSpec, HDeltaRoute::Integral);
        double b = hDelta(w, delta, psi, kSpec, HDeltaRoute::CrossRatio);
        CHECK(std::abs(a - b) < 1e-8);
    }
}

TEST_CASE("temporal distance oscillation on nearby frames") {
    const InvariantObservable& psi = bumpPsi();
    Rng rng(48);
    double delta = 0.05;
    double Tdelta = std::log(1.0 / (delta * delta));
    double reach = delta * delta / Tdelta;
    double bound = 4.0 * delta * delta * delta * psi.c2Bound();
    for (int i = 0; i < 5; ++i) {
        GroupElement v = haarLikeFrame(rng);
        double h0 = hDelta(v, delta, psi, kSpec, HDeltaRoute::Integral);
        GroupElement w = flow(flow(flow(v, FlowKind::XPlus, rng.uniform(-reach, reach) / 3.0),
                                   FlowKind::XMinus, rng.uniform(-reach, reach) / 3.0),
                              FlowKind::Z, rng.uniform(-reach, reach) / 3.0);
        double h1 = hDelta(w, delta, psi, kSpec, HDeltaRoute::Integral);
        CHECK(std::abs(h0 - h1) <= bound);
    }
}
