#include <catch2/catch_amalgamated.hpp>

#include "hypflow/observable.hpp"
#include "hypflow/sampling.hpp"
#include "test_support.hpp"

using namespace hypflow;

namespace {
std::shared_ptr<const OctagonGroup> theGroup() {
    static auto g = std::make_shared<OctagonGroup>();
    return g;
}
InvariantObservable bumpObservable(double amplitude = 0.1, double radius = 0.7) {
    GroupElement center =
        flow(flow(identityFrame(), FlowKind::XMinus, 0.12), FlowKind::Z, 0.23);
    return InvariantObservable(theGroup(), 1.0, {{center, amplitude, radius}});
}
}  // namespace

TEST_CASE("octagon group: relation, traces, discreteness") {
    auto g = theGroup();
    CHECK(g->relationResidual() < 1e-9);
    double tr0 = std::abs(g->generator(0).mat().trace());
    CHECK(tr0 > 2.0);
    for (int k = 1; k < 4; ++k)
        CHECK(std::abs(std::abs(g->generator(k).mat().trace()) - tr0) < 1e-12);
    for (int k = 0; k < 4; ++k)
        CHECK(translationLength(g->generator(k)) == Catch::Approx(g->systole()).margin(1e-12));
    // no nontrivial short word is the identity
    auto ball = g->wordBall(2);
    int hits = 0;
    for (const GroupElement& w : ball)
        if (pslDistance(w, identityFrame()) < 1e-6) ++hits;
    CHECK(hits == 1);  // the identity itself
}

TEST_CASE("reduction: termination, idempotence, translation invariance") {
    auto g = theGroup();
    Rng rng(31);
    auto ball = g->wordBall(2);
    for (int k = 0; k < 100; ++k) {
        GroupElement v = haarLikeFrame(rng, 1.5);
        auto [gamma, v0] = g->reduce(v);
        CHECK(pslDistance(gamma * v0, v) < 1e-10);
        CHECK(g->inDomain(footpoint(v0), 1e-12));
        auto [gamma2, v00] = g->reduce(v0);
        CHECK(pslDistance(v00, v0) < 1e-12);
        const GroupElement& w = ball[1 + (rng.nextU64() % (ball.size() - 1))];
        auto [gamma3, v1] = g->reduce(w * v);
        CHECK(pslDistance(v1, v0) < 1e-10);
        CHECK(frobeniusDistance(g->reduceMat(v.mat()), v0.mat()) < 1e-10);
    }
}

TEST_CASE("invariant observable: exact invariance, positivity, smoothness") {
    auto g = theGroup();
    InvariantObservable psi = bumpObservable();
    CHECK(psi.minimumValue() == Catch::Approx(0.9));
    Rng rng(32);
    auto ball = g->wordBall(3, 12.0);
    for (int k = 0; k < 60; ++k) {
        GroupElement v = haarLikeFrame(rng, 1.2);
        double base = psi.value(v);
        const GroupElement& gamma = ball[rng.nextU64() % ball.size()];
        CHECK(std::abs(psi.value(gamma * v) - base) < 1e-12);
        CHECK(base >= psi.minimumValue());
    }
    // constant observable
    InvariantObservable c = InvariantObservable::constant(g, 2.5);
    CHECK(c.value(haarLikeFrame(rng)) == 2.5);
    CHECK(c.derivative(haarLikeFrame(rng), FlowKind::XPlus) == 0.0);
    // construction guards
    CHECK_THROWS_AS(InvariantObservable(g, -1.0), std::domain_error);
    CHECK_THROWS_AS(bumpObservable(1.5, 0.7), std::domain_error);
    CHECK_THROWS_AS(bumpObservable(0.1, 2.0), std::domain_error);
}

TEST_CASE("analytic frame derivatives match Richardson quotients") {
    InvariantObservable psi = bumpObservable();
    Rng rng(33);
    auto probe = [&](const GroupElement& v, FlowKind k) {
        auto fd = [&](double h) {
            return (psi.value(flow(v, k, h)) - psi.value(flow(v, k, -h))) / (2.0 * h);
        };
        double f1 = fd(1e-4), f2 = fd(5e-5);
        return (4.0 * f2 - f1) / 3.0;  // Richardson extrapolation
    };
    for (int i = 0; i < 10; ++i) {
        GroupElement v = flow(flow(identityFrame(), FlowKind::XMinus, rng.uniform(-0.4, 0.4)),
                              FlowKind::XPlus, rng.uniform(-0.4, 0.4));
        for (FlowKind k : {FlowKind::XMinus, FlowKind::Z, FlowKind::XPlus})
            CHECK(std::abs(psi.derivative(v, k) - probe(v, k)) < 1e-8);
    }
    // second derivatives against nested differences of the first
    for (int i = 0; i < 5; ++i) {
        GroupElement v = flow(identityFrame(), FlowKind::XPlus, rng.uniform(-0.3, 0.3));
        for (FlowKind kx : {FlowKind::XMinus, FlowKind::Z, FlowKind::XPlus})
            for (FlowKind ky : {FlowKind::XMinus, FlowKind::Z, FlowKind::XPlus}) {
                double h = 1e-4;
                double fd = (psi.derivative(flow(v, kx, h), ky) -
                             psi.derivative(flow(v, kx, -h), ky)) /
                            (2.0 * h);
                CHECK(std::abs(psi.secondDerivative(v, kx, ky) - fd) < 1e-6);
            }
    }
}

TEST_CASE("observable continuity across domain walls") {
    // a bump reaching the walls must still evaluate continuously along orbits
    auto g = theGroup();
    GroupElement center = flow(flow(identityFrame(), FlowKind::XPlus, 0.9), FlowKind::Z, 0.8);
    InvariantObservable psi(g, 1.0, {{center, 0.1, 1.3}});
    GroupElement v = haarLikeFrame(*(new Rng(34)));
    double prev = psi.value(v);
    for (int i = 1; i <= 4000; ++i) {
        GroupElement w = flow(v, FlowKind::Z, i * 0.005);
        double cur = psi.value(w);
        CHECK(std::abs(cur - prev) < 0.012);  // c1 * step with margin
        prev = cur;
    }
}

TEST_CASE("liouville sampling: exact constants, invariance, reproducibility") {
    auto g = theGroup();
    InvariantObservable c = InvariantObservable::constant(g, 3.25);
    MeanEstimate mc = estimateMean(c, 2000, 5);
    CHECK(mc.mean == 3.25);
    CHECK(mc.stderrOfMean == 0.0);

    InvariantObservable psi = bumpObservable();
    auto samples = liouvilleSample(*g, 20000, 77);
    MeanEstimate base = monteCarloMean(samples, [&](const GroupElement& v) {
        return psi.value(v);
    });
    MeanEstimate flowed = monteCarloMean(samples, [&](const GroupElement& v) {
        return psi.value(flow(v, FlowKind::Z, 1.0));
    });
    MeanEstimate horo = monteCarloMean(samples, [&](const GroupElement& v) {
        return psi.value(flow(v, FlowKind::XPlus, 0.35));
    });
    double pooled = std::hypot(base.stderrOfMean, flowed.stderrOfMean);
    CHECK(std::abs(flowed.mean - base.mean) < 3.0 * pooled);
    CHECK(std::abs(horo.mean - base.mean) <
          3.0 * std::hypot(base.stderrOfMean, horo.stderrOfMean));

    MeanEstimate seedA = estimateMean(psi, 20000, 101);
    MeanEstimate seedB = estimateMean(psi, 20000, 202);
    CHECK(std::abs(seedA.mean - seedB.mean) <
          3.0 * std::hypot(seedA.stderrOfMean, seedB.stderrOfMean));
    // determinism
    MeanEstimate seedA2 = estimateMean(psi, 20000, 101);
    CHECK(seedA.mean == seedA2.mean);
}

TEST_CASE("frame coordinates round trip") {
    Rng rng(35);
    for (int i = 0; i < 30; ++i) {
        double x = rng.uniform(-2, 2), y = std::exp(rng.uniform(-1, 1));
        double theta = rng.uniform(0.0, 6.28);
        GroupElement v = frameFromCoordinates(x, y, theta);
        Uhp z = footpoint(v);
        CHECK(std::abs(z - Uhp(x, y)) < 1e-12);
    }
    CHECK_THROWS_AS(frameFromCoordinates(0.0, -1.0, 0.0), std::domain_error);
}
