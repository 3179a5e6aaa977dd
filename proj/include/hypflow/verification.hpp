#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hypflow/experiments.hpp"

// The verification suites behind the CLI subcommands and the acceptance
// harness. Each returns an ExperimentReport whose checks pin the tolerances.

namespace hypflow {

struct LabContext {
    std::shared_ptr<const OctagonGroup> group;
    InvariantObservable psi;            // configured observable
    InvariantObservable constantPsi;    // fixed constant for degeneration sweeps
    QuadratureSpec spec;
    std::uint64_t seed = 20250817;
};

inline LabContext makeDefaultContext(std::uint64_t seed = 20250817) {
    auto group = std::make_shared<OctagonGroup>();
    GroupElement center =
        flow(flow(flow(identityFrame(), FlowKind::XMinus, 0.12), FlowKind::XPlus, -0.07),
             FlowKind::Z, 0.23);
    InvariantObservable psi(group, 1.0, {{center, 0.1, 0.7}});
    InvariantObservable cpsi = InvariantObservable::constant(group, 1.7);
    return {group, std::move(psi), std::move(cpsi), QuadratureSpec{}, seed};
}

inline GroupElement haarRandomFrame(Rng& rng, double spread = 1.0) {
    double x = rng.uniform(-spread, spread);
    double y = std::exp(rng.uniform(-spread, spread));
    double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    return frameFromCoordinates(x, y, theta);
}

// --- criterion 1: quadrilateral closure ----------------------------------------

inline ExperimentReport verifyQuadrilateral(std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "verify-quadrilateral";
    rep.columns = {"delta", "d3_exact", "d4_exact", "d5", "asymptotic_gap"};
    Rng rng(seed);
    for (double delta : {0.1, 0.01, 0.001}) {
        Quintuple q = quadrilateralClose(delta, delta);
        double d3ref = -delta / (1.0 + delta * delta);
        double d4ref = -delta * (1.0 + delta * delta);
        rep.requireBelow("d3 closed form", std::abs(q.d3 - d3ref), 1e-13);
        rep.requireBelow("d4 closed form", std::abs(q.d4 - d4ref), 1e-13);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
            worst = std::max(worst, holonomyClosureCheck(haarRandomFrame(rng), q));
        rep.requireBelow("holonomy gap over random frames", worst, 1e-12);
        Quintuple ref = referenceQuintuple(delta);
        double gap = holonomyClosureCheck(identityFrame(), ref);
        rep.requireBelow("asymptotic quintuple window", gap, 2.0 * delta * delta * delta);
        rep.rows.push_back({delta, q.d3, q.d4, q.d5, gap});
    }
    return rep;
}

// --- criterion 2: cross-ratio spectrum identity ---------------------------------

inline ExperimentReport verifyCrossRatioSpectrum(std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "verify-cross-ratio";
    rep.columns = {"length", "cross_ratio", "deviation"};
    double worked = crossRatio(BoundaryPoint::at(0.0), BoundaryPoint::infinity(),
                               BoundaryPoint::at(std::exp(1.0)), BoundaryPoint::at(1.0));
    rep.requireBelow("worked value [0,inf,e,1] = 2", std::abs(worked - 2.0), 1e-12);
    Rng rng(seed);
    for (int i = 0; i < 20; ++i) {
        double len = rng.uniform(0.3, 2.5);
        GroupElement h = haarRandomFrame(rng);
        GroupElement gamma = h * expGenerator(FlowKind::Z, len) * h.inverse();
        Axis ax = axis(gamma);
        BoundaryPoint eta;
        do {
            eta = BoundaryPoint::at(rng.uniform(-4.0, 4.0));
        } while (nearlyEqual(eta, ax.backward, 1e-3) || nearlyEqual(eta, ax.forward, 1e-3));
        double cr = crossRatio(ax.backward, ax.forward, mobius(gamma, eta), eta);
        double dev = std::abs(cr - 2.0 * ax.length);
        rep.rows.push_back({ax.length, cr, dev});
        rep.requireBelow("spectrum identity", dev, 1e-9);
    }
    return rep;
}

// --- Busemann / boundary geometry suite -------------------------------------------

inline ExperimentReport verifyBusemann(std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "verify-busemann";
    rep.columns = {"check", "deviation"};
    Rng rng(seed);
    const Uhp i0(0.0, 1.0);

    // worked values
    rep.requireBelow("b_p(p, xi) = 0",
                     std::abs(busemann(i0, i0, BoundaryPoint::at(0.7))), 1e-14);
    rep.requireBelow("b_i(2i, inf) = -log 2",
                     std::abs(busemann(i0, Uhp(0.0, 2.0), BoundaryPoint::infinity()) +
                              std::log(2.0)),
                     1e-14);

    // renormalized-distance oracle at t = 30
    double worstOracle = 0.0;
    for (int k = 0; k < 10; ++k) {
        Uhp p(rng.uniform(-1.0, 1.0), std::exp(rng.uniform(-0.5, 0.5)));
        Uhp q(rng.uniform(-1.0, 1.0), std::exp(rng.uniform(-0.5, 0.5)));
        BoundaryPoint xi = BoundaryPoint::at(rng.uniform(-3.0, 3.0));
        GroupElement ray = frameAt(p, xi);
        double t = 30.0;
        double oracle = hypDistance(q, footpoint(flow(ray, FlowKind::Z, t))) - t;
        worstOracle = std::max(worstOracle, std::abs(busemann(p, q, xi) - oracle));
    }
    rep.rows.push_back({1, worstOracle});
    rep.requireBelow("limit oracle at t = 30", worstOracle, 2e-13);

    // cocycle identity over random triples
    double worstCocycle = 0.0;
    for (int k = 0; k < 100; ++k) {
        Uhp p(rng.uniform(-2.0, 2.0), std::exp(rng.uniform(-1.0, 1.0)));
        Uhp q(rng.uniform(-2.0, 2.0), std::exp(rng.uniform(-1.0, 1.0)));
        Uhp r(rng.uniform(-2.0, 2.0), std::exp(rng.uniform(-1.0, 1.0)));
        BoundaryPoint xi =
            (k % 5 == 0) ? BoundaryPoint::infinity() : BoundaryPoint::at(rng.uniform(-4.0, 4.0));
        worstCocycle = std::max(worstCocycle,
                                std::abs(busemann(p, q, xi) + busemann(q, r, xi) -
                                         busemann(p, r, xi)));
    }
    rep.requireBelow("cocycle identity", worstCocycle, 1e-12);

    // Gromov product worked values
    rep.requireBelow("beta_i(0, inf) = 0",
                     gromovProduct(i0, BoundaryPoint::at(0.0), BoundaryPoint::infinity()),
                     1e-14);
    rep.requireBelow("beta_i(inf, 1) = log 2",
                     std::abs(gromovProduct(i0, BoundaryPoint::infinity(),
                                            BoundaryPoint::at(1.0)) -
                              std::log(2.0)),
                     1e-14);

    // base change: raw sums satisfy beta_q - beta_p = b_p(q,xi) + b_p(q,eta)
    double worstBase = 0.0;
    for (int k = 0; k < 50; ++k) {
        Uhp p(rng.uniform(-1.5, 1.5), std::exp(rng.uniform(-0.8, 0.8)));
        Uhp q(rng.uniform(-1.5, 1.5), std::exp(rng.uniform(-0.8, 0.8)));
        BoundaryPoint xi = BoundaryPoint::at(rng.uniform(-4.0, 4.0));
        BoundaryPoint eta = BoundaryPoint::at(rng.uniform(-4.0, 4.0));
        if (nearlyEqual(xi, eta, 1e-2)) continue;
        double lhs = gromovProductRaw(p, xi, eta) - gromovProductRaw(q, xi, eta);
        double rhs = busemann(p, q, xi) + busemann(p, q, eta);
        worstBase = std::max(worstBase, std::abs(lhs - rhs));
    }
    rep.requireBelow("base change identity (raw sums)", worstBase, 1e-12);

    // cross-ratio properties: symmetry, antisymmetry, cocycle, base point,
    // Moebius-log oracle
    double worstProps = 0.0, worstOtal = 0.0;
    for (int k = 0; k < 1000; ++k) {
        auto pick = [&]() { return BoundaryPoint::at(rng.uniform(-5.0, 5.0)); };
        BoundaryPoint a = pick(), b = pick(), c = pick(), d = pick(), e = pick();
        if (std::abs(a.x - b.x) < 0.05 || std::abs(c.x - d.x) < 0.05 ||
            std::abs(d.x - e.x) < 0.05 || std::abs(c.x - e.x) < 0.05)
            continue;
        double cr = crossRatio(a, b, c, d);
        worstProps = std::max(worstProps, std::abs(cr - crossRatio(c, d, a, b)));
        worstProps = std::max(worstProps, std::abs(cr + crossRatio(a, b, d, c)));
        worstProps = std::max(worstProps,
                              std::abs(cr + crossRatio(a, b, d, e) - crossRatio(a, b, c, e)));
        worstProps = std::max(
            worstProps, std::abs(cr - crossRatio(a, b, c, d, Uhp(0.4, 2.3))));
        double otal = 2.0 * std::log(std::abs(a.x - c.x) * std::abs(b.x - d.x) /
                                     (std::abs(a.x - d.x) * std::abs(b.x - c.x)));
        worstOtal = std::max(worstOtal, std::abs(cr - otal));
    }
    rep.rows.push_back({2, worstProps});
    rep.requireBelow("cross-ratio symmetries and cocycle", worstProps, 1e-11);
    rep.requireBelow("boundary-coordinate oracle", worstOtal, 1e-11);

    // Gamma-invariance under random Moebius maps
    double worstInv = 0.0;
    for (int k = 0; k < 50; ++k) {
        GroupElement g = haarRandomFrame(rng);
        auto pick = [&]() { return BoundaryPoint::at(rng.uniform(-4.0, 4.0)); };
        BoundaryPoint a = pick(), b = pick(), c = pick(), d = pick();
        if (std::abs(a.x - b.x) < 0.05 || std::abs(c.x - d.x) < 0.05) continue;
        worstInv = std::max(worstInv,
                            std::abs(crossRatio(a, b, c, d) -
                                     crossRatio(mobius(g, a), mobius(g, b), mobius(g, c),
                                                mobius(g, d))));
    }
    rep.requireBelow("Moebius invariance", worstInv, 1e-11);

    // axis: worked value, conjugation, attraction
    Axis ax0 = axis(expGenerator(FlowKind::Z, 1.0));
    rep.requireBelow("axis of diag translation",
                     std::abs(ax0.length - 1.0) + std::abs(ax0.backward.x) +
                         (ax0.forward.isInf ? 0.0 : 1.0),
                     1e-12);
    double worstAxis = 0.0, worstAttract = 0.0;
    for (int k = 0; k < 20; ++k) {
        double len = rng.uniform(0.4, 2.0);
        GroupElement h = haarRandomFrame(rng);
        GroupElement gamma = h * expGenerator(FlowKind::Z, len) * h.inverse();
        Axis ax = axis(gamma);
        worstAxis = std::max(worstAxis, std::abs(ax.length - len));
        GroupElement h2 = haarRandomFrame(rng);
        Axis axc = axis(h2 * gamma * h2.inverse());
        worstAxis = std::max(
            worstAxis, std::abs(axc.forward.isInf ? 0.0
                                                  : axc.forward.x -
                                                        mobius(h2, ax.forward).x));
        BoundaryPoint z = BoundaryPoint::at(rng.uniform(-3.0, 3.0));
        for (int it = 0; it < 120; ++it) z = mobius(gamma, z);
        if (!z.isInf && !ax.forward.isInf)
            worstAttract = std::max(worstAttract, std::abs(z.x - ax.forward.x));
    }
    rep.requireBelow("axis conjugation and length", worstAxis, 1e-10);
    rep.requireBelow("attraction to forward fixed point", worstAttract, 1e-8);

    // leaf intersections: self, flow commutation
    double worstLeaf = 0.0;
    for (int k = 0; k < 20; ++k) {
        GroupElement v = haarRandomFrame(rng);
        auto [vm, vp] = endpoints(v);
        GroupElement self = leafIntersection(v, vm, LeafKind::Stable);
        worstLeaf = std::max(worstLeaf, pslDistance(self, v));
        BoundaryPoint other = BoundaryPoint::at(rng.uniform(-6.0, 6.0));
        if (nearlyEqual(other, vp, 1e-2) || nearlyEqual(other, vm, 1e-2)) continue;
        double t = rng.uniform(-1.0, 1.0);
        GroupElement a = flow(leafIntersection(v, other, LeafKind::Stable), FlowKind::Z, t);
        GroupElement b = leafIntersection(flow(v, FlowKind::Z, t), other, LeafKind::Stable);
        double level =
            busemann(footpoint(flow(v, FlowKind::Z, t)), footpoint(a), endpoints(a).second);
        worstLeaf = std::max(worstLeaf, std::abs(level -
                                                 busemann(footpoint(flow(v, FlowKind::Z, t)),
                                                          footpoint(b),
                                                          endpoints(b).second)));
    }
    rep.requireBelow("leaf intersection self/commutation", worstLeaf, 1e-10);
    return rep;
}

// --- Parry cocycle suite ------------------------------------------------------------

inline ExperimentReport verifyParry(const LabContext& ctx) {
    ExperimentReport rep;
    rep.name = "verify-parry";
    rep.columns = {"check", "deviation"};
    const InvariantObservable& psi = ctx.psi;
    Rng rng(ctx.seed + 14);
    auto samples = liouvilleSample(*ctx.group, 50, Rng::shardSeed(ctx.seed, 14));

    rep.requireBelow("constant observable cocycles vanish",
                     std::abs(parryCocycle(samples[0], ctx.constantPsi, CocycleSide::Plus,
                                           ctx.spec)) +
                         std::abs(parryCocycle(samples[0], ctx.constantPsi,
                                               CocycleSide::Minus, ctx.spec)),
                     1e-13);

    // truncation self-consistency: horizons T and 2T differ inside the tail bound
    QuadratureSpec specT = ctx.spec, spec2T = ctx.spec;
    specT.tailTolerance = 1e-300;
    spec2T.tailTolerance = 1e-300;
    specT.maxTime = 14.0;
    spec2T.maxTime = 28.0;
    double worstTail = 0.0;
    for (int i = 0; i < 10; ++i) {
        const GroupElement& v = samples[i];
        for (CocycleSide side : {CocycleSide::Plus, CocycleSide::Minus}) {
            double a = parryCocycle(v, psi, side, specT);
            double b = parryCocycle(v, psi, side, spec2T);
            worstTail = std::max(worstTail,
                                 std::abs(a - b) / (std::exp(-14.0) * psi.c1Bound()));
        }
    }
    rep.rows.push_back({1, worstTail});
    rep.require("truncation tail bound", worstTail, 1.0, worstTail <= 1.0);

    // difference-quotient oracle (orbit-pair integral along the contracting
    // time direction of each side)
    double r = 1e-3;
    double worstQuot = 0.0;
    for (int i = 0; i < 8; ++i) {
        const GroupElement& v = samples[i];
        GroupElement vPlus = flow(v, FlowKind::XPlus, r);
        double quotPlus = stablePairIntegral(vPlus, v, psi, r, ctx.spec) / r;
        double hPlus = parryCocycle(v, psi, CocycleSide::Plus, ctx.spec);
        worstQuot = std::max(worstQuot, std::abs(quotPlus - hPlus));
        GroupElement vMinus = flow(v, FlowKind::XMinus, r);
        double quotMinus = -unstablePairIntegral(vMinus, v, psi, r, ctx.spec) / r;
        double hMinus = parryCocycle(v, psi, CocycleSide::Minus, ctx.spec);
        worstQuot = std::max(worstQuot, std::abs(quotMinus - hMinus));
    }
    rep.rows.push_back({2, worstQuot});
    rep.requireBelow("difference-quotient oracle", worstQuot,
                     2.0 * r * std::max(1.0, psi.c2Bound()));

    // kernel and normalization of alpha_psi, and the cocycle transport
    // identity behind bundle invariance
    FrameOneForm aPsi = alphaPsi(psi, ctx.spec);
    double worstKernel = 0.0, worstNorm = 0.0, worstTransport = 0.0;
    for (int i = 0; i < 50; ++i) {
        const GroupElement& v = samples[i];
        double hP = parryCocycle(v, psi, CocycleSide::Plus, ctx.spec);
        double hM = parryCocycle(v, psi, CocycleSide::Minus, ctx.spec);
        double pv = psi.value(v);
        worstKernel = std::max(worstKernel,
                               std::abs(aPsi.evaluate(v, {0.0, hM / pv, 0.0}) +
                                        aPsi.evaluate(v, {1.0, 0.0, 0.0})));
        worstKernel = std::max(worstKernel,
                               std::abs(aPsi.evaluate(v, {0.0, hP / pv, 0.0}) +
                                        aPsi.evaluate(v, {0.0, 0.0, 1.0})));
        worstNorm = std::max(worstNorm,
                             std::abs(aPsi.evaluate(v, {0.0, 1.0 / pv, 0.0}) - 1.0));
        if (i < 10) {
            double t = 0.7;
            auto f = [&](double u) {
                return std::exp(-u) * psi.derivative(flow(v, FlowKind::Z, u), FlowKind::XPlus);
            };
            double strip = integrateSimpson(f, 0.0, t, ctx.spec.step);
            double lhs = parryCocycle(flow(v, FlowKind::Z, t), psi, CocycleSide::Plus,
                                      ctx.spec);
            worstTransport = std::max(worstTransport,
                                      std::abs(lhs - std::exp(t) * (hP - strip)));
        }
    }
    rep.requireBelow("alpha_psi annihilates tilted bundles", worstKernel, 1e-8);
    rep.requireBelow("alpha_psi(Z_psi) = 1", worstNorm, 1e-12);
    rep.requireBelow("cocycle transport identity", worstTransport, 1e-8);
    return rep;
}

// --- criterion 3: dynamical cross ratio -----------------------------------------

// random 4-tuple of boundary points with pairwise separation
inline std::array<BoundaryPoint, 4> randomConfiguration(Rng& rng) {
    while (true) {
        double pts[4];
        for (double& p : pts) p = rng.uniform(-4.0, 4.0);
        bool ok = true;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(pts[i] - pts[j]) < 0.25) ok = false;
        if (ok)
            return {BoundaryPoint::at(pts[0]), BoundaryPoint::at(pts[1]),
                    BoundaryPoint::at(pts[2]), BoundaryPoint::at(pts[3])};
    }
}

inline ExperimentReport verifyDynamicalCrossRatio(const LabContext& ctx) {
    ExperimentReport rep;
    rep.name = "verify-dynamical-cross-ratio";
    rep.columns = {"formula", "circuit", "deviation"};
    Rng rng(ctx.seed + 3);
    for (int i = 0; i < 20; ++i) {
        auto cfg = randomConfiguration(rng);
        double formula = crossRatio(cfg[0], cfg[1], cfg[2], cfg[3]);
        double circuit = dynamicalCrossRatio(cfg[0], cfg[1], cfg[2], cfg[3],
                                             rng.uniform(-0.5, 0.5));
        rep.rows.push_back({formula, circuit, std::abs(formula - circuit)});
        rep.requireBelow("metric circuit equals formula", std::abs(formula - circuit), 1e-9);

        // constant time change: the psi-circuit must scale the formula exactly
        double c = ctx.constantPsi.baseValue();
        double circuitC = crossRatioPsiFrom(
            flow(frameOnGeodesic(cfg[0], cfg[2]), FlowKind::Z, rng.uniform(-0.3, 0.3)),
            cfg[1], cfg[3], ctx.constantPsi, ctx.spec);
        rep.requireBelow("constant-speed circuit", std::abs(circuitC - c * formula), 1e-7);
    }
    // F_psi with the bump observable: the holonomy time must not depend on the
    // start frame (this is the well-definedness content of the psi cross ratio)
    for (int i = 0; i < 5; ++i) {
        auto cfg = randomConfiguration(rng);
        GroupElement base = frameOnGeodesic(cfg[0], cfg[2]);
        double a = crossRatioPsiFrom(flow(base, FlowKind::Z, rng.uniform(-0.5, 0.5)), cfg[1],
                                     cfg[3], ctx.psi, ctx.spec);
        double b = crossRatioPsiFrom(flow(base, FlowKind::Z, rng.uniform(-0.5, 0.5)), cfg[1],
                                     cfg[3], ctx.psi, ctx.spec);
        rep.requireBelow("psi circuit holonomy invariance", std::abs(a - b), 1e-7);
    }
    return rep;
}

// --- criterion 4: constant-speed degeneration sweep ------------------------------

inline ExperimentReport verifyConstantDegeneration(const LabContext& ctx) {
    ExperimentReport rep;
    rep.name = "verify-constant-degeneration";
    rep.columns = {"check", "deviation"};
    const InvariantObservable& cpsi = ctx.constantPsi;
    double c = cpsi.baseValue();
    Rng rng(ctx.seed + 4);
    auto samples = liouvilleSample(*ctx.group, 10, Rng::shardSeed(ctx.seed, 4));

    double worstFlow = 0.0;
    for (const GroupElement& v : samples)
        for (double t : {-2.0, 0.7, 3.1})
            worstFlow = std::max(worstFlow, pslDistance(reparamFlow(v, t, cpsi),
                                                        flow(v, FlowKind::Z, t / c)));
    rep.rows.push_back({1, worstFlow});
    rep.requireBelow("reparam flow = scaled geodesic flow", worstFlow, 1e-9);

    double worstParry = 0.0;
    for (const GroupElement& v : samples) {
        worstParry = std::max(worstParry,
                              std::abs(parryCocycle(v, cpsi, CocycleSide::Plus, ctx.spec)));
        worstParry = std::max(worstParry,
                              std::abs(parryCocycle(v, cpsi, CocycleSide::Minus, ctx.spec)));
    }
    rep.requireBelow("cocycles vanish", worstParry, 1e-12);

    double worstBus = 0.0;
    for (int i = 0; i < 10; ++i) {
        Uhp p(rng.uniform(-1.0, 1.0), std::exp(rng.uniform(-0.7, 0.7)));
        Uhp q(rng.uniform(-1.0, 1.0), std::exp(rng.uniform(-0.7, 0.7)));
        BoundaryPoint xi = BoundaryPoint::at(rng.uniform(-3.0, 3.0));
        worstBus = std::max(worstBus, std::abs(busemannPsi(p, q, xi, cpsi, ctx.spec) -
                                               c * busemann(p, q, xi)));
    }
    rep.requireBelow("scaled Busemann function", worstBus, 1e-9);

    double worstCr = 0.0;
    for (int i = 0; i < 5; ++i) {
        auto cfg = randomConfiguration(rng);
        worstCr = std::max(worstCr, std::abs(crossRatioPsi(cfg[0], cfg[1], cfg[2], cfg[3],
                                                           cpsi, ctx.spec) -
                                             c * crossRatio(cfg[0], cfg[1], cfg[2], cfg[3])));
    }
    rep.requireBelow("scaled cross ratio", worstCr, 1e-9);

    double worstTau = 0.0, worstH = 0.0;
    for (const GroupElement& v : samples) {
        TauResult t = tauDelta(v, 0.05, cpsi, ctx.spec);
        worstTau = std::max({worstTau, std::abs(t.tau), std::abs(t.tauTruncated)});
        double d5 = t.q.d5;
        worstH = std::max(worstH, std::abs(hDelta(v, 0.05, cpsi, ctx.spec,
                                                  HDeltaRoute::Integral) - c * d5));
        worstH = std::max(worstH, std::abs(hDelta(v, 0.05, cpsi, ctx.spec,
                                                  HDeltaRoute::CrossRatio) - c * d5));
    }
    rep.requireBelow("tau vanishes", worstTau, 1e-12);
    rep.requireBelow("h = c d5 both routes", worstH, 1e-9);

    FrameOneForm fc = alphaPsi(cpsi, ctx.spec);
    GroupElement v0 = samples.front();
    double coeffDev = std::abs(fc.coefficient(FrameAxis::Minus, v0)) +
                      std::abs(fc.coefficient(FrameAxis::Zero, v0) - c) +
                      std::abs(fc.coefficient(FrameAxis::Plus, v0));
    rep.requireBelow("alpha_psi = c alpha", coeffDev, 1e-12);

    SegmentPath loop = quadrilateralLoop(v0, 0.05);
    double d5 = quadrilateralClose(0.05, 0.05).d5;
    rep.requireBelow("alpha circulation = d5",
                     std::abs(lineIntegral(FrameOneForm::canonicalAlpha(), loop, ctx.spec) - d5),
                     1e-9);
    rep.requireBelow("alpha_c circulation = c d5",
                     std::abs(lineIntegralAlphaPsi(loop, cpsi, ctx.spec) - c * d5), 1e-9);

    StokesReport st = stokesResidual(v0, 0.2, 0.05, cpsi, c, ctx.spec);
    rep.requireBelow("stokes per-tile residual", st.perTileAbsSum, 1e-9);
    rep.requireBelow("reeb defect", reebDefect(cpsi, v0, 0.02, ctx.spec), 1e-10);
    rep.requireBelow("cb(alpha+, alpha_c)", std::abs(cbValue(FrameOneForm::alphaPlusForm(),
                                                             fc, v0)),
                     1e-10);
    return rep;
}

// --- criterion 5: two-route temporal distance ------------------------------------

inline ExperimentReport verifyTwoRoute(const LabContext& ctx) {
    ExperimentReport rep;
    rep.name = "verify-two-route";
    rep.columns = {"delta", "max_route_difference"};
    auto samples = liouvilleSample(*ctx.group, 20, Rng::shardSeed(ctx.seed, 5));
    for (double delta : {0.08, 0.04, 0.02}) {
        double worst = 0.0;
        for (const GroupElement& v : samples) {
            double a = hDelta(v, delta, ctx.psi, ctx.spec, HDeltaRoute::Integral);
            double b = hDelta(v, delta, ctx.psi, ctx.spec, HDeltaRoute::CrossRatio);
            worst = std::max(worst, std::abs(a - b));
        }
        rep.rows.push_back({delta, worst});
        rep.requireBelow("route agreement", worst, 1e-6);
    }
    return rep;
}

// --- criterion 8: truncation and drift bounds -------------------------------------

inline ExperimentReport verifyBounds(const LabContext& ctx) {
    ExperimentReport rep;
    rep.name = "verify-bounds";
    rep.columns = {"check", "value", "bound"};
    const double delta = 0.02;
    const InvariantObservable& psi = ctx.psi;
    double c1 = psi.c1Bound();
    double K = std::max({psi.c0Bound(), psi.c1Bound(), psi.c2Bound()});
    double driftConst = 2.0 * (std::exp(K) + 4.0 * c1);
    auto samples = liouvilleSample(*ctx.group, 50, Rng::shardSeed(ctx.seed, 8));
    Quintuple q = quadrilateralClose(delta, delta);

    double worstTrunc = 0.0, worstInv = 0.0, worstH = 0.0;
    double truncBound = 4.0 * c1 * delta * delta * delta;
    for (const GroupElement& v : samples) {
        TauResult r = tauDelta(v, delta, psi, ctx.spec);
        worstTrunc = std::max(worstTrunc, std::abs(r.tauTruncated - r.tau));
        auto along = [&](double s) { return psi.value(flow(v, FlowKind::Z, s)); };
        double h0 = r.tau + integrateSimpson(along, 0.0, q.d5, ctx.spec.step);
        for (double T : {1.0, 5.0}) {
            GroupElement w = flow(v, FlowKind::Z, T);
            TauResult rT = tauDelta(w, delta, psi, ctx.spec);
            double inv = std::abs((rT.tau - r.tau + q.d5 * (psi.value(w) - psi.value(v))) /
                                  (delta * delta));
            worstInv = std::max(worstInv, inv / (driftConst * T * delta));
            auto alongW = [&](double s) { return psi.value(flow(w, FlowKind::Z, s)); };
            double hT = rT.tau + integrateSimpson(alongW, 0.0, q.d5, ctx.spec.step);
            double hDrift = std::abs(hT - h0);
            worstH = std::max(worstH, hDrift / (2.0 * driftConst * T * delta * delta * delta));
        }
    }
    rep.rows.push_back({1, worstTrunc, truncBound});
    rep.requireBelow("truncation gap <= 4 C1 d^3", worstTrunc, truncBound);
    rep.requireBelow("tau drift bound (normalized)", worstInv, 1.0);
    rep.requireBelow("h drift bound (normalized)", worstH, 1.0);
    return rep;
}

// --- criterion 9: Hartman/Stokes ---------------------------------------------------

inline ExperimentReport verifyStokes(const LabContext& ctx, double psiBar) {
    ExperimentReport rep;
    rep.name = "verify-stokes";
    rep.columns = {"tile", "per_tile_abs_sum", "telescope_error"};
    Rng rng(ctx.seed + 9);
    GroupElement v = liouvilleDraw(*ctx.group, rng);
    std::vector<double> tiles = {0.04, 0.02, 0.01};
    std::vector<double> sums;
    for (double tile : tiles) {
        StokesReport st = stokesResidual(v, 0.2, tile, ctx.psi, psiBar, ctx.spec);
        sums.push_back(std::max(st.perTileAbsSum, 1e-14));
        rep.rows.push_back({tile, st.perTileAbsSum, st.telescopeError});
        rep.requireBelow("tile telescoping", st.telescopeError, 1e-9);
    }
    double order = logLogSlope(tiles, sums);
    rep.summary["fitted_order"] = order;
    rep.require("residual order >= 0.5", order, 0.5, order >= 0.5);

    // flow-tangent loop circulations vanish (weak-leaf closed loops)
    double worstLoop = 0.0;
    for (int i = 0; i < 5; ++i) {
        GroupElement w = liouvilleDraw(*ctx.group, rng);
        double s = 0.15;
        SegmentPath stableLoop = buildPath(w, {{SegmentKind::XPlus, s},
                                               {SegmentKind::Z, s},
                                               {SegmentKind::XPlus, -s * std::exp(-s)},
                                               {SegmentKind::Z, -s}});
        SegmentPath unstableLoop = buildPath(w, {{SegmentKind::XMinus, s},
                                                 {SegmentKind::Z, s},
                                                 {SegmentKind::XMinus, -s * std::exp(s)},
                                                 {SegmentKind::Z, -s}});
        worstLoop = std::max(worstLoop,
                             std::abs(lineIntegralAlphaPsi(stableLoop, ctx.psi, ctx.spec)));
        worstLoop = std::max(worstLoop,
                             std::abs(lineIntegralAlphaPsi(unstableLoop, ctx.psi, ctx.spec)));
    }
    rep.requireBelow("weak-leaf circulations vanish", worstLoop, 1e-8);

    double defect = 0.0;
    for (int i = 0; i < 3; ++i)
        defect = std::max(defect, reebDefect(ctx.psi, liouvilleDraw(*ctx.group, rng), 0.02,
                                             ctx.spec));
    rep.summary["reeb_defect"] = defect;
    rep.requireBelow("reeb defect", defect, 1e-6);

    // defect does not grow as the loop shrinks
    GroupElement w = liouvilleDraw(*ctx.group, rng);
    double d1 = reebDefect(ctx.psi, w, 0.04, ctx.spec);
    double d2 = reebDefect(ctx.psi, w, 0.01, ctx.spec);
    rep.require("defect scaling", d2, d1 + 1e-7, d2 <= d1 + 1e-7);
    return rep;
}

// --- criterion 10: CB machinery -----------------------------------------------------

inline ExperimentReport verifyCB(const LabContext& ctx, double psiBar) {
    ExperimentReport rep;
    rep.name = "verify-cb";
    rep.columns = {"check", "deviation"};
    FrameOneForm aPlus = FrameOneForm::alphaPlusForm();
    FrameOneForm aCanon = FrameOneForm::canonicalAlpha();
    FrameOneForm aPsi = alphaPsi(ctx.psi, ctx.spec, psiBar);
    auto samples = liouvilleSample(*ctx.group, 50, Rng::shardSeed(ctx.seed, 10));

    double worstSmooth = 0.0, worstCount = 0.0;
    for (const GroupElement& v : samples) {
        worstSmooth = std::max(worstSmooth, std::abs(cbValue(aPlus, aCanon, v)));
        double cb = cbValue(aPlus, aPsi, v);
        double hMinus = parryCocycle(v, ctx.psi, CocycleSide::Minus, ctx.spec);
        worstCount = std::max(worstCount, std::abs(cb + hMinus));
    }
    rep.rows.push_back({1, worstSmooth});
    rep.rows.push_back({2, worstCount});
    rep.requireBelow("cb(alpha+, alpha) = 0", worstSmooth, 1e-12);
    rep.requireBelow("cb(alpha+, alpha_psi) = -h-", worstCount, 1e-6);

    // affine family volume identity against the finite-difference route
    double worstAffine = 0.0;
    for (double t : {0.1, 1.0}) {
        for (int i = 0; i < 5; ++i) {
            const GroupElement& v = samples[i];
            // plain-coefficient copy: derivatives go through finite differences
            FrameOneForm at([](const GroupElement&) { return 0.0; },
                            [t](const GroupElement&) { return t; },
                            [](const GroupElement&) { return 1.0; });
            double lhs = contactVolume(at, v);
            double rhs = t * (1.0 * cbValue(aPlus, aCanon, v) + t * contactVolume(aCanon, v));
            worstAffine = std::max(worstAffine, std::abs(lhs - rhs));
        }
    }
    rep.rows.push_back({3, worstAffine});
    rep.requireBelow("affine family volume identity", worstAffine, 1e-6);

    auto big = liouvilleSample(*ctx.group, 1000, Rng::shardSeed(ctx.seed, 11));
    double minPairing = 1e300;
    for (const GroupElement& v : big)
        minPairing = std::min(minPairing, reebPairing(aPsi, v));
    rep.summary["min_reeb_pairing"] = minPairing;
    rep.require("reeb pairing positive", minPairing, 0.0, minPairing > 0.0);
    double worstPair = 0.0;
    for (int i = 0; i < 50; ++i)
        worstPair = std::max(worstPair,
                             std::abs(reebPairing(aPsi, big[i]) - ctx.psi.value(big[i])));
    rep.requireBelow("reeb pairing equals psi", worstPair, 1e-12);
    return rep;
}

}  // namespace hypflow
