#pragma once

#include <cmath>
#include <stdexcept>

#include "hypflow/observable.hpp"
#include "hypflow/quadrature.hpp"
#include "hypflow/sampling.hpp"

// The time-changed flow F_psi (generator Z/psi) and the quantities attached
// to it: Parry cocycles, psi-Busemann function, leaf-pair integrals, tau_delta,
// the temporal distance h_delta (two independent routes), and the psi-holonomy
// cross ratio.
//
// Pinned cocycle conventions (X+ stable forward):
//   h+(v) = int_0^inf e^{-t} (X+ psi)(f^t v) dt
//   h-(v) = - int_0^inf e^{-t} (X- psi)(f^{-t} v) dt
// These are the unique tilts making span{X+- + h Z_psi} flow-invariant, and
// with them the five-leg circulation of alpha_psi over the exact quadrilateral
// reproduces tau_delta + int_0^{d5} psi exactly.
//
// All long orbit quadratures march the reduced domain representative forward
// node by node, so each node costs at most one wall crossing.

namespace hypflow {

namespace detail {

// Composite Simpson over [a, b] with the same node grid as integrateSimpson;
// node(i, s) is called with strictly ascending i = 0..n.
template <typename NodeFn>
double simpsonMarch(double a, double b, double step, NodeFn&& node) {
    if (a == b) return 0.0;
    double len = std::abs(b - a);
    int n = static_cast<int>(std::ceil(len / step));
    n += n % 2;
    n = std::max(n, 2);
    double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * node(i, a + i * h);
    }
    return sum * h / 3.0;
}

// Marches a frame representative along the geodesic flow in fixed steps,
// keeping it reduced to the fundamental domain. Incremental steps along an
// Anosov flow amplify rounding noise by e^{T-t}, so the marcher re-anchors on
// the exact product every block of nodes; within a block the amplification is
// bounded by e^{blockSize * h}.
class OrbitMarcher {
public:
    OrbitMarcher(const OctagonGroup& group, const Mat2& start, double stepSigned)
        : group_(&group), start_(start), h_(stepSigned),
          cur_(group.reduceMat(start)), step_(expGeneratorMat(FlowKind::Z, stepSigned)) {}

    const Mat2& current() const { return cur_; }

    void advance() {
        ++index_;
        if (index_ % kAnchorBlock == 0)
            cur_ = group_->reduceMat(start_ * expGeneratorMat(FlowKind::Z, index_ * h_));
        else
            cur_ = group_->reduceMat(cur_ * step_);
    }

private:
    static constexpr int kAnchorBlock = 32;
    const OctagonGroup* group_;
    Mat2 start_;
    double h_;
    Mat2 cur_;
    Mat2 step_;
    long index_ = 0;
};

inline const Mat2& flipMat() {
    static const Mat2 kFlip{0.0, -1.0, 1.0, 0.0};
    return kFlip;
}

}  // namespace detail

// --- time change ------------------------------------------------------------

// value of psi (or its flip) at an arbitrary matrix representative
inline double psiValueMat(const InvariantObservable& psi, const Mat2& m, bool flipped) {
    return flipped ? psi.valueMat(m * detail::flipMat()) : psi.valueMat(m);
}

// sigma with int_0^sigma psi(f^u v) du = t, via damped Newton with composite
// Simpson increments.
inline double geodesicTimeFor(const GroupElement& v, const InvariantObservable& psi, double t,
                              double step = 0.005, bool flipped = false) {
    if (!std::isfinite(t)) throw std::domain_error("time change: non-finite time");
    if (psi.isConstant()) return t / psi.baseValue();
    Mat2 base = psi.group().reduceMat(v.mat());
    auto along = [&](double u) {
        return psiValueMat(psi, base * expGeneratorMat(FlowKind::Z, u), flipped);
    };
    double sigma = t / along(0.0);
    double accumulated = 0.0, at = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        accumulated += integrateSimpson(along, at, sigma, step);
        at = sigma;
        double residual = accumulated - t;
        if (std::abs(residual) < 1e-13 * std::max(1.0, std::abs(t))) return sigma;
        double deriv = along(sigma);
        if (deriv <= 0.0) throw std::runtime_error("time change: nonpositive speed");
        sigma -= residual / deriv;
    }
    throw std::runtime_error("time change: Newton did not converge");
}

inline GroupElement reparamFlow(const GroupElement& v, double t, const InvariantObservable& psi,
                                double step = 0.005) {
    if (psi.isConstant()) return flow(v, FlowKind::Z, t / psi.baseValue());
    double sigma = geodesicTimeFor(v, psi, t, step);
    return flow(v, FlowKind::Z, sigma);
}

// --- Parry cocycles ----------------------------------------------------------

enum class CocycleSide { Plus, Minus };

inline double parryCocycle(const GroupElement& v, const InvariantObservable& psi,
                           CocycleSide side, const QuadratureSpec& spec = {}) {
    if (psi.isConstant()) return 0.0;
    double T = spec.horizon(psi.c1Bound());
    double dir = side == CocycleSide::Plus ? 1.0 : -1.0;
    FlowKind kind = side == CocycleSide::Plus ? FlowKind::XPlus : FlowKind::XMinus;
    double len = std::abs(T);
    int n = static_cast<int>(std::ceil(len / spec.step));
    n += n % 2;
    n = std::max(n, 2);
    double h = T / n;
    detail::OrbitMarcher m(psi.group(), v.mat(), dir * h);
    double integral = detail::simpsonMarch(0.0, T, spec.step, [&](int i, double t) {
        if (i > 0) m.advance();
        return std::exp(-t) * psi.derivativeFromReduced(m.current(), kind);
    });
    return side == CocycleSide::Plus ? integral : -integral;
}

// --- leaf-pair integrals ------------------------------------------------------

// int_0^inf (psi(f^s A) - psi(f^s B)) ds for A, B on a common stable (X+)
// leaf with separation `sep`; the integrand obeys |.| <= sep * C1 * e^{-s},
// which is asserted at the quadrature nodes. horizonOverride truncates at a
// prescribed time instead of the tail-tolerance horizon.
inline double stablePairIntegral(const GroupElement& A, const GroupElement& B,
                                 const InvariantObservable& psi, double sep,
                                 const QuadratureSpec& spec = {},
                                 double horizonOverride = -1.0) {
    if (psi.isConstant()) return 0.0;
    double bound = std::abs(sep) * psi.c1Bound();
    double T = horizonOverride > 0.0 ? horizonOverride : spec.horizon(bound);
    int n = static_cast<int>(std::ceil(T / spec.step));
    n += n % 2;
    n = std::max(n, 2);
    double h = T / n;
    detail::OrbitMarcher ma(psi.group(), A.mat(), h), mb(psi.group(), B.mat(), h);
    return detail::simpsonMarch(0.0, T, spec.step, [&](int i, double s) {
        if (i > 0) {
            ma.advance();
            mb.advance();
        }
        double d = psi.valueFromReduced(ma.current()) - psi.valueFromReduced(mb.current());
        if (std::abs(d) > 1.5 * bound * std::exp(-s) + 1e-12)
            throw std::logic_error("stable pair integrand exceeds contraction bound");
        return d;
    });
}

// int_{-inf}^0 (psi(f^s A) - psi(f^s B)) ds for A, B on a common unstable
// (X-) leaf.
inline double unstablePairIntegral(const GroupElement& A, const GroupElement& B,
                                   const InvariantObservable& psi, double sep,
                                   const QuadratureSpec& spec = {},
                                   double horizonOverride = -1.0) {
    if (psi.isConstant()) return 0.0;
    double bound = std::abs(sep) * psi.c1Bound();
    double T = horizonOverride > 0.0 ? horizonOverride : spec.horizon(bound);
    int n = static_cast<int>(std::ceil(T / spec.step));
    n += n % 2;
    n = std::max(n, 2);
    double h = T / n;
    detail::OrbitMarcher ma(psi.group(), A.mat(), -h), mb(psi.group(), B.mat(), -h);
    return detail::simpsonMarch(0.0, T, spec.step, [&](int i, double s) {
        if (i > 0) {
            ma.advance();
            mb.advance();
        }
        double d = psi.valueFromReduced(ma.current()) - psi.valueFromReduced(mb.current());
        if (std::abs(d) > 1.5 * bound * std::exp(-s) + 1e-12)
            throw std::logic_error("unstable pair integrand exceeds contraction bound");
        return d;
    });
}

// --- quadrilateral and tau ----------------------------------------------------

struct Quadrilateral {
    GroupElement v, v1, v2, v3, v4;
    Quintuple q;
};

inline Quadrilateral makeQuadrilateral(const GroupElement& v, double delta) {
    Quintuple q = quadrilateralClose(delta, delta);
    Quadrilateral out;
    out.v = v;
    out.v1 = flow(v, FlowKind::XMinus, q.d1);
    out.v2 = flow(out.v1, FlowKind::XPlus, q.d2);
    out.v3 = flow(out.v2, FlowKind::XMinus, q.d3);
    out.v4 = flow(out.v3, FlowKind::XPlus, q.d4);
    out.q = q;
    return out;
}

struct TauResult {
    double tau = 0.0;
    double tauPlus = 0.0;
    double tauMinus = 0.0;
    double tauTruncated = 0.0;  // recomputed with horizon T_delta = log(1/delta^2)
    Quintuple q{};
};

inline TauResult tauDelta(const GroupElement& v, double delta, const InvariantObservable& psi,
                          const QuadratureSpec& spec = {}, bool withTruncated = true) {
    if (delta <= 0.0 || delta > 0.2)
        throw std::domain_error("tau_delta: delta must lie in (0, 0.2]");
    Quadrilateral Q = makeQuadrilateral(v, delta);
    TauResult r;
    r.q = Q.q;
    if (psi.isConstant()) return r;

    r.tauPlus = stablePairIntegral(Q.v4, Q.v3, psi, std::abs(Q.q.d4), spec) -
                stablePairIntegral(Q.v1, Q.v2, psi, std::abs(Q.q.d2), spec);
    r.tauMinus = unstablePairIntegral(Q.v, Q.v1, psi, std::abs(Q.q.d1), spec) -
                 unstablePairIntegral(Q.v3, Q.v2, psi, std::abs(Q.q.d3), spec);
    r.tau = r.tauPlus + r.tauMinus;
    if (withTruncated) {
        double Tdelta = std::log(1.0 / (delta * delta));
        r.tauTruncated =
            stablePairIntegral(Q.v4, Q.v3, psi, std::abs(Q.q.d4), spec, Tdelta) -
            stablePairIntegral(Q.v1, Q.v2, psi, std::abs(Q.q.d2), spec, Tdelta) +
            unstablePairIntegral(Q.v, Q.v1, psi, std::abs(Q.q.d1), spec, Tdelta) -
            unstablePairIntegral(Q.v3, Q.v2, psi, std::abs(Q.q.d3), spec, Tdelta);
    }
    return r;
}

// --- psi-Busemann --------------------------------------------------------------

// b^psi_p(q, xi): the first integral pairs the two rays into xi on a common
// stable leaf (marched in lockstep), the second is a finite strip. `flipped`
// replaces psi by psi o flip (the time-reversed observable).
inline double busemannPsi(const Uhp& p, const Uhp& q, const BoundaryPoint& xi,
                          const InvariantObservable& psi, const QuadratureSpec& spec = {},
                          bool flipped = false) {
    if (psi.isConstant()) return psi.baseValue() * busemann(p, q, xi);
    GroupElement v = frameAt(p, xi);
    GroupElement w = frameAt(q, xi);
    double b = busemann(p, q, xi);
    double scale = psi.c1Bound() * (1.0 + std::abs(b) + hypDistance(p, q));
    double T = spec.horizon(scale);
    int n = static_cast<int>(std::ceil(T / spec.step));
    n += n % 2;
    n = std::max(n, 2);
    double h = T / n;
    const OctagonGroup& group = psi.group();
    Mat2 FLIP = detail::flipMat();
    detail::OrbitMarcher mw(group, w.mat(), h);
    detail::OrbitMarcher mv(group, (v * expGenerator(FlowKind::Z, -b)).mat(), h);
    auto evalAt = [&](const Mat2& m) {
        return flipped ? psi.valueMat(m * FLIP) : psi.valueFromReduced(m);
    };
    double first = detail::simpsonMarch(0.0, T, spec.step, [&](int i, double) {
        if (i > 0) {
            mw.advance();
            mv.advance();
        }
        return evalAt(mw.current()) - evalAt(mv.current());
    });
    Mat2 vm = group.reduceMat(v.mat());
    auto along = [&](double s) {
        return psiValueMat(psi, vm * expGeneratorMat(FlowKind::Z, s), flipped);
    };
    double second = integrateSimpson(along, 0.0, -b, spec.step);
    return first - second;
}

// --- psi-leaf intersections ------------------------------------------------------

// Stable: the unique frame on the geodesic (other -> v+) on the same
// psi-horosphere as v (b^psi level zero); the level moves at unit psi-time
// along the target geodesic (Busemann function of the reparametrized flow).
// Unstable: the time-reversed construction, i.e. the stable solve for the
// flipped frames with the flipped observable.
inline GroupElement leafIntersectionPsi(const GroupElement& v, const BoundaryPoint& other,
                                        LeafKind kind, const InvariantObservable& psi,
                                        const QuadratureSpec& spec = {}) {
    auto [vm, vp] = endpoints(v);
    if (kind == LeafKind::Stable) {
        if (other == vp) throw std::domain_error("leafIntersectionPsi: endpoints coincide");
        GroupElement u0 = frameOnGeodesic(other, vp);
        double level = busemannPsi(footpoint(v), footpoint(u0), vp, psi, spec);
        double sigma = geodesicTimeFor(u0, psi, level, spec.step);
        return flow(u0, FlowKind::Z, sigma);
    }
    if (other == vm) throw std::domain_error("leafIntersectionPsi: endpoints coincide");
    GroupElement u0 = frameOnGeodesic(other, vm);  // flipped-world frame toward v-
    double level = busemannPsi(footpoint(v), footpoint(u0), vm, psi, spec, /*flipped=*/true);
    double sigma = geodesicTimeFor(u0, psi, level, spec.step, /*flipped=*/true);
    return flow(u0, FlowKind::Z, sigma) * GroupElement(0.0, -1.0, 1.0, 0.0);
}

// --- psi cross ratio (holonomy circuit) ------------------------------------------

// psi-time from `from` to `to`, both on the geodesic orbit of `from`.
inline double psiTimeBetween(const GroupElement& from, const GroupElement& to,
                             const InvariantObservable& psi, const QuadratureSpec& spec = {}) {
    auto [back, fwd] = endpoints(from);
    (void)fwd;
    double s = busemann(footpoint(from), footpoint(to), back);
    if (psi.isConstant()) return psi.baseValue() * s;
    Mat2 base = psi.group().reduceMat(from.mat());
    auto along = [&](double u) {
        return psi.valueMat(base * expGeneratorMat(FlowKind::Z, u));
    };
    return integrateSimpson(along, 0.0, s, spec.step);
}

// Unstable-first holonomy circuit across (xi, xi', eta, eta') for F_psi,
// starting at `start` on the geodesic (xi -> eta). The recovered psi-time is
// the cross ratio; it degenerates to the Busemann-sum cross ratio for psi == 1.
inline double crossRatioPsiFrom(const GroupElement& start, const BoundaryPoint& xip,
                                const BoundaryPoint& etap, const InvariantObservable& psi,
                                const QuadratureSpec& spec = {}) {
    auto [xi, eta] = endpoints(start);
    if (xi == xip || eta == etap) return 0.0;
    GroupElement v1 = leafIntersectionPsi(start, etap, LeafKind::Unstable, psi, spec);
    GroupElement v2 = leafIntersectionPsi(v1, xip, LeafKind::Stable, psi, spec);
    GroupElement v3 = leafIntersectionPsi(v2, eta, LeafKind::Unstable, psi, spec);
    GroupElement v4 = leafIntersectionPsi(v3, xi, LeafKind::Stable, psi, spec);
    return psiTimeBetween(start, v4, psi, spec);
}

inline double crossRatioPsi(const BoundaryPoint& xi, const BoundaryPoint& xip,
                            const BoundaryPoint& eta, const BoundaryPoint& etap,
                            const InvariantObservable& psi, const QuadratureSpec& spec = {}) {
    if (xi == xip || eta == etap) return 0.0;
    return crossRatioPsiFrom(frameOnGeodesic(xi, eta), xip, etap, psi, spec);
}

// --- temporal distance h_delta -----------------------------------------------------

enum class HDeltaRoute { Integral, CrossRatio };

// Integral route: tau_delta(v) + int_0^{d5} psi(f^s v) ds (the circulation of
// alpha_psi over the exact quadrilateral loop). CrossRatio route: reduce v to
// the fundamental domain, build v2 on the same lift, and run the psi-holonomy
// circuit across (v-, v2-, v+, v2+).
inline double hDelta(const GroupElement& v, double delta, const InvariantObservable& psi,
                     const QuadratureSpec& spec = {}, HDeltaRoute route = HDeltaRoute::Integral) {
    if (delta <= 0.0 || delta > 0.2)
        throw std::domain_error("h_delta: delta must lie in (0, 0.2]");
    if (route == HDeltaRoute::Integral) {
        TauResult r = tauDelta(v, delta, psi, spec, /*withTruncated=*/false);
        Mat2 base = psi.isConstant() ? v.mat() : psi.group().reduceMat(v.mat());
        auto along = [&](double s) {
            return psi.isConstant() ? psi.baseValue()
                                    : psi.valueMat(base * expGeneratorMat(FlowKind::Z, s));
        };
        return r.tau + integrateSimpson(along, 0.0, r.q.d5, spec.step);
    }
    GroupElement lifted = psi.isConstant() ? v : psi.group().reduce(v).second;
    Quadrilateral Q = makeQuadrilateral(lifted, delta);
    auto [v2m, v2p] = endpoints(Q.v2);
    return crossRatioPsiFrom(lifted, v2m, v2p, psi, spec);
}

}  // namespace hypflow
