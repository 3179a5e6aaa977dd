#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hypflow/group.hpp"

// Upper half-plane model: ideal boundary R u {inf}, Busemann functions in
// closed form, Gromov products, cross ratios, axes, leaf intersections.

namespace hypflow {

using Uhp = std::complex<double>;  // imag > 0

struct BoundaryPoint {
    bool isInf = false;
    double x = 0.0;

    static BoundaryPoint infinity() { return {true, 0.0}; }
    static BoundaryPoint at(double v) { return {false, v}; }

    friend bool operator==(const BoundaryPoint& p, const BoundaryPoint& q) {
        return p.isInf ? q.isInf : (!q.isInf && p.x == q.x);
    }
};

inline bool nearlyEqual(const BoundaryPoint& p, const BoundaryPoint& q, double tol = 1e-9) {
    if (p.isInf || q.isInf) return p.isInf == q.isInf;
    return std::abs(p.x - q.x) <= tol * std::max(1.0, std::abs(p.x));
}

inline BoundaryPoint mobius(const GroupElement& g, const BoundaryPoint& p) {
    const Mat2& m = g.mat();
    if (p.isInf) {
        if (m.c == 0.0) return BoundaryPoint::infinity();
        return BoundaryPoint::at(m.a / m.c);
    }
    double den = m.c * p.x + m.d;
    if (den == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::at((m.a * p.x + m.b) / den);
}

inline Uhp mobius(const GroupElement& g, const Uhp& z) {
    const Mat2& m = g.mat();
    return (m.a * z + m.b) / (m.c * z + m.d);
}

inline Uhp footpoint(const GroupElement& g) { return mobius(g, Uhp(0.0, 1.0)); }

// (v-, v+) of the frame: backward/forward ideal endpoints.
inline std::pair<BoundaryPoint, BoundaryPoint> endpoints(const GroupElement& v) {
    return {mobius(v, BoundaryPoint::at(0.0)), mobius(v, BoundaryPoint::infinity())};
}

inline double hypDistance(const Uhp& z, const Uhp& w) {
    double num = std::norm(z - w);
    return std::acosh(1.0 + num / (2.0 * z.imag() * w.imag()));
}

namespace detail {
// Conjugation z -> -1/z moving a far boundary point near the origin; keeps
// Busemann evaluation well-conditioned.
inline GroupElement inversion() { return GroupElement(0.0, -1.0, 1.0, 0.0); }
constexpr double kFarBoundary = 1e6;
}  // namespace detail

// b_p(q, xi), normalized by p. Closed forms; one inversion when xi is huge.
inline double busemann(const Uhp& p, const Uhp& q, const BoundaryPoint& xi) {
    if (p.imag() <= 0.0 || q.imag() <= 0.0)
        throw std::domain_error("busemann: base points must lie in the upper half-plane");
    if (xi.isInf) return std::log(p.imag() / q.imag());
    if (std::abs(xi.x) > detail::kFarBoundary) {
        GroupElement s = detail::inversion();
        return busemann(mobius(s, p), mobius(s, q), mobius(s, xi));
    }
    double dq = std::norm(q - Uhp(xi.x, 0.0)) / q.imag();
    double dp = std::norm(p - Uhp(xi.x, 0.0)) / p.imag();
    return std::log(dq) - std::log(dp);
}

// Reference point on the geodesic joining xi and eta: semicircle apex, or
// height-1 point on a vertical line.
inline Uhp geodesicReferencePoint(const BoundaryPoint& xi, const BoundaryPoint& eta) {
    if (xi == eta) throw std::domain_error("geodesic: coincident ideal endpoints");
    if (xi.isInf) return Uhp(eta.x, 1.0);
    if (eta.isInf) return Uhp(xi.x, 1.0);
    return Uhp(0.5 * (xi.x + eta.x), 0.5 * std::abs(xi.x - eta.x));
}

// Raw Busemann sum at the canonical point of the geodesic (q-independent);
// always <= 0 here, so the Gromov product is its negative.
inline double gromovProductRaw(const Uhp& p, const BoundaryPoint& xi, const BoundaryPoint& eta) {
    Uhp q = geodesicReferencePoint(xi, eta);
    return busemann(p, q, xi) + busemann(p, q, eta);
}

inline double gromovProduct(const Uhp& p, const BoundaryPoint& xi, const BoundaryPoint& eta) {
    return std::abs(gromovProductRaw(p, xi, eta));
}

inline double crossRatio(const BoundaryPoint& xi, const BoundaryPoint& xip,
                         const BoundaryPoint& eta, const BoundaryPoint& etap,
                         const Uhp& p = Uhp(0.0, 1.0)) {
    if (xi == xip || eta == etap) return 0.0;  // pairwise-degenerate: exact cancellation
    return (gromovProduct(p, xi, etap) + gromovProduct(p, xip, eta)) -
           (gromovProduct(p, xi, eta) + gromovProduct(p, xip, etap));
}

// Frame on the geodesic (a -> b): g.0 = a, g.inf = b, at an arbitrary
// reference position on the orbit.
inline GroupElement frameOnGeodesic(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a == b) throw std::domain_error("frameOnGeodesic: coincident endpoints");
    if (b.isInf) return GroupElement(1.0, a.x, 0.0, 1.0);
    if (a.isInf) return GroupElement(-b.x, 1.0, -1.0, 0.0);
    if (b.x > a.x) return GroupElement(b.x, a.x, 1.0, 1.0);
    return GroupElement(-b.x, a.x, -1.0, 1.0);
}

// Signed orbit parameter of a footpoint z on the geodesic of u0, measured
// from u0's footpoint toward u0's forward endpoint.
inline double orbitParameter(const GroupElement& u0, const Uhp& z) {
    auto [back, fwd] = endpoints(u0);
    (void)fwd;
    return busemann(footpoint(u0), z, back);
}

// Frame with footpoint p pointing at xi.
inline GroupElement frameAt(const Uhp& p, const BoundaryPoint& xi) {
    BoundaryPoint other;
    if (xi.isInf) {
        other = BoundaryPoint::at(p.real());
    } else if (std::abs(p.real() - xi.x) < 1e-12 * std::max(1.0, std::abs(xi.x))) {
        other = BoundaryPoint::infinity();
    } else {
        double center = (std::norm(p) - xi.x * xi.x) / (2.0 * (p.real() - xi.x));
        other = BoundaryPoint::at(2.0 * center - xi.x);
    }
    GroupElement u0 = frameOnGeodesic(other, xi);
    // parameter s on the orbit has level -s relative to the reference foot
    double level = busemann(footpoint(u0), p, xi);
    GroupElement out = flow(u0, FlowKind::Z, -level);
    if (std::abs(footpoint(out) - p) > 1e-8 * (1.0 + std::abs(p)))
        throw std::runtime_error("frameAt: footpoint mismatch after slide");
    return out;
}

struct Axis {
    BoundaryPoint backward;   // repelling fixed point
    BoundaryPoint forward;    // attracting fixed point
    double length;            // translation length
};

inline double translationLength(const GroupElement& g) {
    double t = std::abs(g.mat().trace());
    if (t <= 2.0) throw std::domain_error("axis: element is not hyperbolic");
    return 2.0 * std::acosh(0.5 * t);
}

inline Axis axis(const GroupElement& g) {
    const Mat2& m = g.mat();
    double len = translationLength(g);
    if (m.c == 0.0) {
        // fixed points: inf and b/(d-a)
        BoundaryPoint fin = BoundaryPoint::at(m.b / (m.d - m.a));
        // inf attracting iff |a| > |d|
        if (std::abs(m.a) > std::abs(m.d)) return {fin, BoundaryPoint::infinity(), len};
        return {BoundaryPoint::infinity(), fin, len};
    }
    double disc = std::sqrt(m.trace() * m.trace() - 4.0);
    double r1 = (m.a - m.d + disc) / (2.0 * m.c);
    double r2 = (m.a - m.d - disc) / (2.0 * m.c);
    // attracting root: |c x + d| > 1
    auto attracting = [&](double x) { return std::abs(m.c * x + m.d) > 1.0; };
    if (attracting(r1)) return {BoundaryPoint::at(r2), BoundaryPoint::at(r1), len};
    return {BoundaryPoint::at(r1), BoundaryPoint::at(r2), len};
}

enum class LeafKind { Stable, Unstable };

// Unique frame on the geodesic (other -> v+) [stable] or (v- -> other)
// [unstable] lying on the same horosphere as v. Closed form: the Busemann
// level moves at unit rate along the target geodesic.
inline GroupElement leafIntersection(const GroupElement& v, const BoundaryPoint& other,
                                     LeafKind kind) {
    auto [vm, vp] = endpoints(v);
    if (kind == LeafKind::Stable) {
        if (other == vp) throw std::domain_error("leafIntersection: endpoints coincide");
        GroupElement u0 = frameOnGeodesic(other, vp);
        double level = busemann(footpoint(v), footpoint(u0), vp);
        return flow(u0, FlowKind::Z, level);
    }
    if (other == vm) throw std::domain_error("leafIntersection: endpoints coincide");
    GroupElement u0 = frameOnGeodesic(vm, other);
    double level = busemann(footpoint(v), footpoint(u0), vm);
    return flow(u0, FlowKind::Z, -level);
}

// Dynamical cross ratio: unstable-first leaf circuit starting on (xi -> eta);
// the recovered geodesic time equals crossRatio(xi, xip, eta, etap).
inline double dynamicalCrossRatio(const BoundaryPoint& xi, const BoundaryPoint& xip,
                                  const BoundaryPoint& eta, const BoundaryPoint& etap,
                                  double startParam = 0.0) {
    GroupElement u0 = frameOnGeodesic(xi, eta);
    GroupElement v = flow(u0, FlowKind::Z, startParam);
    GroupElement v1 = leafIntersection(v, etap, LeafKind::Unstable);   // (xi -> etap)
    GroupElement v2 = leafIntersection(v1, xip, LeafKind::Stable);     // (xip -> etap)
    GroupElement v3 = leafIntersection(v2, eta, LeafKind::Unstable);   // (xip -> eta)
    GroupElement v4 = leafIntersection(v3, xi, LeafKind::Stable);      // (xi -> eta)
    return orbitParameter(u0, footpoint(v4)) - orbitParameter(u0, footpoint(v));
}

}  // namespace hypflow
