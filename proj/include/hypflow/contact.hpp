#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hypflow/reparam.hpp"

// Frame 1-forms against the dual frame (alpha-, alpha, alpha+) of
// (X-, G, X+) with G = Z/2 the geodesic generator, line integrals over
// flow/horocycle segment paths, the exact quadrilateral tiling behind the
// Stokes verification, the Reeb-defect loops, and the affine-deformation
// (CB) three-form values.
//
// Structure relations (exact constants):
//   d alpha+ = alpha+ ^ alpha,  d alpha- = -alpha- ^ alpha,  d alpha = alpha+ ^ alpha-.
//
// The exterior derivative of alpha_psi is never formed pointwise; the only
// derivative information used is per-component, and the component that would
// need the transverse derivatives of the cocycles carries the declared
// continuous-exterior-derivative factor instead.

namespace hypflow {

struct FrameVector {
    double cMinus = 0.0, cZero = 0.0, cPlus = 0.0;  // components on (X-, G, X+)
};

enum class FrameAxis { Minus = 0, Zero = 1, Plus = 2 };

class FrameOneForm {
public:
    using Fn = std::function<double(const GroupElement&)>;

    FrameOneForm(Fn aMinus, Fn aZero, Fn aPlus)
        : coeff_{std::move(aMinus), std::move(aZero), std::move(aPlus)} {}

    static FrameOneForm canonicalAlpha() {
        return constantForm(0.0, 1.0, 0.0);
    }
    static FrameOneForm alphaPlusForm() { return constantForm(0.0, 0.0, 1.0); }
    static FrameOneForm alphaMinusForm() { return constantForm(1.0, 0.0, 0.0); }

    static FrameOneForm constantForm(double m, double z, double p) {
        FrameOneForm f([m](const GroupElement&) { return m; },
                       [z](const GroupElement&) { return z; },
                       [p](const GroupElement&) { return p; });
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                f.dcoeff_[i][j] = [](const GroupElement&) { return 0.0; };
        return f;
    }

    double coefficient(FrameAxis axis, const GroupElement& v) const {
        return coeff_[static_cast<int>(axis)](v);
    }

    double evaluate(const GroupElement& v, const FrameVector& t) const {
        return coeff_[0](v) * t.cMinus + coeff_[1](v) * t.cZero + coeff_[2](v) * t.cPlus;
    }

    void setDerivative(FrameAxis axis, FlowKind dir, Fn fn) {
        dcoeff_[static_cast<int>(axis)][dirIndex(dir)] = std::move(fn);
    }
    void markDerivativeUnavailable(FrameAxis axis, FlowKind dir) {
        unavailable_[static_cast<int>(axis)][dirIndex(dir)] = true;
    }
    void setContinuousExteriorFactor(double factor) { hartmanFactor_ = factor; }

    // directional derivative of a coefficient along a frame flow; analytic
    // when registered, centered differences (h = 1e-4) otherwise
    double coefficientDerivative(FrameAxis axis, FlowKind dir, const GroupElement& v) const {
        int i = static_cast<int>(axis), j = dirIndex(dir);
        if (unavailable_[i][j])
            throw std::logic_error("frame form: transverse coefficient derivative undefined");
        if (dcoeff_[i][j]) return dcoeff_[i][j](v);
        const double h = 1e-4;
        return (coeff_[i](flow(v, dir, h)) - coeff_[i](flow(v, dir, -h))) / (2.0 * h);
    }

    bool derivativeAvailable(FrameAxis axis, FlowKind dir) const {
        return !unavailable_[static_cast<int>(axis)][dirIndex(dir)];
    }
    std::optional<double> continuousExteriorFactor() const { return hartmanFactor_; }

private:
    static int dirIndex(FlowKind dir) {
        switch (dir) {
            case FlowKind::XMinus: return 0;
            case FlowKind::Z: return 1;
            case FlowKind::XPlus:
            default: return 2;
        }
    }

    Fn coeff_[3];
    Fn dcoeff_[3][3];
    bool unavailable_[3][3] = {};
    std::optional<double> hartmanFactor_;
};

// alpha_psi = psi alpha - h- alpha- - h+ alpha+. The flow derivatives of the
// cocycles come from the invariance equations G h- = -h- - X-(psi) and
// G h+ = h+ - X+(psi); the same-side derivatives are convergent integrals,
// and the transverse ones do not exist (the form is only C0 across leaves),
// so those components defer to the declared exterior-derivative factor.
inline FrameOneForm alphaPsi(const InvariantObservable& psi, const QuadratureSpec& spec = {},
                             std::optional<double> exteriorFactor = std::nullopt) {
    auto hMinus = [&psi, spec](const GroupElement& v) {
        return parryCocycle(v, psi, CocycleSide::Minus, spec);
    };
    auto hPlus = [&psi, spec](const GroupElement& v) {
        return parryCocycle(v, psi, CocycleSide::Plus, spec);
    };
    FrameOneForm f([hMinus](const GroupElement& v) { return -hMinus(v); },
                   [&psi](const GroupElement& v) { return psi.value(v); },
                   [hPlus](const GroupElement& v) { return -hPlus(v); });

    f.setDerivative(FrameAxis::Zero, FlowKind::XMinus, [&psi](const GroupElement& v) {
        return psi.derivative(v, FlowKind::XMinus);
    });
    f.setDerivative(FrameAxis::Zero, FlowKind::Z, [&psi](const GroupElement& v) {
        return psi.derivative(v, FlowKind::Z);
    });
    f.setDerivative(FrameAxis::Zero, FlowKind::XPlus, [&psi](const GroupElement& v) {
        return psi.derivative(v, FlowKind::XPlus);
    });
    f.setDerivative(FrameAxis::Minus, FlowKind::Z, [hMinus, &psi](const GroupElement& v) {
        return hMinus(v) + psi.derivative(v, FlowKind::XMinus);  // -G h-
    });
    f.setDerivative(FrameAxis::Plus, FlowKind::Z, [hPlus, &psi](const GroupElement& v) {
        return psi.derivative(v, FlowKind::XPlus) - hPlus(v);  // -G h+
    });
    f.setDerivative(FrameAxis::Minus, FlowKind::XMinus,
                    [&psi, spec](const GroupElement& v) {
                        double T = spec.horizon(psi.c2Bound());
                        auto g = [&](double t) {
                            return std::exp(-2.0 * t) *
                                   psi.secondDerivative(flow(v, FlowKind::Z, -t),
                                                        FlowKind::XMinus, FlowKind::XMinus);
                        };
                        return integrateSimpson(g, 0.0, T, spec.step);  // -X-(h-) = +...
                    });
    f.setDerivative(FrameAxis::Plus, FlowKind::XPlus, [&psi, spec](const GroupElement& v) {
        double T = spec.horizon(psi.c2Bound());
        auto g = [&](double t) {
            return std::exp(-2.0 * t) *
                   psi.secondDerivative(flow(v, FlowKind::Z, t), FlowKind::XPlus,
                                        FlowKind::XPlus);
        };
        return -integrateSimpson(g, 0.0, T, spec.step);  // -X+(h+)
    });
    if (!psi.isConstant()) {
        f.markDerivativeUnavailable(FrameAxis::Minus, FlowKind::XPlus);
        f.markDerivativeUnavailable(FrameAxis::Plus, FlowKind::XMinus);
    } else {
        f.setDerivative(FrameAxis::Minus, FlowKind::XPlus,
                        [](const GroupElement&) { return 0.0; });
        f.setDerivative(FrameAxis::Plus, FlowKind::XMinus,
                        [](const GroupElement&) { return 0.0; });
    }
    if (exteriorFactor) f.setContinuousExteriorFactor(*exteriorFactor);
    return f;
}

// --- segment paths ------------------------------------------------------------

enum class SegmentKind { Z, XPlus, XMinus, PsiFlow };

struct Segment {
    SegmentKind kind;
    GroupElement start;
    double duration;
};

struct SegmentPath {
    std::vector<Segment> segments;

    GroupElement endOf(const Segment& s, const InvariantObservable* psi) const {
        switch (s.kind) {
            case SegmentKind::Z: return flow(s.start, FlowKind::Z, s.duration);
            case SegmentKind::XPlus: return flow(s.start, FlowKind::XPlus, s.duration);
            case SegmentKind::XMinus: return flow(s.start, FlowKind::XMinus, s.duration);
            case SegmentKind::PsiFlow:
            default:
                if (!psi) throw std::logic_error("psi-flow segment without observable");
                return reparamFlow(s.start, s.duration, *psi);
        }
    }

    // max endpoint mismatch between consecutive segments (and closure gap for
    // closed paths when `closed`)
    double concatenationGap(const InvariantObservable* psi = nullptr,
                            bool closed = false) const {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < segments.size(); ++i)
            worst = std::max(worst,
                             pslDistance(endOf(segments[i], psi), segments[i + 1].start));
        if (closed && !segments.empty())
            worst = std::max(worst, pslDistance(endOf(segments.back(), psi),
                                                segments.front().start));
        return worst;
    }
};

// chained loop builder: each leg starts where the previous ended
inline SegmentPath buildPath(const GroupElement& start,
                             const std::vector<std::pair<SegmentKind, double>>& legs,
                             const InvariantObservable* psi = nullptr) {
    SegmentPath path;
    GroupElement at = start;
    for (auto [kind, dur] : legs) {
        Segment s{kind, at, dur};
        at = path.endOf(s, psi);
        path.segments.push_back(s);
    }
    return path;
}

// --- line integrals -------------------------------------------------------------

// Orbit-pair closed forms for alpha_psi over frame-tangent legs (derived from
// the cocycle transport identities; these are what make the temporal-distance
// identities exact):
//   X- leg A -> B:  int = int_0^inf [psi(f^-t B) - psi(f^-t A)] dt
//   X+ leg A -> B:  int = -int_0^inf [psi(f^t B) - psi(f^t A)] dt
//   Z  leg, time s: int = int_0^s psi(f^u A) du
//   psi-flow leg:   int = duration
inline double lineIntegralAlphaPsi(const SegmentPath& path, const InvariantObservable& psi,
                                   const QuadratureSpec& spec = {}) {
    double total = 0.0;
    for (const Segment& s : path.segments) {
        switch (s.kind) {
            case SegmentKind::XMinus: {
                GroupElement B = flow(s.start, FlowKind::XMinus, s.duration);
                total += unstablePairIntegral(B, s.start, psi, s.duration, spec);
                break;
            }
            case SegmentKind::XPlus: {
                GroupElement B = flow(s.start, FlowKind::XPlus, s.duration);
                total -= stablePairIntegral(B, s.start, psi, s.duration, spec);
                break;
            }
            case SegmentKind::Z: {
                auto along = [&](double u) { return psi.value(flow(s.start, FlowKind::Z, u)); };
                total += integrateSimpson(along, 0.0, s.duration, spec.step);
                break;
            }
            case SegmentKind::PsiFlow:
                total += s.duration;
                break;
        }
    }
    return total;
}

// Generic coefficient-quadrature route for any frame form. Horocycle and
// geodesic legs have exact frame-tangent vectors; psi-flow legs have tangent
// Z_psi = G / psi.
inline double lineIntegral(const FrameOneForm& form, const SegmentPath& path,
                           const QuadratureSpec& spec = {},
                           const InvariantObservable* psi = nullptr) {
    double total = 0.0;
    for (const Segment& s : path.segments) {
        switch (s.kind) {
            case SegmentKind::XMinus: {
                auto f = [&](double u) {
                    return form.coefficient(FrameAxis::Minus, flow(s.start, FlowKind::XMinus, u));
                };
                total += integrateSimpson(f, 0.0, s.duration, spec.step);
                break;
            }
            case SegmentKind::XPlus: {
                auto f = [&](double u) {
                    return form.coefficient(FrameAxis::Plus, flow(s.start, FlowKind::XPlus, u));
                };
                total += integrateSimpson(f, 0.0, s.duration, spec.step);
                break;
            }
            case SegmentKind::Z: {
                auto f = [&](double u) {
                    return form.coefficient(FrameAxis::Zero, flow(s.start, FlowKind::Z, u));
                };
                total += integrateSimpson(f, 0.0, s.duration, spec.step);
                break;
            }
            case SegmentKind::PsiFlow: {
                if (!psi) throw std::logic_error("psi-flow segment without observable");
                auto f = [&](double u) {
                    GroupElement g = reparamFlow(s.start, u, *psi);
                    return form.coefficient(FrameAxis::Zero, g) / psi->value(g);
                };
                total += integrateSimpson(f, 0.0, s.duration, spec.step);
                break;
            }
        }
    }
    return total;
}

// the exact quadrilateral loop through v, oriented so that the alpha
// circulation is d5 (Z leg first, then the reversed horocycle legs)
inline SegmentPath quadrilateralLoop(const GroupElement& v, double delta) {
    Quintuple q = quadrilateralClose(delta, delta);
    return buildPath(v, {{SegmentKind::Z, q.d5},
                         {SegmentKind::XPlus, -q.d4},
                         {SegmentKind::XMinus, -q.d3},
                         {SegmentKind::XPlus, -q.d2},
                         {SegmentKind::XMinus, -q.d1}});
}

// --- Reeb defect -----------------------------------------------------------------

// Circulation of alpha_psi around exactly closed loops inside one weak leaf,
// normalized by delta^2; both must vanish (i_{Z_psi} d alpha_psi = 0).
inline double reebDefect(const InvariantObservable& psi, const GroupElement& v, double delta,
                         const QuadratureSpec& spec = {}) {
    SegmentPath stableLoop =
        buildPath(v, {{SegmentKind::XPlus, delta},
                      {SegmentKind::Z, delta},
                      {SegmentKind::XPlus, -delta * std::exp(-delta)},
                      {SegmentKind::Z, -delta}});
    SegmentPath unstableLoop =
        buildPath(v, {{SegmentKind::XMinus, delta},
                      {SegmentKind::Z, delta},
                      {SegmentKind::XMinus, -delta * std::exp(delta)},
                      {SegmentKind::Z, -delta}});
    double cs = lineIntegralAlphaPsi(stableLoop, psi, spec);
    double cu = lineIntegralAlphaPsi(unstableLoop, psi, spec);
    return std::max(std::abs(cs), std::abs(cu)) / (delta * delta);
}

// --- Stokes tiling ----------------------------------------------------------------

// Exact subdivision of the big quadrilateral loop W(side, side) at v into
// ~ (side/tile)^2 small quadrilateral loops. Rows come from the unstable-width
// split, cells from the mirrored split; the corrections are single-leaf
// cycles with zero circulation, so the signed tile sums telescope to the
// outer loop values.
struct StokesReport {
    double perTileAbsSum = 0.0;    // sum over tiles of |circ(alpha_psi) - psiBar * circ(alpha)|
    double outerCirculation = 0.0; // telescoped alpha_psi circulation
    double outerArea = 0.0;        // telescoped alpha circulation (= d-alpha area)
    double telescopeError = 0.0;   // vs the directly computed outer loop
    int tiles = 0;
};

inline StokesReport stokesResidual(const GroupElement& v, double side, double tile,
                                   const InvariantObservable& psi, double psiBar,
                                   const QuadratureSpec& spec = {}) {
    if (side <= 0.0 || tile <= 0.0 || tile > side)
        throw std::domain_error("stokes: need 0 < tile <= side");
    int n = std::max(1, static_cast<int>(std::llround(side / tile)));
    double du = side / n;

    StokesReport rep;
    // mirrored cell: legs X+ p, X- q, X+ -p/(1+pq), X- -q(1+pq), Z -2 log(1+pq)
    auto cellValue = [&](const GroupElement& base, double p, double q) {
        double pq = p * q;
        double d3 = -p / (1.0 + pq);
        double d4 = -q * (1.0 + pq);
        double d5 = -2.0 * std::log1p(pq);
        SegmentPath loop = buildPath(base, {{SegmentKind::XPlus, p},
                                            {SegmentKind::XMinus, q},
                                            {SegmentKind::XPlus, d3},
                                            {SegmentKind::XMinus, d4},
                                            {SegmentKind::Z, d5}});
        double circ = lineIntegralAlphaPsi(loop, psi, spec);
        rep.perTileAbsSum += std::abs(circ - psiBar * d5);
        rep.outerCirculation += circ;
        rep.outerArea += d5;
        ++rep.tiles;
    };

    GroupElement rowBase = v;
    double a = side;
    for (int j = 0; j < n; ++j) {
        Quintuple rq = quadrilateralClose(a, du);
        // reversed row = mirrored quadrilateral of widths (p, q) based at the
        // Z-translate of the row corner
        double p = du * (1.0 + a * du);
        double q = a / (1.0 + a * du);
        GroupElement P = flow(rowBase, FlowKind::Z, rq.d5);
        int m = std::max(1, static_cast<int>(std::llround(q / tile)));
        double pCur = p, qRem = q;
        for (int i = 0; i < m; ++i) {
            double qc = qRem / (m - i);
            cellValue(P, pCur, qc);
            // advance to the next cell base along the shared interior edge
            GroupElement P1 = flow(P, FlowKind::XPlus, pCur);
            GroupElement P2 = flow(P1, FlowKind::XMinus, qc);
            P = flow(P2, FlowKind::XPlus, -pCur / (1.0 + pCur * qc));
            pCur = pCur / (1.0 + pCur * qc);
            qRem -= qc;
        }
        // next row of the unstable-width split
        GroupElement c1 = flow(rowBase, FlowKind::XMinus, a);
        GroupElement c2 = flow(c1, FlowKind::XPlus, du);
        rowBase = flow(c2, FlowKind::XMinus, rq.d3);
        a = a / (1.0 + a * du);
    }

    // direct outer loop in the same (mirrored) orientation
    Quintuple big = quadrilateralClose(side, side);
    double pBig = side * (1.0 + side * side);
    double qBig = side / (1.0 + side * side);
    SegmentPath outer = buildPath(flow(v, FlowKind::Z, big.d5),
                                  {{SegmentKind::XPlus, pBig},
                                   {SegmentKind::XMinus, qBig},
                                   {SegmentKind::XPlus, -pBig / (1.0 + pBig * qBig)},
                                   {SegmentKind::XMinus, -qBig * (1.0 + pBig * qBig)},
                                   {SegmentKind::Z, -2.0 * std::log1p(pBig * qBig)}});
    double direct = lineIntegralAlphaPsi(outer, psi, spec);
    rep.telescopeError = std::abs(rep.outerCirculation - direct);
    return rep;
}

// --- CB values -------------------------------------------------------------------

namespace detail {

// components of the exterior derivative of a frame form against the ordered
// pairs (X-,G), (G,X+), (X-,X+), from the structure relations plus coefficient
// derivatives; a component falls back to the declared continuous exterior
// derivative (factor * d alpha) when its coefficient derivatives do not exist
struct TwoFormComponents {
    double mg = 0.0;   // on (X-, G)
    double gp = 0.0;   // on (G, X+)
    double mp = 0.0;   // on (X-, X+)
};

inline double dComponentMG(const FrameOneForm& w, const GroupElement& v) {
    if (!w.derivativeAvailable(FrameAxis::Minus, FlowKind::Z) ||
        !w.derivativeAvailable(FrameAxis::Zero, FlowKind::XMinus)) {
        auto f = w.continuousExteriorFactor();
        if (!f) throw std::logic_error("d-component (X-,G): no derivative route");
        return 0.0;  // d alpha has no (X-,G) component
    }
    return -w.coefficientDerivative(FrameAxis::Minus, FlowKind::Z, v) +
           w.coefficientDerivative(FrameAxis::Zero, FlowKind::XMinus, v) -
           w.coefficient(FrameAxis::Minus, v);
}

inline double dComponentGP(const FrameOneForm& w, const GroupElement& v) {
    if (!w.derivativeAvailable(FrameAxis::Plus, FlowKind::Z) ||
        !w.derivativeAvailable(FrameAxis::Zero, FlowKind::XPlus)) {
        auto f = w.continuousExteriorFactor();
        if (!f) throw std::logic_error("d-component (G,X+): no derivative route");
        return 0.0;
    }
    return w.coefficientDerivative(FrameAxis::Plus, FlowKind::Z, v) -
           w.coefficientDerivative(FrameAxis::Zero, FlowKind::XPlus, v) -
           w.coefficient(FrameAxis::Plus, v);
}

inline double dComponentMP(const FrameOneForm& w, const GroupElement& v) {
    if (!w.derivativeAvailable(FrameAxis::Minus, FlowKind::XPlus) ||
        !w.derivativeAvailable(FrameAxis::Plus, FlowKind::XMinus)) {
        auto f = w.continuousExteriorFactor();
        if (!f) throw std::logic_error("d-component (X-,X+): no derivative route");
        return *f * (-1.0);  // (d alpha)(X-, X+) = -1
    }
    return -w.coefficientDerivative(FrameAxis::Minus, FlowKind::XPlus, v) +
           w.coefficientDerivative(FrameAxis::Plus, FlowKind::XMinus, v) -
           w.coefficient(FrameAxis::Zero, v);
}

// (omega ^ Omega)(X-, X+, G)
inline double wedgeOnFrame(const FrameOneForm& w, const GroupElement& v,
                           const TwoFormComponents& omega) {
    double wm = w.coefficient(FrameAxis::Minus, v);
    double wz = w.coefficient(FrameAxis::Zero, v);
    double wp = w.coefficient(FrameAxis::Plus, v);
    // Omega(X+, G) = -Omega(G, X+); Omega(X-, X+) as stored
    return wm * (-omega.gp) - wp * omega.mg + wz * omega.mp;
}

}  // namespace detail

// (alphaForm ^ d betaForm + betaForm ^ d alphaForm)(X-, X+, G)(v): the n = 1
// affine-deformation (CB) integrand. Components with zero multiplier are not
// evaluated, so the undefined transverse derivatives of cocycle coefficients
// are never requested for the pairings used here.
inline double cbValue(const FrameOneForm& alphaForm, const FrameOneForm& betaForm,
                      const GroupElement& v) {
    auto lazyComponents = [&](const FrameOneForm& w, const FrameOneForm& against) {
        detail::TwoFormComponents c;
        double am = against.coefficient(FrameAxis::Minus, v);
        double az = against.coefficient(FrameAxis::Zero, v);
        double ap = against.coefficient(FrameAxis::Plus, v);
        if (am != 0.0) c.gp = detail::dComponentGP(w, v);
        if (ap != 0.0) c.mg = detail::dComponentMG(w, v);
        if (az != 0.0) c.mp = detail::dComponentMP(w, v);
        return c;
    };
    detail::TwoFormComponents dBeta = lazyComponents(betaForm, alphaForm);
    detail::TwoFormComponents dAlpha = lazyComponents(alphaForm, betaForm);
    return detail::wedgeOnFrame(alphaForm, v, dBeta) +
           detail::wedgeOnFrame(betaForm, v, dAlpha);
}

// omega ^ d omega evaluated on (X-, X+, G); defined for smooth frame forms
inline double contactVolume(const FrameOneForm& w, const GroupElement& v) {
    detail::TwoFormComponents c{detail::dComponentMG(w, v), detail::dComponentGP(w, v),
                                detail::dComponentMP(w, v)};
    return detail::wedgeOnFrame(w, v, c);
}

// pairing with the canonical Reeb field: v -> form(G)(v)
inline double reebPairing(const FrameOneForm& form, const GroupElement& v) {
    return form.coefficient(FrameAxis::Zero, v);
}

}  // namespace hypflow
