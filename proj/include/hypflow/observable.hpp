#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hypflow/octagon.hpp"

// Exactly Gamma-invariant smooth observables: a positive base value plus
// compactly supported bumps. Invariance is by construction (evaluation
// reduces to the fundamental domain first); smoothness because the bump
// profile exp(-1/(1-q)) vanishes to all orders at the support boundary.
//
// Bump supports are balls in the left-invariant frame metric
// rho(g,h)^2 = |h^{-1} g - I|_F^2 (sign-normalized). A support radius below
// half the systole keeps at most one orbit translate active per point; the
// translates that can reach the reduced domain are precomputed once.

namespace hypflow {

struct BumpSpec {
    GroupElement center;
    double amplitude = 0.0;
    double radius = 0.5;
};

namespace detail {

inline double bumpProfile(double q) { return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0; }
inline double bumpProfileD1(double q) {
    if (q >= 1.0) return 0.0;
    double u = 1.0 - q;
    return -bumpProfile(q) / (u * u);
}
inline double bumpProfileD2(double q) {
    if (q >= 1.0) return 0.0;
    double u = 1.0 - q;
    return bumpProfile(q) * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
}

inline double inner(const Mat2& x, const Mat2& y) {
    return x.a * y.a + x.b * y.b + x.c * y.c + x.d * y.d;
}

// generator matrices on the pinned clock: the Z-direction is the geodesic
// generator Z/2 so that the Z-derivative equals d/dt psi(f^t v)
inline Mat2 directionMatrix(FlowKind kind) {
    switch (kind) {
        case FlowKind::Z: return {0.5, 0.0, 0.0, -0.5};
        case FlowKind::XPlus: return {0.0, 1.0, 0.0, 0.0};
        case FlowKind::XMinus:
        default: return {0.0, 0.0, 1.0, 0.0};
    }
}

}  // namespace detail

class InvariantObservable {
public:
    InvariantObservable(std::shared_ptr<const OctagonGroup> group, double baseValue,
                        std::vector<BumpSpec> bumps = {})
        : group_(std::move(group)), base_(baseValue), bumps_(std::move(bumps)) {
        if (!group_) throw std::invalid_argument("observable: group required");
        if (base_ <= 0.0) throw std::domain_error("observable: base value must be positive");
        double budget = 0.0;
        for (const auto& b : bumps_) {
            if (b.radius <= 0.0 || b.radius >= 0.5 * group_->systole())
                throw std::domain_error("observable: bump radius out of range");
            budget += std::abs(b.amplitude);
        }
        if (budget >= base_)
            throw std::domain_error("observable: amplitude budget violates positivity");
        buildTerms();
        estimateNorms();
    }

    static InvariantObservable constant(std::shared_ptr<const OctagonGroup> group, double c) {
        return InvariantObservable(std::move(group), c);
    }

    const OctagonGroup& group() const { return *group_; }
    double baseValue() const { return base_; }
    const std::vector<BumpSpec>& bumps() const { return bumps_; }
    bool isConstant() const { return bumps_.empty(); }

    double minimumValue() const {
        double budget = 0.0;
        for (const auto& b : bumps_) budget += std::abs(b.amplitude);
        return base_ - budget;
    }

    double value(const GroupElement& v) const {
        if (terms_.empty()) return base_;
        return valueFromReduced(group_->reduceMat(v.mat()));
    }

    // evaluation when the caller already holds a domain representative
    double valueFromReduced(const Mat2& g0) const {
        double acc = base_;
        for (const Term& t : terms_) {
            double q = offsetQ(t, g0);
            if (q < 1.0) acc += t.amplitude * detail::bumpProfile(q);
        }
        return acc;
    }

    double valueMat(const Mat2& m) const {
        if (terms_.empty()) return base_;
        return valueFromReduced(group_->reduceMat(m));
    }

    // d/dt psi(v exp(t X)) at t = 0
    double derivative(const GroupElement& v, FlowKind kind) const {
        if (terms_.empty()) return 0.0;
        return derivativeFromReduced(group_->reduceMat(v.mat()), kind);
    }

    double derivativeFromReduced(const Mat2& g0, FlowKind kind) const {
        const Mat2 X = detail::directionMatrix(kind);
        double acc = 0.0;
        for (const Term& t : terms_) {
            Mat2 W = signedOffset(t, g0);
            Mat2 U = W - Mat2{};
            double q = detail::inner(U, U) * t.invR2;
            if (q >= 1.0) continue;
            double qt = 2.0 * detail::inner(W * X, U) * t.invR2;
            acc += t.amplitude * detail::bumpProfileD1(q) * qt;
        }
        return acc;
    }

    // d/dt d/du psi(v exp(t X) exp(u Y)) at (0,0)
    double secondDerivative(const GroupElement& v, FlowKind kindX, FlowKind kindY) const {
        if (terms_.empty()) return 0.0;
        const Mat2 g0 = group_->reduceMat(v.mat());
        const Mat2 X = detail::directionMatrix(kindX);
        const Mat2 Y = detail::directionMatrix(kindY);
        double acc = 0.0;
        for (const Term& t : terms_) {
            Mat2 W = signedOffset(t, g0);
            Mat2 U = W - Mat2{};
            double q = detail::inner(U, U) * t.invR2;
            if (q >= 1.0) continue;
            double qt = 2.0 * detail::inner(W * X, U) * t.invR2;
            double qu = 2.0 * detail::inner(W * Y, U) * t.invR2;
            double qtu =
                2.0 * (detail::inner(W * (X * Y), U) + detail::inner(W * Y, W * X)) * t.invR2;
            acc += t.amplitude *
                   (detail::bumpProfileD2(q) * qt * qu + detail::bumpProfileD1(q) * qtu);
        }
        return acc;
    }

    // sampled upper bounds (margin 1.25) used as test constants
    double c0Bound() const { return c0_; }
    double c1Bound() const { return c1_; }
    double c2Bound() const { return c2_; }

private:
    struct Term {
        Mat2 centerInverse;
        double amplitude;
        double invR2;
    };

    static Mat2 signedOffset(const Term& t, const Mat2& g0) {
        Mat2 W = t.centerInverse * g0;
        if (W.trace() < 0.0) W = -1.0 * W;
        return W;
    }
    static double offsetQ(const Term& t, const Mat2& g0) {
        Mat2 W = signedOffset(t, g0);
        Mat2 U = W - Mat2{};
        return detail::inner(U, U) * t.invR2;
    }

    void buildTerms() {
        if (bumps_.empty()) return;
        const Uhp i0(0.0, 1.0);
        for (const auto& b : bumps_)
            terms_.push_back(
                {b.center.mat().inverse(), b.amplitude, 1.0 / (b.radius * b.radius)});
        // translated copies whose support can reach the closed domain
        bool anyNearWall = false;
        for (const auto& b : bumps_) {
            double cd = hypDistance(footpoint(b.center), i0);
            if (cd + 2.4 * b.radius >= group_->inradius()) anyNearWall = true;
        }
        if (!anyNearWall) return;
        for (const GroupElement& gamma : group_->neighborSet()) {
            GroupElement gi = gamma.inverse();
            for (const auto& b : bumps_) {
                GroupElement shifted = gi * b.center;
                if (hypDistance(footpoint(shifted), i0) <=
                    group_->circumradius() + 2.4 * b.radius)
                    terms_.push_back({shifted.mat().inverse(), b.amplitude,
                                      1.0 / (b.radius * b.radius)});
            }
        }
    }

    void estimateNorms() {
        double budget = 0.0;
        for (const auto& b : bumps_) budget += std::abs(b.amplitude);
        c0_ = base_ + budget * std::exp(-1.0);
        c1_ = 0.0;
        c2_ = 0.0;
        if (bumps_.empty()) {
            c1_ = c0_;
            c2_ = c0_;
            return;
        }
        const FlowKind kinds[3] = {FlowKind::XMinus, FlowKind::Z, FlowKind::XPlus};
        const int n = 7;
        for (const auto& bump : bumps_)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double x = bump.radius * (2.0 * i / (n - 1.0) - 1.0);
                        double y = bump.radius * (2.0 * j / (n - 1.0) - 1.0);
                        double t = bump.radius * (2.0 * k / (n - 1.0) - 1.0);
                        GroupElement v = flow(
                            flow(flow(bump.center, FlowKind::XMinus, x), FlowKind::XPlus, y),
                            FlowKind::Z, t);
                        for (FlowKind kx : kinds) {
                            c1_ = std::max(c1_, std::abs(derivative(v, kx)));
                            for (FlowKind ky : kinds)
                                c2_ = std::max(c2_, std::abs(secondDerivative(v, kx, ky)));
                        }
                    }
        c1_ = c0_ + 1.25 * c1_;
        c2_ = c1_ + 1.25 * c2_;
    }

    std::shared_ptr<const OctagonGroup> group_;
    double base_;
    std::vector<BumpSpec> bumps_;
    std::vector<Term> terms_;
    double c0_ = 0.0, c1_ = 0.0, c2_ = 0.0;
};

// psi composed with the frame flip (the time-reversed observable); used by
// the unstable-side Busemann machinery.
class FlippedObservable {
public:
    explicit FlippedObservable(const InvariantObservable& psi) : psi_(&psi) {}
    double value(const GroupElement& v) const { return psi_->value(flipFrame(v)); }

    static GroupElement flipFrame(const GroupElement& g) {
        static const GroupElement kFlip(0.0, -1.0, 1.0, 0.0);
        return g * kFlip;
    }

private:
    const InvariantObservable* psi_;
};

}  // namespace hypflow
