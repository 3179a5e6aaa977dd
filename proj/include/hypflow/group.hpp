#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

// Algebraic model of the unit tangent bundle: frames are elements of
// PSL(2,R), flows act by right multiplication.
//
// Frozen conventions (everything downstream depends on these):
//   * geodesic flow  f^t(v) = v * a_t,  a_t = diag(e^{t/2}, e^{-t/2}) = exp(t Z/2)
//   * exp(r X+) = [[1,r],[0,1]],  exp(r X-) = [[1,0],[r,1]]
//   * pushforward rates: Df^t X+ = e^{-t} X+ (stable), Df^t X- = e^{+t} X- (unstable)
//   * identity frame sits at i pointing up; forward endpoint g.inf, backward g.0

namespace hypflow {

constexpr double kDetDriftThreshold = 1e-13;

struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    constexpr double det() const { return a * d - b * c; }
    constexpr double trace() const { return a + d; }
    constexpr Mat2 inverse() const { return {d, -b, -c, a}; }  // det == 1 assumed

    friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend constexpr Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend constexpr Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& x) {
        return {s * x.a, s * x.b, s * x.c, s * x.d};
    }
    double maxAbs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

inline double frobeniusDistance(const Mat2& x, const Mat2& y) {
    return (x - y).frobenius();
}

// A point of PSL(2,R): unit-determinant matrix modulo sign. The representative
// is normalized so the entry of largest magnitude is positive.
class GroupElement {
public:
    GroupElement() = default;
    GroupElement(double a, double b, double c, double d) : m_{a, b, c, d} { normalize(); }
    explicit GroupElement(const Mat2& m) : m_(m) { normalize(); }

    const Mat2& mat() const { return m_; }
    double a() const { return m_.a; }
    double b() const { return m_.b; }
    double c() const { return m_.c; }
    double d() const { return m_.d; }

    GroupElement inverse() const { return GroupElement(m_.inverse()); }

    friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
        return GroupElement(x.m_ * y.m_);
    }

    // PSL distance of representatives: min over the sign ambiguity.
    friend double pslDistance(const GroupElement& x, const GroupElement& y) {
        double plus = frobeniusDistance(x.m_, y.m_);
        double minus = frobeniusDistance(x.m_, -1.0 * y.m_);
        return std::min(plus, minus);
    }

private:
    void normalize() {
        double det = m_.det();
        if (det <= 0.0 || !std::isfinite(det))
            throw std::domain_error("GroupElement: determinant must be positive, got " +
                                    std::to_string(det));
        if (std::abs(det - 1.0) > kDetDriftThreshold) {
            double s = 1.0 / std::sqrt(det);
            m_ = s * m_;
        }
        // sign representative: largest-magnitude entry positive
        double candidates[4] = {m_.a, m_.b, m_.c, m_.d};
        double best = 0.0;
        for (double v : candidates)
            if (std::abs(v) > std::abs(best)) best = v;
        if (best < 0.0) m_ = -1.0 * m_;
    }

    Mat2 m_{};
};

inline GroupElement identityFrame() { return GroupElement(); }

// sl(2,R) in the basis (X-, Z, X+); bracket table is
// [Z,X+] = 2 X+, [Z,X-] = -2 X-, [X+,X-] = Z.
struct AlgebraVector {
    double cMinus = 0.0, cZ = 0.0, cPlus = 0.0;

    Mat2 matrix() const { return {cZ, cPlus, cMinus, -cZ}; }

    static AlgebraVector fromMatrix(const Mat2& m) { return {m.c, m.a, m.b}; }

    friend AlgebraVector operator+(const AlgebraVector& x, const AlgebraVector& y) {
        return {x.cMinus + y.cMinus, x.cZ + y.cZ, x.cPlus + y.cPlus};
    }
    friend AlgebraVector operator*(double s, const AlgebraVector& x) {
        return {s * x.cMinus, s * x.cZ, s * x.cPlus};
    }
};

inline AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
    Mat2 mx = x.matrix(), my = y.matrix();
    return AlgebraVector::fromMatrix(mx * my - my * mx);
}

enum class FlowKind { Z, XPlus, XMinus };

// The pinned flow convention. geodesicGenerator is Z/2 so that the time-t
// geodesic matrix is diag(e^{t/2}, e^{-t/2}) and the horocycle contraction
// rates are exactly +-1.
struct FlowConvention {
    static AlgebraVector geodesicGenerator() { return {0.0, 0.5, 0.0}; }
    static AlgebraVector stableGenerator() { return {0.0, 0.0, 1.0}; }    // X+
    static AlgebraVector unstableGenerator() { return {1.0, 0.0, 0.0}; }  // X-
    // dictionary between the rate-2 clock used by the reference asymptotics
    // and the pinned rate-1 clock
    static double referenceTimeToFlowTime(double t) { return -2.0 * t; }
};

inline Mat2 expGeneratorMat(FlowKind kind, double r) {
    if (!std::isfinite(r)) throw std::domain_error("exp_generator: non-finite parameter");
    switch (kind) {
        case FlowKind::Z: {
            double e = std::exp(0.5 * r);
            return {e, 0.0, 0.0, 1.0 / e};
        }
        case FlowKind::XPlus:
            return {1.0, r, 0.0, 1.0};
        case FlowKind::XMinus:
        default:
            return {1.0, 0.0, r, 1.0};
    }
}

inline GroupElement expGenerator(FlowKind kind, double r) {
    return GroupElement(expGeneratorMat(kind, r));
}

inline GroupElement flow(const GroupElement& v, FlowKind kind, double t) {
    return GroupElement(v.mat() * expGeneratorMat(kind, t));
}

// Df^t applied to a left-invariant field: Ad(a_t^{-1}).
inline AlgebraVector geodesicPushforward(const AlgebraVector& x, double t) {
    Mat2 gInv = expGeneratorMat(FlowKind::Z, -t);
    Mat2 g = expGeneratorMat(FlowKind::Z, t);
    return AlgebraVector::fromMatrix(gInv * x.matrix() * g);
}

// Exact closing data of the horocycle quadrilateral
//   exp(d1 X-) exp(d2 X+) exp(d3 X-) exp(d4 X+) = a_{d5}.
struct Quintuple {
    double d1, d2, d3, d4, d5;
};

inline Quintuple quadrilateralClose(double d1, double d2) {
    if (!std::isfinite(d1) || !std::isfinite(d2))
        throw std::domain_error("quadrilateral_close: non-finite input");
    double p = 1.0 + d1 * d2;
    if (p <= 0.0)
        throw std::domain_error("quadrilateral_close: degenerate input, 1 + d1*d2 <= 0");
    return {d1, d2, -d1 / p, -d2 * p, -2.0 * std::log(p)};
}

// The classical asymptotic quintuple (d3 via kappa, d4 to third order), with the
// closing time mapped onto the pinned clock.
inline Quintuple referenceQuintuple(double delta) {
    double kappa = delta * delta * delta / (1.0 + delta * delta);
    return {delta, delta, -delta + kappa, -(delta + 0.5 * delta * delta * delta),
            FlowConvention::referenceTimeToFlowTime(std::log(1.0 + delta * delta))};
}

// Gap between the composed quadrilateral word at w and the time-d5 geodesic
// translate of w; base-point independent for any quintuple.
inline double holonomyClosureCheck(const GroupElement& w, const Quintuple& q) {
    Mat2 path = w.mat() * expGeneratorMat(FlowKind::XMinus, q.d1) *
                expGeneratorMat(FlowKind::XPlus, q.d2) *
                expGeneratorMat(FlowKind::XMinus, q.d3) *
                expGeneratorMat(FlowKind::XPlus, q.d4);
    Mat2 target = w.mat() * expGeneratorMat(FlowKind::Z, q.d5);
    return frobeniusDistance(path, target);
}

}  // namespace hypflow
