#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hypflow/observable.hpp"

// Liouville (= Haar) sampling of the quotient: hyperbolic-uniform footpoint
// on the Dirichlet domain by polar rejection from the circumscribed disk,
// uniform direction. The generator is hand-rolled so that output streams are
// byte-stable across platforms.

namespace hypflow {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t nextU64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (nextU64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    static std::uint64_t shardSeed(std::uint64_t seed, std::uint64_t shard) {
        Rng r(seed ^ (0xd1342543de82ef95ULL * (shard + 1)));
        return r.nextU64();
    }

private:
    std::uint64_t state_;
};

// frame with footpoint x+iy and direction angle theta (theta = pi/2 points up)
inline GroupElement frameFromCoordinates(double x, double y, double theta) {
    if (y <= 0.0) throw std::domain_error("frameFromCoordinates: y must be positive");
    double s = std::sqrt(y);
    GroupElement translate(s, x / s, 0.0, 1.0 / s);
    return translate * rotationAboutI(theta - 1.57079632679489662);
}

inline GroupElement liouvilleDraw(const OctagonGroup& group, Rng& rng) {
    const double coshR = std::cosh(group.circumradius());
    for (int attempts = 0; attempts < 100000; ++attempts) {
        double r = std::acosh(1.0 + rng.uniform() * (coshR - 1.0));
        double phi = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        GroupElement probe = rotationAboutI(phi) * expGenerator(FlowKind::Z, r);
        Uhp z = footpoint(probe);
        if (!group.inDomain(z)) continue;
        double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        return frameFromCoordinates(z.real(), z.imag(), theta);
    }
    throw std::runtime_error("liouville sampling: rejection efficiency below 1e-5");
}

inline std::vector<GroupElement> liouvilleSample(const OctagonGroup& group, int n,
                                                 std::uint64_t seed) {
    if (n < 1) throw std::domain_error("liouville_sample: need n >= 1");
    Rng rng(seed);
    std::vector<GroupElement> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(liouvilleDraw(group, rng));
    return out;
}

struct MeanEstimate {
    double mean = 0.0;
    double stderrOfMean = 0.0;
    int n = 0;
};

template <typename F>
MeanEstimate monteCarloMean(const std::vector<GroupElement>& samples, F&& f) {
    double s = 0.0, s2 = 0.0;
    for (const GroupElement& v : samples) {
        double y = f(v);
        s += y;
        s2 += y * y;
    }
    int n = static_cast<int>(samples.size());
    double mean = s / n;
    double var = std::max(0.0, s2 / n - mean * mean);
    return {mean, std::sqrt(var / n), n};
}

inline MeanEstimate estimateMean(const InvariantObservable& psi, int n, std::uint64_t seed) {
    if (psi.isConstant()) return {psi.baseValue(), 0.0, n};
    auto samples = liouvilleSample(psi.group(), n, seed);
    return monteCarloMean(samples, [&](const GroupElement& v) { return psi.value(v); });
}

}  // namespace hypflow
