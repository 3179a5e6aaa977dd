#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hypflow/halfplane.hpp"

// Cocompact quotient: the genus-2 surface of the regular hyperbolic octagon
// with opposite-side pairing. Generators are the four translations
//   g_k = R(k pi/4) * diag(lambda, 1/lambda) * R(-k pi/4),  cosh(l/2) = 1 + sqrt(2),
// axes through i at angles pi/2 + k pi/4. The Dirichlet domain centered at i
// is the regular octagon whose walls are the bisectors of [i, g_k^{+-1} i].

namespace hypflow {

// rotation about i by tangent angle zeta
inline GroupElement rotationAboutI(double zeta) {
    double c = std::cos(0.5 * zeta), s = std::sin(0.5 * zeta);
    return GroupElement(c, s, -s, c);
}

class OctagonGroup {
public:
    OctagonGroup() {
        double ch = 1.0 + std::sqrt(2.0);               // cosh(l/2)
        double lam = ch + std::sqrt(ch * ch - 1.0);     // e^{l/2}
        GroupElement A(lam, 0.0, 0.0, 1.0 / lam);
        for (int k = 0; k < 4; ++k) {
            GroupElement r = rotationAboutI(k * kPi / 4.0);
            gens_[k] = r * A * r.inverse();
        }
        for (int k = 0; k < 4; ++k) {
            walls_[k] = gens_[k];
            walls_[k + 4] = gens_[k].inverse();
        }
        for (int k = 0; k < 8; ++k) {
            wallInverse_[k] = walls_[k].inverse();
            wallCenter_[k] = footpoint(walls_[k]);
            wallX_[k] = wallCenter_[k].real();
            wallY_[k] = wallCenter_[k].imag();
        }
        if (relationResidual() > 1e-9)
            throw std::logic_error("octagon group: genus-2 relation residual too large");
    }

    const GroupElement& generator(int k) const { return gens_[k]; }
    const GroupElement& wall(int k) const { return walls_[k]; }
    static constexpr int wallCount() { return 8; }

    // One-relator genus-2 presentation of the opposite-side pairing:
    // g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = id in PSL(2,R).
    double relationResidual() const {
        GroupElement w = gens_[0] * gens_[1].inverse() * gens_[2] * gens_[3].inverse() *
                         gens_[0].inverse() * gens_[1] * gens_[2].inverse() * gens_[3];
        return pslDistance(w, identityFrame());
    }

    double systole() const { return 2.0 * std::acosh(1.0 + std::sqrt(2.0)); }
    double inradius() const { return std::acosh(1.0 + std::sqrt(2.0)); }
    double circumradius() const { return std::acosh(3.0 + 2.0 * std::sqrt(2.0)); }

    // Dirichlet condition at the center i: z is in the domain iff it is at
    // least as close to i as to every wall translate of i.
    bool inDomain(const Uhp& z, double slack = 0.0) const {
        double q0 = std::norm(z - Uhp(0.0, 1.0)) / z.imag();
        for (int k = 0; k < 8; ++k) {
            double qk = std::norm(z - wallCenter_[k]) / (z.imag() * wallCenter_[k].imag());
            if (qk < q0 - slack) return false;
        }
        return true;
    }

    // Greedy wall-crossing on the bare matrix; returns the domain
    // representative only. Each step strictly decreases d(i, z).
    Mat2 reduceMat(Mat2 m) const {
        for (int iter = 0; iter < kMaxReduceSteps; ++iter) {
            // footpoint of the frame: ((ac + bd) + i det) / (c^2 + d^2)
            double den = m.c * m.c + m.d * m.d;
            double x = (m.a * m.c + m.b * m.d) / den;
            double y = 1.0 / den;
            double best = (x * x + (y - 1.0) * (y - 1.0)) / y;  // vs the center i
            int bestWall = -1;
            for (int k = 0; k < 8; ++k) {
                double dx = x - wallX_[k], dy = y - wallY_[k];
                double qk = (dx * dx + dy * dy) / (y * wallY_[k]);
                if (qk < best * (1.0 - 1e-15)) {
                    best = qk;
                    bestWall = k;
                }
            }
            if (bestWall < 0) return m;
            m = wallInverse_[bestWall].mat() * m;
            double det = m.det();
            if (std::abs(det - 1.0) > kDetDriftThreshold) m = (1.0 / std::sqrt(det)) * m;
        }
        throw std::runtime_error("reduce: did not terminate (domain construction bug?)");
    }

    // Full reduction: g == gamma * g0 with the footpoint of g0 in the domain.
    std::pair<GroupElement, GroupElement> reduce(const GroupElement& g) const {
        GroupElement g0 = g;
        GroupElement gamma = identityFrame();
        for (int iter = 0; iter < kMaxReduceSteps; ++iter) {
            Uhp z = footpoint(g0);
            double best = std::norm(z - Uhp(0.0, 1.0)) / z.imag();
            int bestWall = -1;
            for (int k = 0; k < 8; ++k) {
                double qk = std::norm(z - wallCenter_[k]) / (z.imag() * wallCenter_[k].imag());
                if (qk < best * (1.0 - 1e-15)) {
                    best = qk;
                    bestWall = k;
                }
            }
            if (bestWall < 0) return {gamma, g0};
            g0 = wallInverse_[bestWall] * g0;
            gamma = gamma * walls_[bestWall];
        }
        throw std::runtime_error("reduce: did not terminate (domain construction bug?)");
    }

    // Reduced words up to the given length, deduplicated in PSL(2,R);
    // includes the identity. Entries with footpoint farther than maxDist
    // from i are pruned during the search.
    std::vector<GroupElement> wordBall(int length, double maxDist = 1e9) const {
        std::vector<GroupElement> out = {identityFrame()};
        std::unordered_map<std::int64_t, std::vector<int>> index;
        auto keyOf = [](const GroupElement& g) {
            const Mat2& m = g.mat();
            auto q = [](double x) { return static_cast<std::int64_t>(std::llround(x * 4096.0)); };
            std::int64_t h = 1469598103934665603LL;
            for (double v : {m.a, m.b, m.c, m.d}) {
                h ^= q(v);
                h *= 1099511628211LL;
            }
            return h;
        };
        auto tryInsert = [&](const GroupElement& g) -> bool {
            std::int64_t key = keyOf(g);
            for (int delta = -1; delta <= 1; ++delta) {
                auto it = index.find(key + delta);
                if (it == index.end()) continue;
                for (int idx : it->second)
                    if (pslDistance(out[idx], g) < 1e-9) return false;
            }
            // conservative: also scan everything (balls are small)
            for (const GroupElement& h : out)
                if (pslDistance(h, g) < 1e-9) return false;
            index[key].push_back(static_cast<int>(out.size()));
            out.push_back(g);
            return true;
        };
        std::vector<GroupElement> frontier = {identityFrame()};
        for (int l = 0; l < length; ++l) {
            std::vector<GroupElement> next;
            for (const GroupElement& g : frontier) {
                for (int k = 0; k < 8; ++k) {
                    GroupElement h = g * walls_[k];
                    if (hypDistance(footpoint(h), Uhp(0.0, 1.0)) > maxDist) continue;
                    if (tryInsert(h)) next.push_back(h);
                }
            }
            frontier = std::move(next);
        }
        return out;
    }

    // Elements that can carry bump mass across the domain walls: every gamma
    // (non-identity) whose translate of the domain comes within reach of it.
    const std::vector<GroupElement>& neighborSet() const {
        if (neighbors_.empty()) {
            double reach = 2.0 * circumradius() + 2.5;
            auto ball = wordBall(5, reach + systole());
            for (const GroupElement& g : ball) {
                if (pslDistance(g, identityFrame()) < 1e-12) continue;
                if (hypDistance(footpoint(g), Uhp(0.0, 1.0)) <= reach) neighbors_.push_back(g);
            }
        }
        return neighbors_;
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
    static constexpr int kMaxReduceSteps = 10000;

    GroupElement gens_[4];
    GroupElement walls_[8];
    GroupElement wallInverse_[8];
    Uhp wallCenter_[8];
    double wallX_[8] = {}, wallY_[8] = {};
    mutable std::vector<GroupElement> neighbors_;
};

}  // namespace hypflow
