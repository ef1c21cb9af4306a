#ifndef FLUXGRAPH_RNG_HPP
#define FLUXGRAPH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "fluxgraph/types.hpp"

namespace fluxgraph {

// Deterministic sampling helper.  All variates are derived from the raw
// mt19937_64 stream (whose output is fully specified by the standard), never
// from std::*_distribution, so identical seeds give identical samples on
// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0,1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Log-uniform radius in [lo, hi], lo > 0.
    double log_radius(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Standard normal via Box-Muller on the deterministic uniform stream.
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        Mat m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = gaussian();
        return m;
    }

    // Random direction of unit Frobenius norm.
    Mat unit_direction(Eigen::Index rows, Eigen::Index cols) {
        Mat m = gaussian_matrix(rows, cols);
        double n = m.norm();
        while (n < 1e-300) {
            m = gaussian_matrix(rows, cols);
            n = m.norm();
        }
        return m / n;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace fluxgraph

#endif
