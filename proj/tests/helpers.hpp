#pragma once

#include <random>

#include "kgs/spectral.hpp"

namespace kgs::testing {

inline SpectralField random_field(const Grid& g, std::uint64_t seed, bool real = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SpectralField f(g, Representation::physical);
    for (auto& v : f.values()) v = real ? complex(normal(rng), 0.0) : complex(normal(rng), normal(rng));
    return f;
}

inline double relative_error(const SpectralField& a, const SpectralField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace kgs::testing
