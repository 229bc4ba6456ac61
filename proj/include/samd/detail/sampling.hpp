#pragma once

#include <random>

namespace samd {

template <class Rng>
Vector sample_feasible(const MirrorMap& map, Rng& rng) {
    const int n = map.dim();
    Vector x(n);
    if (map.is_entropic()) {
        std::exponential_distribution<double> expo(1.0);
        for (int i = 0; i < n; ++i) {
            x[i] = expo(rng);
        }
        x /= x.sum();
    } else {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            x[i] = normal(rng);
        }
    }
    return x;
}

}  // namespace samd
