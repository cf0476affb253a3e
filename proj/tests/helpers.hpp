// Shared fixtures for the unit tests.
#pragma once

#include <cmath>
#include <random>

#include "dtforge/verify.hpp"

namespace dtforge::testing {

inline Grid periodic_grid(int n = 256, double L = 40.0) { return make_grid(-0.5 * L, 0.5 * L, n, true); }

// random band-limited periodic field with `modes` Fourier modes
inline Field band_limited(const Grid& g, std::mt19937& rng, int modes = 6, double amp = 1.0, bool zero_mean = true) {
    std::mt19937 local(rng());
    Field f = detail::random_smooth(g, local, modes, amp);
    if (!zero_mean) f = f + 0.3 * amp;
    return f;
}

// smooth non-periodic test field with a few exponentials and trig terms
inline Field smooth_line(const Grid& g, double a, double b) {
    return Field::from_function(g, [&](double x) { return a * std::tanh(0.5 * x) + b * std::sin(0.3 * x) + 0.1 * a * b; });
}

inline Scenario default_scenario() { return Scenario{}; }

}  // namespace dtforge::testing
