// Miura map between JM and DWW variables and the induced map on eigenfunctions.
#pragma once

#include "dww_system.hpp"
#include "jm_system.hpp"

namespace dtforge {

/// q = u0 + u1^2/4 - u1_x/2, r = u1
inline DwwState miura_fwd(const JmState& u) {
    return {u.u0 + 0.25 * u.u1 * u.u1 - 0.5 * diff(u.u1), u.u1};
}

/// u1 = r, u0 = q - r^2/4 + r_x/2
inline JmState miura_inv(const DwwState& v) {
    return {v.q - 0.25 * v.r * v.r + 0.5 * diff(v.r), v.r};
}

/// psi1 = sigma1 + sigma2_x/2 - r sigma2/2, psi2 = sigma2
inline JmTangent eigen_map_fwd(const DwwTangent& s, const Field& r) {
    return {s.s1 + 0.5 * diff(s.s2) - 0.5 * r * s.s2, s.s2};
}

inline DwwTangent eigen_map_inv(const JmTangent& p, const Field& r) {
    return {p.p1 - 0.5 * diff(p.p2) + 0.5 * r * p.p2, p.p2};
}

template <class Series>
auto map_series(const Series& s, auto&& fn) {
    std::vector<decltype(fn(s.front()))> out;
    out.reserve(s.size());
    for (const auto& x : s) out.push_back(fn(x));
    return out;
}

}  // namespace dtforge
