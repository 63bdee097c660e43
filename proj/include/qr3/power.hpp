#pragma once

// Power-type maps p_d: the unique uniformly quasiregular solutions of the
// Schroeder equation p_d o Z = Z o (d .) for odd d >= 1.  Oddness is what
// makes d . R_{x_i=n} = R_{x_i=dn} . (d .) hold on the reflection group, so
// p_d is well defined independently of the inverse branch.  |p_d(x)| = |x|^d.
//
// The scaled map c p_d acts on beam coordinates as the affine map
//     (y1, y2, t) -> (d y1, d y2, d t + log c),
// which is the form every huge-radius computation uses.

#include <stdexcept>

#include "qr3/vec3.hpp"
#include "qr3/zorich.hpp"

namespace qr3 {

inline void require_odd_degree(long long d) {
    if (d < 1 || d % 2 == 0)
        throw std::invalid_argument("power map: degree must be odd and >= 1");
}

inline Vec3 power_map(long long d, const Vec3& x) {
    require_odd_degree(d);
    const BeamPoint z = zorich_inv(x);
    return zorich(d * z.y1, d * z.y2, d * z.t);
}

struct ScaledPower {
    long long d = 1;     // odd degree
    double log_c = 0.0;  // log of the scale factor

    ScaledPower(long long d_, double log_c_) : d(d_), log_c(log_c_) { require_odd_degree(d_); }
};

inline BeamPoint scaled_power_log(const ScaledPower& sp, const BeamPoint& p) {
    const double dd = static_cast<double>(sp.d);
    return normalize_beam({dd * p.y1, dd * p.y2, dd * p.t + sp.log_c});
}

} // namespace qr3
