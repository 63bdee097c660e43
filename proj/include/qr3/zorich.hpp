#pragma once

// The Zorich map Z : R^3 -> R^3 \ {0}, a quasiregular analogue of exp.
//
// On the beam [-1,1]^2 x R,
//     Z(x1,x2,x3) = e^{x3} h(x1,x2),
// where h maps the square [-1,1]^2 bi-Lipschitz onto the upper unit
// hemisphere:
//     h(x1,x2) = ( x1 sin(pi M/2)/r, x2 sin(pi M/2)/r, cos(pi M/2) ),
//     M = max(|x1|,|x2|),  r = sqrt(x1^2+x2^2).
// Z extends to all of R^3 by reflecting in the beam walls {x_i = odd} in the
// domain and in the plane {x3 = 0} in the range.  It has periods (4,0,0) and
// (0,4,0), is strongly automorphic under the group G of even reflection
// words, and its branch set is the set of lines {x1, x2 both odd}.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qr3/folding.hpp"
#include "qr3/vec3.hpp"

namespace qr3 {

inline constexpr double kPi = std::numbers::pi_v<double>;

// Beam coordinates (y1, y2, t): t is the log of the image radius.
// cell_i/cell_j identify the square [-1,1]^2 + (2i, 2j) containing (y1,y2).
struct BeamPoint {
    double y1 = 0.0, y2 = 0.0, t = 0.0;

    long long cell_i() const { return fold_coordinate(y1).cell; }
    long long cell_j() const { return fold_coordinate(y2).cell; }
};

// h restricted to the closed square; h(0,0) = north pole by continuity.
inline Vec3 square_to_hemisphere(double y1, double y2) {
    const double m = std::max(std::fabs(y1), std::fabs(y2));
    if (m > 1.0 + 1e-12)
        throw std::domain_error("square_to_hemisphere: max(|y1|,|y2|) > 1");
    if (m == 0.0) return {0.0, 0.0, 1.0};
    const double r = std::hypot(y1, y2);
    const double s = std::sin(kPi * m / 2.0) / r;
    return {y1 * s, y2 * s, std::cos(kPi * m / 2.0)};
}

// Inverse of h on the closed upper hemisphere.
// M is recovered as (2/pi) arccos(u3); near the pole the planar direction is
// ill-conditioned but irrelevant, so it defaults to (0,0).
inline void hemisphere_to_square(const Vec3& u, double& y1, double& y2) {
    const double n = norm(u);
    if (std::fabs(n - 1.0) > 1e-9)
        throw std::domain_error("hemisphere_to_square: input not a unit vector");
    if (u.x3 < -1e-12)
        throw std::domain_error("hemisphere_to_square: negative third component");
    if (u.x3 >= 1.0 - 1e-12) { y1 = 0.0; y2 = 0.0; return; }
    const double m = (2.0 / kPi) * std::acos(std::fmin(1.0, std::fmax(-1.0, u.x3)));
    const double p = std::hypot(u.x1, u.x2);
    const double d1 = u.x1 / p, d2 = u.x2 / p;
    const double s = m / std::max(std::fabs(d1), std::fabs(d2));
    y1 = d1 * s;
    y2 = d2 * s;
}

// Z on all of R^3.  Walls fold to M = 1, where the image lies on the equator
// plane and the two cell representatives agree.
inline Vec3 zorich(double y1, double y2, double t) {
    const FoldResult f1 = fold_coordinate(y1);
    const FoldResult f2 = fold_coordinate(y2);
    Vec3 u = square_to_hemisphere(f1.folded, f2.folded);
    if ((f1.parity() + f2.parity()) % 2 != 0) u.x3 = -u.x3;
    return std::exp(t) * u;
}

inline Vec3 zorich(const BeamPoint& p) { return zorich(p.y1, p.y2, p.t); }

// Principal inverse branch: the upper half-space maps into cell (0,0), the
// lower half-space into cell (1,0); t = log|x|.
inline BeamPoint zorich_inv(const Vec3& x) {
    const double n = norm(x);
    if (n == 0.0 || !std::isfinite(n))
        throw std::domain_error("zorich_inv: zero or non-finite input");
    const double t = std::log(n);
    const Vec3 u = x / n;
    double y1 = 0.0, y2 = 0.0;
    if (u.x3 >= 0.0) {
        hemisphere_to_square(u, y1, y2);
        return {y1, y2, t};
    }
    hemisphere_to_square({u.x1, u.x2, -u.x3}, y1, y2);
    return {2.0 - y1, y2, t};
}

// Reduce a beam point to the principal cells (0,0)/(1,0) by a G-element plus
// periods; the spatial image is unchanged.
inline BeamPoint normalize_beam(const BeamPoint& p) {
    const FoldResult f1 = fold_coordinate(p.y1);
    const FoldResult f2 = fold_coordinate(p.y2);
    if ((f1.parity() + f2.parity()) % 2 == 0)
        return {f1.folded, f2.folded, p.t};
    return {2.0 - f1.folded, f2.folded, p.t};
}

} // namespace qr3
