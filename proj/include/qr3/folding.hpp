#pragma once

// Interval folding for the group generated by reflections in the planes
// {y = n}, n odd.  The group is infinite dihedral: every element is either a
// translation by a multiple of 4 (even word) or a single reflection about an
// odd integer (odd word).  fold_coordinate reduces a real to the fundamental
// interval [-1,1] and records the group element in that normal form, so the
// input can be reconstructed exactly.

#include <cmath>
#include <cstdint>

namespace qr3 {

inline constexpr double kWallTol = 1e-12;

// Distance from y to the nearest odd integer.
inline double dist_to_odd(double y) {
    return std::fabs(std::remainder(y - 1.0, 2.0));
}

struct FoldResult {
    double folded = 0.0;     // representative in [-1, 1]
    bool reflected = false;  // odd word: input = 2*plane - folded
    long long plane = 0;     // reflection plane (odd), valid when reflected
    long long shift4 = 0;    // even word: input = folded + 4*shift4
    long long cell = 0;      // input lies in [2*cell - 1, 2*cell + 1)
    bool on_wall = false;    // input within kWallTol of an odd integer

    int parity() const { return reflected ? 1 : 0; }

    // Re-apply the recorded group element.
    double unfold(double v) const {
        return reflected ? 2.0 * static_cast<double>(plane) - v
                         : v + 4.0 * static_cast<double>(shift4);
    }

    // Same group element with all reflection planes scaled by s (odd).
    double unfold_scaled(double v, double s) const {
        return reflected ? 2.0 * s * static_cast<double>(plane) - v
                         : v + 4.0 * s * static_cast<double>(shift4);
    }
};

inline FoldResult fold_coordinate(double y) {
    FoldResult r;
    const double n_real = std::floor((y + 1.0) / 2.0);
    const long long n = static_cast<long long>(n_real);
    const double u = y - 2.0 * n_real; // in [-1, 1)
    r.cell = n;
    if (n % 2 == 0) {
        r.folded = u;
        r.reflected = false;
        r.shift4 = n / 2;
    } else {
        r.folded = -u;
        r.reflected = true;
        r.plane = n;
    }
    r.on_wall = (1.0 - std::fabs(r.folded)) <= kWallTol || dist_to_odd(y) <= kWallTol;
    return r;
}

} // namespace qr3
