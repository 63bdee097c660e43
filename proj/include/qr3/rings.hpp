#pragma once

// Closed round rings A(r,s) = { r <= |x| <= s } stored by log-radius.
// mod A(r,s) = log(s/r), which is just the length of the log-interval; all
// ring combinatorics downstream live entirely in log space because the radii
// of interest grow as towers.

#include <cmath>
#include <stdexcept>

namespace qr3 {

// A radius r > 0 represented by t = log r.
struct LogRadius {
    double t = 0.0;
    double radius() const { return std::exp(t); } // overflows for tower-sized radii; log form is primary
};

struct Ring {
    LogRadius t_in, t_out;

    Ring() = default;
    Ring(double log_in, double log_out) : t_in{log_in}, t_out{log_out} {
        if (!(log_in < log_out) || !std::isfinite(log_in) || !std::isfinite(log_out))
            throw std::invalid_argument("Ring: requires finite t_in < t_out");
    }

    double midpoint_log() const { return 0.5 * (t_in.t + t_out.t); }
    bool contains_log(double t) const { return t_in.t <= t && t <= t_out.t; }
};

inline double ring_modulus(const Ring& r) { return r.t_out.t - r.t_in.t; }

} // namespace qr3
