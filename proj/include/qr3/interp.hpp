#pragma once

// Degree interpolation in round rings.
//
// Pieces, in the order they compose:
//
//  alpha_prime : U = [-1,1]^2 x [0,1] -> V = [-3,3]^2 x [0,3].  Piecewise
//  linear on five simplices of the fundamental prism over the triangle
//  {0 <= x1 <= x2 <= 1}, extended to U by the dihedral symmetries of the
//  square.  Identity on the base, x -> 3x on the top; the flaps (lower half
//  of the vertical faces) land in {x3 = 0}.
//
//  alpha : (R^2 x [0,1]) \ F -> R^2 x [0,3] extends alpha_prime by
//  reflections, alpha(R_{x_i=n} x) = R_{x_i=3n}(alpha x) for odd n, where F
//  is the grid of flaps (odd walls x height [0,1/2)).  alpha is continuous
//  off F and has two-sided limits on F, symmetric across a tripled plane.
//
//  g(x) = Z(alpha(d Z^{-1}(x))) interpolates p_d -> p_{3d} on A(1, e^{1/d})
//  but jumps across the flap images Z(F/d); the jump pairs are symmetric
//  across {x3 = 0}.
//
//  The burger map beta = mu o nu o mu (Moebius involution, angle tripling in
//  a wedge) is 9-quasiconformal, is the identity outside
//  X = (B((0,0,1),sqrt2) u B((0,0,-1),sqrt2)) \ B(0,1), and glues sphere
//  points symmetric across {x3 = 0}.
//
//  P = beta o g on the flap-neighbouring components W of g^{-1}(X), g
//  elsewhere: continuous on the whole ring, equal to p_d / p_{3d} on the
//  boundary spheres.  F_{R,d,c} = sigma o P o tau rescales P to A(R, Re^{1/d})
//  with boundary values c p_d and c' p_{3d}, c' = c R^{-2d}.

#include <array>
#include <cmath>
#include <stdexcept>

#include "qr3/folding.hpp"
#include "qr3/power.hpp"
#include "qr3/vec3.hpp"
#include "qr3/zorich.hpp"

namespace qr3 {

// ---------------------------------------------------------------------------
// Simplicial structure of the fundamental prism
// ---------------------------------------------------------------------------

enum class Simplex { D1 = 1, D2, D3, D4, D5 };

// Dihedral reduction of a cell point to the fundamental wedge 0 <= a1 <= a2.
struct SimplexId {
    Simplex id = Simplex::D1;
    bool swapped = false;       // reflected across {x1 = x2}
    bool neg1 = false, neg2 = false; // reflected across {x1 = 0}, {x2 = 0}
};

namespace detail {

struct WedgePoint {
    double a1, a2, x3;
    bool swapped, neg1, neg2;
};

inline WedgePoint to_wedge(double x1, double x2, double x3) {
    WedgePoint w{std::fabs(x1), std::fabs(x2), x3, false, x1 < 0.0, x2 < 0.0};
    if (w.a1 > w.a2) {
        std::swap(w.a1, w.a2);
        w.swapped = true;
    }
    return w;
}

// Membership tests against the faces, in tie-break order D1..D5; the linear
// maps agree on shared faces, so first containment wins is legal.
inline Simplex wedge_simplex(const WedgePoint& w) {
    if (w.a2 + w.x3 <= 1.0) return Simplex::D1;
    if (w.a2 + 2.0 * w.x3 <= 2.0) {
        if (w.a1 + w.a2 + 2.0 * w.x3 <= 2.0) return Simplex::D2;
        return Simplex::D3;
    }
    if (w.a1 + 2.0 * w.x3 <= 2.0) return Simplex::D4;
    return Simplex::D5;
}

} // namespace detail

inline SimplexId simplex_of(const Vec3& y) {
    if (std::fabs(y.x1) > 1.0 + 1e-9 || std::fabs(y.x2) > 1.0 + 1e-9 ||
        y.x3 < -1e-9 || y.x3 > 1.0 + 1e-9)
        throw std::domain_error("simplex_of: point outside [-1,1]^2 x [0,1]");
    const detail::WedgePoint w = detail::to_wedge(y.x1, y.x2, y.x3);
    return {detail::wedge_simplex(w), w.swapped, w.neg1, w.neg2};
}

// alpha' on the closed cell.  The five linear maps, conjugated by the
// dihedral fold:
//   D1:       (x1, x2, 3 x3)
//   D2:       (x1, 5 x2 + 4 x3 - 4, 3 - 3 x2)
//   D3:       (3 x1 + 2 x2 + 4 x3 - 4, 5 x2 + 4 x3 - 4, 3 - 3 x2)
//   D4 u D5:  (3 x1, 3 x2, 6 x3 - 3)
inline Vec3 alpha_prime(const Vec3& y) {
    if (std::fabs(y.x1) > 1.0 + 1e-9 || std::fabs(y.x2) > 1.0 + 1e-9 ||
        y.x3 < -1e-9 || y.x3 > 1.0 + 1e-9)
        throw std::domain_error("alpha_prime: point outside [-1,1]^2 x [0,1]");
    const detail::WedgePoint w = detail::to_wedge(y.x1, y.x2, y.x3);
    double o1, o2, o3;
    switch (detail::wedge_simplex(w)) {
        case Simplex::D1:
            o1 = w.a1; o2 = w.a2; o3 = 3.0 * w.x3;
            break;
        case Simplex::D2:
            o1 = w.a1; o2 = 5.0 * w.a2 + 4.0 * w.x3 - 4.0; o3 = 3.0 - 3.0 * w.a2;
            break;
        case Simplex::D3:
            o1 = 3.0 * w.a1 + 2.0 * w.a2 + 4.0 * w.x3 - 4.0;
            o2 = 5.0 * w.a2 + 4.0 * w.x3 - 4.0;
            o3 = 3.0 - 3.0 * w.a2;
            break;
        default: // D4, D5 share one formula
            o1 = 3.0 * w.a1; o2 = 3.0 * w.a2; o3 = 6.0 * w.x3 - 3.0;
            break;
    }
    if (w.swapped) std::swap(o1, o2);
    if (w.neg1) o1 = -o1;
    if (w.neg2) o2 = -o2;
    return {o1, o2, o3};
}

// ---------------------------------------------------------------------------
// Flap grid F and the extension alpha
// ---------------------------------------------------------------------------

// F = (odd walls in either horizontal coordinate) x height [0, 1/2).
struct FlapGrid {
    static bool contains(const Vec3& y) {
        if (y.x3 < 0.0 || y.x3 >= 0.5) return false;
        return dist_to_odd(y.x1) <= kWallTol || dist_to_odd(y.x2) <= kWallTol;
    }
};

inline bool on_flap(const Vec3& y) { return FlapGrid::contains(y); }

namespace detail {

// alpha without the flap guard: on a wall below flap height this evaluates
// the one-sided limit from the fold's canonical side.
inline Vec3 alpha_one_sided(const Vec3& y) {
    const FoldResult f1 = fold_coordinate(y.x1);
    const FoldResult f2 = fold_coordinate(y.x2);
    const Vec3 w = alpha_prime({f1.folded, f2.folded, y.x3});
    return {f1.unfold_scaled(w.x1, 3.0), f2.unfold_scaled(w.x2, 3.0), w.x3};
}

} // namespace detail

inline Vec3 alpha(const Vec3& y) {
    if (y.x3 < -1e-12 || y.x3 > 1.0 + 1e-12)
        throw std::domain_error("alpha: third coordinate outside [0,1]");
    if (on_flap(y))
        throw std::domain_error(
            "alpha: point lies on a flap; the map has two one-sided limits there "
            "(symmetric across a tripled odd plane)");
    return detail::alpha_one_sided(y);
}

// ---------------------------------------------------------------------------
// The discontinuous interpolation g
// ---------------------------------------------------------------------------

inline void require_in_unit_ring(long long d, const Vec3& x) {
    const double t = std::log(norm(x));
    if (t < -1e-9 || t > 1.0 / static_cast<double>(d) + 1e-9)
        throw std::domain_error("expected 1 <= |x| <= e^{1/d}");
}

inline Vec3 g_map(long long d, const Vec3& x) {
    require_odd_degree(d);
    require_in_unit_ring(d, x);
    const BeamPoint z = zorich_inv(x);
    const double dd = static_cast<double>(d);
    const Vec3 y{dd * z.y1, dd * z.y2, dd * z.t};
    if (on_flap(y))
        throw std::domain_error("g_map: point lies on a flap image Z(F/d)");
    return zorich(detail::alpha_one_sided(y)); // guarded above
}

// ---------------------------------------------------------------------------
// Burger map beta = mu o nu o mu
// ---------------------------------------------------------------------------

// Self-inverse orientation-reversing Moebius map sending {|x|>1} to {x1>0}:
//   mu(x) = (1 + 2r(x1-1), 2r x2, 2r x3),  r = |x - e1|^{-2}.
inline Vec3 mobius_mu(const Vec3& x) {
    const Vec3 v{x.x1 - 1.0, x.x2, x.x3};
    const double n2 = norm_sq(v);
    if (n2 == 0.0) throw std::domain_error("mobius_mu: pole (1,0,0)");
    const double r = 1.0 / n2;
    return {1.0 + 2.0 * r * v.x1, 2.0 * r * v.x2, 2.0 * r * v.x3};
}

// mu restricted to the unit sphere: (0, x2/(1-x1), x3/(1-x1)).
inline Vec3 mu_on_sphere(const Vec3& x) {
    const double den = 1.0 - x.x1;
    if (den == 0.0) throw std::domain_error("mu_on_sphere: pole (1,0,0)");
    return {0.0, x.x2 / den, x.x3 / den};
}

// Identity in the wedge {x1 >= |x3|}; triples angles about the x2-axis in
// the remaining wedges {0 < x1 < |x3|}.  In cylindrical coordinates
// (rho cos phi, x2, rho sin phi): phi -> 3 phi - sign(phi) pi/2.
inline Vec3 wedge_nu(const Vec3& x) {
    if (x.x1 < 0.0)
        throw std::domain_error("wedge_nu: requires x1 > 0");
    const double rho = std::hypot(x.x1, x.x3);
    if (rho == 0.0) return x; // on the x2-axis
    const double phi = std::atan2(x.x3, x.x1);
    if (std::fabs(phi) <= kPi / 4.0) return x;
    const double phi3 = 3.0 * phi - std::copysign(kPi / 2.0, phi);
    return {rho * std::cos(phi3), x.x2, rho * std::sin(phi3)};
}

// X = (B((0,0,1),sqrt2) u B((0,0,-1),sqrt2)) \ B(0,1); the subtracted ball is
// open, so the sphere |x| = 1 belongs to X wherever x3 != 0.
inline bool in_X(const Vec3& x) {
    if (norm_sq(x) < 1.0) return false;
    const double p = x.x1 * x.x1 + x.x2 * x.x2;
    const double dtop = p + (x.x3 - 1.0) * (x.x3 - 1.0);
    const double dbot = p + (x.x3 + 1.0) * (x.x3 + 1.0);
    return dtop < 2.0 || dbot < 2.0;
}

inline Vec3 burger_beta(const Vec3& x) {
    const double n = norm(x);
    if (n < 1.0 - 1e-12)
        throw std::domain_error("burger_beta: requires |x| >= 1");
    if (std::fabs(n - 1.0) <= 1e-12) {
        // Continuous extension through the on-sphere formula for mu.  On the
        // sphere, membership in X is simply x3 != 0, and the pole x1 = 1 has
        // x3 = 0, so the identity route covers it.
        if (!in_X(x)) return x;
        const Vec3 m = mu_on_sphere(x);
        return mobius_mu({-std::fabs(m.x3), m.x2, 0.0});
    }
    if (!in_X(x)) return x;
    return mobius_mu(wedge_nu(mobius_mu(x)));
}

// ---------------------------------------------------------------------------
// Component classification and the interpolation P
// ---------------------------------------------------------------------------

enum class ComponentKind { BASE, FLAP };

namespace detail {

// Reduce the scaled beam point to the fundamental prism; the component of
// g^{-1}(X) through it neighbours the inner sphere iff the point lies in a
// D1 copy.  (For points with g(x) in X the D1 copies carry exactly the blob
// around the cell spine.)
inline ComponentKind classify_beam(const Vec3& y) {
    const FoldResult f1 = fold_coordinate(y.x1);
    const FoldResult f2 = fold_coordinate(y.x2);
    const detail::WedgePoint w = detail::to_wedge(f1.folded, f2.folded, y.x3);
    return detail::wedge_simplex(w) == Simplex::D1 ? ComponentKind::BASE
                                                   : ComponentKind::FLAP;
}

} // namespace detail

// Precondition (documented, not checked): g(x) lies in X.
inline ComponentKind classify_component(long long d, const Vec3& x) {
    require_odd_degree(d);
    const BeamPoint z = zorich_inv(x);
    const double dd = static_cast<double>(d);
    return detail::classify_beam({dd * z.y1, dd * z.y2, dd * z.t});
}

// P on A(1, e^{1/d}): beta o g on the flap components W, g elsewhere.  Flap
// image points evaluate the canonical one-sided g limit; beta maps the two
// limits to the same value, so the result is the continuous extension.
inline Vec3 interpolate_P(long long d, const Vec3& x) {
    require_odd_degree(d);
    require_in_unit_ring(d, x);
    const BeamPoint z = zorich_inv(x);
    const double dd = static_cast<double>(d);
    const Vec3 y{dd * z.y1, dd * z.y2, dd * z.t};
    const Vec3 gx = zorich(detail::alpha_one_sided(y));
    if (in_X(gx) && detail::classify_beam(y) == ComponentKind::FLAP)
        return burger_beta(gx);
    return gx;
}

// ---------------------------------------------------------------------------
// Scaled interpolation F_{R,d,c} in log space
// ---------------------------------------------------------------------------

struct InterpSpec {
    long long d = 1;     // odd degree
    double log_R = 0.0;  // inner radius
    double log_c = 0.0;  // scale at the inner sphere

    InterpSpec(long long d_, double log_R_, double log_c_)
        : d(d_), log_R(log_R_), log_c(log_c_) {
        require_odd_degree(d_);
    }
    // c' = c R^{-2d}
    double log_c_prime() const { return log_c - 2.0 * static_cast<double>(d) * log_R; }
};

// F_{R,d,c} = sigma o P o tau with tau(x) = x/R, sigma(x) = c' R^{3d} x.
// Both dilations are pure shifts of the log-radius, so the spatial
// evaluation of P always happens at unit scale.
inline BeamPoint scaled_interp(const InterpSpec& spec, const BeamPoint& p) {
    const double dd = static_cast<double>(spec.d);
    const double t0 = p.t - spec.log_R;
    if (t0 < -1e-9 || t0 > 1.0 / dd + 1e-9)
        throw std::domain_error("scaled_interp: log-radius outside [log R, log R + 1/d]");
    const Vec3 x0 = zorich(p.y1, p.y2, t0);
    const BeamPoint q = zorich_inv(interpolate_P(spec.d, x0));
    // log c' + 3d log R = log c + d log R
    return normalize_beam({q.y1, q.y2, q.t + spec.log_c + dd * spec.log_R});
}

} // namespace qr3
