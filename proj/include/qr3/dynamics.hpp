#pragma once

// The global quasiregular map f and its ring combinatorics.
//
// With d_n = 3^n, R_1 > 2, c_1 = 1 and
//     c_{n+1} = c_n R_n^{-2 d_n},
//     R_{n+1} = max_{|x| = 2 R_n} c_{n+1} |p_{d_{n+1}}(x)| = c_{n+1} (2R_n)^{d_{n+1}},
//     S_n = e^{1/d_n} R_n,
// f is p_{d_1} on |x| <= R_1, the scaled interpolation F_{R_n,d_n,c_n} on
// A(R_n, S_n) and c_{n+1} p_{d_{n+1}} on A(S_n, R_{n+1}).  The radii grow as
// towers (R_3 already overflows doubles for R_1 = 3), so everything here
// works on log-radii and beam coordinates, where each power branch is the
// affine map t -> d t + log c.
//
// Ring cast:  A_k = A(R_k/4, 4R_k),  B_k = A(4R_k, R_{k+1}/4),
//             V_k = A(3R_k/2, 5R_k/2),
// Gamma_{k,n} = points staying in V_{k+j} for j = 0..n (a round ring), and
// Gamma_k = lim_n Gamma_{k,n} is the sphere |x| = 2^{t_k} R_k with
// t_k = 1 + sum_{m>k} prod_{j=k+1}^m d_j^{-1},  t_{k+1} = d_{k+1}(t_k - 1).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qr3/interp.hpp"
#include "qr3/power.hpp"
#include "qr3/report.hpp"
#include "qr3/rings.hpp"
#include "qr3/zorich.hpp"

namespace qr3 {

inline constexpr double kLog2 = 0.6931471805599453094172321214581766;

struct MapParams {
    double log_R1 = 0.0;
    int n_max = 0;
    // 1-based: index 0 unused.
    std::vector<double> log_R, log_S, log_c;
    std::vector<long long> d;
};

// Valid range for exact 64-bit degrees 3^n.
inline constexpr int kMaxLevel = 39;

inline MapParams build_params(double R1, int n_max) {
    if (!(R1 > 2.0)) throw std::invalid_argument("build_params: requires R1 > 2");
    if (n_max < 2 || n_max > kMaxLevel)
        throw std::invalid_argument("build_params: n_max out of range [2," + std::to_string(kMaxLevel) + "]");
    MapParams p;
    p.log_R1 = std::log(R1);
    p.n_max = n_max;
    p.log_R.assign(n_max + 1, 0.0);
    p.log_S.assign(n_max + 1, 0.0);
    p.log_c.assign(n_max + 1, 0.0);
    p.d.assign(n_max + 1, 0);
    p.log_R[1] = p.log_R1;
    p.log_c[1] = 0.0;
    p.d[1] = 3;
    for (int n = 1; n < n_max; ++n) {
        p.log_S[n] = p.log_R[n] + 1.0 / static_cast<double>(p.d[n]);
        p.d[n + 1] = 3 * p.d[n];
        p.log_c[n + 1] = p.log_c[n] - 2.0 * static_cast<double>(p.d[n]) * p.log_R[n];
        p.log_R[n + 1] = p.log_c[n + 1] + static_cast<double>(p.d[n + 1]) * (kLog2 + p.log_R[n]);
        if (!std::isfinite(p.log_R[n + 1]) || !std::isfinite(p.log_c[n + 1]))
            throw std::overflow_error("build_params: log-radius overflow; reduce n_max");
        if (p.log_R[n + 1] <= p.log_R[n])
            throw std::runtime_error("build_params: radii failed to increase");
    }
    p.log_S[n_max] = p.log_R[n_max] + 1.0 / static_cast<double>(p.d[n_max]);
    return p;
}

// Lemma-4.2 closed form: log R_{n+1} = d_{n+1} log2 + d_n log R_n - sum_{j<n} 2 d_j log R_j.
inline double closed_form_log_R(const MapParams& p, int n) {
    double s = static_cast<double>(p.d[n + 1]) * kLog2 + static_cast<double>(p.d[n]) * p.log_R[n];
    for (int j = 1; j < n; ++j) s -= 2.0 * static_cast<double>(p.d[j]) * p.log_R[j];
    return s;
}

enum class Regime { INNER, INTERP, POWER };

struct RegimeTag {
    Regime kind = Regime::INNER;
    int level = 0; // INTERP(n) acts on A(R_n,S_n); POWER(n) is c_n p_{d_n} on A(S_{n-1},R_n)
};

struct OrbitRecord {
    int step = 0;
    BeamPoint point;
    RegimeTag regime;
};

// Radius regimes partition [-inf, log R_{n_max}]; beyond that the
// construction must be extended (larger n_max).
inline bool regime_of(const MapParams& p, double t, RegimeTag& tag) {
    if (t <= p.log_R[1]) {
        tag = {Regime::INNER, 1};
        return true;
    }
    for (int n = 1; n <= p.n_max; ++n) {
        if (t <= p.log_S[n]) {
            tag = {Regime::INTERP, n};
            return true;
        }
        if (n < p.n_max && t <= p.log_R[n + 1]) {
            tag = {Regime::POWER, n + 1};
            return true;
        }
    }
    return false;
}

inline BeamPoint eval_f(const MapParams& p, const BeamPoint& x, RegimeTag* tag_out = nullptr) {
    RegimeTag tag;
    if (!regime_of(p, x.t, tag))
        throw std::out_of_range("eval_f: log-radius beyond built range; extend n_max");
    if (tag_out) *tag_out = tag;
    switch (tag.kind) {
        case Regime::INNER:
            return scaled_power_log(ScaledPower{3, 0.0}, x);
        case Regime::INTERP: {
            const int n = tag.level;
            return scaled_interp(InterpSpec{p.d[n], p.log_R[n], p.log_c[n]}, x);
        }
        default: {
            const int n = tag.level;
            return scaled_power_log(ScaledPower{p.d[n], p.log_c[n]}, x);
        }
    }
}

struct RingCast {
    Ring A, B, V;
};

inline RingCast rings(const MapParams& p, int k) {
    if (k < 1 || k >= p.n_max) throw std::invalid_argument("rings: need 1 <= k < n_max");
    const double log4 = 2.0 * kLog2;
    return {
        Ring(p.log_R[k] - log4, p.log_R[k] + log4),
        Ring(p.log_R[k] + log4, p.log_R[k + 1] - log4),
        Ring(p.log_R[k] + std::log(1.5), p.log_R[k] + std::log(2.5)),
    };
}

// |f| on the sphere of log-radius t, evaluated through the dispatcher on an
// axis point (power branches are radially symmetric).
inline double log_abs_f(const MapParams& p, double t) {
    return eval_f(p, BeamPoint{0.0, 0.0, t}).t;
}

// Exact log-space identities from the proofs of Lemmas 4.4-4.6, plus the
// inclusion inequalities that make B(0,4R_k) subset f(A_k), f(B_k) subset
// B_{k+1} and A_{k+1} subset f(V_k).
inline VerificationReport check_coverings(const MapParams& p, int k, double tol = 1e-10) {
    if (k < 1 || k + 2 > p.n_max)
        throw std::invalid_argument("check_coverings: need k + 2 <= n_max");
    VerificationReport rep("coverings k=" + std::to_string(k));
    const double log4 = 2.0 * kLog2;
    const double dk1 = static_cast<double>(p.d[k + 1]);

    const double at_4Rk = log_abs_f(p, p.log_R[k] + log4);
    rep.check_log("f at 4R_k = 2^{d_{k+1}} R_{k+1}", at_4Rk, dk1 * kLog2 + p.log_R[k + 1], tol);
    rep.check_true("2^{d_{k+1}} R_{k+1} > 4 R_{k+1}", at_4Rk > p.log_R[k + 1] + log4);

    const double at_quarter = log_abs_f(p, p.log_R[k + 1] - log4);
    rep.check_log("f at R_{k+1}/4 = 2^{-5d_{k+1}} R_{k+2}", at_quarter,
                  p.log_R[k + 2] - 5.0 * dk1 * kLog2, tol);
    rep.check_true("2^{-5d_{k+1}} R_{k+2} < R_{k+2}/4", at_quarter < p.log_R[k + 2] - log4);

    const double at_32 = log_abs_f(p, p.log_R[k] + std::log(1.5));
    rep.check_log("f at 3R_k/2 = (3/4)^{d_{k+1}} R_{k+1}", at_32,
                  dk1 * std::log(0.75) + p.log_R[k + 1], tol);
    rep.check_true("inner V_k image inside B_k (low)", at_32 > p.log_R[k] + log4);
    rep.check_true("inner V_k image inside B_k (high)", at_32 < p.log_R[k + 1] - log4);

    const double at_52 = log_abs_f(p, p.log_R[k] + std::log(2.5));
    rep.check_log("f at 5R_k/2 = (5/4)^{d_{k+1}} R_{k+1}", at_52,
                  dk1 * std::log(1.25) + p.log_R[k + 1], tol);
    rep.check_true("outer V_k image inside B_{k+1} (low)", at_52 > p.log_R[k + 1] + log4);
    rep.check_true("outer V_k image inside B_{k+1} (high)", at_52 < p.log_R[k + 2] - log4);

    // Lemma 4.4 chain: c_k R_k^{d_k} e^3 = 2^{-d_{k+1}} R_{k+1} e^3 > 4 R_k.
    const double ball = p.log_c[k] + static_cast<double>(p.d[k]) * p.log_R[k] + 3.0;
    rep.check_log("c_k R_k^{d_k} e^3 = 2^{-d_{k+1}} R_{k+1} e^3", ball,
                  p.log_R[k + 1] - dk1 * kLog2 + 3.0, tol);
    rep.check_true("f(A_k) covers B(0,4R_k)", ball > p.log_R[k] + log4);

    rep.check_true("B_k nonempty", p.log_R[k] + log4 < p.log_R[k + 1] - log4);
    return rep;
}

// Gamma_{k,n} by pulling V_{k+n} back through the n power branches; each
// step divides the log-interval by d_{k+j}, so
// mod Gamma_{k,n} = (prod 1/d_{k+j}) log(5/3) exactly in log arithmetic.
inline Ring gamma_ring(const MapParams& p, int k, int n) {
    if (k < 1 || n < 0 || k + n + 1 > p.n_max)
        throw std::invalid_argument("gamma_ring: need k + n + 1 <= n_max");
    double lo = p.log_R[k + n] + std::log(1.5);
    double hi = p.log_R[k + n] + std::log(2.5);
    for (int j = n; j >= 1; --j) {
        const double dj = static_cast<double>(p.d[k + j]);
        lo = (lo - p.log_c[k + j]) / dj;
        hi = (hi - p.log_c[k + j]) / dj;
    }
    return Ring(lo, hi);
}

// t_k = 1 + sum_{m=k+1}^inf prod_{j=k+1}^m d_j^{-1}, summed to convergence.
inline double gamma_t_series(int k) {
    double sum = 1.0, term = 1.0;
    for (int m = k + 1; m < k + 64; ++m) {
        term /= std::pow(3.0, m);
        sum += term;
        if (term < 1e-16) break;
    }
    return sum;
}

inline LogRadius gamma_sphere(const MapParams& p, int k) {
    if (k < 1 || k >= p.n_max) throw std::invalid_argument("gamma_sphere: need 1 <= k < n_max");
    return {p.log_R[k] + gamma_t_series(k) * kLog2};
}

// Blow-up certificate (Lemma 4.7).  In beam coordinates the n-fold
// composition over Gamma_{k,n} is the affine map
//     L_n(y) = (prod_{j=1..n} d_{k+j}) y + (0,0,h_n),
// so an eps-box needs the smallest n with 2 eps prod d_{k+j} >= 4 to wrap a
// full horizontal period, and its vertical interval maps exactly onto the
// log-interval of V_{k+n}.
struct BlowupResult {
    int n_min = 0;                   // first level with full horizontal wrap
    double log_expansion = 0.0;      // log prod d_{k+j}, j = 1..n_min
    double horizontal_side_log = 0.0;// log(2 eps) + log_expansion
    double vertical_err = 0.0;       // image interval vs V_{k+n} interval
    bool x0_inside = false;          // x0 lies in Gamma_{k,n_min}
    bool wraps = false;
    bool vertical_exact = false;
};

inline BlowupResult blowup_check(const MapParams& p, int k, const BeamPoint& x0,
                                 double eps, int n_limit, double tol = 1e-10) {
    if (eps <= 0.0) throw std::invalid_argument("blowup_check: eps > 0 required");
    BlowupResult res;
    double log_D = 0.0;
    int n = 0;
    while (true) {
        ++n;
        if (k + n + 1 > p.n_max || n > n_limit)
            throw std::out_of_range("blowup_check: level range exhausted; extend n_max");
        log_D += std::log(static_cast<double>(p.d[k + n]));
        if (std::log(2.0 * eps) + log_D >= std::log(4.0)) break;
    }
    res.n_min = n;
    res.log_expansion = log_D;
    res.horizontal_side_log = std::log(2.0 * eps) + log_D;
    res.wraps = res.horizontal_side_log >= std::log(4.0);

    const Ring gkn = gamma_ring(p, k, n);
    res.x0_inside = gkn.contains_log(x0.t);
    // forward image of [a_n, b_n] under the affine chain
    double lo = gkn.t_in.t, hi = gkn.t_out.t;
    for (int j = 1; j <= n; ++j) {
        const double dj = static_cast<double>(p.d[k + j]);
        lo = dj * lo + p.log_c[k + j];
        hi = dj * hi + p.log_c[k + j];
    }
    const double vlo = p.log_R[k + n] + std::log(1.5);
    const double vhi = p.log_R[k + n] + std::log(2.5);
    res.vertical_err = std::max(std::fabs(lo - vlo) / std::max(1.0, std::fabs(vlo)),
                                std::fabs(hi - vhi) / std::max(1.0, std::fabs(vhi)));
    res.vertical_exact = res.vertical_err <= tol;
    return res;
}

struct EscapeResult {
    enum class Status { ESCAPED, NON_ESCAPED, REGIME_EXHAUSTED } status;
    int steps = 0;
};

inline EscapeResult escape_time(const MapParams& p, const BeamPoint& start,
                                double t_threshold, int max_iter) {
    BeamPoint q = normalize_beam(start);
    for (int i = 0; i < max_iter; ++i) {
        if (q.t > t_threshold) return {EscapeResult::Status::ESCAPED, i};
        RegimeTag tag;
        if (!regime_of(p, q.t, tag)) return {EscapeResult::Status::REGIME_EXHAUSTED, i};
        q = eval_f(p, q);
    }
    return {EscapeResult::Status::NON_ESCAPED, max_iter};
}

inline std::vector<OrbitRecord> orbit(const MapParams& p, const BeamPoint& start, int steps) {
    std::vector<OrbitRecord> out;
    BeamPoint q = normalize_beam(start);
    RegimeTag tag;
    if (!regime_of(p, q.t, tag)) throw std::out_of_range("orbit: start beyond built range");
    out.push_back({0, q, tag});
    for (int i = 1; i <= steps; ++i) {
        if (!regime_of(p, q.t, tag)) break;
        q = eval_f(p, q, &tag);
        out.push_back({i, q, tag});
    }
    return out;
}

} // namespace qr3
