#pragma once

// Growth-designed variants of the interpolating construction.
//
// Free parameters lambda_n >= 1:
//     R_1 = R,  S_n = e^{1/d_n} R_n,  R_{n+1} = lambda_n S_n,
//     C_1 = R_1^{-6},  C_{n+1} = C_n R_{n+1}^{-2 d_{n+1}},
// with f = p_3 on B(0,R_1), F_{R_n,d_n,C_{n-1}} on A(R_n,S_n) (C_0 := 1) and
// C_n p_{d_{n+1}} on A(S_n, R_{n+1}).  Closed forms:
//     R_{n+1} = (prod lambda_j) exp(sum_{j<=n} 1/d_j) R,
//     S_{n+1} = (prod lambda_j) exp(sum_{j<=n+1} 1/d_j) R,
//     M(R_{n+1}, f) = (prod lambda_j^{d_{j+1}}) e^{3n} R^3,
//     M(S_{n+1}, f) = (prod lambda_j^{d_{j+1}}) e^{3(n+1)} R^3.
// The double-log order log log M(r) / log r can be driven arbitrarily high
// by stalling (lambda = 1 blocks: bounded denominator, unbounded numerator)
// and arbitrarily low by one large lambda (h(y) -> 0 as y -> infinity).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qr3/interp.hpp"
#include "qr3/power.hpp"
#include "qr3/zorich.hpp"

namespace qr3 {

inline double pow3(int n) { return std::pow(3.0, n); } // d_n as double; underflow/overflow saturate

struct GrowthParams {
    double log_R = 0.0;              // base radius R > 1
    std::vector<double> lambda_log;  // lambda_log[n] for n = 1..N (index 0 unused)
    std::vector<double> log_R_, log_S_, log_C_; // 1-based; log_C_ finite up to c_levels
    int levels = 0;                  // radii built for n = 1..levels
    int c_levels = 0;                // log_C_ finite for n = 1..c_levels

    double log_radius(int n) const { return log_R_.at(static_cast<std::size_t>(n)); }
};

inline GrowthParams build_growth(double R, const std::vector<double>& lambda_log) {
    if (!(R > 1.0)) throw std::invalid_argument("build_growth: requires R > 1");
    for (double l : lambda_log)
        if (!(l >= 0.0)) throw std::invalid_argument("build_growth: requires lambda_n >= 1");
    const int N = static_cast<int>(lambda_log.size());
    GrowthParams g;
    g.log_R = std::log(R);
    g.lambda_log.assign(static_cast<std::size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n) g.lambda_log[static_cast<std::size_t>(n)] = lambda_log[static_cast<std::size_t>(n - 1)];
    g.levels = N + 1;
    g.log_R_.assign(static_cast<std::size_t>(g.levels) + 1, 0.0);
    g.log_S_.assign(static_cast<std::size_t>(g.levels) + 1, 0.0);
    g.log_C_.assign(static_cast<std::size_t>(g.levels) + 1, 0.0);
    g.log_R_[1] = g.log_R;
    g.log_S_[1] = g.log_R + 1.0 / 3.0;
    g.log_C_[1] = -6.0 * g.log_R;
    g.c_levels = 1;
    bool c_ok = true;
    for (int n = 1; n < g.levels; ++n) {
        g.log_R_[static_cast<std::size_t>(n + 1)] = g.lambda_log[static_cast<std::size_t>(n)] + g.log_S_[static_cast<std::size_t>(n)];
        g.log_S_[static_cast<std::size_t>(n + 1)] = g.log_R_[static_cast<std::size_t>(n + 1)] + 1.0 / pow3(n + 1);
        const double next_c = g.log_C_[static_cast<std::size_t>(n)] -
                              2.0 * pow3(n + 1) * g.log_R_[static_cast<std::size_t>(n + 1)];
        g.log_C_[static_cast<std::size_t>(n + 1)] = next_c;
        if (c_ok && std::isfinite(next_c)) {
            g.c_levels = n + 1;
        } else {
            c_ok = false; // degrees beyond double range; closed forms below stay valid
        }
    }
    return g;
}

// Lemma-5.1 closed forms for log M at the grid radii R_{n+1} and S_{n+1}.
struct MaxModulus {
    double at_R = 0.0, at_S = 0.0;
};

inline MaxModulus max_modulus_closed_form(const GrowthParams& g, int n) {
    if (n < 0 || n + 1 > g.levels)
        throw std::invalid_argument("max_modulus_closed_form: n + 1 beyond built range");
    double s = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double l = g.lambda_log[static_cast<std::size_t>(j)];
        if (l != 0.0) s += pow3(j + 1) * l;
    }
    const double base = s + 3.0 * g.log_R;
    return {base + 3.0 * n, base + 3.0 * (n + 1)};
}

// log R_{n+1} via Lemma 5.1 (independent of the recursion).
inline double closed_form_log_radius(const GrowthParams& g, int n) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += g.lambda_log[static_cast<std::size_t>(j)];
    double e = 0.0;
    for (int j = 1; j <= n; ++j) e += 1.0 / pow3(j);
    return s + e + g.log_R;
}

// order at the grid radius R_{n+1}: log log M(R_{n+1}) / log R_{n+1}.
inline double growth_order(const GrowthParams& g, int n) {
    const double logM = max_modulus_closed_form(g, n).at_R;
    if (!(logM > 0.0)) throw std::domain_error("growth_order: log M <= 0, order undefined");
    return std::log(logM) / g.log_radius(n + 1);
}

struct GrowthPoint {
    double log_r = 0.0;
    double log_log_M = 0.0;
    double order = 0.0;
    int level = 0; // r = R_{level}
};

struct GrowthDesign {
    std::vector<double> lambda_log; // lambda_log[j] for j = 1.. (0-based storage)
    std::vector<GrowthPoint> witnesses;
};

namespace detail {

inline GrowthPoint witness_at(const GrowthParams& g, int n) {
    GrowthPoint w;
    w.level = n + 1;
    w.log_r = g.log_radius(n + 1);
    const double logM = max_modulus_closed_form(g, n).at_R;
    w.log_log_M = std::log(logM);
    w.order = w.log_log_M / w.log_r;
    return w;
}

} // namespace detail

// Fast growth (Theorem 5.2, first part).  T is given by log T_k, strictly
// increasing with gaps > 1; eta_k arbitrary.  Anchored at the first grid
// index with R_n < T_k/e, lambda = 1 blocks are inserted until the order
// exceeds eta_k; the stalled radii stay below T_k because the leftover
// exponent sum_{j>=n} 1/d_j < 1/2.
inline GrowthDesign design_fast_growth(double R, const std::vector<double>& log_T,
                                       const std::vector<double>& eta, int n_cap = 20000) {
    if (log_T.size() != eta.size())
        throw std::invalid_argument("design_fast_growth: T and eta sizes differ");
    for (std::size_t k = 1; k < log_T.size(); ++k)
        if (!(log_T[k] - log_T[k - 1] > 1.0))
            throw std::invalid_argument("design_fast_growth: requires T_{k+1}/T_k > e");
    GrowthDesign out;
    std::vector<double> lam; // lambda_log, 0-based
    for (std::size_t k = 0; k < log_T.size(); ++k) {
        GrowthParams g = build_growth(R, lam);
        int n = static_cast<int>(lam.size()); // current endpoint is R_{n+1}
        if (!(g.log_radius(n + 1) < log_T[k] - 1.0))
            throw std::runtime_error("design_fast_growth: anchor R_n < T_k/e unavailable");
        while (growth_order(g, n) < eta[k]) {
            lam.push_back(0.0); // lambda = 1
            if (static_cast<int>(lam.size()) > n_cap)
                throw std::out_of_range("design_fast_growth: n_cap exhausted; increase it");
            g = build_growth(R, lam);
            n = static_cast<int>(lam.size());
        }
        GrowthPoint w = detail::witness_at(g, n);
        if (!(w.log_r < log_T[k]))
            throw std::runtime_error("design_fast_growth: witness exceeded T_k");
        out.witnesses.push_back(w);
    }
    out.lambda_log = lam;
    return out;
}

// Slow growth (Theorem 5.2, second part).  For each eps_k one lambda = e^y
// is appended, y solved by doubling then bisection to 1e-9 so that the order
// at the new endpoint drops to <= eps_k; h(y) -> 0 as y -> infinity
// guarantees solvability.
inline GrowthDesign design_slow_growth(double R, const std::vector<double>& eps, int n_cap = 200) {
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0)) throw std::invalid_argument("design_slow_growth: eps > 0 required");
        if (k > 0 && !(eps[k] < eps[k - 1]))
            throw std::invalid_argument("design_slow_growth: eps must decrease");
    }
    GrowthDesign out;
    std::vector<double> lam;
    for (double target : eps) {
        auto order_with = [&](double y) {
            std::vector<double> trial = lam;
            trial.push_back(y);
            GrowthParams g = build_growth(R, trial);
            return growth_order(g, static_cast<int>(trial.size()));
        };
        double hi = 1.0;
        int guard = 0;
        while (order_with(hi) > target) {
            hi *= 2.0;
            if (++guard > 200) throw std::runtime_error("design_slow_growth: doubling failed");
        }
        double lo = hi > 1.0 ? hi / 2.0 : 0.0;
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            if (order_with(mid) <= target) hi = mid; else lo = mid;
        }
        lam.push_back(hi);
        if (static_cast<int>(lam.size()) > n_cap)
            throw std::out_of_range("design_slow_growth: n_cap exhausted");
        GrowthParams g = build_growth(R, lam);
        out.witnesses.push_back(detail::witness_at(g, static_cast<int>(lam.size())));
    }
    out.lambda_log = lam;
    return out;
}

// Dispatcher with the section-5 sequences: p_3 inside R_1, F_{R_n,d_n,C_{n-1}}
// on A(R_n,S_n), C_n p_{d_{n+1}} on A(S_n,R_{n+1}).
inline BeamPoint eval_growth_map(const GrowthParams& g, const BeamPoint& x) {
    const double t = x.t;
    if (t <= g.log_R_[1]) return scaled_power_log(ScaledPower{3, 0.0}, x);
    for (int n = 1; n <= g.levels && n < 39; ++n) { // 3^{n+1} must fit in 64 bits
        if (t <= g.log_S_[static_cast<std::size_t>(n)]) {
            if (n > 1 && n - 1 > g.c_levels)
                throw std::out_of_range("eval_growth_map: C_n beyond double range");
            const double log_c = (n == 1) ? 0.0 : g.log_C_[static_cast<std::size_t>(n - 1)];
            const long long dn = static_cast<long long>(pow3(n));
            return scaled_interp(InterpSpec{dn, g.log_R_[static_cast<std::size_t>(n)], log_c}, x);
        }
        if (n < g.levels && t <= g.log_R_[static_cast<std::size_t>(n + 1)]) {
            if (n > g.c_levels) throw std::out_of_range("eval_growth_map: C_n beyond double range");
            const long long dn1 = static_cast<long long>(pow3(n + 1));
            return scaled_power_log(ScaledPower{dn1, g.log_C_[static_cast<std::size_t>(n)]}, x);
        }
    }
    throw std::out_of_range("eval_growth_map: log-radius beyond built range");
}

} // namespace qr3
