#pragma once

// Verification suites behind `qr3 verify`.  Each suite bundles the module
// invariants into a VerificationReport; the CLI serializes them and exits
// nonzero when a check fails.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qr3/dynamics.hpp"
#include "qr3/growth.hpp"
#include "qr3/interp.hpp"
#include "qr3/power.hpp"
#include "qr3/report.hpp"
#include "qr3/rng.hpp"
#include "qr3/verify.hpp"
#include "qr3/zorich.hpp"

namespace qr3 {

// ---------------------------------------------------------------------------
// zorich + power
// ---------------------------------------------------------------------------

inline VerificationReport suite_zorich(std::uint64_t seed, int n_samples) {
    VerificationReport rep("zorich");
    Rng rng(seed);

    double worst_rt = 0.0, worst_mod = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double t = rng.uniform(std::log(1e-3), std::log(1e3));
        const Vec3 x = std::exp(t) * rng.unit_vector();
        const BeamPoint y = zorich_inv(x);
        worst_rt = std::fmax(worst_rt, dist(zorich(y), x) / norm(x));
        worst_mod = std::fmax(worst_mod, std::fabs(norm(zorich(y)) / std::exp(y.t) - 1.0));
    }
    rep.check_upper("roundtrip Z(Z^-1(x)) rel error", worst_rt, 1e-10);
    rep.check_upper("|Z(y)| = e^t rel error", worst_mod, 1e-12);

    // strong automorphy: even reflection words fix Z
    double worst_auto = 0.0;
    for (int i = 0; i < n_samples / 10; ++i) {
        const double y1 = rng.uniform(-9.0, 9.0), y2 = rng.uniform(-9.0, 9.0);
        const double t = rng.uniform(-1.0, 1.0);
        const long long p1 = 2 * static_cast<long long>(rng.uniform(-3.0, 4.0)) + 1;
        const long long p2 = 2 * static_cast<long long>(rng.uniform(-3.0, 4.0)) + 1;
        // R = R_{x1=p1} o R_{x2=p2} (an even word in G)
        const Vec3 a = zorich(y1, y2, t);
        const Vec3 b = zorich(2.0 * p1 - y1, 2.0 * p2 - y2, t);
        worst_auto = std::fmax(worst_auto, dist(a, b) / norm(a));
        const Vec3 c = zorich(y1 + 4.0, y2, t); // period (4,0,0)
        worst_auto = std::fmax(worst_auto, dist(a, c) / norm(a));
    }
    rep.check_upper("strong automorphy Z o R = Z", worst_auto, 1e-12);

    // branch set: the FD Jacobian degenerates only near both-odd lines
    const auto zmap = [](const Vec3& v) { return zorich(v.x1, v.x2, v.x3); };
    const DilatationSample on_branch = dilatation_at(zmap, {1.0 + 1e-9, 1.0, 0.3}, 1e-6);
    const DilatationSample interior = dilatation_at(zmap, {0.3, 0.5, 0.3}, 1e-6);
    rep.check_true("Jacobian degenerate near branch line", on_branch.degenerate || on_branch.s3 < 1e-2 * on_branch.s1);
    rep.check_true("Jacobian non-degenerate in beam interior", !interior.degenerate && interior.s3 > 1e-2 * interior.s1);

    // Schroeder identity, homogeneity, |p_d| = |x|^d, branch independence
    double worst_schroeder = 0.0, worst_hom = 0.0, worst_mod_p = 0.0, worst_branch = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const long long d = (i % 2 == 0) ? 3 : 9;
        const double y1 = rng.uniform(-2.0, 2.0), y2 = rng.uniform(-2.0, 2.0);
        const double t = rng.uniform(-0.5, 0.5);
        const Vec3 x = zorich(y1, y2, t);
        const Vec3 lhs = power_map(d, x);
        const Vec3 rhs = zorich(d * y1, d * y2, d * t);
        worst_schroeder = std::fmax(worst_schroeder, dist(lhs, rhs) / norm(rhs));
        const double lam = rng.uniform(0.5, 2.0);
        const Vec3 hom = power_map(d, lam * x);
        worst_hom = std::fmax(worst_hom, dist(hom, std::pow(lam, static_cast<double>(d)) * lhs) / norm(hom));
        worst_mod_p = std::fmax(worst_mod_p, std::fabs(norm(lhs) / std::pow(norm(x), static_cast<double>(d)) - 1.0));
        // alternate inverse branch through the even word (2-y1, 2-y2)
        const BeamPoint z = zorich_inv(x);
        const Vec3 alt = zorich(d * (2.0 - z.y1), d * (2.0 - z.y2), d * z.t);
        worst_branch = std::fmax(worst_branch, dist(alt, lhs) / norm(lhs));
    }
    rep.check_upper("Schroeder p_d(Z(y)) = Z(dy) rel error", worst_schroeder, 1e-10);
    rep.check_upper("homogeneity p_d(lx) = l^d p_d(x) rel error", worst_hom, 1e-10);
    rep.check_upper("|p_d(x)| = |x|^d rel error", worst_mod_p, 1e-12);
    rep.check_upper("inverse-branch independence rel error", worst_branch, 1e-10);

    // log form vs spatial composition at moderate radii
    double worst_log = 0.0;
    for (int i = 0; i < n_samples / 10; ++i) {
        const double y1 = rng.uniform(-1.0, 3.0), y2 = rng.uniform(-1.0, 1.0);
        const double t = rng.uniform(-2.0, 2.0);
        const double log_c = rng.uniform(-1.0, 1.0);
        const BeamPoint q = scaled_power_log(ScaledPower{3, log_c}, BeamPoint{y1, y2, t});
        const Vec3 spatial = std::exp(log_c) * power_map(3, zorich(y1, y2, t));
        worst_log = std::fmax(worst_log, dist(zorich(q), spatial) / norm(spatial));
    }
    rep.check_upper("scaled_power_log vs spatial c*p_d", worst_log, 1e-10);
    return rep;
}

// ---------------------------------------------------------------------------
// interp
// ---------------------------------------------------------------------------

inline double boundary_agreement_sup(long long d, int n_samples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const Vec3 u = rng.unit_vector();
        const Vec3 inner = interpolate_P(d, u);
        worst = std::fmax(worst, dist(inner, power_map(d, u)) / std::fmax(1.0, norm(inner)));
        const Vec3 xo = std::exp(1.0 / static_cast<double>(d)) * u;
        const Vec3 outer = interpolate_P(d, xo);
        worst = std::fmax(worst, dist(outer, power_map(3 * d, xo)) / norm(outer));
    }
    return worst;
}

inline VerificationReport suite_interp(const std::vector<long long>& degrees,
                                       std::uint64_t seed, int n_samples) {
    VerificationReport rep("interp");
    Rng rng(seed);

    for (long long d : degrees)
        rep.check_upper("P boundary agreement sup rel error, d=" + std::to_string(d),
                        boundary_agreement_sup(d, n_samples, seed + static_cast<std::uint64_t>(d)), 1e-8);

    // Lemma 3.2(i)/(ii): top is x -> 3x, base squares translate by (4n, 4m)
    double worst_top = 0.0, worst_base = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform(-9.0, 9.0), v = rng.uniform(-9.0, 9.0);
        if (dist_to_odd(u) < 1e-6 || dist_to_odd(v) < 1e-6) continue;
        const Vec3 top = alpha({u, v, 1.0});
        worst_top = std::fmax(worst_top, dist(top, {3.0 * u, 3.0 * v, 3.0}));
        const long long n = fold_coordinate(u).cell, m = fold_coordinate(v).cell;
        const Vec3 base = alpha({u, v, 0.0});
        worst_base = std::fmax(worst_base, dist(base, {u + 4.0 * n, v + 4.0 * m, 0.0}));
    }
    rep.check_upper("alpha(u,v,1) = 3(u,v,1)", worst_top, 1e-12);
    rep.check_upper("alpha(u,v,0) = (u+4n, v+4m, 0)", worst_base, 1e-12);

    // Lemma 3.2(iii): alpha o R = R' o alpha for a two-reflection word
    double worst_equiv = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform(-5.0, 5.0), v = rng.uniform(-5.0, 5.0);
        const double w = rng.uniform(0.55, 1.0); // above flap height: both sides defined
        const long long p1 = 2 * static_cast<long long>(rng.uniform(-2.0, 3.0)) + 1;
        const long long p2 = 2 * static_cast<long long>(rng.uniform(-2.0, 3.0)) + 1;
        const Vec3 lhs = alpha({2.0 * p1 - u, 2.0 * p2 - v, w});
        const Vec3 a = alpha({u, v, w});
        const Vec3 rhs{6.0 * p1 - a.x1, 6.0 * p2 - a.x2, a.x3};
        worst_equiv = std::fmax(worst_equiv, dist(lhs, rhs));
    }
    rep.check_upper("alpha(R(x)) = R'(alpha(x))", worst_equiv, 1e-11);

    // Lemma 3.2(iv): one-flap two-sided limits symmetric across a tripled plane
    double worst_sym = 0.0;
    for (int i = 0; i < 200; ++i) {
        const long long wall = 2 * static_cast<long long>(rng.uniform(-2.0, 3.0)) + 1;
        const double v = rng.uniform(-0.9, 0.9), w = rng.uniform(0.05, 0.45);
        const double eps = 1e-9;
        const Vec3 lp = alpha({static_cast<double>(wall) + eps, v, w});
        const Vec3 lm = alpha({static_cast<double>(wall) - eps, v, w});
        // both limits in {x3 = 0}, mirrored across {x1 = 3*wall}
        worst_sym = std::fmax(worst_sym, std::fabs(lp.x3) + std::fabs(lm.x3) > 1e-5
                                             ? 1.0
                                             : std::fabs((lp.x1 + lm.x1) / 2.0 - 3.0 * wall));
    }
    rep.check_upper("flap limits symmetric across tripled plane", worst_sym, 1e-6);

    // burger map basics
    rep.check_upper("mu(-1,0,0) = 0", norm(mobius_mu({-1, 0, 0})), 1e-15);
    rep.check_upper("mu fixes (0,0,1)", dist(mobius_mu({0, 0, 1}), {0, 0, 1}), 1e-15);
    double worst_inv = 0.0, worst_id = 0.0, worst_glue = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const Vec3 x = rng.uniform(1.5, 4.0) * rng.unit_vector();
        worst_inv = std::fmax(worst_inv, dist(mobius_mu(mobius_mu(x)), x));
        if (!in_X(x)) worst_id = std::fmax(worst_id, dist(burger_beta(x), x));
        const Vec3 u = rng.unit_vector();
        worst_glue = std::fmax(worst_glue,
                               dist(burger_beta({u.x1, u.x2, u.x3}), burger_beta({u.x1, u.x2, -u.x3})));
    }
    rep.check_upper("mu self-inverse", worst_inv, 1e-12);
    rep.check_upper("beta identity outside X", worst_id, 0.0);
    rep.check_upper("beta on-sphere gluing identity", worst_glue, 1e-10);

    // beta = id on dX (sewing seam), probed on the sphere dist(.,(0,0,1)) = sqrt2
    double worst_seam = 0.0;
    for (int i = 0; i < 500; ++i) {
        Vec3 q = rng.unit_vector();
        Vec3 x = Vec3{0, 0, 1} + std::sqrt(2.0) * q;
        if (norm(x) < 1.0 + 1e-9) continue;
        worst_seam = std::fmax(worst_seam, dist(burger_beta(x), x));
    }
    rep.check_upper("beta = id on dX", worst_seam, 1e-10);

    // axis preservation (Lemma 3.4): strictly increasing along L
    for (long long d : degrees) {
        bool mono = true;
        double prev = -1.0;
        for (int i = 0; i <= 500; ++i) {
            const double t = (1.0 / static_cast<double>(d)) * i / 500.0;
            const Vec3 r = interpolate_P(d, {0.0, 0.0, std::exp(t)});
            if (!(r.x1 == 0.0 && r.x2 == 0.0) || r.x3 <= prev) mono = false;
            prev = r.x3;
        }
        rep.check_true("P maps L into L strictly increasing, d=" + std::to_string(d), mono);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------------

inline double kahan_closed_form_log_R(const MapParams& p, int n) {
    // Lemma 4.2 with compensated summation; magnitudes reach ~1e19 by n = 12
    double sum = static_cast<double>(p.d[n + 1]) * kLog2 + static_cast<double>(p.d[n]) * p.log_R[n];
    double comp = 0.0;
    for (int j = 1; j < n; ++j) {
        const double term = -2.0 * static_cast<double>(p.d[j]) * p.log_R[j] - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum;
}

inline VerificationReport suite_dynamics(double R1, int n_max, int k_max, std::uint64_t seed) {
    VerificationReport rep("dynamics");
    const MapParams p = build_params(R1, n_max);

    rep.check_log("c_2 = R_1^{-6}", p.log_c[2], -6.0 * std::log(R1), 1e-12);
    for (int n = 1; n < n_max; ++n) {
        rep.check_log("Lemma 4.2 closed form, n=" + std::to_string(n), p.log_R[n + 1],
                      kahan_closed_form_log_R(p, n), 1e-12);
        rep.check_log("S_n = e^{1/d_n} R_n, n=" + std::to_string(n), p.log_S[n],
                      p.log_R[n] + 1.0 / static_cast<double>(p.d[n]), 1e-12);
        if (n == 1) {
            rep.check_log("Lemma 4.3: R_2 = 2^{d_2} R_1^{d_1}", p.log_R[2],
                          static_cast<double>(p.d[2]) * kLog2 + 3.0 * p.log_R[1], 1e-12);
        } else {
            const double bound = static_cast<double>(p.d[n + 1]) * kLog2 +
                                 static_cast<double>(p.d[n - 1]) * p.log_R[n];
            rep.check_true("Lemma 4.3: R_{n+1} >= 2^{d_{n+1}} R_n^{d_{n-1}}, n=" + std::to_string(n),
                           p.log_R[n + 1] >= bound - 1e-9 * std::fabs(bound));
        }
    }

    for (int k = 1; k <= k_max && k + 2 <= n_max; ++k) rep.merge(check_coverings(p, k));

    // Gamma rings and spheres
    const double log53 = std::log(5.0 / 3.0);
    for (int k = 1; k <= std::min(k_max, n_max - 2); ++k) {
        double prod_inv = 1.0;
        const int n_deep = std::min(8, n_max - k - 1);
        for (int j = 1; j <= n_deep; ++j) prod_inv /= std::pow(3.0, k + j);
        const Ring gk = gamma_ring(p, k, n_deep);
        rep.check_rel("mod Gamma_{k,n} product formula, k=" + std::to_string(k),
                      ring_modulus(gk), prod_inv * log53, 1e-12);
        rep.check_true("Gamma nesting, k=" + std::to_string(k),
                       n_deep < 1 || (gamma_ring(p, k, n_deep - 1).t_in.t <= gk.t_in.t &&
                                      gk.t_out.t <= gamma_ring(p, k, n_deep - 1).t_out.t));
        const double tk = gamma_t_series(k), tk1 = gamma_t_series(k + 1);
        rep.check_rel("t_{k+1} = d_{k+1}(t_k - 1), k=" + std::to_string(k), tk1,
                      static_cast<double>(p.d[k + 1]) * (tk - 1.0), 1e-12);
        const double sphere = gamma_sphere(p, k).t;
        rep.check_log("pullback midpoint -> 2^{t_k} R_k, k=" + std::to_string(k),
                      gk.midpoint_log(), sphere, 1e-9);
        const RingCast rc = rings(p, k);
        rep.check_true("Gamma_k inside V_k, k=" + std::to_string(k),
                       rc.V.t_in.t < sphere && sphere < rc.V.t_out.t);
        rep.check_log("mod A_k = log 16, k=" + std::to_string(k), ring_modulus(rc.A), std::log(16.0), 1e-12);
        rep.check_log("mod V_k = log(5/3), k=" + std::to_string(k), ring_modulus(rc.V), log53, 1e-12);
        if (k + 1 < n_max) {
            const double transported = static_cast<double>(p.d[k + 1]) * sphere + p.log_c[k + 1];
            rep.check_log("f maps Gamma_k onto Gamma_{k+1}, k=" + std::to_string(k), transported,
                          gamma_sphere(p, k + 1).t, 1e-10);
        }
    }

    // regime continuity at the R_n and S_n boundary spheres
    Rng rng(seed);
    double worst_dir = 0.0, worst_t = 0.0;
    for (int n = 1; n <= std::min(k_max + 1, n_max - 1); ++n) {
        for (int i = 0; i < 100; ++i) {
            const double y1 = rng.uniform(-1.0, 3.0), y2 = rng.uniform(-1.0, 1.0);
            for (double tb : {p.log_R[n], p.log_S[n]}) {
                const BeamPoint x{y1, y2, tb};
                BeamPoint lo, hi;
                if (tb == p.log_R[n]) {
                    lo = (n == 1) ? scaled_power_log(ScaledPower{3, 0.0}, x)
                                  : scaled_power_log(ScaledPower{p.d[n], p.log_c[n]}, x);
                    hi = scaled_interp(InterpSpec{p.d[n], p.log_R[n], p.log_c[n]}, x);
                } else {
                    lo = scaled_interp(InterpSpec{p.d[n], p.log_R[n], p.log_c[n]}, x);
                    hi = scaled_power_log(ScaledPower{p.d[n + 1], p.log_c[n + 1]}, x);
                }
                worst_t = std::fmax(worst_t,
                                    std::fabs(lo.t - hi.t) / std::fmax(1.0, std::fabs(hi.t)));
                worst_dir = std::fmax(worst_dir, dist(zorich(lo.y1, lo.y2, 0.0), zorich(hi.y1, hi.y2, 0.0)));
            }
        }
    }
    rep.check_upper("regime continuity, log-radius", worst_t, 1e-10);
    rep.check_upper("regime continuity, direction", worst_dir, 1e-8);

    // blow-up certificate at k = 1
    const BeamPoint x0{0.25, 0.25, gamma_sphere(p, 1).t};
    const BlowupResult br = blowup_check(p, 1, x0, 0.01, n_max);
    rep.check_true("blowup: full horizontal wrap", br.wraps);
    rep.check_true("blowup: x0 inside Gamma_{1,n}", br.x0_inside);
    rep.check_upper("blowup: vertical interval = V interval", br.vertical_err, 1e-10);
    return rep;
}

// ---------------------------------------------------------------------------
// growth
// ---------------------------------------------------------------------------

inline VerificationReport suite_growth(double R, std::uint64_t seed, int n_levels, int n_seqs) {
    VerificationReport rep("growth");
    Rng rng(seed);
    double worst_R = 0.0, worst_S = 0.0, worst_MR = 0.0, worst_MS = 0.0;
    for (int s = 0; s < n_seqs; ++s) {
        std::vector<double> lam;
        for (int j = 0; j < n_levels; ++j) lam.push_back(rng.uniform(0.0, 2.0));
        const GrowthParams g = build_growth(R, lam);
        for (int n = 0; n < n_levels; ++n) {
            const double cf_R = closed_form_log_radius(g, n);
            worst_R = std::fmax(worst_R, std::fabs(g.log_R_[static_cast<std::size_t>(n + 1)] - cf_R) /
                                             std::fmax(1.0, std::fabs(cf_R)));
            const double cf_S = cf_R + 1.0 / pow3(n + 1);
            worst_S = std::fmax(worst_S, std::fabs(g.log_S_[static_cast<std::size_t>(n + 1)] - cf_S) /
                                             std::fmax(1.0, std::fabs(cf_S)));
            const MaxModulus mm = max_modulus_closed_form(g, n);
            const double direct_R = eval_growth_map(g, {0.0, 0.0, g.log_R_[static_cast<std::size_t>(n + 1)]}).t;
            const double direct_S = eval_growth_map(g, {0.0, 0.0, g.log_S_[static_cast<std::size_t>(n + 1)]}).t;
            worst_MR = std::fmax(worst_MR, std::fabs(direct_R - mm.at_R) / std::fmax(1.0, std::fabs(mm.at_R)));
            worst_MS = std::fmax(worst_MS, std::fabs(direct_S - mm.at_S) / std::fmax(1.0, std::fabs(mm.at_S)));
        }
    }
    rep.check_upper("Lemma 5.1 radius closed form", worst_R, 1e-12);
    rep.check_upper("Lemma 5.1 S closed form", worst_S, 1e-12);
    rep.check_upper("Lemma 5.1 M(R_{n+1}) closed form vs evaluation", worst_MR, 1e-12);
    rep.check_upper("Lemma 5.1 M(S_{n+1}) closed form vs evaluation", worst_MS, 1e-12);

    // |f| constant on power-branch spheres (100 random directions)
    {
        std::vector<double> lam{0.3, 0.7};
        const GrowthParams g = build_growth(R, lam);
        const double t_probe = 0.5 * (g.log_S_[1] + g.log_R_[2]);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 100; ++i) {
            const BeamPoint q = eval_growth_map(g, {rng.uniform(-1.0, 3.0), rng.uniform(-1.0, 1.0), t_probe});
            lo = std::fmin(lo, q.t);
            hi = std::fmax(hi, q.t);
        }
        rep.check_upper("|f| constant on power sphere", (hi - lo) / std::fmax(1.0, std::fabs(hi)), 1e-10);
        // boundary agreement at S_1: interpolation equals C_1 p_9
        double worst_b = 0.0;
        for (int i = 0; i < 100; ++i) {
            const BeamPoint x{rng.uniform(-1.0, 3.0), rng.uniform(-1.0, 1.0), g.log_S_[1]};
            const BeamPoint a = scaled_interp(InterpSpec{3, g.log_R_[1], 0.0}, x);
            const BeamPoint b = scaled_power_log(ScaledPower{9, g.log_C_[1]}, x);
            worst_b = std::fmax(worst_b, std::fabs(a.t - b.t) + dist(zorich(a.y1, a.y2, 0.0), zorich(b.y1, b.y2, 0.0)));
        }
        rep.check_upper("interp = C_1 p_9 at S_1", worst_b, 1e-8);
    }

    // designers, certified against the closed form
    {
        const double logR = std::log(R);
        const std::vector<double> eta{2.0, 4.0, 8.0};
        const std::vector<double> logT{2.0 + logR, 5.0 + logR, 9.0 + logR};
        const GrowthDesign fast = design_fast_growth(R, logT, eta);
        bool ok = fast.witnesses.size() == eta.size();
        for (std::size_t k = 0; ok && k < eta.size(); ++k)
            ok = fast.witnesses[k].order >= eta[k] && fast.witnesses[k].log_r < logT[k];
        rep.check_true("fast designer certified (order >= eta, r_k < T_k)", ok);

        const std::vector<double> eps{0.5, 0.1, 0.02};
        const GrowthDesign slow = design_slow_growth(R, eps);
        bool ok2 = slow.witnesses.size() == eps.size();
        double prev_r = -1e300, prev_sum = 0.0;
        double sum = 0.0;
        for (std::size_t k = 0; ok2 && k < eps.size(); ++k) {
            ok2 = slow.witnesses[k].order <= eps[k] && slow.witnesses[k].log_r > prev_r;
            prev_r = slow.witnesses[k].log_r;
            sum += slow.lambda_log[k];
            ok2 = ok2 && sum > prev_sum; // partial sums strictly increase
            prev_sum = sum;
        }
        rep.check_true("slow designer certified (order <= eps, r_k increasing, sum log lambda increasing)", ok2);
    }
    return rep;
}

} // namespace qr3
