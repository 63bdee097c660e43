#pragma once

// Numerical differential machinery: central-difference Jacobians, dilatation
// from singular values, seam-aware surveys, flap continuity probes, and the
// flood-fill component oracle.
//
// K_O = s1^3 / (s1 s2 s3) and K_I = (s1 s2 s3) / s3^3 with s1 >= s2 >= s3
// the singular values of the Jacobian.  The maps under test are piecewise
// smooth; surveys exclude points within a margin of the analytic seam set
// (flap planes, simplex faces, dX preimages, branch and crease lines), where
// finite differences measure nothing meaningful.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qr3/interp.hpp"
#include "qr3/rings.hpp"
#include "qr3/rng.hpp"
#include "qr3/vec3.hpp"
#include "qr3/zorich.hpp"

namespace qr3 {

using Mat3 = std::array<std::array<double, 3>, 3>;
using PointMap = std::function<Vec3(const Vec3&)>;

inline Mat3 jacobian_fd(const PointMap& map, const Vec3& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("jacobian_fd: h > 0 required");
    Mat3 j{};
    const Vec3 e[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int c = 0; c < 3; ++c) {
        const Vec3 fp = map(x + h * e[c]);
        const Vec3 fm = map(x - h * e[c]);
        j[0][c] = (fp.x1 - fm.x1) / (2.0 * h);
        j[1][c] = (fp.x2 - fm.x2) / (2.0 * h);
        j[2][c] = (fp.x3 - fm.x3) / (2.0 * h);
    }
    return j;
}

inline double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Singular values via cyclic Jacobi on J^T J (descending order).
inline std::array<double, 3> singular_values(const Mat3& j) {
    double a[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            a[r][c] = 0.0;
            for (int k = 0; k < 3; ++k) a[r][c] += j[k][r] * j[k][c];
        }
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::array<double, 3> sv{std::sqrt(std::fmax(0.0, a[0][0])),
                             std::sqrt(std::fmax(0.0, a[1][1])),
                             std::sqrt(std::fmax(0.0, a[2][2]))};
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

struct DilatationSample {
    Vec3 location;
    double h = 0.0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double K_O = 0.0, K_I = 0.0;
    double det = 0.0;
    bool degenerate = false; // s3 <= 1e-12 s1 (branch set / seam)
};

inline DilatationSample dilatation_at(const PointMap& map, const Vec3& x, double h) {
    DilatationSample d;
    d.location = x;
    d.h = h;
    const Mat3 j = jacobian_fd(map, x, h);
    const auto sv = singular_values(j);
    d.s1 = sv[0];
    d.s2 = sv[1];
    d.s3 = sv[2];
    d.det = det3(j);
    if (d.s3 <= 1e-12 * d.s1 || d.s1 == 0.0) {
        d.degenerate = true;
        return d;
    }
    const double prod = d.s1 * d.s2 * d.s3;
    d.K_O = d.s1 * d.s1 * d.s1 / prod;
    d.K_I = prod / (d.s3 * d.s3 * d.s3);
    return d;
}

// ---------------------------------------------------------------------------
// Surveys
// ---------------------------------------------------------------------------

using Sampler = std::function<Vec3(Rng&)>;
using SeamPredicate = std::function<bool(const Vec3&)>;

struct SurveyReport {
    std::string region;
    int accepted = 0;
    int excluded = 0;   // seam-rejected draws
    int degenerate = 0; // flagged samples (kept out of the statistics)
    int negative_det = 0;
    double KO_sup = 0.0, KI_sup = 0.0, K_sup = 0.0;
    double K_q50 = 0.0, K_q90 = 0.0, K_q99 = 0.0;
};

inline SurveyReport dilatation_survey(const PointMap& map, const Sampler& sampler,
                                      int n_samples, const SeamPredicate& seam,
                                      double h, std::uint64_t seed,
                                      const std::string& region_name = "") {
    if (n_samples <= 0) throw std::invalid_argument("dilatation_survey: n_samples > 0");
    Rng rng(seed);
    SurveyReport rep;
    rep.region = region_name;
    std::vector<double> ks;
    ks.reserve(static_cast<std::size_t>(n_samples));
    long long draws = 0;
    const long long max_draws = 40LL * n_samples;
    while (rep.accepted < n_samples) {
        if (++draws > max_draws)
            throw std::runtime_error("dilatation_survey: sampler failed to produce accepted points");
        const Vec3 x = sampler(rng);
        if (seam && seam(x)) {
            ++rep.excluded;
            if (rep.excluded > draws / 2 && draws > 200)
                throw std::runtime_error("dilatation_survey: >50% of draws excluded as seams; " +
                                         std::to_string(rep.excluded) + "/" + std::to_string(draws));
            continue;
        }
        const DilatationSample d = dilatation_at(map, x, h);
        if (d.degenerate) {
            ++rep.degenerate;
            continue;
        }
        if (d.det < 0.0) ++rep.negative_det;
        ++rep.accepted;
        rep.KO_sup = std::fmax(rep.KO_sup, d.K_O);
        rep.KI_sup = std::fmax(rep.KI_sup, d.K_I);
        ks.push_back(std::fmax(d.K_O, d.K_I));
    }
    rep.K_sup = std::fmax(rep.KO_sup, rep.KI_sup);
    std::sort(ks.begin(), ks.end());
    auto q = [&](double f) { return ks[static_cast<std::size_t>(f * (ks.size() - 1))]; };
    rep.K_q50 = q(0.50);
    rep.K_q90 = q(0.90);
    rep.K_q99 = q(0.99);
    return rep;
}

// Uniform sampler over a round ring: log-radius uniform, direction uniform.
inline Sampler ring_sampler(const Ring& ring) {
    return [ring](Rng& rng) {
        const double t = rng.uniform(ring.t_in.t, ring.t_out.t);
        return std::exp(t) * rng.unit_vector();
    };
}

// ---------------------------------------------------------------------------
// Seam predicates for the interpolation P and the burger map
// ---------------------------------------------------------------------------

// Sampling and seam analysis for P happen in the alpha-domain beam
// coordinates y = d Z^{-1}(x); the ring corresponds to the cells
// [-d,3d) x [-d,d) x [0,1], and the cell contents repeat, so cells are drawn
// uniformly and offsets identically across degrees.
inline Sampler interp_beam_sampler(long long d) {
    return [d](Rng& rng) {
        const double dd = static_cast<double>(d);
        const long long ci = static_cast<long long>(rng.uniform(0.0, 2.0 * dd)); // 2d cells across
        const long long cj = static_cast<long long>(rng.uniform(0.0, dd));       // d cells up
        const double u = rng.uniform(-1.0, 1.0);
        const double v = rng.uniform(-1.0, 1.0);
        const double y3 = rng.uniform(0.0, 1.0);
        const double y1 = -1.0 + 2.0 * static_cast<double>(ci) + 1.0 + u; // cell centres at odd spacing 2
        const double y2 = -1.0 + 2.0 * static_cast<double>(cj) + 1.0 + v;
        return zorich(y1 / dd, y2 / dd, y3 / dd);
    };
}

namespace detail {

inline double dist_to_diagonal_folded(double u, double v) {
    return std::fabs(std::fabs(u) - std::fabs(v));
}

} // namespace detail

// Margin-based exclusion of every surface where the chain
// Z o alpha o (d Z^{-1}) (and beta after it) fails to be C^1:
//   - walls and flaps of the alpha-domain lattice, simplex faces, fold creases;
//   - creases of the inner Z^{-1} (cell walls, diagonals, spines at z = y/d);
//   - creases of the outer Z at w = alpha(y) (diagonals, spines, double walls);
//   - preimages of dX and of the unit sphere where beta switches on.
inline SeamPredicate interp_seam_predicate(long long d, double h) {
    const double m = 20.0 * h * static_cast<double>(d); // alpha-domain margin for spatial step h
    const double mz = 20.0 * h;                          // z-side margin
    const double mx = 10.0 * h * 40.0;                   // ||Dg|| estimate for dX proximity
    return [d, m, mz, mx](const Vec3& x) {
        BeamPoint z;
        try {
            z = zorich_inv(x);
        } catch (const std::domain_error&) {
            return true;
        }
        const double dd = static_cast<double>(d);
        const Vec3 y{dd * z.y1, dd * z.y2, dd * z.t};

        // keep the finite-difference stencil inside the ring
        if (y.x3 < m || y.x3 > 1.0 - m) return true;
        // alpha-domain lattice walls (flaps and PL wall creases)
        if (dist_to_odd(y.x1) < m || dist_to_odd(y.x2) < m) return true;
        // simplex faces and fold creases in the fundamental prism
        const FoldResult f1 = fold_coordinate(y.x1);
        const FoldResult f2 = fold_coordinate(y.x2);
        const detail::WedgePoint w = detail::to_wedge(f1.folded, f2.folded, y.x3);
        if (std::fabs(w.a2 + w.x3 - 1.0) < m) return true;
        if (std::fabs(w.a2 + 2.0 * w.x3 - 2.0) < m) return true;
        if (std::fabs(w.a1 + w.a2 + 2.0 * w.x3 - 2.0) < m) return true;
        const bool off_base_simplex = w.a2 + w.x3 > 1.0 - m;
        if (off_base_simplex && (w.a2 - w.a1 < m || w.a1 < m)) return true;

        // inner Zorich creases at z = y/d
        const FoldResult g1 = fold_coordinate(z.y1);
        const FoldResult g2 = fold_coordinate(z.y2);
        if (1.0 - std::fabs(g1.folded) < mz || 1.0 - std::fabs(g2.folded) < mz) return true;
        if (detail::dist_to_diagonal_folded(g1.folded, g2.folded) < mz) return true;
        if (std::fmax(std::fabs(g1.folded), std::fabs(g2.folded)) < mz) return true;

        // outer Zorich creases at the image point
        const Vec3 a = detail::alpha_one_sided(y);
        const FoldResult o1 = fold_coordinate(a.x1);
        const FoldResult o2 = fold_coordinate(a.x2);
        if (1.0 - std::fabs(o1.folded) < m && 1.0 - std::fabs(o2.folded) < m) return true;
        if (detail::dist_to_diagonal_folded(o1.folded, o2.folded) < m) return true;
        if (std::fmax(std::fabs(o1.folded), std::fabs(o2.folded)) < m) return true;

        // beta seams: dX and the unit sphere in the g-image
        const Vec3 gx = zorich(a);
        const double r = norm(gx);
        if (std::fabs(r - 1.0) < mx) return true;
        const double dtop = dist(gx, Vec3{0, 0, 1});
        const double dbot = dist(gx, Vec3{0, 0, -1});
        const double sqrt2 = std::sqrt(2.0);
        if (std::fabs(dtop - sqrt2) < mx || std::fabs(dbot - sqrt2) < mx) return true;
        return false;
    };
}

// Seams of the burger map alone: dX spheres and the domain boundary |x| = 1.
inline SeamPredicate burger_seam_predicate(double h) {
    const double m = 10.0 * h * 10.0;
    return [m](const Vec3& x) {
        const double r = norm(x);
        if (r - 1.0 < m) return true;
        const double sqrt2 = std::sqrt(2.0);
        if (std::fabs(dist(x, Vec3{0, 0, 1}) - sqrt2) < m) return true;
        if (std::fabs(dist(x, Vec3{0, 0, -1}) - sqrt2) < m) return true;
        return false;
    };
}

// ---------------------------------------------------------------------------
// Flap continuity probe
// ---------------------------------------------------------------------------

struct FlapGapRow {
    double delta = 0.0;
    double p_gap_max = 0.0, p_gap_mean = 0.0;
    double raw_gap_min = 0.0, raw_gap_max = 0.0;
};

struct FlapProbeResult {
    std::vector<FlapGapRow> rows; // one per delta, in input order
    double slope = 0.0;           // linear fit of max gap vs delta through 0
    int sites = 0;
};

// Probes the flap wall {y1 = wall} x y2-range x [0.05, 0.45] with mirrored
// two-sided offsets +-delta in the alpha-domain coordinate.  Sites are kept
// off the branch lines: both the domain y2 and the two one-sided limit
// points must stay clear of odd coordinates, otherwise the raw jump itself
// degenerates to zero.
inline FlapProbeResult flap_continuity_probe(long long d, long long wall,
                                             const std::vector<double>& deltas,
                                             int n_sites, std::uint64_t seed) {
    require_odd_degree(d);
    if (wall % 2 == 0) throw std::invalid_argument("flap_continuity_probe: wall must be odd");
    const double dd = static_cast<double>(d);
    Rng rng(seed);
    std::vector<Vec3> sites;
    long long draws = 0;
    while (static_cast<int>(sites.size()) < n_sites) {
        if (++draws > 200LL * n_sites)
            throw std::runtime_error("flap_continuity_probe: site sampling failed");
        const double y2 = rng.uniform(-0.9, 0.9);
        const double y3 = rng.uniform(0.05, 0.45);
        if (dist_to_odd(y2) < 0.1) continue;
        const Vec3 zeta{static_cast<double>(wall), y2, y3};
        // reject sites whose limit values hug a lattice wall in the range
        bool ok = true;
        for (double side : {-1e-7, 1e-7}) {
            const Vec3 lim = detail::alpha_one_sided({zeta.x1 + side, zeta.x2, zeta.x3});
            if (dist_to_odd(lim.x1) < 0.05 || dist_to_odd(lim.x2) < 0.05) ok = false;
        }
        if (ok) sites.push_back(zeta);
    }
    FlapProbeResult out;
    out.sites = n_sites;
    for (double delta : deltas) {
        FlapGapRow row;
        row.delta = delta;
        row.raw_gap_min = 1e300;
        double sum = 0.0;
        for (const Vec3& zeta : sites) {
            const Vec3 yp{zeta.x1 + delta, zeta.x2, zeta.x3};
            const Vec3 ym{zeta.x1 - delta, zeta.x2, zeta.x3};
            const Vec3 xp = zorich(yp.x1 / dd, yp.x2 / dd, yp.x3 / dd);
            const Vec3 xm = zorich(ym.x1 / dd, ym.x2 / dd, ym.x3 / dd);
            const double p_gap = dist(interpolate_P(d, xp), interpolate_P(d, xm));
            const double raw_gap = dist(zorich(detail::alpha_one_sided(yp)),
                                        zorich(detail::alpha_one_sided(ym)));
            row.p_gap_max = std::fmax(row.p_gap_max, p_gap);
            row.raw_gap_max = std::fmax(row.raw_gap_max, raw_gap);
            row.raw_gap_min = std::fmin(row.raw_gap_min, raw_gap);
            sum += p_gap;
        }
        row.p_gap_mean = sum / static_cast<double>(n_sites);
        out.rows.push_back(row);
    }
    // least-squares slope through the origin of max gap vs delta
    double num = 0.0, den = 0.0;
    for (const auto& r : out.rows) {
        num += r.delta * r.p_gap_max;
        den += r.delta * r.delta;
    }
    out.slope = den > 0.0 ? num / den : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Flood-fill component oracle
// ---------------------------------------------------------------------------

// Flood fill of {g in X} on a beam-coordinate grid over one lattice cell
// [-1,1]^2 x [0,1].  Components pinch together only along the base plane
// (the separating walls thin out linearly in y3), so layers below
// floor_layers grid steps are not filled; the blobs all extend far above.
// Counts per cell extrapolate by periodicity to the full ring: 2d^2 cells,
// expected 1 base + 8 flap components each.
struct ComponentOracleResult {
    int per_cell_base = 0;
    int per_cell_flap = 0;
    int ambiguous = 0;
    long long full_base = 0;  // 2 d^2 per base component per cell
    long long full_flap = 0;  // 16 d^2 expected
    long long full_total = 0; // 2 (3d)^2 expected
    int grid_n = 0;
    int classifier_checked = 0;
    int classifier_mismatches = 0;
};

inline ComponentOracleResult component_oracle(long long d, int grid_n) {
    require_odd_degree(d);
    if (grid_n < 64) throw std::invalid_argument("component_oracle: grid_n >= 64 required");
    const int floor_layers = std::max(2, grid_n / 32);
    const double dd = static_cast<double>(d);
    const double hstep = 2.0 / grid_n;
    const double vstep = 1.0 / grid_n;

    const auto idx = [grid_n](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * grid_n + j) * grid_n + i;
    };
    std::vector<std::uint8_t> inside(static_cast<std::size_t>(grid_n) * grid_n * grid_n, 0);
    std::vector<std::int32_t> label(inside.size(), -1);

    const auto ycoord = [&](int i, int j, int k) {
        return Vec3{-1.0 + (i + 0.5) * hstep, -1.0 + (j + 0.5) * hstep, (k + 0.5) * vstep};
    };
    for (int k = floor_layers; k < grid_n; ++k)
        for (int j = 0; j < grid_n; ++j)
            for (int i = 0; i < grid_n; ++i) {
                const Vec3 y = ycoord(i, j, k);
                const Vec3 gx = zorich(detail::alpha_one_sided(y));
                inside[idx(i, j, k)] = in_X(gx) ? 1 : 0;
            }

    // BFS flood fill, 6-connectivity
    struct CompInfo {
        bool touches_floor_center = false; // floor layer, away from walls
        bool touches_wall_low = false;     // next to a wall below flap height
    };
    std::vector<CompInfo> comps;
    std::vector<std::array<int, 3>> stack;
    for (int k = floor_layers; k < grid_n; ++k)
        for (int j = 0; j < grid_n; ++j)
            for (int i = 0; i < grid_n; ++i) {
                const std::size_t start = idx(i, j, k);
                if (!inside[start] || label[start] >= 0) continue;
                const std::int32_t id = static_cast<std::int32_t>(comps.size());
                comps.push_back({});
                label[start] = id;
                stack.push_back({i, j, k});
                while (!stack.empty()) {
                    const auto [ci, cj, ck] = stack.back();
                    stack.pop_back();
                    const Vec3 y = ycoord(ci, cj, ck);
                    const double wall_dist = std::fmin(dist_to_odd(y.x1), dist_to_odd(y.x2));
                    if (ck == floor_layers && wall_dist > 0.5) comps[id].touches_floor_center = true;
                    if (wall_dist <= 1.5 * hstep && y.x3 < 0.5) comps[id].touches_wall_low = true;
                    const int di[6] = {1, -1, 0, 0, 0, 0};
                    const int dj[6] = {0, 0, 1, -1, 0, 0};
                    const int dk[6] = {0, 0, 0, 0, 1, -1};
                    for (int nb = 0; nb < 6; ++nb) {
                        const int ni = ci + di[nb], nj = cj + dj[nb], nk = ck + dk[nb];
                        if (ni < 0 || nj < 0 || nk < floor_layers || ni >= grid_n || nj >= grid_n || nk >= grid_n)
                            continue;
                        const std::size_t q = idx(ni, nj, nk);
                        if (inside[q] && label[q] < 0) {
                            label[q] = id;
                            stack.push_back({ni, nj, nk});
                        }
                    }
                }
            }

    ComponentOracleResult res;
    res.grid_n = grid_n;
    std::vector<std::uint8_t> kind(comps.size(), 0); // 1 base, 2 flap
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const bool base = comps[c].touches_floor_center;
        const bool flap = comps[c].touches_wall_low;
        if (base && !flap) {
            ++res.per_cell_base;
            kind[c] = 1;
        } else if (flap && !base) {
            ++res.per_cell_flap;
            kind[c] = 2;
        } else {
            ++res.ambiguous;
        }
    }
    res.full_base = static_cast<long long>(res.per_cell_base) * 2LL * d * d;
    res.full_flap = static_cast<long long>(res.per_cell_flap) * 2LL * d * d;
    res.full_total = res.full_base + res.full_flap;

    // classifier agreement on every labelled grid point, via the spatial map
    for (int k = floor_layers; k < grid_n; ++k)
        for (int j = 0; j < grid_n; ++j)
            for (int i = 0; i < grid_n; ++i) {
                const std::size_t q = idx(i, j, k);
                if (!inside[q] || kind[static_cast<std::size_t>(label[q])] == 0) continue;
                const Vec3 y = ycoord(i, j, k);
                const Vec3 x = zorich(y.x1 / dd, y.x2 / dd, y.x3 / dd);
                const ComponentKind ck = classify_component(d, x);
                const bool is_base = (ck == ComponentKind::BASE);
                const bool oracle_base = kind[static_cast<std::size_t>(label[q])] == 1;
                ++res.classifier_checked;
                if (is_base != oracle_base) ++res.classifier_mismatches;
            }
    return res;
}

} // namespace qr3
