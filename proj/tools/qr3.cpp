// qr3 — verification suites, Julia-sphere tables, escape-time slices, growth
// designers and orbit dumps for the interpolating power-map construction.
//
// Exit codes: 0 all checks passed, 1 check failure, 2 usage/config error.
// Every output embeds the resolved configuration and seed; identical configs
// produce byte-identical outputs.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qr3/dynamics.hpp"
#include "qr3/growth.hpp"
#include "qr3/json_io.hpp"
#include "qr3/suites.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
    return j;
}

// Config precedence: explicit command-line flag > config file > default.
template <typename T>
void apply_config(const CLI::App& app, const json& cfg, const std::string& flag,
                  const std::string& key, T& value) {
    if (app.count(flag) == 0 && cfg.contains(key)) value = cfg[key].get<T>();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << text;
}

void print_report(const qr3::VerificationReport& rep) {
    for (const auto& c : rep.checks) {
        std::printf("[%s] %s: measured=%.12g expected=%.12g (%s tol=%g)\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.expected,
                    c.mode.c_str(), c.tol);
    }
}

struct PixelColor {
    unsigned char r, g, b;
};

PixelColor escape_color(const qr3::EscapeResult& e, int max_iter) {
    using Status = qr3::EscapeResult::Status;
    if (e.status == Status::NON_ESCAPED) return {0, 0, 0};
    if (e.status == Status::REGIME_EXHAUSTED) return {60, 60, 60};
    const double f = static_cast<double>(e.steps) / static_cast<double>(max_iter);
    const auto ramp = [](double v) {
        return static_cast<unsigned char>(255.0 * std::fmin(1.0, std::fmax(0.0, v)));
    };
    return {ramp(0.2 + 2.5 * f), ramp(2.0 * f * (1.0 - f) + 0.1), ramp(1.0 - 1.5 * f)};
}

int cmd_verify(CLI::App& app, const json& cfg, std::string suite, double R1, int n_max,
               int k_max, double R, int levels, int seqs, int samples, std::uint64_t seed,
               const std::string& out_path) {
    apply_config(app, cfg, "--suite", "suite", suite);
    apply_config(app, cfg, "--R1", "R1", R1);
    apply_config(app, cfg, "--n-max", "n_max", n_max);
    apply_config(app, cfg, "--k-max", "k_max", k_max);
    apply_config(app, cfg, "--R", "R", R);
    apply_config(app, cfg, "--levels", "levels", levels);
    apply_config(app, cfg, "--seqs", "seqs", seqs);
    apply_config(app, cfg, "--samples", "samples", samples);

    std::vector<qr3::VerificationReport> reports;
    if (suite == "zorich" || suite == "all") reports.push_back(qr3::suite_zorich(seed, samples));
    if (suite == "interp" || suite == "all")
        reports.push_back(qr3::suite_interp({1, 3, 9}, seed, std::max(100, samples / 10)));
    if (suite == "dynamics" || suite == "all")
        reports.push_back(qr3::suite_dynamics(R1, n_max, k_max, seed));
    if (suite == "growth" || suite == "all") reports.push_back(qr3::suite_growth(R, seed, levels, seqs));
    if (reports.empty()) throw std::runtime_error("unknown suite: " + suite);

    bool passed = true;
    json jreports = json::array();
    for (const auto& rep : reports) {
        print_report(rep);
        passed = passed && rep.all_passed();
        jreports.push_back(qr3::to_json(rep));
    }
    const json out{{"command", "verify"},
                   {"config", json{{"suite", suite}, {"R1", R1}, {"n_max", n_max}, {"k_max", k_max},
                                   {"R", R}, {"levels", levels}, {"seqs", seqs}, {"samples", samples}}},
                   {"seed", seed},
                   {"passed", passed},
                   {"reports", jreports}};
    if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
    std::printf("%s: %zu report(s), %s\n", "verify", reports.size(), passed ? "all passed" : "FAILURES");
    return passed ? 0 : 1;
}

int cmd_julia_spheres(CLI::App& app, const json& cfg, double R1, int n_max, int k_max,
                      int n_pullback, std::uint64_t seed, const std::string& out_path) {
    apply_config(app, cfg, "--R1", "R1", R1);
    apply_config(app, cfg, "--n-max", "n_max", n_max);
    apply_config(app, cfg, "--k-max", "k_max", k_max);
    apply_config(app, cfg, "--n-pullback", "n_pullback", n_pullback);

    const qr3::MapParams p = qr3::build_params(R1, n_max);
    std::ostringstream csv;
    csv.precision(15);
    csv << "# config R1=" << R1 << " n_max=" << n_max << " k_max=" << k_max
        << " n_pullback=" << n_pullback << " seed=" << seed << "\n";
    csv << "k,log_gamma,t_k,pullback_mid_log,discrepancy,mod_pullback,mod_formula,transport_err\n";
    bool ok = true;
    for (int k = 1; k <= k_max && k + n_pullback + 1 <= n_max; ++k) {
        const double tk = qr3::gamma_t_series(k);
        const double sphere = qr3::gamma_sphere(p, k).t;
        const qr3::Ring g = qr3::gamma_ring(p, k, n_pullback);
        const double mid = g.midpoint_log();
        const double disc = std::fabs(mid - sphere);
        double prod_inv = 1.0;
        for (int j = 1; j <= n_pullback; ++j) prod_inv /= std::pow(3.0, k + j);
        const double mod_formula = prod_inv * std::log(5.0 / 3.0);
        double transport_err = 0.0;
        if (k + 1 < n_max) {
            const double moved = static_cast<double>(p.d[k + 1]) * sphere + p.log_c[k + 1];
            const double next = qr3::gamma_sphere(p, k + 1).t;
            transport_err = std::fabs(moved - next) / std::fmax(1.0, std::fabs(next));
        }
        ok = ok && disc < 1e-9 && transport_err < 1e-10 &&
             std::fabs(qr3::ring_modulus(g) - mod_formula) < 1e-12 * mod_formula;
        csv << k << "," << sphere << "," << tk << "," << mid << "," << disc << ","
            << qr3::ring_modulus(g) << "," << mod_formula << "," << transport_err << "\n";
    }
    const std::string text = csv.str();
    if (!out_path.empty())
        write_text(out_path, text);
    else
        std::cout << text;
    std::printf("julia-spheres: %s\n", ok ? "all rows within tolerance" : "FAILURES");
    return ok ? 0 : 1;
}

int cmd_render_slice(CLI::App& app, const json& cfg, double R1, int n_max, int width,
                     int height, double t_min, double t_max, double th_min, double th_max,
                     int max_iter, int threshold_level, const std::string& out_path) {
    apply_config(app, cfg, "--R1", "R1", R1);
    apply_config(app, cfg, "--n-max", "n_max", n_max);
    apply_config(app, cfg, "--width", "width", width);
    apply_config(app, cfg, "--height", "height", height);
    apply_config(app, cfg, "--t-min", "t_min", t_min);
    apply_config(app, cfg, "--t-max", "t_max", t_max);
    apply_config(app, cfg, "--max-iter", "max_iter", max_iter);
    apply_config(app, cfg, "--threshold-level", "threshold_level", threshold_level);

    const qr3::MapParams p = qr3::build_params(R1, n_max);
    if (threshold_level < 2 || threshold_level > n_max)
        throw std::runtime_error("threshold-level out of range");
    const double t_thresh = p.log_R[threshold_level];
    if (std::isnan(t_max)) t_max = qr3::gamma_sphere(p, 3).t + 1.0;
    if (std::isnan(t_min)) t_min = -1.0;

    std::vector<unsigned char> img(static_cast<std::size_t>(width) * height * 3);
    for (int row = 0; row < height; ++row) {
        const double t = t_max - (row + 0.5) / height * (t_max - t_min);
        for (int col = 0; col < width; ++col) {
            const double th = th_min + (col + 0.5) / width * (th_max - th_min);
            // the plane {x2 = 0}: direction (sin th, 0, cos th)
            qr3::BeamPoint z = qr3::zorich_inv({std::sin(th), 0.0, std::cos(th)});
            z.t = t;
            const qr3::EscapeResult e = qr3::escape_time(p, z, t_thresh, max_iter);
            const PixelColor c = escape_color(e, max_iter);
            const std::size_t at = (static_cast<std::size_t>(row) * width + col) * 3;
            img[at] = c.r;
            img[at + 1] = c.g;
            img[at + 2] = c.b;
        }
    }
    // overlays: rows at the A_k / V_k boundary radii (blue / green) and the
    // Julia spheres Gamma_k (white)
    const auto overlay_row = [&](double t_line, PixelColor c) {
        if (t_line < t_min || t_line > t_max) return;
        const int row = static_cast<int>((t_max - t_line) / (t_max - t_min) * height);
        if (row < 0 || row >= height) return;
        for (int col = 0; col < width; ++col) {
            const std::size_t at = (static_cast<std::size_t>(row) * width + col) * 3;
            img[at] = c.r;
            img[at + 1] = c.g;
            img[at + 2] = c.b;
        }
    };
    const double log4 = std::log(4.0);
    for (int k = 1; k < n_max; ++k) {
        overlay_row(p.log_R[k] - log4, {40, 90, 255});
        overlay_row(p.log_R[k] + log4, {40, 90, 255});
        overlay_row(p.log_R[k] + std::log(1.5), {40, 200, 40});
        overlay_row(p.log_R[k] + std::log(2.5), {40, 200, 40});
        overlay_row(qr3::gamma_sphere(p, k).t, {255, 255, 255});
    }
    std::ostringstream ppm;
    ppm << "P6\n" << width << " " << height << "\n255\n";
    ppm.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
    write_text(out_path, ppm.str());
    std::printf("render-slice: wrote %dx%d P6 image to %s\n", width, height, out_path.c_str());
    return 0;
}

int cmd_growth_design(CLI::App& app, const json& cfg, std::string mode, double R,
                      std::string eta_s, std::string logT_s, std::string eps_s,
                      const std::string& out_path) {
    apply_config(app, cfg, "--mode", "mode", mode);
    apply_config(app, cfg, "--R", "R", R);
    apply_config(app, cfg, "--eta", "eta", eta_s);
    apply_config(app, cfg, "--log-t", "log_t", logT_s);
    apply_config(app, cfg, "--eps", "eps", eps_s);

    qr3::GrowthDesign design;
    json targets;
    if (mode == "fast") {
        std::vector<double> eta = parse_list(eta_s);
        std::vector<double> logT = parse_list(logT_s);
        if (logT.empty()) {
            for (double v : {2.0, 5.0, 9.0}) logT.push_back(v + std::log(R));
        }
        design = qr3::design_fast_growth(R, logT, eta);
        targets = json{{"eta", eta}, {"log_T", logT}};
    } else if (mode == "slow") {
        std::vector<double> eps = parse_list(eps_s);
        design = qr3::design_slow_growth(R, eps);
        targets = json{{"eps", eps}};
    } else {
        throw std::runtime_error("mode must be fast or slow");
    }

    // re-certify from scratch against the closed forms before writing
    const qr3::GrowthParams g = qr3::build_growth(R, design.lambda_log);
    bool certified = true;
    json witnesses = json::array();
    double lambda_partial = 0.0;
    for (const auto& w : design.witnesses) {
        const double order = qr3::growth_order(g, w.level - 1);
        certified = certified && std::fabs(order - w.order) < 1e-12 * std::fmax(1.0, std::fabs(order));
        witnesses.push_back(json{{"level", w.level},
                                 {"log_r", w.log_r},
                                 {"log_log_M", w.log_log_M},
                                 {"order", order}});
    }
    json lam = json::array();
    for (double l : design.lambda_log) {
        lambda_partial += l;
        lam.push_back(l);
    }
    const json out{{"command", "growth-design"},
                   {"config", json{{"mode", mode}, {"R", R}, {"targets", targets}}},
                   {"lambda_log", lam},
                   {"sum_lambda_log", lambda_partial},
                   {"witnesses", witnesses},
                   {"certified", certified}};
    if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
    std::printf("growth-design %s: %zu witnesses, %s\n", mode.c_str(), design.witnesses.size(),
                certified ? "certified" : "CERTIFICATION FAILED");
    return certified ? 0 : 1;
}

int cmd_orbit(CLI::App& app, const json& cfg, double R1, int n_max, std::string beam_s,
              std::string point_s, int steps, const std::string& out_path) {
    apply_config(app, cfg, "--R1", "R1", R1);
    apply_config(app, cfg, "--n-max", "n_max", n_max);
    apply_config(app, cfg, "--steps", "steps", steps);
    apply_config(app, cfg, "--beam", "beam", beam_s);
    apply_config(app, cfg, "--point", "point", point_s);

    const qr3::MapParams p = qr3::build_params(R1, n_max);
    qr3::BeamPoint start;
    if (!beam_s.empty()) {
        const auto v = parse_list(beam_s);
        if (v.size() != 3) throw std::runtime_error("--beam expects y1,y2,t");
        start = {v[0], v[1], v[2]};
    } else if (!point_s.empty()) {
        const auto v = parse_list(point_s);
        if (v.size() != 3) throw std::runtime_error("--point expects x1,x2,x3");
        start = qr3::zorich_inv({v[0], v[1], v[2]});
    } else {
        throw std::runtime_error("orbit: provide --beam or --point");
    }
    const auto records = qr3::orbit(p, start, steps);
    json jrec = json::array();
    for (const auto& r : records) {
        const char* kind = r.regime.kind == qr3::Regime::INNER
                               ? "INNER"
                               : (r.regime.kind == qr3::Regime::INTERP ? "INTERP" : "POWER");
        jrec.push_back(json{{"step", r.step},
                            {"y1", r.point.y1},
                            {"y2", r.point.y2},
                            {"t", r.point.t},
                            {"regime", kind},
                            {"level", r.regime.level}});
    }
    const json out{{"command", "orbit"},
                   {"config", json{{"R1", R1}, {"n_max", n_max}, {"steps", steps},
                                   {"beam", beam_s}, {"point", point_s}}},
                   {"records", jrec}};
    if (!out_path.empty())
        write_text(out_path, out.dump(2) + "\n");
    else
        std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasiregular interpolating power maps in R^3"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    std::uint64_t seed = 12345;
    app.add_option("--seed", seed, "RNG seed recorded in outputs");

    // verify
    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    double R1 = 3.0, R = 2.0;
    int n_max = 12, k_max = 6, levels = 8, seqs = 5, samples = 20000;
    std::string out_path;
    verify->add_option("--suite", suite, "zorich|interp|dynamics|growth|all");
    verify->add_option("--R1", R1);
    verify->add_option("--n-max", n_max);
    verify->add_option("--k-max", k_max);
    verify->add_option("--R", R);
    verify->add_option("--levels", levels);
    verify->add_option("--seqs", seqs);
    verify->add_option("--samples", samples);
    verify->add_option("--out", out_path, "JSON report path");

    // julia-spheres
    auto* spheres = app.add_subcommand("julia-spheres", "Gamma_k radii table (CSV)");
    int k_max_s = 8, n_pullback = 8;
    double R1_s = 3.0;
    int n_max_s = 12;
    std::string out_s;
    spheres->add_option("--R1", R1_s);
    spheres->add_option("--n-max", n_max_s);
    spheres->add_option("--k-max", k_max_s);
    spheres->add_option("--n-pullback", n_pullback);
    spheres->add_option("--out", out_s, "CSV path (stdout if omitted)");

    // render-slice
    auto* render = app.add_subcommand("render-slice", "escape-time slice in {x2=0} (P6 PPM)");
    double R1_r = 3.0;
    int n_max_r = 12, width = 320, height = 240, max_iter = 24, threshold_level = 8;
    double t_min = std::nan(""), t_max = std::nan("");
    double th_min = -qr3::kPi, th_max = qr3::kPi;
    std::string out_r = "slice.ppm";
    render->add_option("--R1", R1_r);
    render->add_option("--n-max", n_max_r);
    render->add_option("--width", width);
    render->add_option("--height", height);
    render->add_option("--t-min", t_min, "log-radius window start");
    render->add_option("--t-max", t_max, "log-radius window end");
    render->add_option("--theta-min", th_min);
    render->add_option("--theta-max", th_max);
    render->add_option("--max-iter", max_iter);
    render->add_option("--threshold-level", threshold_level, "escape threshold = R_level");
    render->add_option("--out", out_r, "output PPM path");

    // growth-design
    auto* growth = app.add_subcommand("growth-design", "design lambda sequences (JSON)");
    std::string mode = "fast", eta_s = "2,4,8", logT_s = "", eps_s = "0.5,0.1,0.02";
    double R_g = 2.0;
    std::string out_g;
    growth->add_option("--mode", mode, "fast|slow");
    growth->add_option("--R", R_g);
    growth->add_option("--eta", eta_s, "fast-mode order targets");
    growth->add_option("--log-t", logT_s, "fast-mode log T_k bounds (default logR + 2,5,9)");
    growth->add_option("--eps", eps_s, "slow-mode order caps");
    growth->add_option("--out", out_g, "JSON output path");

    // orbit
    auto* orbit_cmd = app.add_subcommand("orbit", "iterate f and dump the orbit");
    double R1_o = 3.0;
    int n_max_o = 12, steps = 12;
    std::string beam_s, point_s, out_o;
    orbit_cmd->add_option("--R1", R1_o);
    orbit_cmd->add_option("--n-max", n_max_o);
    orbit_cmd->add_option("--beam", beam_s, "start as beam coords y1,y2,t");
    orbit_cmd->add_option("--point", point_s, "start as spatial coords x1,x2,x3");
    orbit_cmd->add_option("--steps", steps);
    orbit_cmd->add_option("--out", out_o, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const json cfg = load_config(config_path);
        if (cfg.contains("seed") && app.count("--seed") == 0) seed = cfg["seed"].get<std::uint64_t>();
        if (verify->parsed())
            return cmd_verify(*verify, cfg, suite, R1, n_max, k_max, R, levels, seqs, samples, seed, out_path);
        if (spheres->parsed())
            return cmd_julia_spheres(*spheres, cfg, R1_s, n_max_s, k_max_s, n_pullback, seed, out_s);
        if (render->parsed())
            return cmd_render_slice(*render, cfg, R1_r, n_max_r, width, height, t_min, t_max, th_min,
                                    th_max, max_iter, threshold_level, out_r);
        if (growth->parsed())
            return cmd_growth_design(*growth, cfg, mode, R_g, eta_s, logT_s, eps_s, out_g);
        if (orbit_cmd->parsed())
            return cmd_orbit(*orbit_cmd, cfg, R1_o, n_max_o, beam_s, point_s, steps, out_o);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
