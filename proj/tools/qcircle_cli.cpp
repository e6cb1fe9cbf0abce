// qcircle: scenario runner for the quasicircle toolkit.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical non-convergence.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcircle/errors.hpp"
#include "qcircle/scenario.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNonConvergence = 3;

void report_error(const char* kind, const std::string& msg) {
    nlohmann::ordered_json j{{"error", kind}, {"message", msg}};
    std::cerr << j.dump() << '\n';
}

qcircle::cplx parse_point(const std::string& s) {
    std::istringstream is(s);
    double x = 0, y = 0;
    char comma = 0;
    if (!(is >> x >> comma >> y) || comma != ',') throw qcircle::DomainError("expected a point as 'x,y', got '" + s + "'");
    return {x, y};
}

std::string default_out(const std::string& sub) {
    const char* root = std::getenv("QCIRCLE_OUT_DIR");
    std::string base = root && *root ? root : "qcircle_out";
    return base + "/" + sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasicircle / Beltrami numerical toolkit"};
    app.require_subcommand(1);

    qcircle::ScenarioConfig cfg;
    std::string scenario = "ball", center = "0,2", out;

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--grid-n", cfg.n, "samples per axis (power of two >= 16)");
        sc->add_option("--grid-l", cfg.L, "half-width L of the square [-L, L]^2");
        sc->add_option("--tol", cfg.tol, "Neumann residual tolerance");
        sc->add_option("--out", out, "output directory (default $QCIRCLE_OUT_DIR/<command>)");
    };
    auto add_scenario = [&](CLI::App* sc) {
        add_common(sc);
        sc->add_option("--scenario", scenario, "ball | prop2 | ba_extension | custom-file");
        sc->add_option("--k", cfg.K, "K for prop2 / ba_extension");
        sc->add_option("--c", cfg.c, "amplitude of the ball coefficient");
        sc->add_option("--center", center, "ball centre as x,y");
        sc->add_option("--radius", cfg.radius, "ball radius");
        sc->add_option("--mollify", cfg.mollify_fraction, "ramp width as a fraction of the radius");
        sc->add_option("--mu-file", cfg.field_path, "binary field file for custom-file");
        sc->add_option("--boundary-map", cfg.boundary_map, "power | identity (ba_extension)");
        sc->add_option("--seed", cfg.seed, "probe seed");
        sc->add_option("--probes", cfg.probe_count, "number of noise probes");
        sc->add_option("--samples", cfg.trace_samples, "trace samples");
        sc->add_option("--window", cfg.trace_window, "trace half-window (default L)");
        sc->add_option("--opnorm-tol", cfg.opnorm_tol, "power-iteration relative tolerance");
    };

    auto* run = app.add_subcommand("run", "run one scenario and write report.json + trace.csv");
    add_scenario(run);
    auto* t2 = app.add_subcommand("theorem2", "invertibility / chord-arc summary for one scenario");
    add_scenario(t2);

    qcircle::Theorem1Config t1cfg;
    auto* t1 = app.add_subcommand("theorem1", "Carleson norm vs weighted operator norm over a ball family");
    t1->add_option("--grid-n", t1cfg.n, "samples per axis");
    t1->add_option("--grid-l", t1cfg.L, "half-width L");
    t1->add_option("--tol", t1cfg.tol, "power-iteration relative tolerance");
    t1->add_option("--radii", t1cfg.radii, "ball radii r (balls B(2ri, r))")->delimiter(',');
    t1->add_option("--c-values", t1cfg.c_values, "amplitudes c")->delimiter(',');
    t1->add_option("--t-values", t1cfg.t_values, "scaling sweep t")->delimiter(',');
    t1->add_option("--out", out, "output directory");

    double st_L = 8.0;
    std::size_t st_n = 256;
    auto* st = app.add_subcommand("transform-selftest", "spectral operator checks against closed forms");
    st->add_option("--grid-l", st_L, "half-width L");
    st->add_option("--grid-n", st_n, "samples per axis");
    st->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        if (run->parsed() || t2->parsed()) {
            cfg.kind = qcircle::parse_scenario_kind(scenario);
            cfg.center = parse_point(center);
            cfg.output_dir = out.empty() ? default_out(run->parsed() ? "run" : "theorem2") : out;
            if (run->parsed()) {
                const auto res = qcircle::run_scenario(cfg);
                std::cout << res.report.dump(2) << '\n';
                if (!res.converged) {
                    report_error("non_convergence", "iterative solve did not converge; report flagged converged:false");
                    return kNonConvergence;
                }
            } else {
                const auto res = qcircle::verify_theorem2(cfg);
                std::cout << res.dump(2) << '\n';
                if (!res["converged"].get<bool>()) {
                    report_error("non_convergence", "iterative solve did not converge");
                    return kNonConvergence;
                }
            }
        } else if (t1->parsed()) {
            t1cfg.output_dir = out.empty() ? default_out("theorem1") : out;
            const auto res = qcircle::compare_theorem1(t1cfg);
            std::cout << res.summary.dump(2) << '\n';
        } else if (st->parsed()) {
            const auto res = qcircle::transform_selftest(st_L, st_n, out.empty() ? default_out("selftest") : out);
            std::cout << res.dump(2) << '\n';
            if (!res["pass"].get<bool>()) return 1;
        }
    } catch (const qcircle::DomainError& e) {
        report_error("config", e.what());
        return kConfigError;
    } catch (const qcircle::ConvergenceError& e) {
        report_error("non_convergence", e.what());
        return kNonConvergence;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
    return 0;
}
