#include "qcircle/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>

#include "qcircle/errors.hpp"

namespace qcircle {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::ball: return "ball";
        case ScenarioKind::prop2: return "prop2";
        case ScenarioKind::ba_extension: return "ba_extension";
        case ScenarioKind::custom_file: return "custom-file";
    }
    return "?";
}

ScenarioKind parse_scenario_kind(const std::string& s) {
    if (s == "ball") return ScenarioKind::ball;
    if (s == "prop2") return ScenarioKind::prop2;
    if (s == "ba_extension" || s == "ba-extension") return ScenarioKind::ba_extension;
    if (s == "custom-file" || s == "custom_file") return ScenarioKind::custom_file;
    throw DomainError("unknown scenario kind '" + s + "'");
}

void ScenarioConfig::validate() const {
    const Grid g(L, n);
    if (!(tol > 0.0) || !(opnorm_tol > 0.0) || !(cauchy_tol > 0.0)) throw DomainError("tolerances must be positive");
    if (max_iter < 1 || opnorm_max_iter < 1) throw DomainError("iteration limits must be >= 1");
    if (probe_count < 1) throw DomainError("probe_count must be >= 1");
    if (trace_samples < 64) throw DomainError("trace_samples must be >= 64");
    if (trace_window < 0.0 || !std::isfinite(trace_window)) throw DomainError("trace_window must be >= 0");
    switch (kind) {
        case ScenarioKind::ball:
            if (!(c >= 0.0 && c < 1.0)) throw DomainError("ball scenario: need 0 <= c < 1");
            if (!(radius > 0.0)) throw DomainError("ball scenario: radius must be positive");
            if (!(mollify_fraction >= 0.0 && mollify_fraction <= 1.0))
                throw DomainError("ball scenario: mollify fraction must lie in [0, 1]");
            if (std::abs(center) + radius > L / 2) throw DomainError("ball scenario: ball must lie inside |z| <= L/2");
            break;
        case ScenarioKind::prop2:
            if (!(K > 1.0 && K < 2.0)) throw DomainError("prop2 scenario: K must lie in (1, 2)");
            break;
        case ScenarioKind::ba_extension:
            if (boundary_map != "power" && boundary_map != "identity")
                throw DomainError("ba_extension scenario: boundary map must be 'power' or 'identity'");
            if (boundary_map == "power" && !(K >= 1.0 && K < 2.0))
                throw DomainError("ba_extension scenario: K must lie in [1, 2)");
            break;
        case ScenarioKind::custom_file:
            if (field_path.empty()) throw DomainError("custom-file scenario: --mu-file is required");
            if (!fs::exists(field_path)) throw DomainError("custom-file scenario: no such file " + field_path);
            break;
    }
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["scenario"] = to_string(cfg.kind);
    switch (cfg.kind) {
        case ScenarioKind::ball:
            j["c"] = cfg.c;
            j["center"] = {cfg.center.real(), cfg.center.imag()};
            j["radius"] = cfg.radius;
            j["mollify_fraction"] = cfg.mollify_fraction;
            break;
        case ScenarioKind::prop2: j["K"] = cfg.K; break;
        case ScenarioKind::ba_extension:
            j["boundary_map"] = cfg.boundary_map;
            j["K"] = cfg.K;
            break;
        case ScenarioKind::custom_file: j["field_path"] = cfg.field_path; break;
    }
    j["grid"] = {{"half_width", cfg.L}, {"n", cfg.n}};
    j["tol"] = cfg.tol;
    j["opnorm_tol"] = cfg.opnorm_tol;
    j["max_iter"] = cfg.max_iter;
    j["opnorm_max_iter"] = cfg.opnorm_max_iter;
    j["seed"] = cfg.seed;
    j["probe_count"] = cfg.probe_count;
    j["trace_window"] = cfg.effective_window();
    j["trace_samples"] = cfg.trace_samples;
    j["cauchy_tol"] = cfg.cauchy_tol;
    return j;
}

std::string config_hash(const ScenarioConfig& cfg) {
    const std::string s = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json to_json(const SolveReport& r) {
    return {{"iterations", r.iterations}, {"converged", r.converged}, {"residual_history", r.residual_history}};
}

json to_json(const OperatorStats& s) {
    json j;
    j["weighted_norm_estimate"] = s.weighted_norm_estimate;
    j["iteration_count"] = s.iteration_count;
    j["relative_change_at_stop"] = s.relative_change_at_stop;
    j["probe_c1_estimate"] = s.probe_c1_estimate ? json(*s.probe_c1_estimate) : json(nullptr);
    j["converged"] = s.converged;
    j["rayleigh_history"] = s.rayleigh_history;
    json probes = json::array();
    for (const auto& p : s.probes) probes.push_back({{"label", p.label}, {"ratio", p.ratio}, {"iterations", p.iterations}});
    j["probes"] = probes;
    return j;
}

json to_json(const CarlesonReport& r) {
    return {{"norm", r.norm},
            {"witness", {{"x", r.witness_center.real()}, {"y", r.witness_center.imag()}, {"radius", r.witness_radius}}},
            {"family", r.family},
            {"centers", r.centers},
            {"radii", r.radii}};
}

json to_json(const ChordArcReport& r) {
    return {{"constant", r.constant},
            {"witness", {r.witness_i, r.witness_j}},
            {"window", r.window},
            {"samples", r.samples}};
}

json to_json(const CauchyNormReport& r) {
    return {{"norm", r.norm},
            {"iterations", r.iterations},
            {"relative_change", r.relative_change},
            {"converged", r.converged}};
}

json to_json(const BilipschitzProfile& p) {
    return {{"lower", p.lower},
            {"upper", p.upper},
            {"fitted_slope", p.fitted_slope},
            {"blowup_exponent", p.blowup_exponent ? json(*p.blowup_exponent) : json(nullptr)},
            {"non_bilipschitz", p.blowup_exponent.has_value()}};
}

void write_json(const json& j, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    os << j.dump(2) << '\n';
    if (!os) throw DomainError("write failed: " + path);
}

namespace {

struct ScenarioMu {
    BeltramiCoefficient mu;
    std::optional<MapEvaluator> closed_map;
    std::optional<ComplexField> closed_dbar;  ///< dbar rho of the closed-form map, truncated
    std::string description;
};

double max_support_radius(const ComplexField& f) {
    double r = 0.0;
    for (std::size_t k = 0; k < f.grid.n(); ++k)
        for (std::size_t j = 0; j < f.grid.n(); ++j)
            if (f.at(j, k) != cplx{}) r = std::max(r, std::abs(f.grid.point(j, k)));
    return r;
}

ScenarioMu build_mu(const ScenarioConfig& cfg, const Grid& grid) {
    const double trunc = grid.half_width() / 2;
    switch (cfg.kind) {
        case ScenarioKind::ball: {
            ComplexField f =
                cplx(cfg.c) * indicator_ball(grid, cfg.center, cfg.radius, cfg.mollify_fraction * cfg.radius);
            return {BeltramiCoefficient(std::move(f), std::abs(cfg.center) + cfg.radius), std::nullopt, std::nullopt,
                    "c * indicator of B(center, radius), mollified"};
        }
        case ScenarioKind::prop2: {
            Prop2Result p = prop2_map(cfg.K, grid);
            ComplexField mu = truncate_to_disc(p.mu, trunc);
            const Prop2Map m = p.map;
            ComplexField dbar = dbar_field([m](cplx z) { return m.jacobian(z); }, grid, trunc);
            return {BeltramiCoefficient(std::move(mu), trunc), p.evaluator, std::move(dbar),
                    "closed-form map, mu truncated to |z| <= L/2"};
        }
        case ScenarioKind::ba_extension: {
            const BoundaryMap f = cfg.boundary_map == "identity" ? BoundaryMap::identity() : BoundaryMap::power(cfg.K);
            const BAExtension ext = ba_extension(f);
            ComplexField mu = sample_dilatation(ext, grid, trunc);
            ComplexField dbar = dbar_field([ext](cplx z) { return ext.jacobian(z); }, grid, trunc);
            return {BeltramiCoefficient(std::move(mu), trunc), ext.evaluator(), std::move(dbar),
                    "Beurling-Ahlfors extension, mu truncated to |z| <= L/2"};
        }
        case ScenarioKind::custom_file: {
            ComplexField f = read_binary(cfg.field_path);
            if (f.grid != grid) throw DomainError("custom-file scenario: field grid differs from --grid-l/--grid-n");
            const double r = std::max(max_support_radius(f), grid.spacing());
            return {BeltramiCoefficient(std::move(f), r), std::nullopt, std::nullopt, "field read from file"};
        }
    }
    throw DomainError("unknown scenario");
}

json grid_json(const Grid& g) {
    return {{"half_width", g.half_width()}, {"n", g.n()}, {"spacing", g.spacing()}, {"stagger", Grid::stagger}};
}

struct Measurements {
    json report;
    bool converged = true;
    std::optional<CurveTrace> trace;
    double carleson = 0.0;
    std::optional<double> c1;
    std::optional<double> chord_arc;
    std::optional<double> energy;
    bool non_bilipschitz = false;
    std::optional<MapEvaluator> map;
};

Measurements measure(const ScenarioConfig& cfg) {
    const Grid grid(cfg.L, cfg.n);
    SpectralPlan plan(grid);
    ScenarioMu sm = build_mu(cfg, grid);
    const BeltramiCoefficient& mu = sm.mu;

    Measurements m;
    json& r = m.report;
    r["schema"] = "qcircle.report/1";
    r["config"] = config_to_json(cfg);
    r["config_hash"] = config_hash(cfg);
    r["grid"] = grid_json(grid);
    r["seeds"] = {{"probes", cfg.seed}};
    r["truncation"] = {{"mu_support_radius", mu.support_radius()}, {"trace_window", cfg.effective_window()}};
    r["mu"] = {{"description", sm.description},
               {"sup_bound", mu.sup_bound()},
               {"support_radius", mu.support_radius()},
               {"l2_norm", norm(mu.field())},
               {"weighted_norm", norm(mu.field(), Weight::inv_abs_y)}};

    const CarlesonReport car = carleson_norm(carleson_density(mu));
    m.carleson = car.norm;
    r["carleson"] = to_json(car);

    const OperatorStats op = weighted_operator_norm(plan, mu, cfg.opnorm_tol, cfg.opnorm_max_iter);
    r["operator_norm"] = to_json(op);
    if (!op.converged) m.converged = false;

    try {
        const auto probes = default_probes(grid, cfg.probe_count, cfg.seed);
        OperatorStats inv = inverse_weighted_bound(plan, mu, probes, cfg.tol, cfg.max_iter);
        const auto labels = default_probe_labels(cfg.probe_count);
        for (std::size_t i = 0; i < inv.probes.size() && i < labels.size(); ++i) inv.probes[i].label = labels[i];
        m.c1 = inv.probe_c1_estimate;
        r["inverse_bound"] = to_json(inv);
    } catch (const ConvergenceError&) {
        m.converged = false;
        r["inverse_bound"] = nullptr;
    }

    SolveReport solve = neumann_solve(plan, mu, mu.field(), cfg.tol, cfg.max_iter);
    r["solve"] = to_json(solve);
    if (!solve.converged) m.converged = false;

    const bool have_map = sm.closed_map.has_value() || solve.converged;
    if (have_map) {
        m.map = sm.closed_map ? *sm.closed_map : cauchy_map(solve.solution);
        const MapEvaluator& rho = *m.map;
        r["map"] = {{"provenance", to_string(rho.provenance)}, {"notes", rho.notes}};

        const CurveTrace tr = trace_curve(rho, cfg.effective_window(), cfg.trace_samples);
        m.trace = tr;
        r["trace"] = {{"samples", tr.size()},
                      {"window", cfg.effective_window()},
                      {"total_length", tr.total_length()},
                      {"csv", "trace.csv"}};
        const ChordArcReport ca = chord_arc_constant(tr);
        m.chord_arc = ca.constant;
        r["chord_arc"] = to_json(ca);
        r["regularity"] = regularity_check(tr);
        const ComplexField& dbar = sm.closed_dbar ? *sm.closed_dbar : solve.solution;
        m.energy = rectifiability_energy(dbar);
        r["rectifiability_energy"] = *m.energy;
        r["curve_cauchy"] = to_json(curve_cauchy_operator(tr, cfg.cauchy_tol));

        auto pairs = anchored_pairs(0.0);
        for (std::size_t i = 0; i + 1 < tr.size(); i += 8)
            pairs.emplace_back(cplx(tr.params[i]), cplx(tr.params[i + 1]));
        const BilipschitzProfile bp = bilipschitz_profile(rho, pairs, cplx{});
        m.non_bilipschitz = bp.blowup_exponent.has_value();
        r["bilipschitz"] = to_json(bp);
    } else {
        for (const char* k : {"map", "trace", "chord_arc", "regularity", "rectifiability_energy", "curve_cauchy",
                              "bilipschitz"})
            r[k] = nullptr;
    }
    r["converged"] = m.converged;
    return m;
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Measurements m = measure(cfg);
    fs::create_directories(cfg.output_dir);
    ScenarioOutcome out;
    if (m.trace) {
        const std::string tp = (fs::path(cfg.output_dir) / "trace.csv").string();
        write_trace_csv(*m.trace, tp);
        out.files.push_back(tp);
    }
    const std::string rp = (fs::path(cfg.output_dir) / "report.json").string();
    write_json(m.report, rp);
    out.files.push_back(rp);
    out.report = std::move(m.report);
    out.converged = m.converged;
    return out;
}

void Theorem1Config::validate() const {
    const Grid g(L, n);
    (void)g;
    if (radii.empty() || c_values.empty() || radii.size() * c_values.size() < 3)
        throw DomainError("theorem1: the family needs at least 3 members");
    if (t_values.size() < 2) throw DomainError("theorem1: need at least two scaling values t");
    for (double r : radii)
        if (!(r > 0.0) || std::abs(x0) + 3.0 * r > L / 2) throw DomainError("theorem1: ball B(x0 + 2ri, r) must lie inside |z| <= L/2");
    for (double c : c_values)
        if (!(c > 0.0 && c < 1.0)) throw DomainError("theorem1: c must lie in (0, 1)");
    for (double t : t_values)
        if (!(t > 0.0 && t <= 1.0)) throw DomainError("theorem1: t must lie in (0, 1]");
    if (!(tol > 0.0) || max_iter < 1) throw DomainError("theorem1: bad tolerance or iteration limit");
}

Theorem1Result compare_theorem1(const Theorem1Config& cfg) {
    cfg.validate();
    const Grid grid(cfg.L, cfg.n);
    SpectralPlan plan(grid);
    auto member = [&](double r, double c) {
        const cplx center(cfg.x0, 2.0 * r);
        ComplexField f = cplx(c) * indicator_ball(grid, center, r, cfg.mollify_fraction * r);
        return BeltramiCoefficient(std::move(f), std::abs(center) + r);
    };

    Theorem1Result res;
    res.bracket_lo = std::numeric_limits<double>::infinity();
    for (double r : cfg.radii)
        for (double c : cfg.c_values) {
            const BeltramiCoefficient mu = member(r, c);
            const double car = carleson_norm(carleson_density(mu)).norm;
            const OperatorStats st = weighted_operator_norm(plan, mu, cfg.tol, cfg.max_iter);
            if (!st.converged) throw ConvergenceError("theorem1: power iteration did not converge");
            const double ratio = st.weighted_norm_estimate * st.weighted_norm_estimate / car;
            res.rows.push_back({r, c, car, st.weighted_norm_estimate, ratio, st.iteration_count});
            res.bracket_lo = std::min(res.bracket_lo, ratio);
            res.bracket_hi = std::max(res.bracket_hi, ratio);
        }
    res.bracket_C = std::max(res.bracket_hi, 1.0 / res.bracket_lo);

    const BeltramiCoefficient base = member(cfg.radii.front(), cfg.c_values.back());
    std::vector<double> lx, ly;
    for (double t : cfg.t_values) {
        const OperatorStats st = weighted_operator_norm(plan, base.scaled(t), cfg.tol, cfg.max_iter);
        if (!st.converged) throw ConvergenceError("theorem1: power iteration did not converge");
        res.t_values.push_back(t);
        res.t_opnorms.push_back(st.weighted_norm_estimate);
        lx.push_back(std::log(t));
        ly.push_back(2.0 * std::log(st.weighted_norm_estimate));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    res.slope_norm_sq = sxy / sxx;

    fs::create_directories(cfg.output_dir);
    {
        std::ofstream os(fs::path(cfg.output_dir) / "theorem1.csv");
        if (!os) throw DomainError("cannot write theorem1.csv");
        os << "r,c,carleson_norm,opnorm,opnorm_sq,ratio,iterations\n" << std::setprecision(17);
        for (const auto& row : res.rows)
            os << row.r << ',' << row.c << ',' << row.carleson << ',' << row.opnorm << ','
               << row.opnorm * row.opnorm << ',' << row.ratio << ',' << row.iterations << '\n';
        os << "\nt,opnorm,opnorm_sq\n";
        for (std::size_t i = 0; i < res.t_values.size(); ++i)
            os << res.t_values[i] << ',' << res.t_opnorms[i] << ',' << res.t_opnorms[i] * res.t_opnorms[i] << '\n';
    }
    json s;
    s["schema"] = "qcircle.theorem1/1";
    s["grid"] = grid_json(grid);
    s["tol"] = cfg.tol;
    json rows = json::array();
    for (const auto& row : res.rows)
        rows.push_back({{"r", row.r},
                        {"c", row.c},
                        {"carleson_norm", row.carleson},
                        {"opnorm", row.opnorm},
                        {"ratio", row.ratio},
                        {"iterations", row.iterations}});
    s["rows"] = rows;
    s["bracket"] = {{"lo", res.bracket_lo}, {"hi", res.bracket_hi}, {"C", res.bracket_C}};
    s["t_sweep"] = {{"base", {{"r", cfg.radii.front()}, {"c", cfg.c_values.back()}}},
                    {"t", res.t_values},
                    {"opnorm", res.t_opnorms},
                    {"slope_norm_sq", res.slope_norm_sq}};
    write_json(s, (fs::path(cfg.output_dir) / "theorem1.json").string());
    res.summary = std::move(s);
    return res;
}

json verify_theorem2(const ScenarioConfig& cfg) {
    cfg.validate();
    Measurements m = measure(cfg);
    json out;
    out["schema"] = "qcircle.theorem2/1";
    out["config"] = config_to_json(cfg);
    out["config_hash"] = config_hash(cfg);
    out["carleson_norm"] = m.carleson;
    out["c1"] = m.c1 ? json(*m.c1) : json(nullptr);
    out["chord_arc"] = m.chord_arc ? json(*m.chord_arc) : json(nullptr);
    out["energy"] = m.energy ? json(*m.energy) : json(nullptr);

    // Trace length under grid refinement n -> 2n with the trace parameters held fixed.
    json delta = nullptr;
    json lengths = json::array();
    if (m.trace) {
        const double l1 = m.trace->total_length();
        lengths.push_back(l1);
        if (m.map && m.map->provenance == Provenance::solver) {
            const Grid fine(cfg.L, cfg.n * 2);
            SpectralPlan plan(fine);
            ScenarioMu sm = build_mu(cfg, fine);
            SolveReport s = neumann_solve(plan, sm.mu, sm.mu.field(), cfg.tol, cfg.max_iter);
            if (s.converged) {
                const double l2 = trace_curve(cauchy_map(s.solution), cfg.effective_window(), cfg.trace_samples)
                                      .total_length();
                lengths.push_back(l2);
                delta = std::abs(l2 - l1) / l1;
            } else {
                m.converged = false;
            }
        } else {
            lengths.push_back(l1);
            delta = 0.0;
        }
    }
    out["trace_length_delta"] = delta;
    out["trace_lengths"] = lengths;
    out["non_bilipschitz"] = m.non_bilipschitz;
    out["converged"] = m.converged;
    fs::create_directories(cfg.output_dir);
    write_json(out, (fs::path(cfg.output_dir) / "theorem2.json").string());
    return out;
}

json transform_selftest(double L, std::size_t n, const std::string& output_dir) {
    const Grid grid(L, n);
    if (L < 4.5) throw DomainError("transform-selftest: need L >= 4.5 so that {2 <= |z| <= 4} fits");
    SpectralPlan plan(grid);
    const ComplexField ball = indicator_ball(grid, 0.0, 1.0);
    const ComplexField S = plan.beurling(ball);
    const ComplexField T = plan.cauchy_plane(ball);
    // T is compared modulo its additive constant, matched at the sample nearest z = 3.
    std::size_t jr = 0, kr = 0;
    double best = 1e300;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(grid.point(j, k) - 3.0) < best) {
                best = std::abs(grid.point(j, k) - 3.0);
                jr = j;
                kr = k;
            }
    const cplx shift = T.at(jr, kr) - 1.0 / grid.point(jr, kr);
    double sn = 0, sd = 0, tn = 0, td = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z = grid.point(j, k);
            const double a = std::abs(z);
            if (a >= 2.0 && a <= 4.0) {
                const cplx es = -1.0 / (z * z);
                sn += std::norm(S.at(j, k) - es);
                sd += std::norm(es);
                const cplx et = 1.0 / z;
                tn += std::norm(T.at(j, k) - shift - et);
                td += std::norm(et);
            }
        }
    const double s_err = std::sqrt(sn / sd), t_err = std::sqrt(tn / td);

    double iso = 0.0, adj = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const ComplexField f = bandlimited_noise(plan.padded_grid(), seed, 0.25);
        const ComplexField g = bandlimited_noise(plan.padded_grid(), seed + 100, 0.25);
        const ComplexField Sf = plan.beurling(f);
        iso = std::max(iso, std::abs(norm(Sf) / norm(f) - 1.0));
        const cplx lhs = inner(Sf, g), rhs = inner(f, plan.beurling_adjoint(g));
        adj = std::max(adj, std::abs(lhs - rhs) / std::abs(lhs));
    }
    const ComplexField w = windowed_noise(grid, 7, 0.05, L / 2);
    const ComplexField Tw = plan.cauchy_plane(w);
    const double dbar_err = relative_error_interior(dbar_fd(Tw), w, 8);
    const double d_err = relative_error_interior(d_fd(Tw), plan.beurling(w), 8);

    json j;
    j["schema"] = "qcircle.selftest/1";
    j["grid"] = grid_json(grid);
    j["beurling_ball_error"] = s_err;
    j["cauchy_ball_error"] = t_err;
    j["isometry_defect"] = iso;
    j["adjoint_defect"] = adj;
    j["dbar_contract_error"] = dbar_err;
    j["d_contract_error"] = d_err;
    j["pass"] = s_err <= 0.05 && t_err <= 0.05 && iso <= 1e-12 && adj <= 1e-10 && dbar_err <= 1e-4 && d_err <= 1e-4;
    fs::create_directories(output_dir);
    write_json(j, (fs::path(output_dir) / "selftest.json").string());
    return j;
}

}  // namespace qcircle
