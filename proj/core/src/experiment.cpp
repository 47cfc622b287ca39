#include "proxlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

namespace proxlab {

namespace {

constexpr double kGolden = 0.6180339887498949;

/// splitmix64; deterministic across platforms, used for all sampled choices.
struct SplitMix64 {
    std::uint64_t s;
    explicit SplitMix64(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

std::vector<std::size_t> sample_indices(SplitMix64& rng, std::size_t total, std::size_t want) {
    std::vector<std::size_t> out;
    out.reserve(want);
    for (std::size_t k = 0; k < want; ++k) out.push_back(rng.below(total));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct Ctx {
    const ExperimentConfig& cfg;
    std::filesystem::path outdir;
    json report;
    std::vector<std::string> files;

    void write_text(const std::string& name, const std::string& text) {
        std::ofstream f(outdir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (outdir / name).string());
        f << text;
        files.push_back(name);
    }
    void write_sub(const std::string& name, const json& j) { write_text(name, j.dump(1) + "\n"); }

    void add_table(const std::string& name, std::vector<std::string> header,
                   json rows) {
        if (!report.contains("data")) report["data"] = json::array();
        report["data"].push_back(
            {{"name", name}, {"header", std::move(header)}, {"rows", std::move(rows)}});
    }
    void verdict(const std::string& key, const json& value, const std::string& source) {
        report["verdicts"][key] = {{"value", value}, {"source", source}};
    }
};

System resolve_system(Ctx& ctx, const json& default_desc) {
    const json desc = ctx.cfg.system ? *ctx.cfg.system : default_desc;
    ctx.report["config"]["system"] = desc;
    return system_from_json(desc);
}

double resolve_h(Ctx& ctx, double def) {
    const double h = ctx.cfg.grid_h ? *ctx.cfg.grid_h : def;
    if (!(h > 0.0)) throw std::invalid_argument("grid h must be positive");
    ctx.report["config"]["grid"] = {{"h", h}};
    return h;
}

HorizonParams resolve_horizon(Ctx& ctx, HorizonParams def) {
    HorizonParams p = ctx.cfg.horizon ? horizon_from_json(*ctx.cfg.horizon, def) : def;
    ctx.report["config"]["horizon"] = horizon_to_json(p);
    return p;
}

double resolve_delta(Ctx& ctx, double def) {
    double delta = def;
    if (ctx.cfg.horizon && ctx.cfg.horizon->contains("delta"))
        delta = ctx.cfg.horizon->at("delta").get<double>();
    ctx.report["config"]["horizon"]["delta"] = delta;
    return delta;
}

AtomicMeasure resolve_measure(Ctx& ctx, const GridPtr& grid, const System& system,
                              const json& default_desc) {
    const json desc = ctx.cfg.measure ? *ctx.cfg.measure : default_desc;
    ctx.report["config"]["measure"] = desc;
    return measure_from_config(desc, grid, system);
}

json rho_convergence_rows(const System& sys, double t0, const std::vector<long long>& ns) {
    json rows = json::array();
    if (const auto exact = sys.rotation_angle_exact()) {
        for (long long n : ns) rows.push_back(json::array({n, exact->to_double()}));
        return rows;
    }
    const long long n_max = ns.back();
    const LiftTrace trace = lift_orbit(sys, t0, n_max);
    for (long long n : ns) {
        const double est = wrap_unit((trace.values[static_cast<std::size_t>(n)] - t0) /
                                     static_cast<double>(n));
        rows.push_back(json::array({n, est}));
    }
    return rows;
}

std::vector<Point> interval_fiber_samples(double lo, double hi, double h, double circle_t) {
    std::vector<Point> pts;
    for (double t = lo; t <= hi + 1e-12; t += h)
        pts.push_back(Point::product(Point::interval(std::min(t, hi)), Point::circle(circle_t)));
    return pts;
}

json decay_table_rows(const DecayReport& rep) {
    json rows = json::array();
    for (const auto& [n, d] : rep.trace) rows.push_back(json::array({n, d}));
    return rows;
}

json mass_table_rows(const MeasureTestReport& rep) {
    json rows = json::array();
    for (std::size_t i = 0; i < rep.per_center_mass.size(); ++i)
        rows.push_back(json::array({i, rep.per_center_mass[i]}));
    return rows;
}

// ---------------------------------------------------------------------------
// experiment pipelines

void run_example_2_7_certificate(Ctx& ctx) {
    const System sys = resolve_system(
        ctx, {{"kind", "product"},
              {"f", {{"kind", "sqrt_interval"}}},
              {"g", {{"kind", "rotation"}, {"alpha", kGolden}}}});
    const double h = resolve_h(ctx, 1.0 / 200.0);
    const HorizonParams hp = resolve_horizon(ctx, {60, 1e-3, 0.0, 0.0});
    const auto grid = Grid::build(sys.space(), h);

    const CertificateReport cert = inner_distal_certificate(sys, grid, hp);
    ctx.write_sub("certificate.json", certificate_to_json(cert));
    ctx.verdict("inner_distal_certificate", verdict_name(cert.verdict), "certificate.json");
    ctx.verdict("routes_agree", cert.routes_agree, "certificate.json");

    const int cw_N = 6;
    const double gamma = 1e-3;
    const auto fiber = interval_fiber_samples(0.2, 0.8, h, 0.0);
    const CwDistalReport cw = cw_distal_probe(sys, {fiber}, cw_N, gamma);
    ctx.write_sub("cw_probe.json", cw_report_to_json(cw));
    ctx.verdict("cw_distal_probe", cw.pass ? "PASS" : "FAIL", "cw_probe.json");

    const DecayReport fiber_decay = diam_decay(sys, fiber, cw_N);
    ctx.report["numbers"] = {{"fiber_min_diam", fiber_decay.min_diam},
                             {"fiber_argmin_n", fiber_decay.argmin},
                             {"cw_gamma", gamma},
                             {"cw_N", cw_N}};
    ctx.add_table("diam_trace", {"n", "diam"}, decay_table_rows(fiber_decay));
}

void run_sqrt_interval_refute(Ctx& ctx) {
    const System sys = resolve_system(ctx, {{"kind", "sqrt_interval"}});
    const double h = resolve_h(ctx, 1.0 / 200.0);
    const HorizonParams hp = resolve_horizon(ctx, {60, 1e-3, 0.0, 0.0});
    const auto grid = Grid::build(sys.space(), h);

    const CertificateReport cert = inner_distal_certificate(sys, grid, hp);
    ctx.write_sub("certificate.json", certificate_to_json(cert));
    ctx.verdict("inner_distal_certificate", verdict_name(cert.verdict), "certificate.json");
    ctx.verdict("routes_agree", cert.routes_agree, "certificate.json");

    double witness_lo = 0.0, witness_hi = 0.0, witness_len = 0.0;
    if (cert.witness) {
        const std::size_t center = cert.witness->first;
        const SubsetMask cell = proximal_cell(sys, grid->point(center), *grid, hp.N, hp.eps);
        SubsetMask inner = interior_points(cell, hp.interior_scale(h));
        // largest chain component strictly inside the open interval
        inner.set(0, false);
        inner.set(grid->size() - 1, false);
        for (const auto& comp : chain_components(inner, hp.chain_step(h))) {
            const auto idx = comp.indices();
            if (idx.empty()) continue;
            const double lo = grid->point(idx.front()).as_interval().x;
            const double hi = grid->point(idx.back()).as_interval().x;
            if (hi - lo > witness_len) {
                witness_len = hi - lo;
                witness_lo = lo;
                witness_hi = hi;
            }
        }
    }
    ctx.report["numbers"] = {{"witness_segment_lo", witness_lo},
                             {"witness_segment_hi", witness_hi},
                             {"witness_segment_length", witness_len},
                             {"ball_route_refuting", cert.ball_route.refuting_balls}};
}

void run_extension_check(Ctx& ctx) {
    const System g = resolve_system(
        ctx, {{"kind", "product"},
              {"f", {{"kind", "sqrt_interval"}}},
              {"g", {{"kind", "rotation"}, {"alpha", kGolden}}}});
    const double h = resolve_h(ctx, 1.0 / 50.0);
    const System f = System::rotation(kGolden);
    const System f_wrong = System::rotation(0.25);

    const auto sample_grid = Grid::build(g.space(), 1.0 / 20.0);
    const FactorMap pi = FactorMap::project_right(g.space());
    const auto defect = check_homomorphism(g, f, pi, sample_grid->points(), 0.0);
    const auto defect_id =
        check_homomorphism(g, g, FactorMap::identity(g.space()), sample_grid->points(), 0.0);
    const auto defect_wrong = check_homomorphism(g, f_wrong, pi, sample_grid->points(), 1e-12);

    json hom = {{"projection_defect", defect.defect},
                {"projection_pass", defect.pass},
                {"identity_defect", defect_id.defect},
                {"wrong_factor_defect", defect_wrong.defect},
                {"wrong_factor_pass", defect_wrong.pass}};
    ctx.write_sub("homomorphism.json", hom);
    ctx.verdict("factor_map_commutes", defect.pass, "homomorphism.json");
    ctx.verdict("wrong_factor_detected", !defect_wrong.pass, "homomorphism.json");

    const auto grid_src = Grid::build(g.space(), h);
    const auto grid_circle = Grid::build(Space::circle(), h);
    const double r = 3.0 * h;

    std::vector<std::vector<Point>> continua;
    continua.push_back(interval_fiber_samples(0.2, 0.8, h, 0.25));
    std::vector<Point> rect;
    for (double a = 0.3; a <= 0.5 + 1e-12; a += h)
        for (double b = 0.1; b <= 0.3 + 1e-12; b += h)
            rect.push_back(Point::product(Point::interval(std::min(a, 0.5)),
                                          Point::circle(std::min(b, 0.3))));
    continua.push_back(rect);

    const InnerLightReport probe = inner_light_probe(pi, continua, *grid_circle, *grid_src, r);
    ctx.write_sub("inner_light.json", inner_light_to_json(probe));
    ctx.verdict("projection_inner_light_on_samples", !probe.violation_found, "inner_light.json");

    const FactorMap collapse = FactorMap::collapse_right(g.space(), Point::circle(0.25));
    const InnerLightReport violation =
        inner_light_probe(collapse, {rect}, *grid_src, *grid_src, r);
    ctx.write_sub("inner_light_violation.json", inner_light_to_json(violation));
    ctx.verdict("collapse_map_violates_inner_light", violation.violation_found,
                "inner_light_violation.json");
    ctx.report["numbers"] = {{"projection_defect", defect.defect},
                             {"wrong_factor_defect", defect_wrong.defect}};
}

void classify_common(Ctx& ctx, const System& sys) {
    ClassifyParams params;
    const ClassificationResult res = classify_circle(sys, params);
    ctx.write_sub("classification.json", classification_to_json(res));
    ctx.verdict("class", class_name(res.cls), "classification.json");
    ctx.report["numbers"] = {{"rho", res.rho.rho}, {"rho_error_bound", res.rho.error_bound}};
    ctx.add_table("rho_convergence", {"n", "estimate"},
                  rho_convergence_rows(sys, params.t0, {100, 1000, 10000, 100000}));
    if (res.cls == CircleClass::denjoy_like && res.wandering_witness) {
        ctx.report["numbers"]["witness_arc_lo"] = res.wandering_witness->lo;
        ctx.report["numbers"]["witness_arc_hi"] = res.wandering_witness->hi;
        ctx.report["numbers"]["witness_disjoint_iterates"] = res.witness_disjoint_iterates;
    }
    if (res.periodic)
        ctx.report["numbers"]["periodic_mask_fraction"] =
            static_cast<double>(res.periodic->mask.count()) /
            static_cast<double>(res.periodic->mask.size());
}

void run_rotation_classify(Ctx& ctx) {
    const System sys = resolve_system(ctx, {{"kind", "rotation"}, {"alpha", "1/3"}});
    classify_common(ctx, sys);
}

void run_denjoy_classify(Ctx& ctx) {
    const System sys = resolve_system(
        ctx, {{"kind", "denjoy"}, {"alpha", kGolden}, {"K", 20}, {"c", 0.5}});
    classify_common(ctx, sys);
}

void run_circle_support(Ctx& ctx) {
    const System sys = resolve_system(ctx, {{"kind", "sine_circle"}, {"a", 0.1}});
    const double h = resolve_h(ctx, 1.0 / 100.0);
    const int cesaro_n = 400;
    const double support_tol = 0.01;

    const auto grid_for_measure = Grid::build(sys.space(), h);
    const AtomicMeasure start = resolve_measure(
        ctx, grid_for_measure, sys,
        {{"kind", "atoms"}, {"points", {0.25}}, {"weights", {1.0}}});
    const AtomicMeasure avg = cesaro(start, sys, cesaro_n, 1.0 / 500.0);
    const double defect = invariance_defect(avg, sys);
    const auto supp = support(avg, support_tol);

    const auto& grid = grid_for_measure;
    const double r = 0.02;
    const SubsetMask omega = nonwandering_points(sys, grid, r, 60);

    bool supp_in_omega = true;
    for (const auto& p : supp) {
        bool near = false;
        for (std::size_t i : grid->near_indices(p, r))
            if (omega.test(i)) { near = true; break; }
        if (!near) { supp_in_omega = false; break; }
    }

    const auto per = periodic_points(sys, 1, grid);
    bool supp_near_periodic = true;
    for (const auto& p : supp) {
        bool near = false;
        for (const auto& b : per.brackets)
            if (circle_dist(p.as_circle().t, 0.5 * (b.lo + b.hi)) <= r) { near = true; break; }
        if (!near) { supp_near_periodic = false; break; }
    }

    json sub;
    sub["cesaro_n"] = cesaro_n;
    sub["invariance_defect"] = defect;
    sub["support_tol"] = support_tol;
    json supp_json = json::array();
    for (const auto& p : supp) supp_json.push_back(point_to_json(sys.space(), p));
    sub["support"] = supp_json;
    sub["averaged_measure"] = measure_to_json(avg);
    sub["nonwandering_count"] = omega.count();
    sub["periodic_brackets"] = per.brackets.size();
    ctx.write_sub("support.json", sub);
    ctx.verdict("support_in_nonwandering", supp_in_omega, "support.json");
    ctx.verdict("support_near_periodic_points", supp_near_periodic, "support.json");
    ctx.report["numbers"] = {{"invariance_defect", defect},
                             {"support_size", supp.size()},
                             {"nonwandering_count", omega.count()}};
}

void run_interval_trichotomy(Ctx& ctx) {
    const double h = resolve_h(ctx, 1.0 / 500.0);
    const HorizonParams hp = resolve_horizon(ctx, {60, 1e-3, 0.0, 0.0});
    const double tol = 0.01;
    const std::vector<std::pair<std::string, System>> systems = {
        {"identity_interval", System::identity_interval()},
        {"north_south", System::north_south()},
        {"sqrt_interval", System::sqrt_interval()},
    };
    ctx.report["config"]["system"] = "interval catalogue";
    json numbers;
    for (const auto& [name, sys] : systems) {
        const auto grid = Grid::build(sys.space(), h);
        const AtomicMeasure mu = resolve_measure(ctx, grid, sys, {{"kind", "lebesgue_grid"}});
        const MeasureTestReport rep = inner_distal_measure_test(mu, sys, grid, hp, tol);
        const std::string file = "measure_test_" + name + ".json";
        ctx.write_sub(file, measure_report_to_json(rep));
        ctx.verdict("inner_distal_measure_" + name, rep.pass ? "PASS" : "FAIL", file);
        numbers["max_mass_" + name] = rep.max_mass;
        if (name == "sqrt_interval")
            ctx.add_table("per_center_mass", {"center", "mass"}, mass_table_rows(rep));
    }
    ctx.report["numbers"] = numbers;
}

void run_torus_meagre_and_inner(Ctx& ctx) {
    const System sys = resolve_system(ctx, {{"kind", "product"},
                                            {"f", {{"kind", "rotation"}, {"alpha", "0"}}},
                                            {"g", {{"kind", "cat_map"}}}});
    const double h = resolve_h(ctx, 1.0 / 50.0);
    const HorizonParams hp = resolve_horizon(ctx, {30, 1e-3, 0.0, 0.0});
    const double delta = resolve_delta(ctx, 0.05);
    const double tol = 0.01;
    const auto grid = Grid::build(sys.space(), h);
    const AtomicMeasure mu = resolve_measure(ctx, grid, sys, {{"kind", "lebesgue_grid"}});

    const MeasureTestReport meagre = meagre_expansive_measure_test(
        mu, sys, grid, delta, hp.N, hp.interior_scale(h), tol, BallSide::two_sided);
    ctx.write_sub("meagre_test.json", measure_report_to_json(meagre, false));
    ctx.verdict("meagre_expansive_measure", meagre.pass ? "PASS" : "FAIL", "meagre_test.json");

    const MeasureTestReport inner = inner_distal_measure_test(mu, sys, grid, hp, tol);
    ctx.write_sub("inner_test.json", measure_report_to_json(inner, false));
    ctx.verdict("inner_distal_measure", inner.pass ? "PASS" : "FAIL", "inner_test.json");

    // Exact integer check on the torus factor: every distinct rational grid
    // pair separates to distance >= 0.1 within |n| <= N. Coordinates are
    // k/denom with the denominator preserved by the integer matrix, so the
    // iteration below is exact.
    const auto torus_grid = grid->right_grid();
    const long long denom = static_cast<long long>(torus_grid->axes()[0].count);
    const long long need = (denom + 9) / 10;  // numerator units for distance 0.1
    const int N = hp.N;
    const auto axis_gap = [&](long long a, long long b) {
        long long d = std::llabs(a - b);
        return std::min(d, denom - d);
    };
    bool all_separate = true;
    long long min_max_gap = denom;
    const std::size_t tn = torus_grid->size();
    std::vector<std::pair<long long, long long>> pts(tn);
    for (std::size_t i = 0; i < tn; ++i) {
        const auto& tp = torus_grid->point(i).as_torus();
        pts[i] = {tp.a.num * (denom / tp.a.den), tp.b.num * (denom / tp.b.den)};
    }
    for (std::size_t i = 0; i < tn && all_separate; ++i) {
        for (std::size_t j = i + 1; j < tn; ++j) {
            long long fa = pts[i].first, fb = pts[i].second;
            long long ga = pts[j].first, gb = pts[j].second;
            long long ba = fa, bb = fb, ha = ga, hb = gb;
            long long best = std::max(axis_gap(fa, ga), axis_gap(fb, gb));
            for (int n = 1; n <= N && best < need; ++n) {
                const long long fa2 = (2 * fa + fb) % denom, fb2 = (fa + fb) % denom;
                const long long ga2 = (2 * ga + gb) % denom, gb2 = (ga + gb) % denom;
                fa = fa2; fb = fb2; ga = ga2; gb = gb2;
                best = std::max(best, std::max(axis_gap(fa, ga), axis_gap(fb, gb)));
                if (best >= need) break;
                const long long ba2 = ((ba - bb) % denom + denom) % denom,
                                bb2 = ((2 * bb - ba) % denom + denom) % denom;
                const long long ha2 = ((ha - hb) % denom + denom) % denom,
                                hb2 = ((2 * hb - ha) % denom + denom) % denom;
                ba = ba2; bb = bb2; ha = ha2; hb = hb2;
                best = std::max(best, std::max(axis_gap(ba, ha), axis_gap(bb, hb)));
            }
            min_max_gap = std::min(min_max_gap, best);
            if (best < need) { all_separate = false; break; }
        }
    }
    json sep = {{"pairs_separate", all_separate},
                {"distance_threshold", 0.1},
                {"min_max_distance", static_cast<double>(min_max_gap) /
                                         static_cast<double>(denom)},
                {"window", N}};
    ctx.write_sub("separation.json", sep);
    ctx.verdict("torus_pairs_separate", all_separate, "separation.json");
    ctx.report["numbers"] = {{"meagre_max_mass", meagre.max_mass},
                             {"inner_max_mass", inner.max_mass},
                             {"min_max_distance", sep["min_max_distance"]}};
}

void run_krylov_bogolyubov(Ctx& ctx) {
    const System sqrt_sys = System::sqrt_interval();
    ctx.report["config"]["system"] = "sqrt_interval and rotation(1/3)";
    const AtomicMeasure start = AtomicMeasure::dirac(sqrt_sys.space(), Point::interval(0.5));
    const std::vector<int> ns = {1, 2, 5, 10, 20, 40, 80, 120, 160, 200};
    json rows = json::array();
    double final_defect = 0.0, mass_near_one = 0.0;
    for (int n : ns) {
        const AtomicMeasure avg = cesaro(start, sqrt_sys, n, 0.01);
        const double defect = invariance_defect(avg, sqrt_sys);
        rows.push_back(json::array({n, defect}));
        if (n == ns.back()) {
            final_defect = defect;
            for (const auto& [p, w] : avg.atoms())
                if (std::fabs(p.as_interval().x - 1.0) <= 0.05) mass_near_one += w;
        }
    }
    ctx.add_table("defect_trace", {"n", "defect"}, rows);

    const System rot = System::rotation(Rational(1, 3));
    const AtomicMeasure delta0 = AtomicMeasure::dirac(rot.space(), Point::circle(Rational(0, 1)));
    const AtomicMeasure orbit3 = cesaro(delta0, rot, 3, 0.0);
    const double rot_defect = invariance_defect(orbit3, rot);

    json sub = {{"sqrt_defect_at_200", final_defect},
                {"sqrt_mass_within_0.05_of_1", mass_near_one},
                {"rotation_orbit_defect", rot_defect}};
    ctx.write_sub("krylov.json", sub);
    ctx.verdict("sqrt_defect_small", final_defect <= 0.05, "krylov.json");
    ctx.verdict("rotation_orbit_invariant", rot_defect <= 1e-12, "krylov.json");
    ctx.report["numbers"] = sub;
}

void run_minimal_rotation(Ctx& ctx) {
    const System sys = resolve_system(ctx, {{"kind", "rotation"}, {"alpha", kGolden}});
    const double h = resolve_h(ctx, 1.0 / 200.0);
    const HorizonParams hp = resolve_horizon(ctx, {60, 1e-3, 0.0, 0.0});
    const auto grid = Grid::build(sys.space(), h);

    const CertificateReport cert = inner_distal_certificate(sys, grid, hp);
    ctx.write_sub("certificate.json", certificate_to_json(cert, false));
    ctx.verdict("inner_distal_certificate", verdict_name(cert.verdict), "certificate.json");

    const AtomicMeasure mu = resolve_measure(ctx, grid, sys, {{"kind", "lebesgue_grid"}});
    const double defect = invariance_defect(mu, sys);
    const MeasureTestReport test = inner_distal_measure_test(mu, sys, grid, hp, 0.01);
    ctx.write_sub("measure_test.json", measure_report_to_json(test, false));
    ctx.verdict("full_support_measure_passes", test.pass, "measure_test.json");
    ctx.report["numbers"] = {{"invariance_defect", defect},
                             {"grid_h", h},
                             {"max_mass", test.max_mass}};
}

void run_ap_stable_torus(Ctx& ctx) {
    const System sys = resolve_system(
        ctx, {{"kind", "product"},
              {"f", {{"kind", "sqrt_circle"}}},
              {"g", {{"kind", "rotation"}, {"alpha", kGolden}}}});
    const double h = resolve_h(ctx, 1.0 / 100.0);
    HorizonParams def{200, 0.1, 0.0, 0.0};
    const HorizonParams hp = resolve_horizon(ctx, def);
    const auto grid = Grid::build(sys.space(), h);

    const Point x_syndetic = Point::product(Point::circle(0.0), Point::circle(0.305));
    const Point x_single = Point::product(Point::circle(0.5), Point::circle(0.305));
    const ReturnTimes rt_syn = return_times(sys, x_syndetic, hp.eps, hp.N);
    const ReturnTimes rt_single = return_times(sys, x_single, hp.eps, hp.N);
    ctx.write_sub("return_times_fixed_fiber.json", return_times_to_json(rt_syn));
    ctx.write_sub("return_times_moving_fiber.json", return_times_to_json(rt_single));
    ctx.verdict("fixed_fiber_syndetic", rt_syn.syndetic_at_horizon,
                "return_times_fixed_fiber.json");
    ctx.verdict("moving_fiber_only_zero", rt_single.times == std::vector<long long>{0},
                "return_times_moving_fiber.json");

    // fiber coordinate off the grid so no point sits exactly at distance eps
    const Point center = Point::product(Point::circle(0.37), Point::circle(0.305));
    const SubsetMask stable = stable_class(sys, center, *grid, hp.N, hp.eps);
    // reference fiber: full circle x eps-ball in the rotation coordinate
    std::size_t fiber_total = 0, fiber_hit = 0, off_total = 0, off_hit = 0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double y2 = grid->point(i).right().as_circle().t;
        const bool in_fiber = circle_dist(y2, 0.305) <= hp.eps;
        if (in_fiber) {
            ++fiber_total;
            if (stable.test(i)) ++fiber_hit;
        } else {
            ++off_total;
            if (stable.test(i)) ++off_hit;
        }
    }
    const double coverage = static_cast<double>(fiber_hit) / static_cast<double>(fiber_total);
    const double off_fraction = static_cast<double>(off_hit) / static_cast<double>(off_total);
    json sub = {{"stable_count", stable.count()},
                {"fiber_coverage", coverage},
                {"off_fiber_fraction", off_fraction},
                {"max_gap_fixed_fiber", rt_syn.max_gap}};
    ctx.write_sub("stable_class.json", sub);
    ctx.verdict("stable_class_matches_fiber", coverage >= 0.95 && off_fraction <= 0.05,
                "stable_class.json");
    ctx.report["numbers"] = sub;
    json rows = json::array();
    for (long long t : rt_syn.times) rows.push_back(json::array({t, 1}));
    ctx.add_table("return_times", {"n", "hit"}, rows);
}

void run_shift_per_interior(Ctx& ctx) {
    const System sys = resolve_system(ctx, {{"kind", "shift"}});
    const double h = resolve_h(ctx, 0.125);
    const HorizonParams hp = resolve_horizon(ctx, {12, 1e-3, 0.125, 0.0});

    // Periodic and non-periodic eventually periodic witnesses per cylinder.
    json witness_rows = json::array();
    bool all_cylinders_mixed = true;
    std::size_t cylinders = 0;
    for (int len = 1; len <= 7; ++len) {
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::string w(static_cast<std::size_t>(len), '0');
            for (int b = 0; b < len; ++b)
                if (bits & (1 << b)) w[static_cast<std::size_t>(b)] = '1';
            const long long anchor = -(len / 2);
            const SeqPoint periodic = SeqPoint::periodic(w, anchor);
            const SeqPoint mixed("0", w, "1", anchor);
            bool ok = true;
            for (int k = 0; k < len; ++k) {
                const long long idx = anchor + k;
                if (periodic.at(idx) != w[static_cast<std::size_t>(k)] - '0') ok = false;
                if (mixed.at(idx) != w[static_cast<std::size_t>(k)] - '0') ok = false;
            }
            if (!(periodic.shifted(len) == periodic)) ok = false;
            bool mixed_periodic = false;
            for (int k = 1; k <= 2 * len + 2 && !mixed_periodic; ++k)
                if (mixed.shifted(k) == mixed) mixed_periodic = true;
            if (mixed_periodic) ok = false;
            all_cylinders_mixed = all_cylinders_mixed && ok;
            ++cylinders;
            if (len == 7 && witness_rows.size() < 8)
                witness_rows.push_back(json::array(
                    {w, Point(periodic).str(), Point(mixed).str()}));
        }
    }
    ctx.add_table("cylinder_witnesses", {"word", "periodic", "eventually_periodic"},
                  witness_rows);

    // Hand-formula check: pairs differing exactly on {0} and {|j| >= 2k}
    // have prox_gap 2^-min(N,k).
    const Point zeros = Point(SeqPoint::periodic("0"));
    std::size_t formula_checked = 0, formula_exact = 0;
    for (long long k = 1; k <= 10; ++k) {
        const Point ringed = Point(SeqPoint::one_at_origin_with_ring(2 * k));
        for (int N = 0; N <= 9; ++N) {
            const double expect = std::ldexp(1.0, -static_cast<int>(std::min<long long>(N, k)));
            const double got = prox_gap(sys, zeros, ringed, N);
            ++formula_checked;
            if (got == expect) ++formula_exact;
        }
    }

    // Interior spot checks on the word-enumeration grid.
    const auto grid = Grid::build(sys.space(), h);
    const std::vector<Point> centers = {zeros, Point(SeqPoint::periodic("01")),
                                        Point(SeqPoint("0", "101", "1", -1))};
    json spot_rows = json::array();
    bool all_spot_empty = true;
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        const SubsetMask cell = proximal_cell(sys, centers[ci], *grid, hp.N, hp.eps);
        const SubsetMask inner = interior_points(cell, hp.interior_scale(h));
        spot_rows.push_back(json::array({centers[ci].str(), cell.count(), inner.count()}));
        if (inner.any()) all_spot_empty = false;
    }
    ctx.add_table("spot_certificates", {"center", "cell_size", "interior_count"}, spot_rows);

    json sub = {{"cylinders", cylinders},
                {"all_cylinders_mixed", all_cylinders_mixed},
                {"prox_formula_checked", formula_checked},
                {"prox_formula_exact", formula_exact},
                {"grid_size", grid->size()},
                {"spot_interiors_empty", all_spot_empty}};
    ctx.write_sub("shift.json", sub);
    ctx.verdict("periodic_points_have_empty_interior_at_scale", all_cylinders_mixed,
                "shift.json");
    ctx.verdict("prox_gap_formula_exact", formula_checked == formula_exact, "shift.json");
    ctx.verdict("spot_interiors_empty", all_spot_empty, "shift.json");
    ctx.report["numbers"] = sub;
}

void run_iterate_inclusion(Ctx& ctx) {
    const System product_sys = resolve_system(
        ctx, {{"kind", "product"},
              {"f", {{"kind", "sqrt_interval"}}},
              {"g", {{"kind", "rotation"}, {"alpha", kGolden}}}});
    const HorizonParams hp = resolve_horizon(ctx, {30, 1e-3, 0.0, 0.0});
    SplitMix64 rng(ctx.cfg.seed);

    json rows = json::array();
    bool all_included = true;
    const auto run_for = [&](const System& sys, double h, const std::string& name) {
        const auto grid = Grid::build(sys.space(), h);
        const auto centers = sample_indices(rng, grid->size(), 20);
        for (int k : {2, 3}) {
            for (std::size_t c : centers) {
                const SubsetMask power_cell =
                    proximal_cell_strided(sys, grid->point(c), *grid, hp.N, hp.eps, k);
                const SubsetMask base_cell =
                    proximal_cell(sys, grid->point(c), *grid, k * hp.N, hp.eps);
                const bool inc = power_cell.is_subset_of(base_cell);
                all_included = all_included && inc;
                rows.push_back(json::array({name, k, c, power_cell.count(), base_cell.count(),
                                            inc}));
            }
        }
    };
    run_for(product_sys, 1.0 / 50.0, "product");
    run_for(System::sqrt_interval(), 1.0 / 200.0, "sqrt_interval");
    ctx.add_table("iterate_inclusion", {"system", "k", "center", "power_cell", "base_cell",
                                        "included"},
                  rows);
    json sub = {{"all_included", all_included}};
    ctx.write_sub("inclusion.json", sub);
    ctx.verdict("power_cells_included", all_included, "inclusion.json");
    ctx.report["numbers"] = sub;
}

void run_forward_ball_inclusion(Ctx& ctx) {
    const System product_sys = resolve_system(
        ctx, {{"kind", "product"},
              {"f", {{"kind", "sqrt_interval"}}},
              {"g", {{"kind", "rotation"}, {"alpha", kGolden}}}});
    const HorizonParams hp = resolve_horizon(ctx, {30, 0.05, 0.0, 0.0});
    const double delta = resolve_delta(ctx, 0.05);
    SplitMix64 rng(ctx.cfg.seed);

    json rows = json::array();
    bool all_included = true;
    const auto run_for = [&](const System& sys, double h, const std::string& name) {
        const auto grid = Grid::build(sys.space(), h);
        const auto centers = sample_indices(rng, grid->size(), 20);
        for (std::size_t c : centers) {
            const SubsetMask ball =
                dynamic_ball(sys, grid->point(c), *grid, delta, hp.N, BallSide::forward);
            const SubsetMask cell =
                proximal_cell(sys, grid->point(c), *grid, 2 * hp.N, hp.eps);
            const bool inc = ball.is_subset_of(cell);
            all_included = all_included && inc;
            rows.push_back(json::array({name, c, ball.count(), cell.count(), inc}));
        }
    };
    run_for(System::sqrt_interval(), 1.0 / 200.0, "sqrt_interval");
    run_for(product_sys, 1.0 / 50.0, "product");
    ctx.add_table("forward_ball_inclusion", {"system", "center", "ball", "cell", "included"},
                  rows);
    json sub = {{"all_included", all_included}};
    ctx.write_sub("inclusion.json", sub);
    ctx.verdict("forward_balls_included", all_included, "inclusion.json");
    ctx.report["numbers"] = sub;
}

struct Pipeline {
    std::string anchor;
    std::function<void(Ctx&)> run;
};

const std::map<std::string, Pipeline>& registry() {
    static const std::map<std::string, Pipeline> reg = {
        {"example_2_7_certificate",
         {"interval-times-rotation product: proximal cells are fibers with empty interior while "
          "fiber diameters collapse",
          run_example_2_7_certificate}},
        {"sqrt_interval_refute",
         {"square-root interval map: a proximal cell with nonempty interior, certified by both "
          "routes",
          run_sqrt_interval_refute}},
        {"extension_check",
         {"the product factors onto its rotation through an inner-light projection",
          run_extension_check}},
        {"rotation_classify", {"rotation-number trichotomy on the circle", run_rotation_classify}},
        {"denjoy_classify",
         {"irrational rotation number plus a wandering arc", run_denjoy_classify}},
        {"circle_support",
         {"time-averaged measures concentrate on the non-wandering set", run_circle_support}},
        {"interval_trichotomy",
         {"full-support interior-mass test separates the identity and the involution from the "
          "square-root map",
          run_interval_trichotomy}},
        {"torus_meagre_and_inner",
         {"identity-times-Anosov: dynamic balls and proximal cells both carry no interior mass",
          run_torus_meagre_and_inner}},
        {"krylov_bogolyubov",
         {"time averaging drives the invariance defect to zero", run_krylov_bogolyubov}},
        {"minimal_rotation",
         {"a minimal rotation carries a fully supported measure passing the interior-mass test",
          run_minimal_rotation}},
        {"ap_stable_torus",
         {"almost periodic points and stable classes of the sqrt-circle times rotation map",
          run_ap_stable_torus}},
        {"shift_per_interior",
         {"periodic points of the full shift are dense with empty interior",
          run_shift_per_interior}},
        {"iterate_inclusion",
         {"proximal cells of a power embed in longer-horizon cells of the base map",
          run_iterate_inclusion}},
        {"forward_ball_inclusion",
         {"forward dynamic balls embed in proximal cells", run_forward_ball_inclusion}},
    };
    return reg;
}

void write_csv_tables(const json& report, const std::filesystem::path& outdir,
                      std::vector<std::string>& files) {
    if (!report.contains("data")) return;
    for (const auto& table : report.at("data")) {
        const std::string name = table.at("name").get<std::string>();
        std::string text;
        const auto& header = table.at("header");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) text += ",";
            text += header[i].get<std::string>();
        }
        text += "\n";
        for (const auto& row : table.at("rows")) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) text += ",";
                text += row[i].is_string() ? row[i].get<std::string>() : row[i].dump();
            }
            text += "\n";
        }
        const std::string fname = name + ".csv";
        std::ofstream f(outdir / fname, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (outdir / fname).string());
        f << text;
        files.push_back(fname);
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    try {
        ExperimentConfig cfg;
        if (j.contains("schema") && j.at("schema").get<std::string>() != "1")
            throw std::invalid_argument("unsupported config schema");
        cfg.experiment = j.at("experiment").get<std::string>();
        if (j.contains("system")) cfg.system = j.at("system");
        if (j.contains("grid")) {
            if (j.at("grid").contains("h")) cfg.grid_h = j.at("grid").at("h").get<double>();
        }
        if (j.contains("horizon")) cfg.horizon = j.at("horizon");
        if (j.contains("measure")) cfg.measure = j.at("measure");
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
        return cfg;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

const std::vector<ExperimentInfo>& list_experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& [name, pipe] : registry()) v.push_back({name, pipe.anchor});
        return v;
    }();
    return infos;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto it = registry().find(config.experiment);
    if (it == registry().end())
        throw std::invalid_argument("unknown experiment name: " + config.experiment);
    if (config.output.empty()) throw std::invalid_argument("output directory not set");

    const auto start = std::chrono::steady_clock::now();
    Ctx ctx{config, std::filesystem::path(config.output), {}, {}};
    std::error_code ec;
    std::filesystem::create_directories(ctx.outdir, ec);
    {  // probe writability before running anything expensive
        std::ofstream probe(ctx.outdir / "report.json", std::ios::binary);
        if (!probe) throw std::system_error(std::make_error_code(std::errc::permission_denied),
                                            "output directory is not writable: " + config.output);
    }

    ctx.report["schema"] = "1";
    ctx.report["experiment"] = config.experiment;
    ctx.report["anchor"] = it->second.anchor;
    ctx.report["config"] = {{"seed", config.seed}};
    it->second.run(ctx);

    write_csv_tables(ctx.report, ctx.outdir, ctx.files);
    ctx.files.push_back("report.json");
    ctx.files.push_back("timing.json");
    std::sort(ctx.files.begin(), ctx.files.end());
    ctx.report["artifacts"] = ctx.files;

    ExperimentResult result;
    result.report = ctx.report;
    result.files = ctx.files;
    result.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    {
        std::ofstream f(ctx.outdir / "report.json", std::ios::binary);
        f << ctx.report.dump(1) << "\n";
    }
    {
        std::ofstream f(ctx.outdir / "timing.json", std::ios::binary);
        f << json{{"wall_ms", result.wall_ms}}.dump(1) << "\n";
    }
    return result;
}

std::vector<std::string> emit_plots(const std::string& report_dir) {
    const std::filesystem::path dir(report_dir);
    std::ifstream f(dir / "report.json");
    if (!f) throw std::invalid_argument("no report.json under " + report_dir);
    json report;
    f >> report;
    std::vector<std::string> files;
    write_csv_tables(report, dir, files);
    return files;
}

}  // namespace proxlab
