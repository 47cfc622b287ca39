#include "proxlab/json_io.hpp"

#include <stdexcept>

namespace proxlab {

namespace {

Rational rational_from_json(const json& j, const char* what) {
    if (j.is_string()) {
        if (auto r = Rational::parse(j.get<std::string>())) return *r;
        throw std::invalid_argument(std::string(what) + ": cannot parse rational string");
    }
    if (j.is_number_integer()) return Rational::integer(j.get<std::int64_t>());
    throw std::invalid_argument(std::string(what) + ": expected \"p/q\" or integer");
}

}  // namespace

json space_to_json(const Space& space) {
    switch (space.kind()) {
        case Space::Kind::circle: return {{"kind", "circle"}};
        case Space::Kind::interval: return {{"kind", "interval"}};
        case Space::Kind::torus: return {{"kind", "torus"}};
        case Space::Kind::binary_seq: return {{"kind", "binary_seq"}};
        case Space::Kind::product:
            return {{"kind", "product"},
                    {"left", space_to_json(space.left())},
                    {"right", space_to_json(space.right())}};
    }
    throw std::logic_error("unknown space kind");
}

Space space_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle") return Space::circle();
    if (kind == "interval") return Space::interval();
    if (kind == "torus") return Space::torus();
    if (kind == "binary_seq") return Space::binary_seq();
    if (kind == "product")
        return Space::product(space_from_json(j.at("left")), space_from_json(j.at("right")));
    throw std::invalid_argument("unknown space kind: " + kind);
}

json point_to_json(const Space& space, const Point& p) {
    switch (space.kind()) {
        case Space::Kind::circle: return p.as_circle().t;
        case Space::Kind::interval: return p.as_interval().x;
        case Space::Kind::torus:
            return json::array({p.as_torus().a.str(), p.as_torus().b.str()});
        case Space::Kind::binary_seq: {
            const auto& s = p.as_seq();
            return {{"left", s.left_period()},
                    {"core", s.core()},
                    {"right", s.right_period()},
                    {"origin", s.origin()}};
        }
        case Space::Kind::product:
            return json::array({point_to_json(space.left(), p.left()),
                                point_to_json(space.right(), p.right())});
    }
    throw std::logic_error("unknown space kind");
}

Point point_from_json(const Space& space, const json& j) {
    switch (space.kind()) {
        case Space::Kind::circle:
            if (j.is_string()) return Point::circle(rational_from_json(j, "circle point"));
            return Point::circle(j.get<double>());
        case Space::Kind::interval: return Point::interval(j.get<double>());
        case Space::Kind::torus:
            return Point::torus(rational_from_json(j.at(0), "torus point"),
                                rational_from_json(j.at(1), "torus point"));
        case Space::Kind::binary_seq:
            return Point(SeqPoint(j.at("left").get<std::string>(), j.at("core").get<std::string>(),
                                  j.at("right").get<std::string>(),
                                  j.at("origin").get<long long>()));
        case Space::Kind::product:
            return Point::product(point_from_json(space.left(), j.at(0)),
                                  point_from_json(space.right(), j.at(1)));
    }
    throw std::logic_error("unknown space kind");
}

json grid_to_json(const Grid& grid) {
    json points = json::array();
    for (const auto& p : grid.points()) points.push_back(point_to_json(grid.space(), p));
    return {{"space", space_to_json(grid.space())}, {"h", grid.h()}, {"points", std::move(points)}};
}

json mask_to_json(const SubsetMask& mask) {
    json out = json::array();
    for (std::size_t i : mask.indices()) out.push_back(i);
    return out;
}

System system_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rotation") {
        const auto& a = j.at("alpha");
        if (a.is_string() || a.is_number_integer())
            return System::rotation(rational_from_json(a, "rotation alpha"));
        return System::rotation(a.get<double>());
    }
    if (kind == "identity_interval") return System::identity_interval();
    if (kind == "north_south") return System::north_south();
    if (kind == "sqrt_interval") return System::sqrt_interval();
    if (kind == "sqrt_circle") return System::sqrt_circle();
    if (kind == "cat_map") return System::cat_map();
    if (kind == "shift") return System::shift_map();
    if (kind == "denjoy") {
        DenjoyParams p;
        p.alpha = j.at("alpha").is_string()
                      ? rational_from_json(j.at("alpha"), "denjoy alpha").to_double()
                      : j.at("alpha").get<double>();
        p.K = j.at("K").get<int>();
        p.c = j.at("c").get<double>();
        return System::denjoy(p);
    }
    if (kind == "sine_circle") return System::sine_circle(j.at("a").get<double>());
    if (kind == "product")
        return System::product(system_from_json(j.at("f")), system_from_json(j.at("g")));
    if (kind == "conjugate")
        return System::conjugate(system_from_json(j.at("base")), j.at("a").get<double>());
    throw std::invalid_argument("unknown system kind: " + kind);
}

json horizon_to_json(const HorizonParams& p) {
    return {{"N", p.N}, {"eps", p.eps}, {"r", p.r}, {"step", p.step}};
}

HorizonParams horizon_from_json(const json& j, const HorizonParams& defaults) {
    HorizonParams p = defaults;
    if (j.contains("N")) p.N = j.at("N").get<int>();
    if (j.contains("eps")) p.eps = j.at("eps").get<double>();
    if (j.contains("r")) p.r = j.at("r").get<double>();
    if (j.contains("step")) p.step = j.at("step").get<double>();
    return p;
}

json measure_to_json(const AtomicMeasure& mu) {
    json atoms = json::array();
    for (const auto& [p, w] : mu.atoms())
        atoms.push_back(json::array({point_to_json(mu.space(), p), w}));
    json j;
    j["space"] = space_to_json(mu.space());
    if (!mu.label().empty()) j["label"] = mu.label();
    j["atoms"] = std::move(atoms);
    return j;
}

AtomicMeasure measure_from_config(const json& desc, const GridPtr& grid, const System& system) {
    const std::string kind = desc.at("kind").get<std::string>();
    if (kind == "lebesgue_grid") return AtomicMeasure::lebesgue_grid(grid);
    if (kind == "atoms") {
        std::vector<Point> pts;
        std::vector<double> w;
        for (const auto& pj : desc.at("points"))
            pts.push_back(point_from_json(system.space(), pj));
        for (const auto& wj : desc.at("weights")) w.push_back(wj.get<double>());
        AtomicMeasure m = AtomicMeasure::make(system.space(), std::move(pts), std::move(w));
        m.set_label("atoms[" + std::to_string(m.size()) + "]");
        return m;
    }
    if (kind == "cesaro") {
        const AtomicMeasure start = measure_from_config(desc.at("start"), grid, system);
        return cesaro(start, system, desc.at("n").get<int>(),
                      desc.contains("bin_h") ? desc.at("bin_h").get<double>() : grid->h());
    }
    throw std::invalid_argument("unknown measure kind: " + kind);
}

std::string verdict_name(CertificateVerdict v) {
    return v == CertificateVerdict::refuted ? "REFUTED" : "CONSISTENT_WITH_INNER_DISTAL";
}

std::string class_name(CircleClass c) {
    switch (c) {
        case CircleClass::conjugate_rotation_distal: return "CONJUGATE_ROTATION_DISTAL";
        case CircleClass::rational_with_periodic_set: return "RATIONAL_WITH_PERIODIC_SET";
        case CircleClass::denjoy_like: return "DENJOY_LIKE";
    }
    return "?";
}

json certificate_to_json(const CertificateReport& rep, bool include_per_center) {
    json j;
    j["system"] = rep.system_id;
    j["params"] = horizon_to_json(rep.params);
    j["grid_h"] = rep.grid_h;
    j["verdict"] = verdict_name(rep.verdict);
    if (rep.witness)
        j["witness"] = {{"center", rep.witness->first}, {"interior_point", rep.witness->second}};
    else
        j["witness"] = nullptr;
    std::size_t refuting_centers = 0, max_interior = 0, max_cell = 0;
    for (const auto& c : rep.per_center) {
        if (c.interior_count > 0) ++refuting_centers;
        max_interior = std::max(max_interior, c.interior_count);
        max_cell = std::max(max_cell, c.cell_size);
    }
    j["summary"] = {{"centers", rep.per_center.size()},
                    {"refuting_centers", refuting_centers},
                    {"max_interior_count", max_interior},
                    {"max_cell_size", max_cell}};
    j["ball_route"] = {{"refuting_balls", rep.ball_route.refuting_balls},
                       {"min_ball_diam", rep.ball_route.min_ball_diam},
                       {"argmin_n", rep.ball_route.argmin_n},
                       {"first_witness_center", rep.ball_route.first_witness_center
                                                    ? json(*rep.ball_route.first_witness_center)
                                                    : json(nullptr)}};
    j["routes_agree"] = rep.routes_agree;
    if (include_per_center) {
        json cells = json::array(), interiors = json::array();
        for (const auto& c : rep.per_center) {
            cells.push_back(c.cell_size);
            interiors.push_back(c.interior_count);
        }
        j["per_center"] = {{"cell_size", std::move(cells)},
                           {"interior_count", std::move(interiors)}};
    }
    return j;
}

json measure_report_to_json(const MeasureTestReport& rep, bool include_per_center) {
    json j;
    j["system"] = rep.system_id;
    j["measure"] = rep.measure_label;
    j["N"] = rep.N;
    j["threshold"] = rep.threshold;
    j["r"] = rep.r;
    j["tol"] = rep.tol;
    j["max_mass"] = rep.max_mass;
    j["argmax_center"] = rep.argmax_center;
    j["verdict"] = rep.pass ? "PASS" : "FAIL";
    if (include_per_center) j["per_center_mass"] = rep.per_center_mass;
    return j;
}

json decay_to_json(const DecayReport& rep) {
    json trace = json::array();
    for (const auto& [n, d] : rep.trace) trace.push_back(json::array({n, d}));
    return {{"min_diam", rep.min_diam}, {"argmin_n", rep.argmin}, {"trace", std::move(trace)}};
}

json cw_report_to_json(const CwDistalReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"continuum", e.continuum},
                           {"initial_diam", e.initial_diam},
                           {"min_diam", e.min_diam},
                           {"argmin_n", e.argmin}});
    return {{"verdict", rep.pass ? "PASS" : "FAIL"},
            {"witness", rep.witness ? json(*rep.witness) : json(nullptr)},
            {"entries", std::move(entries)}};
}

json classification_to_json(const ClassificationResult& res) {
    json j;
    j["rho"] = res.rho.rho;
    j["error"] = res.rho.error_bound;
    j["rational"] = res.rational ? json(res.rational->str()) : json(nullptr);
    j["class"] = class_name(res.cls);
    j["decision_rule"] = res.decision_rule;
    if (res.wandering_witness)
        j["witness"] = {{"lo", res.wandering_witness->lo},
                        {"hi", res.wandering_witness->hi},
                        {"disjoint_iterates", res.witness_disjoint_iterates}};
    else
        j["witness"] = nullptr;
    if (res.periodic) {
        json brackets = json::array();
        for (const auto& b : res.periodic->brackets)
            brackets.push_back(
                {{"lo", b.lo}, {"hi", b.hi}, {"k", b.k}, {"flat", b.flat}});
        j["periodic"] = {{"mask_count", res.periodic->mask.count()},
                         {"grid_size", res.periodic->mask.size()},
                         {"brackets", std::move(brackets)}};
    } else {
        j["periodic"] = nullptr;
    }
    return j;
}

json return_times_to_json(const ReturnTimes& rt) {
    return {{"times", rt.times},
            {"max_gap", rt.max_gap},
            {"bound", rt.bound},
            {"verdict", rt.syndetic_at_horizon ? "SYNDETIC_AT_HORIZON" : "NON_SYNDETIC_EVIDENCE"}};
}

json inner_light_to_json(const InnerLightReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"continuum", e.continuum},
                           {"image_interior_empty", e.image_interior_empty},
                           {"preimage_interior_empty", e.preimage_interior_empty},
                           {"violation", e.violation}});
    return {{"violation_found", rep.violation_found},
            {"witness", rep.witness ? json(*rep.witness) : json(nullptr)},
            {"entries", std::move(entries)}};
}

}  // namespace proxlab
