#include "lfd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lfd/action.hpp"
#include "lfd/advected_geometry.hpp"
#include "lfd/cauchy.hpp"
#include "lfd/clebsch.hpp"
#include "lfd/field_catalog.hpp"
#include "lfd/halton.hpp"

namespace lfd {

using nlohmann::json;

namespace {

const char* kExperimentNames[] = {"mass",   "cauchy",  "kelvin",   "helmholtz",
                                  "stokes", "clebsch", "helicity", "action"};

ExperimentKind experiment_from_name(const std::string& s) {
    for (int i = 0; i < 8; ++i)
        if (s == kExperimentNames[i]) return static_cast<ExperimentKind>(i);
    throw ConfigError("unknown experiment '" + s
                      + "' (expected mass|cauchy|kelvin|helmholtz|stokes|clebsch|helicity|action)");
}

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double get_number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError("'" + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return obj[key].get<int>();
}

Vec3 get_vec3(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(what + " must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

int parse_axis(const json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "x") return 0;
        if (s == "y") return 1;
        if (s == "z") return 2;
        throw ConfigError("axis must be one of x|y|z");
    }
    if (v.is_number_integer()) {
        const int a = v.get<int>();
        if (a < 0 || a > 2) throw ConfigError("axis index out of range (0..2)");
        return a;
    }
    throw ConfigError("axis must be a string x|y|z or index 0..2");
}

struct ToleranceDefaults {
    double value;
    bool relative;
};

ToleranceDefaults default_tolerance(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Mass: return {1e-6, false};
        case ExperimentKind::Cauchy: return {1e-5, false};
        case ExperimentKind::Kelvin: return {1e-5, true};
        case ExperimentKind::Helmholtz: return {1e-5, true};
        case ExperimentKind::Stokes: return {1e-6, false};
        case ExperimentKind::Clebsch: return {1e-6, false};
        case ExperimentKind::Helicity: return {1e-6, true};
        case ExperimentKind::Action: return {1e-6, false};
    }
    return {1e-6, false};
}

std::pair<double, double> domain_box(const FlowField& field) {
    if (field.domain == Domain::PeriodicBox) return {0.0, kTwoPi};
    return {-1.0, 1.0};
}

// relative to the reference magnitude; falls back to the absolute deviation
// when the reference is itself (numerically) zero
double relative_deviation(double dev, std::optional<double> reference) {
    if (!reference || std::abs(*reference) <= 1e-9) return dev;
    return dev / std::abs(*reference);
}

std::string geometry_label(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::Kelvin: return cfg.loop.type;
        case ExperimentKind::Helmholtz:
        case ExperimentKind::Stokes: return cfg.surface.type;
        case ExperimentKind::Clebsch: return cfg.candidate;
        case ExperimentKind::Helicity: return "box" + std::to_string(cfg.box_points);
        case ExperimentKind::Action: return "block" + std::to_string(cfg.ensemble_n);
        default: return "seeds" + std::to_string(cfg.seeds);
    }
}

MaterialLoop build_loop(const ExperimentConfig& cfg) {
    if (cfg.loop.type != "circle")
        throw ConfigError("unknown loop type '" + cfg.loop.type + "' (expected circle)");
    return circle_loop(cfg.loop.center, cfg.loop.radius, cfg.loop.axis, cfg.loop_markers);
}

MaterialSurface build_surface(const ExperimentConfig& cfg) {
    if (cfg.surface.type == "disk")
        return disk_patch(cfg.surface.center, cfg.surface.radius, cfg.surface.axis,
                          cfg.surface_n, cfg.surface_m);
    if (cfg.surface.type == "rect")
        return rect_patch(cfg.surface.origin, cfg.surface.edge1, cfg.surface.edge2,
                          cfg.surface_n, cfg.surface_m);
    throw ConfigError("unknown surface type '" + cfg.surface.type + "' (expected disk|rect)");
}

// ---------------------------------------------------------------------------
// per-experiment runners
// ---------------------------------------------------------------------------

void run_mass(const ExperimentConfig& cfg, const FlowField& field, RunResult& out, json& extra) {
    CsvWriter csv({"t", "a1", "a2", "a3", "x1", "x2", "x3", "J11", "J12", "J13", "J21", "J22",
                   "J23", "J31", "J32", "J33", "detJ"});
    const auto [lo, hi] = domain_box(field);
    const auto seeds = halton_box(cfg.seeds, lo, hi);
    for (const Vec3& a : seeds) {
        TrajectoryState s = TrajectoryState::initial(a);
        const double rho0 = field.density(a, 0.0);
        for (double t : cfg.sample_times) {
            s = advance(s, field, cfg.integrator, t - s.t);
            const double d = det(s.J);
            const double ratio = rho0 / field.density(s.x, t);
            csv.add_row({format_double(t), format_double(a.x), format_double(a.y),
                         format_double(a.z), format_double(s.x.x), format_double(s.x.y),
                         format_double(s.x.z), format_double(s.J(0, 0)), format_double(s.J(0, 1)),
                         format_double(s.J(0, 2)), format_double(s.J(1, 0)),
                         format_double(s.J(1, 1)), format_double(s.J(1, 2)),
                         format_double(s.J(2, 0)), format_double(s.J(2, 1)),
                         format_double(s.J(2, 2)), format_double(d)});
            out.series.rows.push_back(
                DiagnosticRow::make("mass", field.name, out.geometry, t, d, ratio));
        }
    }
    out.csv_text = csv.to_string();
    extra["seeds"] = cfg.seeds;
}

void run_cauchy(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                json& extra) {
    CsvWriter csv({"field", "a1", "a2", "a3", "t", "inv1", "inv2", "inv3", "om01", "om02", "om03",
                   "drift"});
    const auto [lo, hi] = domain_box(field);
    const auto seeds = halton_box(cfg.seeds, lo, hi);
    const auto records = invariant_drift_series(field, seeds, cfg.sample_times, cfg.integrator);
    for (const auto& rec : records) {
        csv.add_row({field.name, format_double(rec.a.x), format_double(rec.a.y),
                     format_double(rec.a.z), format_double(rec.t), format_double(rec.invariant.x),
                     format_double(rec.invariant.y), format_double(rec.invariant.z),
                     format_double(rec.omega0.x), format_double(rec.omega0.y),
                     format_double(rec.omega0.z), format_double(rec.drift)});
        out.series.rows.push_back(DiagnosticRow::make("cauchy", field.name, out.geometry, rec.t,
                                                      rec.drift, 0.0));
    }
    out.csv_text = csv.to_string();
    extra["seeds"] = cfg.seeds;
}

void run_kelvin(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                json& extra) {
    CsvWriter csv({"field", "geometry", "t", "circulation", "N", "M"});
    const MaterialLoop loop = build_loop(cfg);
    const auto series = kelvin_series(loop, field, cfg.sample_times, cfg.integrator);
    const double reference = series.front().second;
    for (const auto& [t, value] : series) {
        csv.add_row({field.name, loop.id, format_double(t), format_double(value),
                     std::to_string(cfg.loop_markers), "0"});
        out.series.rows.push_back(
            DiagnosticRow::make("kelvin", field.name, loop.id, t, value, reference));
    }
    out.csv_text = csv.to_string();
    extra["reference_circulation"] = reference;
    extra["loop_markers"] = cfg.loop_markers;
}

void run_helmholtz(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                   json& extra) {
    CsvWriter csv({"field", "geometry", "t", "flux", "N", "M"});
    const MaterialSurface surface = build_surface(cfg);
    const auto series = helmholtz_series(surface, field, cfg.sample_times, cfg.integrator);
    const double reference = series.front().second;
    for (const auto& [t, value] : series) {
        csv.add_row({field.name, surface.id, format_double(t), format_double(value),
                     std::to_string(cfg.surface_n), std::to_string(cfg.surface_m)});
        out.series.rows.push_back(
            DiagnosticRow::make("helmholtz", field.name, surface.id, t, value, reference));
    }
    out.csv_text = csv.to_string();
    extra["reference_flux"] = reference;
    extra["surface_grid"] = {cfg.surface_n, cfg.surface_m};
}

void run_stokes(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                json& extra) {
    CsvWriter csv({"experiment", "field", "geometry", "t", "value", "reference", "deviation"});
    MaterialSurface surface = build_surface(cfg);
    for (double t : cfg.sample_times) {
        surface = advect_surface(surface, field, t, cfg.integrator);
        const double gap = stokes_check(surface, field);
        csv.add_row({"stokes", field.name, surface.id, format_double(t), format_double(gap), "0",
                     format_double(gap)});
        out.series.rows.push_back(
            DiagnosticRow::make("stokes", field.name, surface.id, t, gap, 0.0));
    }
    out.csv_text = csv.to_string();
    extra["surface_grid"] = {cfg.surface_n, cfg.surface_m};
}

void run_clebsch(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                 json& extra) {
    if (field.domain != Domain::PeriodicBox)
        throw ConfigError("clebsch experiment requires a periodic-box field");
    const ClebschCandidate cand = make_candidate(cfg.candidate);
    CsvWriter csv({"experiment", "field", "geometry", "t", "value", "reference", "deviation"});

    const auto seeds = halton_box(cfg.seeds, 0.0, kTwoPi);
    const double material =
        verify_material_invariance(cand, field, seeds, cfg.t_max, cfg.integrator);
    double fact = 0.0, gauge = 0.0, c8 = 0.0;
    for (double t : cfg.sample_times) {
        fact = std::max(fact, verify_vorticity_factorization(cand, field, t, cfg.box_points));
        gauge = std::max(gauge, verify_gauge_existence(cand, field, t, cfg.box_points));
        if (cfg.run_clebsch8)
            c8 = std::max(c8, clebsch8_identity_check(cand, field, t, 8));
    }
    const HelicityReport hel = helicity(field, 0.0, std::max(16, cfg.box_points));

    auto emit = [&](const std::string& which, double value) {
        csv.add_row({"clebsch", field.name, cfg.candidate + ":" + which,
                     format_double(cfg.t_max), format_double(value), "0", format_double(value)});
        out.series.rows.push_back(DiagnosticRow::make("clebsch", field.name,
                                                      cfg.candidate + ":" + which, cfg.t_max,
                                                      value, 0.0));
    };
    emit("material", material);
    emit("factorization", fact);
    emit("gauge", gauge);
    if (cfg.run_clebsch8) emit("clebsch8", c8);
    out.csv_text = csv.to_string();

    const bool residuals_pass = material <= cfg.tolerance && fact <= cfg.tolerance
                             && gauge <= cfg.tolerance
                             && (!cfg.run_clebsch8 || c8 <= cfg.tolerance);
    std::string verdict;
    if (hel.obstruction)
        verdict = "helicity nonzero beyond threshold: no globally defined single Clebsch pair "
                  "with single-valued gauge F exists on the periodic box";
    else if (residuals_pass)
        verdict = "no obstruction detected; candidate '" + cfg.candidate
                + "' passes material, factorization and gauge checks";
    else
        verdict = "no obstruction detected; candidate '" + cfg.candidate
                + "' fails one or more residual checks";

    extra["material_residual"] = material;
    extra["factorization_residual"] = fact;
    extra["gauge_residual"] = gauge;
    if (cfg.run_clebsch8)
        extra["clebsch8_residual"] = c8;
    else
        extra["clebsch8_residual"] = nullptr;
    extra["helicity"] = hel.value;
    extra["obstruction"] = hel.obstruction;
    extra["verdict"] = verdict;

    if (cfg.expect_rejection) {
        // detector must fire: pass when the worst residual is clearly nonzero
        const double worst = std::max({material, fact, gauge});
        out.pass = worst >= cfg.reject_threshold;
        extra["expected"] = "reject";
        out.max_deviation = worst;
        out.max_relative_deviation = worst;
    }
}

void run_helicity(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                  json& extra) {
    CsvWriter csv({"experiment", "field", "geometry", "t", "value", "reference", "deviation"});
    const double t = cfg.sample_times.empty() ? 0.0 : cfg.sample_times.front();
    const HelicityReport rep = helicity(field, t, cfg.box_points);
    double reference;
    if (field.name == "abc") {
        auto p = [&](const std::string& k) {
            auto it = cfg.field_params.find(k);
            return it == cfg.field_params.end() ? 1.0 : it->second;
        };
        reference = kBoxVolume * (p("A") * p("A") + p("B") * p("B") + p("C") * p("C"));
    } else {
        reference = helicity(field, t, 2 * cfg.box_points).value;
    }
    csv.add_row({"helicity", field.name, out.geometry, format_double(t),
                 format_double(rep.value), format_double(reference),
                 format_double(std::abs(rep.value - reference))});
    out.series.rows.push_back(
        DiagnosticRow::make("helicity", field.name, out.geometry, t, rep.value, reference));
    out.csv_text = csv.to_string();
    extra["helicity"] = rep.value;
    extra["quadrature_points"] = rep.quadrature_points;
    extra["obstruction"] = rep.obstruction;
    extra["reference"] = reference;
    extra["verdict"] =
        rep.obstruction
            ? "helicity nonzero beyond threshold: no globally defined single Clebsch pair with "
              "single-valued gauge F exists on the periodic box"
            : "no obstruction detected (existence of a global pair not established)";
}

void run_action(const ExperimentConfig& cfg, const FlowField& field, RunResult& out,
                json& extra) {
    if (!field.closure)
        throw ConfigError("action experiment requires a barotropic field (catalog: expansion)");
    CsvWriter csv({"experiment", "field", "geometry", "t", "value", "reference", "deviation"});
    const ParticleEnsemble ens = block_ensemble({0, 0, 0}, {1, 1, 1}, cfg.ensemble_n, &field);
    const DiscreteTrajectory traj =
        integrate_trajectories(field, ens, cfg.t_max, cfg.time_samples, cfg.integrator);
    const double action_value = discrete_action(ens, traj, field);

    std::mt19937 rng(20240612u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_int_distribution<int> wave_component(-2, 2);

    const double fv_floor = 1e-9 * (1.0 + std::abs(action_value));
    json fv_report = json::array();
    bool stationarity_pass = true;
    std::optional<double> first_order;
    std::vector<Perturbation> perts;
    for (int p = 0; p < cfg.n_perturbations; ++p) {
        Vec3 dir{unit(rng), unit(rng), unit(rng)};
        if (norm(dir) < 1e-3) dir = {1.0, 0.0, 0.0};
        dir = dir / norm(dir);
        const Vec3 wave{static_cast<double>(wave_component(rng)),
                        static_cast<double>(wave_component(rng)),
                        static_cast<double>(wave_component(rng))};
        const Perturbation pert = bump_perturbation(dir, wave, angle(rng), cfg.t_max);
        perts.push_back(pert);
        std::vector<double> fvs;
        double fv_max = 0.0;
        for (double eps : cfg.epsilons) {
            const double fv = first_variation(ens, traj, field, pert, eps);
            fvs.push_back(std::abs(fv));
            fv_max = std::max(fv_max, std::abs(fv));
            csv.add_row({"action", field.name, "pert" + std::to_string(p), format_double(eps),
                         format_double(fv), "0", format_double(std::abs(fv))});
        }
        const auto order = fit_convergence_order(cfg.epsilons, fvs);
        const bool below_floor = fv_max <= fv_floor;
        const bool order_ok = order && *order >= 1.7 && *order <= 2.3;
        if (!below_floor && !order_ok) stationarity_pass = false;
        if (p == 0) {
            first_order = order;
            json per_eps = json::array();
            for (size_t i = 0; i < cfg.epsilons.size(); ++i)
                per_eps.push_back({cfg.epsilons[i], fvs[i]});
            fv_report = per_eps;
        }
        json entry;
        entry["perturbation"] = p;
        entry["fv_max"] = fv_max;
        entry["below_floor"] = below_floor;
        if (order) entry["order"] = *order;
        extra["perturbations"].push_back(entry);
    }

    double el_max = 0.0;
    for (const Vec3& a : ens.labels)
        for (double t : {0.0, cfg.t_max / 2, cfg.t_max})
            el_max = std::max(el_max, norm(euler_lagrange_residual(field, a, t, cfg.integrator)));
    csv.add_row({"action", field.name, "el_residual", format_double(cfg.t_max),
                 format_double(el_max), "0", format_double(el_max)});
    out.series.rows.push_back(
        DiagnosticRow::make("action", field.name, "el_residual", cfg.t_max, el_max, 0.0));

    const double pairing = residual_pairing(ens, traj, field, perts.front(), cfg.integrator);
    const double fv_small =
        first_variation(ens, traj, field, perts.front(), cfg.epsilons.back());
    const double weak_strong_gap = std::abs(pairing + fv_small);

    out.csv_text = csv.to_string();
    out.max_deviation = std::max(el_max, weak_strong_gap);
    out.max_relative_deviation = out.max_deviation;
    out.pass = stationarity_pass && el_max <= cfg.tolerance && weak_strong_gap <= 1e-4;
    extra["action_value"] = action_value;
    extra["first_variation_by_epsilon"] = fv_report;
    if (first_order)
        extra["observed_order"] = *first_order;
    else
        extra["observed_order"] = nullptr;
    extra["el_residual_max"] = el_max;
    extra["weak_strong_gap"] = weak_strong_gap;
    extra["stationarity_floor"] = fv_floor;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
    return kExperimentNames[static_cast<int>(kind)];
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config document: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("malformed config document: top level must be object");
    require_keys(doc,
                 {"field", "experiment", "geometry", "integrator", "quadrature", "action",
                  "tolerance", "tolerance_kind", "expect", "reject_threshold", "output"},
                 "config");

    ExperimentConfig cfg;

    if (!doc.contains("field") || !doc["field"].is_object()
        || !doc["field"].contains("name"))
        throw ConfigError("config must name a field: {\"field\":{\"name\":...}}");
    require_keys(doc["field"], {"name", "params"}, "field");
    cfg.field_name = doc["field"]["name"].get<std::string>();
    if (doc["field"].contains("params")) {
        if (!doc["field"]["params"].is_object())
            throw ConfigError("field params must be an object of numbers");
        for (auto it = doc["field"]["params"].begin(); it != doc["field"]["params"].end(); ++it) {
            if (!it.value().is_number())
                throw ConfigError("field parameter '" + it.key() + "' must be a number");
            cfg.field_params[it.key()] = it.value().get<double>();
        }
    }
    try {
        (void)make_field(cfg.field_name, cfg.field_params);  // validation only
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (!doc.contains("experiment")) throw ConfigError("config must name an experiment");
    cfg.experiment = experiment_from_name(doc["experiment"].get<std::string>());

    if (doc.contains("integrator")) {
        const json& integ = doc["integrator"];
        require_keys(integ, {"h", "t_max", "sample_times"}, "integrator");
        cfg.integrator.h = get_number(integ, "h", cfg.integrator.h);
        if (!(cfg.integrator.h > 0.0))
            throw ConfigError("integrator parameter out of range: h must be > 0");
        cfg.t_max = get_number(integ, "t_max", cfg.t_max);
        if (cfg.t_max < 0.0)
            throw ConfigError("integrator parameter out of range: t_max must be >= 0");
        if (integ.contains("sample_times")) {
            if (!integ["sample_times"].is_array())
                throw ConfigError("sample_times must be an array of numbers");
            for (const auto& v : integ["sample_times"])
                cfg.sample_times.push_back(v.get<double>());
            for (size_t i = 0; i < cfg.sample_times.size(); ++i) {
                const double t = cfg.sample_times[i];
                if (t < 0.0 || t > cfg.t_max)
                    throw ConfigError("sample_times must lie within [0, t_max]");
                if (i > 0 && t <= cfg.sample_times[i - 1])
                    throw ConfigError("sample_times must be strictly ascending");
            }
        }
    }
    cfg.integrator.max_time = std::max(cfg.t_max, cfg.integrator.h);

    if (doc.contains("quadrature")) {
        const json& q = doc["quadrature"];
        require_keys(q, {"loop_markers", "surface_grid", "box_points"}, "quadrature");
        cfg.loop_markers = get_int(q, "loop_markers", cfg.loop_markers);
        if (cfg.loop_markers < 8)
            throw ConfigError("quadrature parameter out of range: loop_markers must be >= 8");
        if (q.contains("surface_grid")) {
            if (q["surface_grid"].is_array() && q["surface_grid"].size() == 2) {
                cfg.surface_n = q["surface_grid"][0].get<int>();
                cfg.surface_m = q["surface_grid"][1].get<int>();
            } else if (q["surface_grid"].is_number_integer()) {
                cfg.surface_n = cfg.surface_m = q["surface_grid"].get<int>();
            } else {
                throw ConfigError("surface_grid must be an integer or a pair [N,M]");
            }
            if (cfg.surface_n < 8 || cfg.surface_m < 8)
                throw ConfigError("quadrature parameter out of range: surface_grid must be >= 8");
        }
        cfg.box_points = get_int(q, "box_points", cfg.box_points);
        if (cfg.box_points < 8)
            throw ConfigError("quadrature parameter out of range: box_points must be >= 8");
    }

    if (doc.contains("geometry")) {
        const json& g = doc["geometry"];
        require_keys(g, {"seeds", "loop", "surface", "candidate", "clebsch8"}, "geometry");
        cfg.seeds = get_int(g, "seeds", cfg.seeds);
        if (cfg.seeds < 1) throw ConfigError("geometry parameter out of range: seeds must be >= 1");
        if (g.contains("loop")) {
            const json& l = g["loop"];
            require_keys(l, {"type", "center", "radius", "axis"}, "geometry.loop");
            if (l.contains("type")) cfg.loop.type = l["type"].get<std::string>();
            if (l.contains("center")) cfg.loop.center = get_vec3(l["center"], "loop center");
            cfg.loop.radius = get_number(l, "radius", cfg.loop.radius);
            if (!(cfg.loop.radius > 0.0))
                throw ConfigError("geometry parameter out of range: loop radius must be > 0");
            if (l.contains("axis")) cfg.loop.axis = parse_axis(l["axis"]);
        }
        if (g.contains("surface")) {
            const json& s = g["surface"];
            require_keys(s, {"type", "center", "radius", "axis", "origin", "edge1", "edge2"},
                         "geometry.surface");
            if (s.contains("type")) cfg.surface.type = s["type"].get<std::string>();
            if (s.contains("center")) cfg.surface.center = get_vec3(s["center"], "surface center");
            cfg.surface.radius = get_number(s, "radius", cfg.surface.radius);
            if (!(cfg.surface.radius > 0.0))
                throw ConfigError("geometry parameter out of range: surface radius must be > 0");
            if (s.contains("axis")) cfg.surface.axis = parse_axis(s["axis"]);
            if (s.contains("origin")) cfg.surface.origin = get_vec3(s["origin"], "surface origin");
            if (s.contains("edge1")) cfg.surface.edge1 = get_vec3(s["edge1"], "surface edge1");
            if (s.contains("edge2")) cfg.surface.edge2 = get_vec3(s["edge2"], "surface edge2");
        }
        if (g.contains("candidate")) {
            cfg.candidate = g["candidate"].get<std::string>();
            try {
                (void)make_candidate(cfg.candidate);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (g.contains("clebsch8")) cfg.run_clebsch8 = g["clebsch8"].get<bool>();
    }

    if (doc.contains("action")) {
        const json& a = doc["action"];
        require_keys(a, {"ensemble_n", "time_samples", "epsilons", "perturbations"}, "action");
        cfg.ensemble_n = get_int(a, "ensemble_n", cfg.ensemble_n);
        cfg.time_samples = get_int(a, "time_samples", cfg.time_samples);
        cfg.n_perturbations = get_int(a, "perturbations", cfg.n_perturbations);
        if (cfg.ensemble_n < 1 || cfg.time_samples < 8 || cfg.n_perturbations < 1)
            throw ConfigError("action parameter out of range");
        if (a.contains("epsilons")) {
            cfg.epsilons.clear();
            for (const auto& v : a["epsilons"]) {
                const double eps = v.get<double>();
                if (!(eps > 0.0))
                    throw ConfigError("action parameter out of range: epsilons must be > 0");
                cfg.epsilons.push_back(eps);
            }
            if (cfg.epsilons.empty()) throw ConfigError("action epsilons must be nonempty");
        }
    }

    if (doc.contains("tolerance")) {
        cfg.tolerance = doc["tolerance"].get<double>();
        if (!(cfg.tolerance > 0.0))
            throw ConfigError("tolerance out of range: must be > 0");
    }
    if (doc.contains("tolerance_kind")) {
        const std::string kind = doc["tolerance_kind"].get<std::string>();
        if (kind == "absolute")
            cfg.tolerance_is_relative = false;
        else if (kind == "relative")
            cfg.tolerance_is_relative = true;
        else
            throw ConfigError("tolerance_kind must be absolute|relative");
        cfg.tolerance_kind_set = true;
    }
    if (doc.contains("expect")) {
        const std::string expect = doc["expect"].get<std::string>();
        if (expect == "reject")
            cfg.expect_rejection = true;
        else if (expect != "pass")
            throw ConfigError("expect must be pass|reject");
    }
    cfg.reject_threshold = get_number(doc, "reject_threshold", cfg.reject_threshold);

    if (doc.contains("output")) {
        const json& o = doc["output"];
        require_keys(o, {"csv_path", "json_path"}, "output");
        if (o.contains("csv_path")) cfg.csv_path = o["csv_path"].get<std::string>();
        if (o.contains("json_path")) cfg.json_path = o["json_path"].get<std::string>();
    }

    // defaults that depend on the experiment
    const auto tol = default_tolerance(cfg.experiment);
    if (cfg.tolerance == 0.0) cfg.tolerance = tol.value;
    if (!cfg.tolerance_kind_set) cfg.tolerance_is_relative = tol.relative;
    if (cfg.sample_times.empty()) {
        if (cfg.t_max == 0.0) {
            cfg.sample_times = {0.0};
        } else {
            for (int k = 0; k <= 5; ++k) cfg.sample_times.push_back(cfg.t_max * k / 5);
        }
    }
    const std::string base = experiment_name(cfg.experiment) + "_" + cfg.field_name;
    if (cfg.csv_path.empty()) cfg.csv_path = base + ".csv";
    if (cfg.json_path.empty()) cfg.json_path = base + ".json";
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    RunResult out;
    out.experiment = experiment_name(cfg.experiment);
    out.field = cfg.field_name;
    out.geometry = geometry_label(cfg);
    out.tolerance = cfg.tolerance;
    out.tolerance_is_relative = cfg.tolerance_is_relative;

    const FlowField field = make_field(cfg.field_name, cfg.field_params);
    json extra;
    bool pass_set_by_runner = false;
    try {
        switch (cfg.experiment) {
            case ExperimentKind::Mass: run_mass(cfg, field, out, extra); break;
            case ExperimentKind::Cauchy: run_cauchy(cfg, field, out, extra); break;
            case ExperimentKind::Kelvin: run_kelvin(cfg, field, out, extra); break;
            case ExperimentKind::Helmholtz: run_helmholtz(cfg, field, out, extra); break;
            case ExperimentKind::Stokes: run_stokes(cfg, field, out, extra); break;
            case ExperimentKind::Clebsch:
                run_clebsch(cfg, field, out, extra);
                pass_set_by_runner = cfg.expect_rejection;
                break;
            case ExperimentKind::Helicity: run_helicity(cfg, field, out, extra); break;
            case ExperimentKind::Action:
                run_action(cfg, field, out, extra);
                pass_set_by_runner = true;
                break;
        }
    } catch (const NumericError& e) {
        out.error = e.what();
        out.pass = false;
        CsvWriter csv({"experiment", "field", "geometry", "t", "value", "reference", "deviation"});
        csv.add_row({out.experiment, out.field, "error", "0", "nan", "nan", "inf"});
        out.csv_text = csv.to_string();
    }

    if (out.error.empty() && !pass_set_by_runner) {
        double max_abs = 0.0, max_rel = 0.0;
        for (const auto& row : out.series.rows) {
            max_abs = std::max(max_abs, row.deviation);
            max_rel = std::max(max_rel, relative_deviation(row.deviation, row.reference));
        }
        out.max_deviation = max_abs;
        out.max_relative_deviation = max_rel;
        const double effective = cfg.tolerance_is_relative ? max_rel : max_abs;
        out.pass = effective <= cfg.tolerance;
    }

    json summary;
    summary["experiment"] = out.experiment;
    summary["field"] = out.field;
    summary["geometry"] = out.geometry;
    summary["rows"] = out.series.rows.size();
    summary["max_deviation"] = out.max_deviation;
    summary["max_relative_deviation"] = out.max_relative_deviation;
    summary["tolerance"] = out.tolerance;
    summary["tolerance_kind"] = cfg.tolerance_is_relative ? "relative" : "absolute";
    summary["pass"] = out.pass;
    if (!out.error.empty()) summary["error"] = out.error;
    for (auto it = extra.begin(); it != extra.end(); ++it) summary[it.key()] = it.value();
    out.json_text = summary.dump(2) + "\n";
    return out;
}

std::string resolve_output_path(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    const char* dir = std::getenv("LFD_OUTPUT_DIR");
    if (dir && *dir && p.is_relative()) p = fs::path(dir) / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p.string();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

}  // namespace

RunResult run_and_write(const ExperimentConfig& cfg) {
    RunResult out = run_experiment(cfg);
    write_text(resolve_output_path(cfg.csv_path), out.csv_text);
    write_text(resolve_output_path(cfg.json_path), out.json_text);
    return out;
}

SweepResult sweep(const ExperimentConfig& cfg, const std::string& parameter,
                  const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: values must be nonempty");
    SweepResult result;
    result.parameter = parameter;
    std::vector<double> scales;
    CsvWriter csv({"parameter", "value", "max_deviation"});
    for (double v : values) {
        ExperimentConfig c = cfg;
        if (parameter == "h") {
            if (!(v > 0.0)) throw ConfigError("sweep: h values must be > 0");
            c.integrator.h = v;
            c.integrator.max_time = std::max(c.t_max, v);
            scales.push_back(v);
        } else if (parameter == "loop_markers") {
            c.loop_markers = static_cast<int>(v);
            scales.push_back(1.0 / v);
        } else if (parameter == "surface_grid") {
            c.surface_n = c.surface_m = static_cast<int>(v);
            scales.push_back(1.0 / v);
        } else if (parameter == "box_points") {
            c.box_points = static_cast<int>(v);
            scales.push_back(1.0 / v);
        } else {
            throw ConfigError("sweep: parameter must be one of "
                              "h|loop_markers|surface_grid|box_points");
        }
        const RunResult r = run_experiment(c);
        if (!r.error.empty()) throw NumericError("sweep: run failed: " + r.error);
        const double dev =
            cfg.tolerance_is_relative ? r.max_relative_deviation : r.max_deviation;
        result.values.push_back(v);
        result.deviations.push_back(dev);
        csv.add_row({parameter, format_double(v), format_double(dev)});
    }
    if (values.size() >= 2) result.fitted_order = fit_convergence_order(scales, result.deviations);
    result.csv_text = csv.to_string();
    json j;
    j["experiment"] = experiment_name(cfg.experiment);
    j["field"] = cfg.field_name;
    j["parameter"] = parameter;
    j["values"] = result.values;
    j["max_deviations"] = result.deviations;
    if (result.fitted_order)
        j["fitted_order"] = *result.fitted_order;
    else
        j["fitted_order"] = nullptr;
    result.json_text = j.dump(2) + "\n";
    return result;
}

SweepResult sweep_and_write(const ExperimentConfig& cfg, const std::string& parameter,
                            const std::vector<double>& values) {
    SweepResult r = sweep(cfg, parameter, values);
    write_text(resolve_output_path(cfg.csv_path), r.csv_text);
    write_text(resolve_output_path(cfg.json_path), r.json_text);
    return r;
}

std::string report_table(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError("report: not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-32s %-10s %-12s %-6s %-14s %-12s\n", "file",
                  "experiment", "field", "pass", "max_deviation", "tolerance");
    out << line;
    for (const auto& f : files) {
        std::ifstream in(f);
        json j;
        try {
            in >> j;
        } catch (const json::exception&) {
            continue;  // not a summary document
        }
        if (!j.is_object() || !j.contains("experiment") || !j.contains("pass"))
            continue;  // not a run summary (e.g. a sweep table)
        const double dev = j.value("max_deviation", 0.0);
        const double tol = j.value("tolerance", 0.0);
        std::snprintf(line, sizeof(line), "%-32s %-10s %-12s %-6s %-14.6g %-12.6g\n",
                      f.filename().string().c_str(),
                      j.value("experiment", std::string("?")).c_str(),
                      j.value("field", std::string("?")).c_str(),
                      j.value("pass", false) ? "yes" : "NO", dev, tol);
        out << line;
    }
    return out.str();
}

}  // namespace lfd
