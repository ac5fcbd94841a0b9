// JSON realization of the building/project tree. Angles are degrees in the
// files and radians in memory; every other quantity is SI as named.
#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zonal/building.hpp"

namespace zonal {

namespace detail {

using nlohmann::json;

inline ValidationError parse_error(const std::string& path, const std::string& what) {
    return ValidationError(path + ": " + what);
}

// Angles live in radians in memory but degrees in the files; quantizing the
// serialized degrees keeps parse/serialize round trips byte-stable.
inline double angle_deg(double rad) {
    return std::round(rad2deg(rad) * 1e9) / 1e9;
}

inline double get_number(const json& j, const std::string& path, const char* key,
                         std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw parse_error(path, std::string("missing field '") + key + "'");
    }
    if (!j[key].is_number()) throw parse_error(path, std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

inline std::string get_string(const json& j, const std::string& path, const char* key,
                              std::optional<std::string> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw parse_error(path, std::string("missing field '") + key + "'");
    }
    if (!j[key].is_string()) throw parse_error(path, std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

template <std::size_t N, typename T>
inline std::array<T, N> get_profile(const json& j, const std::string& path, const char* key,
                                    T fill_value) {
    std::array<T, N> out;
    out.fill(fill_value);
    if (!j.contains(key)) return out;
    const json& v = j[key];
    if (v.is_number()) {
        out.fill(v.get<T>());
        return out;
    }
    if (!v.is_array() || v.size() != N)
        throw parse_error(path, std::string("field '") + key + "' must be a scalar or an array of " +
                                    std::to_string(N));
    for (std::size_t i = 0; i < N; ++i) out[i] = v[i].get<T>();
    return out;
}

inline ConvectionModel convection_from_json(const json& j, const std::string& path) {
    ConvectionModel m;
    if (j.is_null()) return m;
    const std::string kind = get_string(j, path, "model", std::string("constant_h"));
    if (kind == "constant_h") {
        m.kind = ConvectionKind::ConstantH;
        m.constant_h = get_number(j, path, "h", 5.0);
    } else if (kind == "per_surface_h") {
        m.kind = ConvectionKind::PerSurfaceH;
        m.h_floor_up = get_number(j, path, "h_floor_up", 4.04);
        m.h_ceiling_down = get_number(j, path, "h_ceiling_down", 0.95);
        m.h_vertical = get_number(j, path, "h_vertical", 3.08);
    } else if (kind == "nonlinear") {
        m.kind = ConvectionKind::Nonlinear;
        m.nl_vertical = {get_number(j, path, "vertical_a", 1.31),
                         get_number(j, path, "vertical_p", 1.0 / 3.0)};
        m.nl_unstable = {get_number(j, path, "unstable_a", 1.52),
                         get_number(j, path, "unstable_p", 1.0 / 3.0)};
        m.nl_stable = {get_number(j, path, "stable_a", 0.59),
                       get_number(j, path, "stable_p", 0.25)};
    } else {
        throw parse_error(path, "unknown convection model '" + kind + "'");
    }
    return m;
}

inline json convection_to_json(const ConvectionModel& m) {
    json j;
    switch (m.kind) {
        case ConvectionKind::ConstantH:
            j["model"] = "constant_h";
            j["h"] = m.constant_h;
            break;
        case ConvectionKind::PerSurfaceH:
            j["model"] = "per_surface_h";
            j["h_floor_up"] = m.h_floor_up;
            j["h_ceiling_down"] = m.h_ceiling_down;
            j["h_vertical"] = m.h_vertical;
            break;
        case ConvectionKind::Nonlinear:
            j["model"] = "nonlinear";
            j["vertical_a"] = m.nl_vertical.a;
            j["vertical_p"] = m.nl_vertical.p;
            j["unstable_a"] = m.nl_unstable.a;
            j["unstable_p"] = m.nl_unstable.p;
            j["stable_a"] = m.nl_stable.a;
            j["stable_p"] = m.nl_stable.p;
            break;
    }
    return j;
}

inline Component component_from_json(const json& j, const std::string& path) {
    const std::string type = get_string(j, path, "type");
    const std::string name = get_string(j, path, "name", std::string());
    if (type == "wall") {
        Wall w;
        w.name = name;
        w.area = get_number(j, path, "area_m2");
        if (j.contains("layer")) {
            const json& l = j["layer"];
            w.layer.thickness = get_number(l, path + ".layer", "thickness_m");
            w.layer.conductivity = get_number(l, path + ".layer", "conductivity_w_mk");
            w.layer.density = get_number(l, path + ".layer", "density_kg_m3");
            w.layer.specific_heat = get_number(l, path + ".layer", "specific_heat_j_kgk");
        }
        const std::string cond = get_string(j, path, "conduction_model", std::string("r2c"));
        if (cond != "r2c") throw parse_error(path, "unknown conduction model '" + cond + "'");
        w.tilt = deg2rad(get_number(j, path, "tilt_deg", 90.0));
        w.azimuth = deg2rad(get_number(j, path, "azimuth_deg", 0.0));
        w.absorptance_a = get_number(j, path, "absorptance_a", 0.6);
        w.absorptance_b = get_number(j, path, "absorptance_b", 0.6);
        w.emissivity_a = get_number(j, path, "emissivity_a", 0.9);
        w.emissivity_b = get_number(j, path, "emissivity_b", 0.9);
        w.ground_contact = j.value("ground_contact", false);
        return w;
    }
    if (type == "glazing") {
        Glazing g;
        g.name = name;
        g.area = get_number(j, path, "area_m2");
        g.beam_transmittance = get_number(j, path, "beam_transmittance", 0.85);
        g.diffuse_transmittance = get_number(j, path, "diffuse_transmittance", 0.75);
        g.u_value = get_number(j, path, "u_value_w_m2k", 5.8);
        g.tilt = deg2rad(get_number(j, path, "tilt_deg", 90.0));
        g.azimuth = deg2rad(get_number(j, path, "azimuth_deg", 0.0));
        return g;
    }
    if (type == "opening") {
        Opening o;
        o.name = name;
        o.flow_coefficient = get_number(j, path, "flow_coefficient", 0.01);
        o.flow_exponent = get_number(j, path, "flow_exponent", 0.65);
        o.height = get_number(j, path, "height_m", 0.0);
        if (j.contains("large_opening") && !j["large_opening"].is_null()) {
            const json& lo = j["large_opening"];
            o.large_opening = LargeOpeningGeometry{
                get_number(lo, path + ".large_opening", "height_m"),
                get_number(lo, path + ".large_opening", "width_m"),
                get_number(lo, path + ".large_opening", "discharge_coefficient", 0.61)};
        }
        return o;
    }
    if (type == "hvac") {
        HvacSystem h;
        h.name = name;
        h.setpoint_low = get_number(j, path, "setpoint_low_c");
        h.setpoint_high = get_number(j, path, "setpoint_high_c");
        h.schedule = get_profile<24, int>(j, path, "schedule", 1);
        h.heating_power_max = get_number(j, path, "heating_power_max_w", 0.0);
        h.cooling_power_max = get_number(j, path, "cooling_power_max_w", 0.0);
        h.radiative_fraction = get_number(j, path, "radiative_fraction", 0.0);
        h.latent_capacity = get_number(j, path, "latent_capacity_kg_s", 0.0);
        h.sizing_mode = j.value("sizing", false);
        return h;
    }
    if (type == "fixed_flow") {
        FixedFlow f;
        f.name = name;
        f.mass_flow = get_number(j, path, "mass_flow_kg_s");
        f.schedule = get_profile<24, double>(j, path, "schedule", 1.0);
        return f;
    }
    throw parse_error(path, "unknown component type '" + type + "'");
}

inline json component_to_json(const Component& comp) {
    json j;
    if (const auto* w = std::get_if<Wall>(&comp)) {
        j["type"] = "wall";
        j["name"] = w->name;
        j["area_m2"] = w->area;
        j["layer"] = {{"thickness_m", w->layer.thickness},
                      {"conductivity_w_mk", w->layer.conductivity},
                      {"density_kg_m3", w->layer.density},
                      {"specific_heat_j_kgk", w->layer.specific_heat}};
        j["conduction_model"] = "r2c";
        j["tilt_deg"] = detail::angle_deg(w->tilt);
        j["azimuth_deg"] = detail::angle_deg(w->azimuth);
        j["absorptance_a"] = w->absorptance_a;
        j["absorptance_b"] = w->absorptance_b;
        j["emissivity_a"] = w->emissivity_a;
        j["emissivity_b"] = w->emissivity_b;
        j["ground_contact"] = w->ground_contact;
    } else if (const auto* g = std::get_if<Glazing>(&comp)) {
        j["type"] = "glazing";
        j["name"] = g->name;
        j["area_m2"] = g->area;
        j["beam_transmittance"] = g->beam_transmittance;
        j["diffuse_transmittance"] = g->diffuse_transmittance;
        j["u_value_w_m2k"] = g->u_value;
        j["tilt_deg"] = detail::angle_deg(g->tilt);
        j["azimuth_deg"] = detail::angle_deg(g->azimuth);
    } else if (const auto* o = std::get_if<Opening>(&comp)) {
        j["type"] = "opening";
        j["name"] = o->name;
        j["flow_coefficient"] = o->flow_coefficient;
        j["flow_exponent"] = o->flow_exponent;
        j["height_m"] = o->height;
        if (o->large_opening) {
            j["large_opening"] = {{"height_m", o->large_opening->height},
                                  {"width_m", o->large_opening->width},
                                  {"discharge_coefficient", o->large_opening->discharge_coefficient}};
        }
    } else if (const auto* h = std::get_if<HvacSystem>(&comp)) {
        j["type"] = "hvac";
        j["name"] = h->name;
        j["setpoint_low_c"] = h->setpoint_low;
        j["setpoint_high_c"] = h->setpoint_high;
        j["schedule"] = h->schedule;
        j["heating_power_max_w"] = h->heating_power_max;
        j["cooling_power_max_w"] = h->cooling_power_max;
        j["radiative_fraction"] = h->radiative_fraction;
        j["latent_capacity_kg_s"] = h->latent_capacity;
        j["sizing"] = h->sizing_mode;
    } else if (const auto* f = std::get_if<FixedFlow>(&comp)) {
        j["type"] = "fixed_flow";
        j["name"] = f->name;
        j["mass_flow_kg_s"] = f->mass_flow;
        j["schedule"] = f->schedule;
    }
    return j;
}

}  // namespace detail

inline Building building_from_json(const nlohmann::json& j) {
    using detail::get_number;
    using detail::get_string;
    if (!j.is_object()) throw ValidationError("building document must be a JSON object");
    Building b;
    b.name = j.value("name", "");

    if (!j.contains("site")) throw ValidationError("building: missing 'site'");
    const auto& site = j["site"];
    b.site.latitude = deg2rad(get_number(site, "site", "latitude_deg"));
    b.site.longitude = deg2rad(get_number(site, "site", "longitude_deg"));
    b.site.altitude = get_number(site, "site", "altitude_m", 0.0);
    b.site.albedo = get_number(site, "site", "albedo", 0.2);
    b.site.utc_offset_hours = get_number(site, "site", "utc_offset_hours", 0.0);

    if (j.contains("models")) {
        const auto& m = j["models"];
        const std::string cve = get_string(m, "models", "exterior_convection", std::string("constant"));
        if (cve == "constant") b.models.exterior_convection = ExteriorConvectionModel::Constant;
        else if (cve == "wind_driven") b.models.exterior_convection = ExteriorConvectionModel::WindDriven;
        else throw ValidationError("models.exterior_convection: unknown selection '" + cve + "'");

        const std::string dif = get_string(m, "models", "diffuse", std::string("isotropic"));
        if (dif == "isotropic") b.models.diffuse = DiffuseModel::Isotropic;
        else if (dif == "willmott") b.models.diffuse = DiffuseModel::Willmott;
        else throw ValidationError("models.diffuse: unknown selection '" + dif + "'");

        const std::string sky = get_string(m, "models", "sky_temperature", std::string("offset"));
        if (sky == "offset") b.models.sky_temperature = SkyTemperatureModel::Offset;
        else if (sky == "swinbank") b.models.sky_temperature = SkyTemperatureModel::Swinbank;
        else throw ValidationError("models.sky_temperature: unknown selection '" + sky + "'");

        const std::string air = get_string(m, "models", "airflow", std::string("fixed_rates"));
        if (air == "fixed_rates") b.models.airflow = AirflowModel::FixedRates;
        else if (air == "pressure_network") b.models.airflow = AirflowModel::PressureNetwork;
        else throw ValidationError("models.airflow: unknown selection '" + air + "'");
    }

    if (!j.contains("zones") || !j["zones"].is_array())
        throw ValidationError("building: missing 'zones' array");
    int zi = 0;
    for (const auto& zj : j["zones"]) {
        const std::string path = "zones[" + std::to_string(zi++) + "]";
        Zone z;
        z.name = get_string(zj, path, "name");
        z.volume = get_number(zj, path, "volume_m3");
        z.air_capacity = get_number(zj, path, "air_capacity_j_k", 0.0);
        if (zj.contains("convection"))
            z.convection = detail::convection_from_json(zj["convection"], path + ".convection");
        if (zj.contains("internal_gains")) {
            const auto& g = zj["internal_gains"];
            z.internal_gains.watts =
                detail::get_profile<24, double>(g, path + ".internal_gains", "watts", 0.0);
            z.internal_gains.radiative_fraction =
                get_number(g, path + ".internal_gains", "radiative_fraction", 0.0);
            z.internal_gains.moisture =
                detail::get_profile<24, double>(g, path + ".internal_gains", "moisture_kg_s", 0.0);
        }
        z.initial_temperature = get_number(zj, path, "initial_temperature_c", 20.0);
        z.initial_humidity = get_number(zj, path, "initial_humidity_kg_kg", 0.010);
        z.reference_height = get_number(zj, path, "reference_height_m", 0.0);
        b.zones.push_back(z);
    }

    if (!j.contains("interzones") || !j["interzones"].is_array())
        throw ValidationError("building: missing 'interzones' array");
    int ii = 0;
    for (const auto& ij : j["interzones"]) {
        const std::string path = "interzones[" + std::to_string(ii++) + "]";
        Interzone iz;
        iz.side_a = get_string(ij, path, "side_a");
        iz.side_b = get_string(ij, path, "side_b");
        if (ij.contains("components")) {
            int ci = 0;
            for (const auto& cj : ij["components"]) {
                iz.components.push_back(detail::component_from_json(
                    cj, path + ".components[" + std::to_string(ci++) + "]"));
            }
        }
        b.interzones.push_back(iz);
    }
    return b;
}

inline nlohmann::json building_to_json(const Building& b) {
    nlohmann::json j;
    j["name"] = b.name;
    j["site"] = {{"latitude_deg", detail::angle_deg(b.site.latitude)},
                 {"longitude_deg", detail::angle_deg(b.site.longitude)},
                 {"altitude_m", b.site.altitude},
                 {"albedo", b.site.albedo},
                 {"utc_offset_hours", b.site.utc_offset_hours}};
    j["models"] = {
        {"exterior_convection",
         b.models.exterior_convection == ExteriorConvectionModel::Constant ? "constant"
                                                                           : "wind_driven"},
        {"diffuse", b.models.diffuse == DiffuseModel::Isotropic ? "isotropic" : "willmott"},
        {"sky_temperature",
         b.models.sky_temperature == SkyTemperatureModel::Offset ? "offset" : "swinbank"},
        {"airflow",
         b.models.airflow == AirflowModel::FixedRates ? "fixed_rates" : "pressure_network"}};
    j["zones"] = nlohmann::json::array();
    for (const Zone& z : b.zones) {
        nlohmann::json zj;
        zj["name"] = z.name;
        zj["volume_m3"] = z.volume;
        if (z.air_capacity > 0.0) zj["air_capacity_j_k"] = z.air_capacity;
        zj["convection"] = detail::convection_to_json(z.convection);
        zj["internal_gains"] = {{"watts", z.internal_gains.watts},
                                {"radiative_fraction", z.internal_gains.radiative_fraction},
                                {"moisture_kg_s", z.internal_gains.moisture}};
        zj["initial_temperature_c"] = z.initial_temperature;
        zj["initial_humidity_kg_kg"] = z.initial_humidity;
        zj["reference_height_m"] = z.reference_height;
        j["zones"].push_back(zj);
    }
    j["interzones"] = nlohmann::json::array();
    for (const Interzone& iz : b.interzones) {
        nlohmann::json ij;
        ij["side_a"] = iz.side_a;
        ij["side_b"] = iz.side_b;
        ij["components"] = nlohmann::json::array();
        for (const Component& c : iz.components)
            ij["components"].push_back(detail::component_to_json(c));
        j["interzones"].push_back(ij);
    }
    return j;
}

// Parses, then validates; throws ValidationError carrying the entity path of
// the first structural failure, or an aggregate of invariant diagnostics.
inline Building parse_building(const std::string& document) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(document);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("building document is not valid JSON: ") + e.what());
    }
    Building b = building_from_json(j);
    const Diagnostics diags = validate_building(b);
    if (!diags.empty()) {
        std::string msg = "building validation failed:";
        for (const auto& d : diags) msg += "\n  " + d.path + ": " + d.message;
        throw ValidationError(msg);
    }
    return b;
}

inline std::string serialize_building(const Building& b) { return building_to_json(b).dump(2); }

inline Building load_building(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open building file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_building(ss.str());
}

// ---------------------------------------------------------------------------
// Project files: weather path + building (inline or referenced) + result dir.

inline Project load_project(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open project file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("project document is not valid JSON: ") + e.what());
    }

    Project p;
    p.weather_path = detail::get_string(j, "project", "weather");
    p.result_path = detail::get_string(j, "project", "results", std::string("."));

    // Referenced paths resolve relative to the project file's directory.
    const auto dir_of = [](const std::string& f) {
        const auto pos = f.find_last_of('/');
        return pos == std::string::npos ? std::string(".") : f.substr(0, pos);
    };
    const auto resolve = [&](const std::string& rel) {
        if (rel.empty() || rel.front() == '/') return rel;
        return dir_of(path) + "/" + rel;
    };
    p.weather_path = resolve(p.weather_path);

    if (!j.contains("building")) throw ValidationError("project: missing 'building'");
    if (j["building"].is_string()) {
        p.building = load_building(resolve(j["building"].get<std::string>()));
    } else {
        Building b = building_from_json(j["building"]);
        const Diagnostics diags = validate_building(b);
        if (!diags.empty()) {
            std::string msg = "building validation failed:";
            for (const auto& d : diags) msg += "\n  " + d.path + ": " + d.message;
            throw ValidationError(msg);
        }
        p.building = b;
    }

    if (!j.contains("period")) throw ValidationError("project: missing 'period'");
    p.period_start = parse_datetime(detail::get_string(j["period"], "period", "start"));
    p.period_end = parse_datetime(detail::get_string(j["period"], "period", "end"));
    p.timestep = detail::get_number(j, "project", "timestep_s", 3600.0);
    if (!(p.timestep > 0.0)) throw ValidationError("project.timestep_s must be > 0");
    p.sizing_override = j.value("sizing", false);

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        p.solver.coupling_criterion = detail::get_number(s, "solver", "coupling_criterion_k", 1e-3);
        p.solver.convection_criterion =
            detail::get_number(s, "solver", "convection_criterion_k", 1e-3);
        p.solver.convection_max_iterations =
            static_cast<int>(detail::get_number(s, "solver", "convection_max_iterations", 25));
        p.solver.coupling_max_sweeps =
            static_cast<int>(detail::get_number(s, "solver", "coupling_max_sweeps", 50));
        p.solver.airflow_tolerance = detail::get_number(s, "solver", "airflow_tolerance_kg_s", 1e-6);
        p.solver.airflow_max_iterations =
            static_cast<int>(detail::get_number(s, "solver", "airflow_max_iterations", 100));
        p.solver.airflow_outer_iteration = s.value("airflow_outer_iteration", false);
        p.solver.warmup_repeats =
            static_cast<int>(detail::get_number(s, "solver", "warmup_repeats", 3));
        p.solver.verbose_surfaces = s.value("verbose_surfaces", false);
    }
    return p;
}

}  // namespace zonal
