// Building data model: zones, inter-zone partitions, components, and the
// per-building / per-zone / per-wall model selections. Immutable after
// validation; shareable read-only.
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "zonal/errors.hpp"
#include "zonal/datetime.hpp"
#include "zonal/solar.hpp"

namespace zonal {

inline constexpr const char* kExterior = "EXTERIOR";

inline constexpr double kAirDensity = 1.2;          // kg/m³
inline constexpr double kAirSpecificHeat = 1006.0;  // J/kgK
inline constexpr double kGravity = 9.81;            // m/s²

// ---------------------------------------------------------------------------
// Convection model selection (chosen per zone).

enum class ConvectionKind { ConstantH, PerSurfaceH, Nonlinear };

// Geometry class of a surface seen from inside a zone, plus the direction of
// heat flow for the buoyancy-sensitive nonlinear correlations.
enum class SurfaceClass {
    FloorHeatUp,      // warm floor under zone air (unstable)
    FloorHeatDown,    // cool floor (stable)
    CeilingHeatUp,    // cool ceiling (unstable)
    CeilingHeatDown,  // warm ceiling (stable)
    Vertical,
};

struct NonlinearCoefficients {
    double a = 0.0;
    double p = 0.0;  // h = a * |dT|^p
};

struct ConvectionModel {
    ConvectionKind kind = ConvectionKind::ConstantH;
    double constant_h = 5.0;  // W/m²K

    // Per-geometry linear coefficients (still air).
    double h_floor_up = 4.04;
    double h_ceiling_down = 0.95;
    double h_vertical = 3.08;

    // Buoyant correlations h = a*|dT|^p per class.
    NonlinearCoefficients nl_vertical{1.31, 1.0 / 3.0};
    NonlinearCoefficients nl_unstable{1.52, 1.0 / 3.0};
    NonlinearCoefficients nl_stable{0.59, 0.25};
};

// Film coefficient for the selected model. The constant model ignores both
// the class and dT; the per-surface model ignores dT; the nonlinear model is
// zero at dT = 0.
inline double interior_h(const ConvectionModel& model, SurfaceClass cls, double delta_t) {
    switch (model.kind) {
        case ConvectionKind::ConstantH:
            return model.constant_h;
        case ConvectionKind::PerSurfaceH:
            switch (cls) {
                case SurfaceClass::FloorHeatUp:
                case SurfaceClass::FloorHeatDown:
                    return model.h_floor_up;
                case SurfaceClass::CeilingHeatUp:
                case SurfaceClass::CeilingHeatDown:
                    return model.h_ceiling_down;
                case SurfaceClass::Vertical:
                    return model.h_vertical;
            }
            return model.h_vertical;
        case ConvectionKind::Nonlinear: {
            NonlinearCoefficients c;
            switch (cls) {
                case SurfaceClass::FloorHeatUp:
                case SurfaceClass::CeilingHeatUp:
                    c = model.nl_unstable;
                    break;
                case SurfaceClass::FloorHeatDown:
                case SurfaceClass::CeilingHeatDown:
                    c = model.nl_stable;
                    break;
                case SurfaceClass::Vertical:
                    c = model.nl_vertical;
                    break;
            }
            return c.a * std::pow(std::abs(delta_t), c.p);
        }
    }
    return model.constant_h;
}

// ---------------------------------------------------------------------------
// Exterior film selection (building level).

enum class ExteriorConvectionModel { Constant, WindDriven };

inline double exterior_h(ExteriorConvectionModel model, double wind_speed) {
    switch (model) {
        case ExteriorConvectionModel::Constant:
            return 16.7;
        case ExteriorConvectionModel::WindDriven:
            return 5.7 + 3.8 * wind_speed;
    }
    return 16.7;
}

// ---------------------------------------------------------------------------
// Components. tilt/azimuth describe the outward normal of the side_b face;
// the side_a face normal is its mirror (tilt pi - s, azimuth + pi).

struct MaterialLayer {
    double thickness = 0.1;        // m
    double conductivity = 1.0;     // W/mK
    double density = 2000.0;       // kg/m³
    double specific_heat = 900.0;  // J/kgK
};

enum class ConductionModel { R2C };

struct Wall {
    std::string name;
    double area = 1.0;  // m²
    MaterialLayer layer;
    ConductionModel conduction_model = ConductionModel::R2C;
    double tilt = kPi / 2.0;  // rad, side_b outward normal
    double azimuth = 0.0;     // rad from north
    double absorptance_a = 0.6;  // shortwave, side_a face
    double absorptance_b = 0.6;  // shortwave, side_b face
    double emissivity_a = 0.9;   // longwave, side_a face
    double emissivity_b = 0.9;
    bool ground_contact = false;  // side_b meets deep ground, not outdoor air
};

struct Glazing {
    std::string name;
    double area = 1.0;                    // m²
    double beam_transmittance = 0.85;     // at normal incidence
    double diffuse_transmittance = 0.75;  // incidence-independent
    double u_value = 5.8;                 // W/m²K, air-to-air with nominal films
    double tilt = kPi / 2.0;
    double azimuth = 0.0;
};

struct LargeOpeningGeometry {
    double height = 2.0;  // m, vertical extent
    double width = 0.8;   // m
    double discharge_coefficient = 0.61;
};

struct Opening {
    std::string name;
    double flow_coefficient = 0.01;  // C_q, kg/(s·Pa^n)
    double flow_exponent = 0.65;     // n in [0.5, 1]
    double height = 0.0;             // m, opening bottom above side_a zone floor
    std::optional<LargeOpeningGeometry> large_opening;
};

struct HvacSystem {
    std::string name;
    double setpoint_low = 18.0;   // °C, heating threshold
    double setpoint_high = 26.0;  // °C, cooling threshold
    std::array<int, 24> schedule{};  // hourly on/off flags
    double heating_power_max = 0.0;  // W
    double cooling_power_max = 0.0;  // W
    double radiative_fraction = 0.0;
    double latent_capacity = 0.0;  // kg/s of moisture removal
    bool sizing_mode = false;      // treat available power as infinite

    HvacSystem() { schedule.fill(1); }
};

struct FixedFlow {
    std::string name;
    double mass_flow = 0.0;  // kg/s, positive side_a -> side_b
    std::array<double, 24> schedule;  // hourly scale factors

    FixedFlow() { schedule.fill(1.0); }
};

using Component = std::variant<Wall, Glazing, Opening, HvacSystem, FixedFlow>;

inline const std::string& component_name(const Component& c) {
    return std::visit([](const auto& v) -> const std::string& { return v.name; }, c);
}

// ---------------------------------------------------------------------------

struct InternalGains {
    std::array<double, 24> watts{};  // hourly sensible gain profile
    double radiative_fraction = 0.0;
    std::array<double, 24> moisture{};  // kg/s hourly moisture gain
};

struct Zone {
    std::string name;
    double volume = 1.0;        // m³
    double air_capacity = 0.0;  // J/K; 0 means rho*cp*volume
    ConvectionModel convection;
    InternalGains internal_gains;
    double initial_temperature = 20.0;  // °C
    double initial_humidity = 0.010;    // kg/kg
    double reference_height = 0.0;      // m, zone floor above site ground

    double effective_air_capacity() const {
        return air_capacity > 0.0 ? air_capacity : kAirDensity * kAirSpecificHeat * volume;
    }
};

struct Interzone {
    std::string side_a;  // zone name or EXTERIOR
    std::string side_b;
    std::vector<Component> components;
};

enum class AirflowModel { FixedRates, PressureNetwork };

struct BuildingModels {
    ExteriorConvectionModel exterior_convection = ExteriorConvectionModel::Constant;
    DiffuseModel diffuse = DiffuseModel::Isotropic;
    SkyTemperatureModel sky_temperature = SkyTemperatureModel::Offset;
    AirflowModel airflow = AirflowModel::FixedRates;
};

struct Site {
    double latitude = 0.0;   // rad, south negative
    double longitude = 0.0;  // rad, east positive
    double altitude = 0.0;   // m
    double albedo = 0.2;
    double utc_offset_hours = 0.0;
};

struct Building {
    std::string name;
    Site site;
    BuildingModels models;
    std::vector<Zone> zones;
    std::vector<Interzone> interzones;

    int zone_index(const std::string& name) const {
        for (std::size_t i = 0; i < zones.size(); ++i) {
            if (zones[i].name == name) return static_cast<int>(i);
        }
        return -1;
    }
};

struct SolverOptions {
    double coupling_criterion = 1e-3;    // K, zone connection sweeps
    double convection_criterion = 1e-3;  // K, nonlinear convection loop
    int convection_max_iterations = 25;
    int coupling_max_sweeps = 50;
    double airflow_tolerance = 1e-6;  // kg/s residual per zone
    int airflow_max_iterations = 100;
    bool airflow_outer_iteration = false;  // re-solve airflow after thermal convergence
    int warmup_repeats = 3;  // first simulated day repeated before recording
    bool verbose_surfaces = false;  // per-surface radiation columns in results
};

struct Project {
    std::string weather_path;
    Building building;
    std::string result_path = ".";
    DateTime period_start;
    DateTime period_end;  // exclusive
    double timestep = 3600.0;  // s
    SolverOptions solver;
    bool sizing_override = false;  // force every HVAC into sizing mode
};

// ---------------------------------------------------------------------------
// Validation. Returns an empty list iff all invariants hold; diagnostics are
// emitted in deterministic entity order and never throw.

namespace detail {

inline void check_range(Diagnostics& out, const std::string& path, double v, double lo,
                        double hi, const char* what) {
    if (!(v >= lo && v <= hi)) {
        out.push_back({path, std::string(what) + " must be in [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "], got " + std::to_string(v)});
    }
}

inline void validate_component(Diagnostics& out, const std::string& path,
                               const Component& comp) {
    if (const auto* w = std::get_if<Wall>(&comp)) {
        if (!(w->area > 0.0)) out.push_back({path, "wall area must be > 0"});
        if (!(w->layer.thickness > 0.0)) out.push_back({path, "layer thickness must be > 0"});
        if (!(w->layer.conductivity > 0.0))
            out.push_back({path, "layer conductivity must be > 0"});
        if (w->layer.density < 0.0 || w->layer.specific_heat < 0.0)
            out.push_back({path, "layer density/specific heat must be >= 0"});
        if (!(w->tilt >= 0.0 && w->tilt <= kPi))
            out.push_back({path, "tilt must be in [0, pi]"});
        check_range(out, path, w->absorptance_a, 0.0, 1.0, "absorptance_a");
        check_range(out, path, w->absorptance_b, 0.0, 1.0, "absorptance_b");
        check_range(out, path, w->emissivity_a, 0.0, 1.0, "emissivity_a");
        check_range(out, path, w->emissivity_b, 0.0, 1.0, "emissivity_b");
    } else if (const auto* g = std::get_if<Glazing>(&comp)) {
        if (!(g->area > 0.0)) out.push_back({path, "glazing area must be > 0"});
        check_range(out, path, g->beam_transmittance, 0.0, 1.0, "beam_transmittance");
        check_range(out, path, g->diffuse_transmittance, 0.0, 1.0, "diffuse_transmittance");
        if (!(g->u_value > 0.0)) out.push_back({path, "u_value must be > 0"});
        if (!(g->tilt >= 0.0 && g->tilt <= kPi))
            out.push_back({path, "tilt must be in [0, pi]"});
    } else if (const auto* o = std::get_if<Opening>(&comp)) {
        if (!(o->flow_coefficient > 0.0))
            out.push_back({path, "flow_coefficient must be > 0"});
        if (!(o->flow_exponent >= 0.5 && o->flow_exponent <= 1.0))
            out.push_back({path, "flow_exponent must be in [0.5, 1]"});
        if (o->large_opening) {
            if (!(o->large_opening->height > 0.0 && o->large_opening->width > 0.0))
                out.push_back({path, "large opening dimensions must be > 0"});
            if (!(o->large_opening->discharge_coefficient > 0.0 &&
                  o->large_opening->discharge_coefficient <= 1.2))
                out.push_back({path, "discharge coefficient must be in (0, 1.2]"});
        }
    } else if (const auto* h = std::get_if<HvacSystem>(&comp)) {
        if (!(h->setpoint_low <= h->setpoint_high))
            out.push_back({path, "setpoint_low must be <= setpoint_high"});
        if (h->heating_power_max < 0.0 || h->cooling_power_max < 0.0)
            out.push_back({path, "powers must be >= 0"});
        check_range(out, path, h->radiative_fraction, 0.0, 1.0, "radiative_fraction");
        if (h->latent_capacity < 0.0) out.push_back({path, "latent_capacity must be >= 0"});
    } else if (const auto* f = std::get_if<FixedFlow>(&comp)) {
        for (double s : f->schedule) {
            if (s < 0.0) {
                out.push_back({path, "fixed flow schedule factors must be >= 0"});
                break;
            }
        }
    }
}

}  // namespace detail

inline Diagnostics validate_building(const Building& b) {
    Diagnostics out;

    detail::check_range(out, "site.albedo", b.site.albedo, 0.0, 1.0, "albedo");
    if (std::abs(b.site.latitude) > kPi / 2.0)
        out.push_back({"site.latitude", "latitude out of range"});

    if (b.zones.empty()) out.push_back({"zones", "building must define at least one zone"});

    std::set<std::string> names;
    for (std::size_t i = 0; i < b.zones.size(); ++i) {
        const Zone& z = b.zones[i];
        const std::string path = "zones[" + std::to_string(i) + "](" + z.name + ")";
        if (z.name.empty() || z.name == kExterior)
            out.push_back({path, "zone name must be nonempty and not EXTERIOR"});
        if (!names.insert(z.name).second)
            out.push_back({path, "duplicate zone name '" + z.name + "'"});
        if (!(z.volume > 0.0)) out.push_back({path + ".volume", "volume must be > 0"});
        if (z.air_capacity < 0.0)
            out.push_back({path + ".air_capacity", "air capacity must be >= 0"});
        detail::check_range(out, path + ".internal_gains", z.internal_gains.radiative_fraction,
                            0.0, 1.0, "radiative_fraction");
        detail::check_range(out, path + ".initial_humidity", z.initial_humidity, 0.0, 0.05,
                            "initial humidity");
        if (z.convection.kind == ConvectionKind::Nonlinear) {
            for (const auto& c : {z.convection.nl_vertical, z.convection.nl_unstable,
                                  z.convection.nl_stable}) {
                if (!(c.a > 0.0) || !(c.p > 0.0 && c.p < 1.0)) {
                    out.push_back({path + ".convection",
                                   "nonlinear coefficients need a > 0 and 0 < p < 1"});
                    break;
                }
            }
        }
    }

    for (std::size_t i = 0; i < b.interzones.size(); ++i) {
        const Interzone& iz = b.interzones[i];
        const std::string path = "interzones[" + std::to_string(i) + "]";
        for (const std::string& side : {iz.side_a, iz.side_b}) {
            if (side != kExterior && b.zone_index(side) < 0)
                out.push_back({path, "unknown zone '" + side + "'"});
        }
        if (iz.side_a == iz.side_b)
            out.push_back({path, "side_a and side_b must differ"});
        if (iz.components.empty())
            out.push_back({path, "interzone needs at least one component"});
        for (std::size_t c = 0; c < iz.components.size(); ++c) {
            const std::string cpath =
                path + ".components[" + std::to_string(c) + "](" +
                component_name(iz.components[c]) + ")";
            detail::validate_component(out, cpath, iz.components[c]);
            if (const auto* w = std::get_if<Wall>(&iz.components[c])) {
                if (w->ground_contact && iz.side_a != kExterior && iz.side_b != kExterior)
                    out.push_back({cpath, "ground_contact wall must border EXTERIOR"});
            }
        }
    }

    // Pressure network needs every zone reachable through openings.
    if (b.models.airflow == AirflowModel::PressureNetwork && !b.zones.empty()) {
        const int n = static_cast<int>(b.zones.size());
        std::vector<int> parent(n + 1);
        for (int i = 0; i <= n; ++i) parent[i] = i;  // n = EXTERIOR
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<bool> has_link(n, false);
        for (const Interzone& iz : b.interzones) {
            bool has_opening = false;
            for (const Component& c : iz.components)
                if (std::holds_alternative<Opening>(c)) has_opening = true;
            if (!has_opening) continue;
            const int a = iz.side_a == kExterior ? n : b.zone_index(iz.side_a);
            const int bb = iz.side_b == kExterior ? n : b.zone_index(iz.side_b);
            if (a < 0 || bb < 0) continue;
            if (a < n) has_link[a] = true;
            if (bb < n) has_link[bb] = true;
            parent[find(a)] = find(bb);
        }
        for (int i = 0; i < n; ++i) {
            const std::string path = "zones[" + std::to_string(i) + "](" + b.zones[i].name + ")";
            if (!has_link[i]) {
                out.push_back({path, "pressure network selected but zone has no openings"});
            } else if (find(i) != find(n)) {
                out.push_back({path, "zone not connected to EXTERIOR through openings"});
            }
        }
    }

    return out;
}

}  // namespace zonal
