// Building runtime: owns one ZoneSystem per zone, the face registry that ties
// component surfaces to system nodes, and the per-timestep machinery — solar
// deposition, elementary-matrix assembly, the nonlinear convection loop, and
// the Gauss-Seidel connection process between zones.
//
// Each wall or glazing chain is integrated in exactly one zone system (the
// side_a zone, or the inside zone for envelope components). The other zone
// sees it through boundary terms: its air exchanges with the chain's far
// surface at the latest known temperature (A_connex/B_connex), refreshed
// every sweep.
#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zonal/airflow.hpp"
#include "zonal/building.hpp"
#include "zonal/hvac.hpp"
#include "zonal/moisture.hpp"
#include "zonal/solar.hpp"
#include "zonal/thermal.hpp"
#include "zonal/weather.hpp"
#include "zonal/zone_system.hpp"

namespace zonal {

inline constexpr double kStefanBoltzmann = 5.670374419e-8;
inline constexpr double kRadiantReferenceK = 293.0;
inline constexpr double kConvectionLinearizationFloor = 0.05;  // K

// Linearized radiant film 4*eps*sigma*Tref^3.
inline double radiant_h(double emissivity) {
    return 4.0 * emissivity * kStefanBoltzmann * kRadiantReferenceK * kRadiantReferenceK *
           kRadiantReferenceK;
}

enum class FaceGeometry { Floor, Ceiling, Vertical };

struct Face {
    int interzone = -1;
    int component = -1;
    char side = 'a';
    int zone = -1;        // adjacent zone, or -1 when it faces outdoors/ground
    int owner = -1;       // zone system holding the chain
    NodeRole role = NodeRole::SurfaceA;
    bool exterior = false;  // meets outdoor air
    bool ground = false;    // slab face pinned to deep ground (no node)
    bool glazing = false;
    double area = 0.0;
    double absorptance = 0.0;
    double emissivity = 0.0;
    double tilt = 0.0;     // outward normal, rad
    double azimuth = 0.0;  // outward normal, rad
    FaceGeometry geometry = FaceGeometry::Vertical;
    std::string id;
};

inline FaceGeometry face_geometry(double normal_tilt) {
    if (normal_tilt < kPi / 4.0) return FaceGeometry::Floor;     // faces up: below the zone
    if (normal_tilt > 3.0 * kPi / 4.0) return FaceGeometry::Ceiling;
    return FaceGeometry::Vertical;
}

inline SurfaceClass surface_class(FaceGeometry g, double t_surface, double t_air) {
    switch (g) {
        case FaceGeometry::Floor:
            return t_surface > t_air ? SurfaceClass::FloorHeatUp : SurfaceClass::FloorHeatDown;
        case FaceGeometry::Ceiling:
            return t_surface < t_air ? SurfaceClass::CeilingHeatUp
                                     : SurfaceClass::CeilingHeatDown;
        case FaceGeometry::Vertical:
            return SurfaceClass::Vertical;
    }
    return SurfaceClass::Vertical;
}

// Chain of an owned wall/glazing inside a zone system.
struct ChainRef {
    int interzone = -1;
    int component = -1;
    int owner = -1;
    WallNodes nodes;
    int base = -1;            // node index of SurfaceA in the owner system
    bool has_surface_b = true;  // false when the far face is pinned to ground
    int face_a = -1;          // registry indices, -1 when absent
    int face_b = -1;
    bool glazing = false;
};

struct StepInputs {
    int hour = 0;  // 0..23 clock hour for schedules
    double outdoor_temp = 20.0;     // °C
    double outdoor_humidity = 0.010;  // kg/kg
    double wind_speed = 0.0;
    double wind_direction = 0.0;  // deg from north
    double sky_temp_c = 14.0;
    AirflowSolution airflow;
    bool sizing_override = false;
};

struct ZoneStepOutput {
    double air_temperature = 0.0;
    double humidity = 0.0;
    double hvac_power = 0.0;  // W delivered, + heating
    bool hvac_clamped = false;
    double solar_beam_entering = 0.0;     // W through glazing, directional channel
    double solar_diffuse_entering = 0.0;  // W through glazing, hemispherical channel
    int convection_iterations = 0;        // first-visit resolutions of the state equation
    double solve_seconds = 0.0;           // assemble+solve time across all sweeps
};

struct CoupleStats {
    int sweeps = 0;
};

// Sources a frozen-coefficient refresh pulls from between sweeps.
enum class RefreshSource { ZoneAir, ZoneRadiant, FaceTemperature, HvacDeposit };

struct RefreshEntry {
    int row = 0;
    double factor = 0.0;
    RefreshSource source = RefreshSource::ZoneAir;
    int index = 0;  // zone or face, per source
};

class BuildingRuntime {
  public:
    BuildingRuntime(Building building, SolverOptions options)
        : building_(std::move(building)), options_(options) {
        build_registry();
        build_topology();
        reset_state();
    }

    const Building& building() const { return building_; }
    const std::vector<Face>& faces() const { return faces_; }
    ZoneSystem& zone_system(int z) { return systems_[z]; }
    const ZoneSystem& zone_system(int z) const { return systems_[z]; }
    int zone_count() const { return static_cast<int>(building_.zones.size()); }

    double zone_air_temperature(int z) const {
        return systems_[z].temperatures(systems_[z].air_node());
    }
    double zone_humidity(int z) const { return humidity_[z]; }

    void set_ground_temperature(double t_c) { ground_temp_ = t_c; }
    double ground_temperature() const { return ground_temp_; }

    void reset_state() {
        humidity_.resize(building_.zones.size());
        for (std::size_t z = 0; z < building_.zones.size(); ++z) {
            systems_[z].temperatures.setConstant(building_.zones[z].initial_temperature);
            systems_[z].temperatures_start = systems_[z].temperatures;
            humidity_[z] = building_.zones[z].initial_humidity;
        }
        face_deposit_sw_.assign(faces_.size(), 0.0);
        face_deposit_internal_.assign(faces_.size(), 0.0);
        face_deposit_hvac_.assign(faces_.size(), 0.0);
        face_exterior_sw_.assign(faces_.size(), 0.0);
        zone_internal_convective_.assign(building_.zones.size(), 0.0);
        zone_beam_entering_.assign(building_.zones.size(), 0.0);
        zone_diffuse_entering_.assign(building_.zones.size(), 0.0);
        hvac_delivered_.assign(building_.zones.size(), HvacOutput{});
        free_air_last_.assign(building_.zones.size(), 0.0);
    }

    // ------------------------------------------------------------------
    // Step staging.

    void begin_step(const StepInputs& in) {
        inputs_ = in;
        std::fill(face_deposit_sw_.begin(), face_deposit_sw_.end(), 0.0);
        std::fill(face_deposit_internal_.begin(), face_deposit_internal_.end(), 0.0);
        std::fill(face_deposit_hvac_.begin(), face_deposit_hvac_.end(), 0.0);
        std::fill(face_exterior_sw_.begin(), face_exterior_sw_.end(), 0.0);
        std::fill(zone_beam_entering_.begin(), zone_beam_entering_.end(), 0.0);
        std::fill(zone_diffuse_entering_.begin(), zone_diffuse_entering_.end(), 0.0);
        hvac_delivered_.assign(building_.zones.size(), HvacOutput{});

        for (std::size_t z = 0; z < building_.zones.size(); ++z) {
            const Zone& zone = building_.zones[z];
            const double g = zone.internal_gains.watts[in.hour % 24];
            zone_internal_convective_[z] = g * (1.0 - zone.internal_gains.radiative_fraction);
            deposit_on_opaque_faces(static_cast<int>(z),
                                    g * zone.internal_gains.radiative_fraction,
                                    face_deposit_internal_);
            free_air_last_[z] = systems_[z].temperatures_start(0);
        }
    }

    // Reconstructs the exterior irradiance on every outdoor face, transmits
    // through the glazings, and distributes the entering shortwave over each
    // zone's opaque enclosure. With the anisotropic model the circumsolar
    // share travels in the directional channel (beam transmittance, floor
    // deposition); the hemispherical channel keeps the isotropic residue plus
    // ground reflection.
    void apply_solar(const IrradianceSample& sample, const SunPosition& sun) {
        const bool willmott = building_.models.diffuse == DiffuseModel::Willmott;
        const double albedo = building_.site.albedo;

        for (std::size_t f = 0; f < faces_.size(); ++f) {
            const Face& face = faces_[f];
            if (!face.exterior || face.glazing) continue;
            const SurfaceOrientation surf{face.tilt, face.azimuth};
            const double beam = beam_on_tilted(sample, sun, surf);
            const double diffuse = willmott
                                       ? diffuse_willmott(sample, sun, surf).sky_diffuse
                                       : diffuse_isotropic(sample, surf);
            const double ground = ground_reflected(sample, albedo, surf);
            face_exterior_sw_[f] = face.absorptance * face.area * (beam + diffuse + ground);
        }

        for (const GlazingRef& gr : exterior_glazings_) {
            const Glazing& g = std::get<Glazing>(
                building_.interzones[gr.interzone].components[gr.component]);
            const SurfaceOrientation surf{gr.tilt, gr.azimuth};
            const double beam = beam_on_tilted(sample, sun, surf);
            const double ground = ground_reflected(sample, albedo, surf);
            double beam_channel = beam;
            double diffuse_channel;
            if (willmott) {
                const TiltedIrradiance t = diffuse_willmott(sample, sun, surf);
                const double iso_part = t.anisotropy_index * t.circumsolar_shape * 0.5 *
                                        (1.0 + std::cos(surf.tilt)) *
                                        sample.diffuse_horizontal;
                beam_channel += std::max(0.0, t.sky_diffuse - iso_part);
                diffuse_channel = iso_part + ground;
            } else {
                diffuse_channel = diffuse_isotropic(sample, surf) + ground;
            }
            const double cos_i = std::max(0.0, incidence_cosine(sun, surf));
            const TransmittedSolar ts =
                window_transmission(g, beam_channel, diffuse_channel, cos_i);
            zone_beam_entering_[gr.zone] += ts.beam;
            zone_diffuse_entering_[gr.zone] += ts.diffuse;
        }

        for (int z = 0; z < zone_count(); ++z) {
            distribute_entering_solar(z, zone_beam_entering_[z], zone_diffuse_entering_[z]);
        }
    }

    double zone_beam_entering(int z) const { return zone_beam_entering_[z]; }
    double zone_diffuse_entering(int z) const { return zone_diffuse_entering_[z]; }
    const HvacOutput& hvac_delivered(int z) const { return hvac_delivered_[z]; }

    // ------------------------------------------------------------------
    // Assembly of one zone's elementary matrices at the current iterate.
    // Every coupling whose far side lives outside this system is also logged
    // as a refresh entry so later connection sweeps can update the boundary
    // products without re-assembling or re-factorizing.

    void assemble_zone(int z, double dt) {
        (void)dt;
        ZoneSystem& sys = systems_[z];
        sys.clear_assembly();
        refresh_entries_[z].clear();
        const Zone& zone = building_.zones[z];
        const int air = sys.air_node();
        const int mrt = mrt_node_[z];

        sys.capacity(air) = zone.effective_air_capacity();

        // Owned chains: conduction plus both faces' boundary couplings.
        for (const ChainRef& ch : chains_) {
            if (ch.owner != z) continue;
            const int sa = ch.base;
            const int m1 = ch.base + 1;
            const int m2 = ch.base + 2;
            const double gq = 1.0 / ch.nodes.resistance_quarter;
            const double gh = 1.0 / ch.nodes.resistance_half;
            couple(sys.a_cond, sa, m1, gq);
            couple(sys.a_cond, m1, m2, gh);
            sys.capacity(m1) += ch.nodes.capacity_half;
            sys.capacity(m2) += ch.nodes.capacity_half;
            if (ch.has_surface_b) {
                couple(sys.a_cond, m2, ch.base + 3, gq);
            } else {
                // Far face pinned to the deep-ground temperature.
                sys.a_cond(m2, m2) -= gq;
                sys.b_connex(m2) += gq * ground_temp_;
            }

            for (int which = 0; which < 2; ++which) {
                const int fidx = which == 0 ? ch.face_a : ch.face_b;
                if (fidx < 0) continue;
                const Face& face = faces_[fidx];
                const int node = node_of_face(face);
                if (face.exterior) {
                    assemble_exterior_face(sys, face, node, fidx);
                } else if (face.zone == z) {
                    assemble_owned_interior_face(sys, zone, face, node, air, mrt, fidx);
                } else if (face.zone >= 0) {
                    assemble_far_interior_face(sys, face, node);
                }
            }
        }

        // Neighbor-owned faces bounding this zone: air-side film and radiant
        // star pull their latest temperatures as knowns.
        for (const int fidx : adjacent_faces_[z]) {
            const Face& face = faces_[fidx];
            if (face.owner == z) continue;
            const double t_face = face_temperature(face);
            const double t_air = sys.temperatures(air);
            const double h = interior_h_linearized(zone.convection,
                                                   surface_class(face.geometry, t_face, t_air),
                                                   t_face - t_air);
            sys.a_connex(air, air) -= h * face.area;
            sys.b_connex(air) += h * face.area * t_face;
            refresh_entries_[z].push_back(
                {air, h * face.area, RefreshSource::FaceTemperature, fidx});
            if (mrt >= 0) {
                const double hr = radiant_h(face.emissivity);
                sys.a_connex(mrt, mrt) -= hr * face.area;
                sys.b_connex(mrt) += hr * face.area * t_face;
                refresh_entries_[z].push_back(
                    {mrt, hr * face.area, RefreshSource::FaceTemperature, fidx});
            }
        }

        // Advection: every inflow damps the air node and carries its
        // upstream temperature.
        for (const DirectedFlow& f : inputs_.airflow.flows) {
            if (f.to != z) continue;
            const double g = f.mass_flow * kAirSpecificHeat;
            const double t_up = f.from >= zone_count() ? inputs_.outdoor_temp
                                                       : zone_air_temperature(f.from);
            sys.a_airflow(air, air) -= g;
            sys.b_airflow(air) += g * t_up;
            if (f.from < zone_count())
                refresh_entries_[z].push_back({air, g, RefreshSource::ZoneAir, f.from});
        }

        sys.b_int_load(air) += zone_internal_convective_[z];

        // Deposited radiation lands on whichever system owns each face.
        for (const ChainRef& ch : chains_) {
            if (ch.owner != z) continue;
            for (const int fidx : {ch.face_a, ch.face_b}) {
                if (fidx < 0) continue;
                const Face& face = faces_[fidx];
                if (face.exterior) continue;
                const int node = node_of_face(face);
                sys.b_swi(node) += face_deposit_sw_[fidx];
                sys.b_int_load(node) += face_deposit_internal_[fidx];
                sys.b_hvac(node) += face_deposit_hvac_[fidx];
                refresh_entries_[z].push_back({node, 1.0, RefreshSource::HvacDeposit, fidx});
            }
        }
    }

    // ------------------------------------------------------------------
    // One zone visit: the model-selective iteration of the state equation.
    // Nonlinear convection re-linearizes the films at the current iterate and
    // re-solves until the free-float air temperature settles to the
    // criterion; thermostat power is recomputed inside every pass from the
    // same factorization. Returns the number of resolutions.
    int iterate_zone(int z, double dt) {
        ZoneSystem& sys = systems_[z];
        const Zone& zone = building_.zones[z];
        const bool nonlinear = zone.convection.kind == ConvectionKind::Nonlinear;
        const int cap = nonlinear ? options_.convection_max_iterations : 1;
        const int air = sys.air_node();

        int iterations = 0;
        double prev_free_air = free_air_last_[z];
        influence_valid_[z] = false;
        std::string change_history;
        for (int k = 0; k < cap; ++k) {
            assemble_zone(z, dt);
            const Eigen::MatrixXd m =
                Eigen::MatrixXd((sys.capacity / dt).asDiagonal()) - sys.system_matrix();
            detail::check_solvable(sys, m);
            const Eigen::VectorXd rhs =
                (sys.capacity / dt).cwiseProduct(sys.temperatures_start) + sys.system_vector();
            lu_cache_[z].compute(m);
            Eigen::VectorXd t_free = lu_cache_[z].solve(rhs);
            if (!t_free.allFinite())
                throw ConvergenceError("zone '" + zone.name + "': singular thermal system");
            ++iterations;

            const double free_air = t_free(air);
            apply_thermostat(z, t_free, free_air);
            sys.temperatures = t_free;

            const double change = std::abs(free_air - prev_free_air);
            prev_free_air = free_air;
            free_air_last_[z] = free_air;
            change_history += (change_history.empty() ? "" : " ") + std::to_string(change);
            if (!nonlinear || change < options_.convection_criterion) break;
            if (k + 1 == cap) {
                throw ConvergenceError("zone '" + zone.name +
                                       "': nonlinear convection did not converge in " +
                                       std::to_string(cap) +
                                       " iterations; air changes per pass (K): " +
                                       change_history);
            }
        }

        // Freeze this linearization for the remaining connection sweeps: the
        // matrix is cached factorized, and the base rhs drops the boundary
        // products the refresh entries will re-add from fresher values.
        Eigen::VectorXd base =
            (sys.capacity / dt).cwiseProduct(sys.temperatures_start) + sys.system_vector();
        base(air) -= hvac_delivered_[z].convective;  // re-decided every visit
        for (const RefreshEntry& e : refresh_entries_[z])
            base(e.row) -= e.factor * refresh_value(e);
        rhs_base_[z] = std::move(base);
        return iterations;
    }

    // Cheap revisit for connection sweeps after the first: boundary products
    // are refreshed against the cached factorization; films, advective
    // coefficients, and the nonlinear remainder stay frozen.
    void refresh_zone(int z) {
        ZoneSystem& sys = systems_[z];
        Eigen::VectorXd rhs = rhs_base_[z];
        for (const RefreshEntry& e : refresh_entries_[z])
            rhs(e.row) += e.factor * refresh_value(e);
        Eigen::VectorXd t_free = lu_cache_[z].solve(rhs);
        const double free_air = t_free(sys.air_node());
        apply_thermostat(z, t_free, free_air);
        sys.temperatures = t_free;
        free_air_last_[z] = free_air;
    }

    // ------------------------------------------------------------------
    // Connection process: Gauss-Seidel sweeps over the zones in declaration
    // order until the largest air-temperature change between sweeps is below
    // the coupling criterion. The first sweep runs each zone's full
    // model-selective iteration; later sweeps are frozen-coefficient
    // refreshes. Buildings with no inter-zone exchange converge in a single
    // sweep.
    CoupleStats couple_zones(double dt, std::vector<ZoneStepOutput>& outputs) {
        const int n = zone_count();
        std::vector<double> air_prev(n);
        CoupleStats stats;

        for (int sweep = 1; sweep <= options_.coupling_max_sweeps; ++sweep) {
            for (int z = 0; z < n; ++z) air_prev[z] = zone_air_temperature(z);
            for (int z = 0; z < n; ++z) {
                const auto t0 = std::chrono::steady_clock::now();
                if (sweep == 1) {
                    outputs[z].convection_iterations = iterate_zone(z, dt);
                } else {
                    refresh_zone(z);
                }
                const auto t1 = std::chrono::steady_clock::now();
                outputs[z].solve_seconds +=
                    std::chrono::duration<double>(t1 - t0).count();
            }
            stats.sweeps = sweep;
            if (!zones_coupled_) break;
            if (sweep >= 2) {
                double change = 0.0;
                for (int z = 0; z < n; ++z)
                    change = std::max(change, std::abs(zone_air_temperature(z) - air_prev[z]));
                if (change < options_.coupling_criterion) break;
            }
            if (sweep == options_.coupling_max_sweeps)
                throw ConvergenceError("zone coupling did not converge in " +
                                       std::to_string(sweep) + " sweeps");
        }
        return stats;
    }

    void set_airflow(const AirflowSolution& sol) { inputs_.airflow = sol; }
    const StepInputs& step_inputs() const { return inputs_; }

    // Moisture balance and output snapshot once the thermal state converged.
    void finalize_step(double dt, std::vector<ZoneStepOutput>& outputs) {
        std::vector<double> gains(zone_count(), 0.0);
        std::vector<double> latent(zone_count(), 0.0);
        for (int z = 0; z < zone_count(); ++z) {
            gains[z] = building_.zones[z].internal_gains.moisture[inputs_.hour % 24];
            if (hvac_of_zone_[z] && hvac_delivered_[z].total() < 0.0)
                latent[z] = hvac_of_zone_[z]->latent_capacity;
        }
        humidity_ = step_humidity_coupled(building_, humidity_, inputs_.airflow, gains, latent,
                                          inputs_.outdoor_humidity, dt);

        for (int z = 0; z < zone_count(); ++z) {
            outputs[z].air_temperature = zone_air_temperature(z);
            outputs[z].humidity = humidity_[z];
            outputs[z].hvac_power = hvac_delivered_[z].total();
            outputs[z].hvac_clamped = hvac_delivered_[z].clamped;
            outputs[z].solar_beam_entering = zone_beam_entering_[z];
            outputs[z].solar_diffuse_entering = zone_diffuse_entering_[z];
        }
    }

    // Full timestep given staged inputs and solar.
    CoupleStats run_step(double dt, std::vector<ZoneStepOutput>& outputs) {
        outputs.assign(zone_count(), ZoneStepOutput{});
        CoupleStats stats = couple_zones(dt, outputs);
        finalize_step(dt, outputs);
        return stats;
    }

    void commit_step() {
        for (ZoneSystem& sys : systems_) sys.temperatures_start = sys.temperatures;
    }

    // Temperature of a face as last solved by its owner system.
    double face_temperature(const Face& face) const {
        const ZoneSystem& owner = systems_[face.owner];
        return owner.temperatures(node_of_face(face));
    }

    const std::optional<HvacSystem>& zone_hvac(int z) const { return hvac_of_zone_[z]; }
    bool zones_coupled() const { return zones_coupled_; }

  private:
    struct GlazingRef {
        int interzone = -1;
        int component = -1;
        int zone = -1;  // receiving zone
        double tilt = 0.0;
        double azimuth = 0.0;
    };

    static void couple(Eigen::MatrixXd& a, int i, int j, double g) {
        a(i, i) -= g;
        a(j, j) -= g;
        a(i, j) += g;
        a(j, i) += g;
    }

    int node_of_face(const Face& face) const {
        for (const ChainRef& ch : chains_) {
            if (ch.interzone == face.interzone && ch.component == face.component) {
                return face.role == NodeRole::SurfaceA ? ch.base : ch.base + 3;
            }
        }
        throw ValidationError("internal: face without chain");
    }

    // Secant film coefficient with the temperature difference floored so the
    // nonlinear law cannot detach a surface at dT = 0.
    double interior_h_linearized(const ConvectionModel& model, SurfaceClass cls,
                                 double delta_t) const {
        if (model.kind != ConvectionKind::Nonlinear) return interior_h(model, cls, delta_t);
        return interior_h(model, cls,
                          std::max(std::abs(delta_t), kConvectionLinearizationFloor));
    }

    void assemble_exterior_face(ZoneSystem& sys, const Face& face, int node, int fidx) {
        const double he = exterior_h(building_.models.exterior_convection, inputs_.wind_speed);
        sys.a_cve(node, node) -= he * face.area;
        sys.b_connex(node) += he * face.area * inputs_.outdoor_temp;

        const double hr = radiant_h(face.emissivity);
        const double f_sky = 0.5 * (1.0 + std::cos(face.tilt));
        sys.a_cve(node, node) -= hr * f_sky * face.area;
        sys.b_lwe(node) += hr * f_sky * face.area * inputs_.sky_temp_c;
        sys.a_cve(node, node) -= hr * (1.0 - f_sky) * face.area;
        sys.b_connex(node) += hr * (1.0 - f_sky) * face.area * inputs_.outdoor_temp;

        sys.b_swe(node) += face_exterior_sw_[fidx];
    }

    // Film + radiant star for a face the zone both owns and touches. The
    // nonlinear model uses a Newton linearization: tangent conductance
    // (1+p)·h* in A_cvi_lin and the affine remainder -p·h*·dT* in B_cvi_nlin.
    void assemble_owned_interior_face(ZoneSystem& sys, const Zone& zone, const Face& face,
                                      int node, int air, int mrt, int fidx) {
        (void)fidx;
        const double t_face = sys.temperatures(node);
        const double t_air = sys.temperatures(air);
        const double dt_star = t_face - t_air;
        if (zone.convection.kind == ConvectionKind::Nonlinear) {
            const SurfaceClass cls = surface_class(face.geometry, t_face, t_air);
            double p = 0.0;
            switch (cls) {
                case SurfaceClass::FloorHeatUp:
                case SurfaceClass::CeilingHeatUp:
                    p = zone.convection.nl_unstable.p;
                    break;
                case SurfaceClass::FloorHeatDown:
                case SurfaceClass::CeilingHeatDown:
                    p = zone.convection.nl_stable.p;
                    break;
                case SurfaceClass::Vertical:
                    p = zone.convection.nl_vertical.p;
                    break;
            }
            const double h_star = interior_h_linearized(zone.convection, cls, dt_star);
            const double tangent = (1.0 + p) * h_star * face.area;
            couple(sys.a_cvi_lin, air, node, tangent);
            const double remainder = -p * h_star * face.area * dt_star;
            sys.b_cvi_nlin(air) += remainder;
            sys.b_cvi_nlin(node) -= remainder;
        } else {
            const double h = interior_h(zone.convection,
                                        surface_class(face.geometry, t_face, t_air), dt_star);
            couple(sys.a_cvi_lin, air, node, h * face.area);
        }
        if (mrt >= 0) {
            couple(sys.a_lwi, mrt, node, radiant_h(face.emissivity) * face.area);
        }
    }

    // Owned chain face bounding a different zone: its film and radiant
    // exchange use that zone's latest air and mean-radiant temperatures.
    void assemble_far_interior_face(ZoneSystem& sys, const Face& face, int node) {
        const int other = face.zone;
        const double t_air_other = zone_air_temperature(other);
        const double t_face = sys.temperatures(node);
        const double h = interior_h_linearized(
            building_.zones[other].convection,
            surface_class(face.geometry, t_face, t_air_other), t_face - t_air_other);
        sys.a_connex(node, node) -= h * face.area;
        sys.b_connex(node) += h * face.area * t_air_other;
        refresh_entries_[sys.zone].push_back(
            {node, h * face.area, RefreshSource::ZoneAir, other});

        const double hr = radiant_h(face.emissivity);
        const double t_rad_other = mrt_node_[other] >= 0
                                       ? systems_[other].temperatures(mrt_node_[other])
                                       : t_air_other;
        sys.a_connex(node, node) -= hr * face.area;
        sys.b_connex(node) += hr * face.area * t_rad_other;
        refresh_entries_[sys.zone].push_back(
            {node, hr * face.area, RefreshSource::ZoneRadiant, other});
    }

    // Thermostat action against the current factorization: required power
    // from the air-row influence vector, clamped and split by the control,
    // folded back into the solution.
    void apply_thermostat(int z, Eigen::VectorXd& t_free, double free_air) {
        ZoneSystem& sys = systems_[z];
        HvacOutput delivered;
        if (hvac_of_zone_[z]) {
            const HvacSystem& hv = *hvac_of_zone_[z];
            const auto target = control_target(hv, free_air, inputs_.hour);
            if (target) {
                if (!influence_valid_[z]) {
                    Eigen::VectorXd unit = Eigen::VectorXd::Zero(sys.size());
                    unit(sys.air_node()) = 1.0;
                    influence_cache_[z] = lu_cache_[z].solve(unit);
                    influence_valid_[z] = true;
                }
                const double p_required =
                    (*target - free_air) / influence_cache_[z](sys.air_node());
                delivered = apply_control(hv, p_required, inputs_.hour, free_air,
                                          inputs_.sizing_override);
                t_free += delivered.convective * influence_cache_[z];
            }
            deposit_on_opaque_faces(z, delivered.radiative, face_deposit_hvac_, true);
        }
        // air-row share of B_hvac is exactly the delivered convective power
        sys.b_hvac(sys.air_node()) = delivered.convective;
        hvac_delivered_[z] = delivered;
    }

    double refresh_value(const RefreshEntry& e) const {
        switch (e.source) {
            case RefreshSource::ZoneAir:
                return zone_air_temperature(e.index);
            case RefreshSource::ZoneRadiant:
                return mrt_node_[e.index] >= 0
                           ? systems_[e.index].temperatures(mrt_node_[e.index])
                           : zone_air_temperature(e.index);
            case RefreshSource::FaceTemperature:
                return face_temperature(faces_[e.index]);
            case RefreshSource::HvacDeposit:
                return face_deposit_hvac_[e.index];
        }
        return 0.0;
    }

    // Shares a radiant power over the zone's opaque enclosure faces by area.
    void deposit_on_opaque_faces(int z, double watts, std::vector<double>& store,
                                 bool replace = false) {
        double total_area = 0.0;
        for (const int f : adjacent_faces_[z])
            if (!faces_[f].glazing) total_area += faces_[f].area;
        for (const int f : adjacent_faces_[z]) {
            if (faces_[f].glazing) continue;
            const double share = total_area > 0.0 ? faces_[f].area / total_area : 0.0;
            if (replace)
                store[f] = watts * share;
            else
                store[f] += watts * share;
        }
    }

    void distribute_entering_solar(int z, double beam, double diffuse) {
        if (beam + diffuse <= 0.0) return;
        std::vector<EnclosureSurface> surfaces;
        std::vector<int> indices;
        int floor_local = -1;
        double floor_area = 0.0;
        for (const int f : adjacent_faces_[z]) {
            const Face& face = faces_[f];
            if (face.glazing) continue;
            surfaces.push_back({face.area, face.absorptance});
            indices.push_back(f);
            if (face.geometry == FaceGeometry::Floor && face.area > floor_area) {
                floor_area = face.area;
                floor_local = static_cast<int>(surfaces.size()) - 1;
            }
        }
        if (surfaces.empty()) return;
        double beam_part = beam;
        double diffuse_part = diffuse;
        if (floor_local < 0) {  // no floor face: beam joins the diffuse pool
            diffuse_part += beam_part;
            beam_part = 0.0;
            floor_local = 0;
        }
        const std::vector<double> absorbed = distribute_solar_gains(
            surfaces, beam_part, diffuse_part, static_cast<std::size_t>(floor_local));
        for (std::size_t i = 0; i < indices.size(); ++i)
            face_deposit_sw_[indices[i]] += absorbed[i];
    }

    // ------------------------------------------------------------------

    void build_registry() {
        const int n = zone_count();
        adjacent_faces_.assign(n, {});
        hvac_of_zone_.assign(n, std::nullopt);
        zones_coupled_ = false;

        for (std::size_t i = 0; i < building_.interzones.size(); ++i) {
            const Interzone& iz = building_.interzones[i];
            const int za = iz.side_a == kExterior ? -1 : building_.zone_index(iz.side_a);
            const int zb = iz.side_b == kExterior ? -1 : building_.zone_index(iz.side_b);
            if (za >= 0 && zb >= 0) zones_coupled_ = true;
            const int owner = za >= 0 ? za : zb;

            for (std::size_t c = 0; c < iz.components.size(); ++c) {
                const Component& comp = iz.components[c];
                if (const auto* hv = std::get_if<HvacSystem>(&comp)) {
                    if (owner >= 0 && !hvac_of_zone_[owner]) hvac_of_zone_[owner] = *hv;
                    // Radiative delivery reaches the faces one visit late, so
                    // it needs the sweep refresh even in a lone zone.
                    if (hv->radiative_fraction > 0.0) zones_coupled_ = true;
                    continue;
                }
                if (std::holds_alternative<Opening>(comp)) {
                    if (za >= 0 && zb >= 0) zones_coupled_ = true;
                    continue;
                }
                if (std::holds_alternative<FixedFlow>(comp)) {
                    if (za >= 0 && zb >= 0) zones_coupled_ = true;
                    continue;
                }

                double tilt = 0.0, azimuth = 0.0, area = 0.0;
                double abs_a = 0.0, abs_b = 0.0, emi_a = 0.9, emi_b = 0.9;
                bool is_glazing = false, ground = false;
                bool flip_sides = false;
                std::string name;
                if (const auto* w = std::get_if<Wall>(&comp)) {
                    tilt = w->tilt;
                    azimuth = w->azimuth;
                    area = w->area;
                    abs_a = w->absorptance_a;
                    abs_b = w->absorptance_b;
                    emi_a = w->emissivity_a;
                    emi_b = w->emissivity_b;
                    ground = w->ground_contact;
                    // Chains pin the ground at their far (B) end; mirror the
                    // palindromic chain when the file put the ground on side_a.
                    flip_sides = ground && iz.side_a == kExterior;
                    name = w->name;
                } else if (const auto* g = std::get_if<Glazing>(&comp)) {
                    tilt = g->tilt;
                    azimuth = g->azimuth;
                    area = g->area;
                    is_glazing = true;
                    name = g->name;
                } else {
                    continue;
                }

                ChainRef ch;
                ch.interzone = static_cast<int>(i);
                ch.component = static_cast<int>(c);
                ch.owner = owner;
                ch.glazing = is_glazing;
                ch.nodes = is_glazing
                               ? discretize_glazing(std::get<Glazing>(comp))
                               : discretize_wall(std::get<Wall>(comp));

                // side_b face carries the component's tilt/azimuth outward
                // normal; side_a mirrors it.
                double tilt_b = tilt;
                double tilt_a = kPi - tilt;
                double az_b = azimuth;
                double az_a = azimuth + kPi;
                if (az_a >= 2.0 * kPi) az_a -= 2.0 * kPi;

                int za_eff = za, zb_eff = zb;
                if (flip_sides) {
                    std::swap(za_eff, zb_eff);
                    std::swap(tilt_a, tilt_b);
                    std::swap(az_a, az_b);
                    std::swap(abs_a, abs_b);
                    std::swap(emi_a, emi_b);
                }

                auto add_face = [&](char side, int zone_idx, double ftilt, double faz,
                                    double absorp, double emis, NodeRole role,
                                    bool is_ground) -> int {
                    Face face;
                    face.interzone = static_cast<int>(i);
                    face.component = static_cast<int>(c);
                    face.side = side;
                    face.zone = zone_idx;
                    face.owner = owner;
                    face.role = role;
                    face.exterior = zone_idx < 0 && !is_ground;
                    face.ground = is_ground;
                    face.glazing = is_glazing;
                    face.area = area;
                    face.absorptance = is_glazing ? 0.0 : absorp;
                    face.emissivity = is_glazing ? 0.9 : emis;
                    face.tilt = ftilt;
                    face.azimuth = faz;
                    face.geometry = face_geometry(ftilt);
                    face.id = name.empty() ? "iz" + std::to_string(i) + "_c" + std::to_string(c) +
                                                 "_" + side
                                           : name + std::string("_") + side;
                    faces_.push_back(face);
                    const int idx = static_cast<int>(faces_.size()) - 1;
                    if (zone_idx >= 0) adjacent_faces_[zone_idx].push_back(idx);
                    return idx;
                };

                ch.face_a = add_face('a', za_eff, tilt_a, az_a, abs_a, emi_a,
                                     NodeRole::SurfaceA, false);
                if (ground) {
                    ch.face_b = -1;
                    ch.has_surface_b = false;
                } else {
                    ch.face_b = add_face('b', zb_eff, tilt_b, az_b, abs_b, emi_b,
                                         NodeRole::SurfaceB, false);
                }

                chains_.push_back(ch);

                if (is_glazing) {
                    if (za_eff >= 0 && zb_eff < 0)
                        exterior_glazings_.push_back(
                            {static_cast<int>(i), static_cast<int>(c), za_eff, tilt_b, az_b});
                    else if (zb_eff >= 0 && za_eff < 0)
                        exterior_glazings_.push_back(
                            {static_cast<int>(i), static_cast<int>(c), zb_eff, tilt_a, az_a});
                }
            }
        }
    }

    void build_topology() {
        const int n = zone_count();
        systems_.resize(n);
        mrt_node_.assign(n, -1);

        for (int z = 0; z < n; ++z) {
            ZoneSystem& sys = systems_[z];
            sys.zone = z;
            sys.node_index.clear();
            sys.node_index.push_back({-1, -1, NodeRole::Air});
            // the radiant star needs at least one emitting face to be solvable
            double radiant_coupling = 0.0;
            for (const int f : adjacent_faces_[z])
                radiant_coupling += radiant_h(faces_[f].emissivity) * faces_[f].area;
            if (radiant_coupling > 0.0) {
                mrt_node_[z] = 1;
                sys.node_index.push_back({-1, -1, NodeRole::MeanRadiant});
            }
        }
        for (ChainRef& ch : chains_) {
            if (ch.owner < 0)
                throw ValidationError("component between two exterior sides is not allowed");
            ZoneSystem& sys = systems_[ch.owner];
            ch.base = static_cast<int>(sys.node_index.size());
            sys.node_index.push_back({ch.interzone, ch.component, NodeRole::SurfaceA});
            sys.node_index.push_back({ch.interzone, ch.component, NodeRole::Mass1});
            sys.node_index.push_back({ch.interzone, ch.component, NodeRole::Mass2});
            if (ch.has_surface_b)
                sys.node_index.push_back({ch.interzone, ch.component, NodeRole::SurfaceB});
        }
        for (int z = 0; z < n; ++z) {
            systems_[z].allocate(static_cast<int>(systems_[z].node_index.size()));
        }
        lu_cache_.resize(n);
        influence_cache_.resize(n);
        influence_valid_.assign(n, false);
        rhs_base_.resize(n);
        refresh_entries_.assign(n, {});
    }

    Building building_;
    SolverOptions options_;

    std::vector<Face> faces_;
    std::vector<ChainRef> chains_;
    std::vector<std::vector<int>> adjacent_faces_;
    std::vector<GlazingRef> exterior_glazings_;
    std::vector<std::optional<HvacSystem>> hvac_of_zone_;
    std::vector<ZoneSystem> systems_;
    std::vector<int> mrt_node_;
    bool zones_coupled_ = false;

    // frozen-coefficient sweep state
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_cache_;
    std::vector<Eigen::VectorXd> influence_cache_;
    std::vector<bool> influence_valid_;
    std::vector<Eigen::VectorXd> rhs_base_;
    std::vector<std::vector<RefreshEntry>> refresh_entries_;

    StepInputs inputs_;
    double ground_temp_ = 15.0;
    std::vector<double> humidity_;
    std::vector<double> face_deposit_sw_;
    std::vector<double> face_deposit_internal_;
    std::vector<double> face_deposit_hvac_;
    std::vector<double> face_exterior_sw_;
    std::vector<double> zone_internal_convective_;
    std::vector<double> zone_beam_entering_;
    std::vector<double> zone_diffuse_entering_;
    std::vector<HvacOutput> hvac_delivered_;
    std::vector<double> free_air_last_;
};

}  // namespace zonal
