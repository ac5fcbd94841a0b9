// Wall discretization, glazing transmission, and interior shortwave
// distribution — the per-component building blocks of the zone state
// equation.
#pragma once

#include <cmath>
#include <vector>

#include "zonal/building.hpp"
#include "zonal/errors.hpp"

namespace zonal {

// Two-capacitor, three-resistor lumping of a wall's conduction:
//   surface A --R/4-- mass1 --R/2-- mass2 --R/4-- surface B
// with half the total capacity at each mass node. Surface nodes are massless.
struct WallNodes {
    double resistance_quarter = 0.0;  // K/W, outer links of the chain
    double resistance_half = 0.0;     // K/W, central link
    double capacity_half = 0.0;       // J/K at each mass node

    double total_resistance() const {
        return 2.0 * resistance_quarter + resistance_half;
    }
    double total_capacity() const { return 2.0 * capacity_half; }
};

inline WallNodes discretize_wall(const Wall& wall) {
    const double r_total = wall.layer.thickness / (wall.layer.conductivity * wall.area);
    const double c_total =
        wall.layer.density * wall.layer.specific_heat * wall.layer.thickness * wall.area;
    WallNodes n;
    n.resistance_quarter = r_total / 4.0;
    n.resistance_half = r_total / 2.0;
    n.capacity_half = c_total / 2.0;
    return n;
}

// Glazing runs through the same chain with zero mass. The stated U is
// air-to-air including nominal still-air films (R_si = 0.13, R_se = 0.04
// m²K/W); the films are modeled explicitly by the selected convection models,
// so only the pane resistance enters the chain.
inline WallNodes discretize_glazing(const Glazing& g) {
    const double r_pane_areal = std::max(1.0 / g.u_value - 0.13 - 0.04, 1e-4);
    const double r_total = r_pane_areal / g.area;
    WallNodes n;
    n.resistance_quarter = r_total / 4.0;
    n.resistance_half = r_total / 2.0;
    n.capacity_half = 0.0;
    return n;
}

struct TransmittedSolar {
    double beam = 0.0;     // W
    double diffuse = 0.0;  // W
};

// Beam transmittance rolls off with incidence as tau_n*(1-(1-cos i)^4);
// diffuse transmittance is incidence-independent.
inline TransmittedSolar window_transmission(const Glazing& g, double beam_incident,
                                            double diffuse_incident, double cos_i) {
    const double ci = std::clamp(cos_i, 0.0, 1.0);
    const double tau_beam =
        g.beam_transmittance * (1.0 - std::pow(1.0 - ci, 4.0));
    TransmittedSolar t;
    t.beam = g.area * tau_beam * beam_incident;
    t.diffuse = g.area * g.diffuse_transmittance * diffuse_incident;
    return t;
}

struct EnclosureSurface {
    double area = 1.0;
    double absorptance = 0.6;
};

// Splits the shortwave gain entering a zone over its enclosure surfaces: the
// beam lands on the floor, the diffuse part is shared by area fraction, and
// the unabsorbed remainder is re-distributed by area fraction until the
// circulating residual falls under 0.1 W. Returns absorbed W per surface.
inline std::vector<double> distribute_solar_gains(const std::vector<EnclosureSurface>& surfaces,
                                                  double beam_entering, double diffuse_entering,
                                                  std::size_t floor_index) {
    if (surfaces.empty()) throw ValidationError("solar distribution needs at least one surface");
    if (floor_index >= surfaces.size())
        throw ValidationError("solar distribution: floor index out of range");

    double total_area = 0.0;
    double mean_absorptance = 0.0;
    for (const auto& s : surfaces) {
        total_area += s.area;
        mean_absorptance += s.area * s.absorptance;
    }
    mean_absorptance /= total_area;
    const double entering = beam_entering + diffuse_entering;
    if (entering > 0.0 && mean_absorptance <= 0.0)
        throw ConvergenceError("solar distribution cannot converge: all absorptances are zero");

    std::vector<double> absorbed(surfaces.size(), 0.0);

    // First bounce: beam to the floor only.
    absorbed[floor_index] += surfaces[floor_index].absorptance * beam_entering;
    double pool = (1.0 - surfaces[floor_index].absorptance) * beam_entering + diffuse_entering;

    // Subsequent bounces are area-proportional over the whole enclosure.
    while (pool >= 0.1) {
        double reflected = 0.0;
        for (std::size_t i = 0; i < surfaces.size(); ++i) {
            const double share = surfaces[i].area / total_area * pool;
            absorbed[i] += surfaces[i].absorptance * share;
            reflected += (1.0 - surfaces[i].absorptance) * share;
        }
        pool = reflected;
    }
    return absorbed;
}

}  // namespace zonal
