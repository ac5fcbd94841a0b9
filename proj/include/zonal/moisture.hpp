// Well-mixed specific-humidity balance per zone, driven by the converged
// airflow exchange, scheduled moisture gains, and HVAC latent removal.
#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "zonal/airflow.hpp"
#include "zonal/building.hpp"

namespace zonal {

inline constexpr double kHumidityCeiling = 0.05;  // kg/kg, clamp with diagnostic
inline constexpr double kHumidityFloor = 0.001;   // latent removal never dries below this

struct Inflow {
    double mass_flow = 0.0;    // kg/s
    double w_upstream = 0.0;   // kg/kg at the source
};

// Implicit single-zone update of rho*V*dw/dt = sum m*(w_up - w) + gains - latent.
// Upstream humidities are taken as known; the multi-zone engine path solves
// all zones simultaneously instead (see step_humidity_coupled).
inline double step_humidity(const Zone& zone, double w_current,
                            const std::vector<Inflow>& inflows, double gains_kg_s,
                            double latent_removal_kg_s, double dt,
                            Diagnostics* diags = nullptr) {
    if (!(dt > 0.0)) throw ValidationError("step_humidity: dt must be > 0");
    const double mass = kAirDensity * zone.volume;
    double denom = mass / dt;
    double numer = mass / dt * w_current + gains_kg_s - latent_removal_kg_s;
    for (const Inflow& f : inflows) {
        denom += f.mass_flow;
        numer += f.mass_flow * f.w_upstream;
    }
    double w = numer / denom;
    const double w_floor = latent_removal_kg_s > 0.0 ? kHumidityFloor : 0.0;
    if (w < w_floor) w = w_floor;
    if (w > kHumidityCeiling) {
        if (diags) diags->push_back({"zone " + zone.name, "humidity clamped to ceiling"});
        w = kHumidityCeiling;
    }
    if (w < 0.0) w = 0.0;
    return w;
}

// Simultaneous implicit update of every zone, written in the flux-conservative
// form rho*V*dw/dt = sum_in m*w_up - w*sum_out m + gains - latent so each link
// flux m*w_upwind is counted exactly once and total moisture telescopes.
inline std::vector<double> step_humidity_coupled(const Building& b,
                                                 const std::vector<double>& w_old,
                                                 const AirflowSolution& airflow,
                                                 const std::vector<double>& gains_kg_s,
                                                 const std::vector<double>& latent_kg_s,
                                                 double w_exterior, double dt,
                                                 Diagnostics* diags = nullptr) {
    const int n = static_cast<int>(b.zones.size());
    if (!(dt > 0.0)) throw ValidationError("step_humidity_coupled: dt must be > 0");

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs(n);
    for (int z = 0; z < n; ++z) {
        const double mass = kAirDensity * b.zones[z].volume;
        m(z, z) = mass / dt;
        rhs(z) = mass / dt * w_old[z] + gains_kg_s[z] - latent_kg_s[z];
    }
    for (const DirectedFlow& f : airflow.flows) {
        if (f.from < n) m(f.from, f.from) += f.mass_flow;  // leaves 'from' at its new w
        if (f.to < n) {
            if (f.from < n)
                m(f.to, f.from) -= f.mass_flow;
            else
                rhs(f.to) += f.mass_flow * w_exterior;
        }
    }

    const Eigen::VectorXd w = Eigen::PartialPivLU<Eigen::MatrixXd>(m).solve(rhs);
    std::vector<double> out(n);
    for (int z = 0; z < n; ++z) {
        double v = w(z);
        const double w_floor = latent_kg_s[z] > 0.0 ? kHumidityFloor : 0.0;
        if (v < w_floor) v = w_floor;
        if (v > kHumidityCeiling) {
            if (diags)
                diags->push_back({"zone " + b.zones[z].name, "humidity clamped to ceiling"});
            v = kHumidityCeiling;
        }
        if (v < 0.0) v = 0.0;
        out[z] = v;
    }
    return out;
}

}  // namespace zonal
