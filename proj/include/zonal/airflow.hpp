// Airflow models: prescribed inter-zone rates, and the pressure-node network
// with nonlinear link laws solved by Newton iteration on per-zone air mass
// conservation. Large vertical openings are discretized into horizontal
// strips so buoyancy can drive simultaneous two-way exchange.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zonal/building.hpp"
#include "zonal/errors.hpp"

namespace zonal {

inline constexpr double kFlowLinearization = 0.01;  // Pa; secant region half-width
inline constexpr int kLargeOpeningStrips = 10;

inline double air_density_of(double temp_c) { return 353.0 / (temp_c + 273.15); }

// Façade pressure from wind: P = 0.5 * rho * Cp(theta) * V², with Cp falling
// linearly from 0.75 windward to -0.30 leeward.
inline double wind_pressure(double wind_speed, double wind_dir_deg, double facade_azimuth_deg) {
    if (wind_speed <= 0.0) return 0.0;
    double theta = std::fmod(std::abs(wind_dir_deg - facade_azimuth_deg), 360.0);
    if (theta > 180.0) theta = 360.0 - theta;
    const double cp = 0.75 - 1.05 * (theta / 180.0);
    return 0.5 * kAirDensity * cp * wind_speed * wind_speed;
}

struct AirflowLink {
    int from = 0;  // node index; zones 0..n-1, exterior = n
    int to = 0;
    double coefficient = 0.01;  // C_q, kg/(s·Pa^n)
    double exponent = 0.65;
    std::optional<LargeOpeningGeometry> large_opening;
    double from_height = 0.0;  // m above the from-side reference
    double to_height = 0.0;
    double facade_azimuth_deg = 0.0;  // wind incidence for an exterior side
    bool has_facade = false;
    std::string id;
};

struct AirflowNetwork {
    int zone_count = 0;
    std::vector<AirflowLink> links;

    int exterior_node() const { return zone_count; }
};

// Signed flow through one link; large openings carry the two opposed
// components of the exchange on top of the net.
struct LinkFlowResult {
    double mass_flow = 0.0;      // kg/s, + from -> to
    double flow_forward = 0.0;   // kg/s >= 0, from -> to share
    double flow_reverse = 0.0;   // kg/s >= 0, to -> from share
    double derivative = 0.0;     // d mass_flow / d(P_from - P_to)
};

// Buoyancy-corrected pressure difference across a link:
//   dP = (P_from - rho_from*g*z_from) - (P_to - rho_to*g*z_to)
inline double stack_pressure_difference(const AirflowLink& link, double t_from_c, double t_to_c,
                                        double p_from, double p_to) {
    const double rho_from = air_density_of(t_from_c);
    const double rho_to = air_density_of(t_to_c);
    return (p_from - rho_from * kGravity * link.from_height) -
           (p_to - rho_to * kGravity * link.to_height);
}

// Power law with a linear secant through +/-kFlowLinearization Pa; the raw
// derivative diverges at dP = 0 for n < 1 and would break Newton steps.
inline LinkFlowResult power_law_flow(double coefficient, double exponent, double delta_p) {
    LinkFlowResult r;
    const double a = std::abs(delta_p);
    if (a < kFlowLinearization) {
        const double slope = coefficient * std::pow(kFlowLinearization, exponent - 1.0);
        r.mass_flow = slope * delta_p;
        r.derivative = slope;
    } else {
        r.mass_flow = (delta_p > 0.0 ? 1.0 : -1.0) * coefficient * std::pow(a, exponent);
        r.derivative = exponent * coefficient * std::pow(a, exponent - 1.0);
    }
    r.flow_forward = std::max(r.mass_flow, 0.0);
    r.flow_reverse = std::max(-r.mass_flow, 0.0);
    return r;
}

// Simple-link evaluation at a given pressure difference.
inline LinkFlowResult link_flow(const AirflowLink& link, double delta_p) {
    return power_law_flow(link.coefficient, link.exponent, delta_p);
}

// Full link evaluation from side states. Large openings integrate strip
// orifices over their height; others use the stack-corrected power law.
inline LinkFlowResult link_flow(const AirflowLink& link, double p_from, double t_from_c,
                                double p_to, double t_to_c) {
    if (!link.large_opening) {
        return link_flow(link, stack_pressure_difference(link, t_from_c, t_to_c, p_from, p_to));
    }
    const LargeOpeningGeometry& lo = *link.large_opening;
    const double rho_from = air_density_of(t_from_c);
    const double rho_to = air_density_of(t_to_c);
    const double strip_height = lo.height / kLargeOpeningStrips;
    const double strip_area = strip_height * lo.width;

    LinkFlowResult total;
    for (int s = 0; s < kLargeOpeningStrips; ++s) {
        const double z = (s + 0.5) * strip_height;
        const double dp = (p_from - rho_from * kGravity * (link.from_height + z)) -
                          (p_to - rho_to * kGravity * (link.to_height + z));
        const double a = std::abs(dp);
        const double rho_up = dp > 0.0 ? rho_from : rho_to;
        double flow, deriv;
        if (a < kFlowLinearization) {
            // linear secant through the band edge, continuous with the orifice law
            const double slope = lo.discharge_coefficient * strip_area *
                                 std::sqrt(2.0 * rho_up * kFlowLinearization) /
                                 kFlowLinearization;
            flow = slope * dp;
            deriv = slope;
        } else {
            const double mag = lo.discharge_coefficient * strip_area * std::sqrt(2.0 * rho_up * a);
            flow = dp > 0.0 ? mag : -mag;
            deriv = 0.5 * mag / a;
        }
        total.mass_flow += flow;
        total.derivative += deriv;
        if (flow >= 0.0)
            total.flow_forward += flow;
        else
            total.flow_reverse -= flow;
    }
    return total;
}

struct ExteriorConditions {
    double temperature = 20.0;  // °C
    double wind_speed = 0.0;    // m/s
    double wind_direction = 0.0;  // degrees from north
};

// One elementary directed exchange, already decomposed so two-way large
// openings appear as two entries.
struct DirectedFlow {
    int from = 0;
    int to = 0;
    double mass_flow = 0.0;  // kg/s, >= 0
};

struct AirflowSolution {
    std::vector<double> pressures;        // Pa per zone, relative to exterior static
    std::vector<LinkFlowResult> link_flows;  // aligned with network.links
    std::vector<DirectedFlow> flows;
    int iterations = 0;

    double inflow_to(int zone) const {
        double sum = 0.0;
        for (const auto& f : flows)
            if (f.to == zone) sum += f.mass_flow;
        return sum;
    }
};

namespace detail {

inline void decompose_flows(const AirflowNetwork& net, AirflowSolution& sol) {
    sol.flows.clear();
    for (std::size_t i = 0; i < net.links.size(); ++i) {
        const AirflowLink& l = net.links[i];
        const LinkFlowResult& f = sol.link_flows[i];
        if (f.flow_forward > 0.0) sol.flows.push_back({l.from, l.to, f.flow_forward});
        if (f.flow_reverse > 0.0) sol.flows.push_back({l.to, l.from, f.flow_reverse});
    }
}

}  // namespace detail

// Newton-Raphson on zone pressures enforcing |sum of link flows| below
// tolerance in every zone. Deterministic: zero initial guess, fixed damping
// schedule (up to 5 halvings when the residual norm fails to decrease).
inline AirflowSolution solve_pressure_network(const AirflowNetwork& net,
                                              const std::vector<double>& zone_temps_c,
                                              const ExteriorConditions& exterior,
                                              double tolerance = 1e-6, int max_iterations = 100) {
    const int n = net.zone_count;
    if (static_cast<int>(zone_temps_c.size()) != n)
        throw ValidationError("pressure network: temperature vector size mismatch");

    std::vector<int> link_count(n, 0);
    for (const auto& l : net.links) {
        if (l.from < n) ++link_count[l.from];
        if (l.to < n) ++link_count[l.to];
    }
    for (int z = 0; z < n; ++z) {
        if (link_count[z] == 0)
            throw ConvergenceError("pressure network is singular: zone node " +
                                   std::to_string(z) + " has no links");
    }

    AirflowSolution sol;
    sol.pressures.assign(n, 0.0);
    sol.link_flows.resize(net.links.size());

    auto node_pressure = [&](int node, const AirflowLink& l) {
        if (node < n) return sol.pressures[node];
        return l.has_facade
                   ? wind_pressure(exterior.wind_speed, exterior.wind_direction, l.facade_azimuth_deg)
                   : 0.0;
    };
    auto node_temp = [&](int node) {
        return node < n ? zone_temps_c[node] : exterior.temperature;
    };

    Eigen::VectorXd residual(n);
    Eigen::MatrixXd jac(n, n);

    auto evaluate = [&](Eigen::VectorXd& r, Eigen::MatrixXd* j) {
        r.setZero();
        if (j) j->setZero();
        for (std::size_t i = 0; i < net.links.size(); ++i) {
            const AirflowLink& l = net.links[i];
            const LinkFlowResult f =
                link_flow(l, node_pressure(l.from, l), node_temp(l.from),
                          node_pressure(l.to, l), node_temp(l.to));
            sol.link_flows[i] = f;
            if (l.from < n) r(l.from) += f.mass_flow;   // leaves 'from'
            if (l.to < n) r(l.to) -= f.mass_flow;       // enters 'to'
            if (j) {
                if (l.from < n) (*j)(l.from, l.from) += f.derivative;
                if (l.to < n) (*j)(l.to, l.to) += f.derivative;
                if (l.from < n && l.to < n) {
                    (*j)(l.from, l.to) -= f.derivative;
                    (*j)(l.to, l.from) -= f.derivative;
                }
            }
        }
    };

    evaluate(residual, &jac);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        if (residual.cwiseAbs().maxCoeff() < tolerance) {
            sol.iterations = iter - 1;
            detail::decompose_flows(net, sol);
            return sol;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const Eigen::VectorXd step = lu.solve(-residual);
        if (!step.allFinite())
            throw ConvergenceError("pressure network: singular Jacobian");

        // Demand a clear residual reduction before accepting a step: a full
        // Newton step on sign(dP)*|dP|^n with n near 0.5 reflects about the
        // root and decays too slowly, while the halved step converges fast.
        const double norm_before = residual.norm();
        const std::vector<double> p_before = sol.pressures;
        double alpha = 1.0;
        for (int cut = 0; cut <= 5; ++cut) {
            for (int z = 0; z < n; ++z) sol.pressures[z] = p_before[z] + alpha * step(z);
            evaluate(residual, &jac);
            if (residual.norm() < 0.9 * norm_before || cut == 5) break;
            alpha *= 0.5;
        }
    }
    std::string msg = "pressure network failed to converge; residuals:";
    for (int z = 0; z < n; ++z) msg += " " + std::to_string(residual(z));
    throw ConvergenceError(msg);
}

// ---------------------------------------------------------------------------
// Network construction from the building description.

// An Opening's height is measured above the floor of the first non-exterior
// side; the other side's height follows from the zone reference elevations
// (the exterior reference is the site ground plane at 0 m).
inline AirflowNetwork build_airflow_network(const Building& b) {
    AirflowNetwork net;
    net.zone_count = static_cast<int>(b.zones.size());
    for (std::size_t i = 0; i < b.interzones.size(); ++i) {
        const Interzone& iz = b.interzones[i];
        const int na = iz.side_a == kExterior ? net.zone_count : b.zone_index(iz.side_a);
        const int nb = iz.side_b == kExterior ? net.zone_count : b.zone_index(iz.side_b);

        double facade_azimuth = 0.0;
        bool has_facade = false;
        for (const Component& c : iz.components) {
            if (const auto* w = std::get_if<Wall>(&c)) {
                facade_azimuth = rad2deg(w->azimuth);
                has_facade = true;
                break;
            }
            if (const auto* g = std::get_if<Glazing>(&c)) {
                facade_azimuth = rad2deg(g->azimuth);
                has_facade = true;
                break;
            }
        }

        for (std::size_t c = 0; c < iz.components.size(); ++c) {
            const auto* o = std::get_if<Opening>(&iz.components[c]);
            if (!o) continue;
            AirflowLink link;
            link.from = na;
            link.to = nb;
            link.coefficient = o->flow_coefficient;
            link.exponent = o->flow_exponent;
            link.large_opening = o->large_opening;
            link.facade_azimuth_deg = facade_azimuth;
            link.has_facade = has_facade && (na == net.zone_count || nb == net.zone_count);
            link.id = o->name.empty()
                          ? "iz" + std::to_string(i) + "_c" + std::to_string(c)
                          : o->name;

            const double ref_a = iz.side_a == kExterior ? 0.0 : b.zones[na].reference_height;
            const double ref_b = iz.side_b == kExterior ? 0.0 : b.zones[nb].reference_height;
            const double anchor_ref = iz.side_a == kExterior ? ref_b : ref_a;
            const double z_abs = anchor_ref + o->height;
            link.from_height = z_abs - ref_a;
            link.to_height = z_abs - ref_b;
            net.links.push_back(link);
        }
    }
    return net;
}

// ---------------------------------------------------------------------------
// Prescribed-rate model: the (zones+exterior) x (zones+exterior) matrix of
// scheduled flows, taken as user data. Imbalances are reported, not fixed.
inline std::vector<std::vector<double>> fixed_rates(const Building& b, int hour_of_day,
                                                    Diagnostics* diags = nullptr) {
    const int n = static_cast<int>(b.zones.size());
    std::vector<std::vector<double>> m(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < b.interzones.size(); ++i) {
        const Interzone& iz = b.interzones[i];
        const int na = iz.side_a == kExterior ? n : b.zone_index(iz.side_a);
        const int nb = iz.side_b == kExterior ? n : b.zone_index(iz.side_b);
        for (const Component& c : iz.components) {
            const auto* f = std::get_if<FixedFlow>(&c);
            if (!f) continue;
            const double flow = f->mass_flow * f->schedule[hour_of_day % 24];
            m[na][nb] += flow;
            m[nb][na] -= flow;
        }
    }
    if (diags) {
        for (int z = 0; z < n; ++z) {
            double net_flow = 0.0;
            for (int k = 0; k <= n; ++k) net_flow += m[z][k];
            if (std::abs(net_flow) > 1e-6) {
                diags->push_back({"zones[" + std::to_string(z) + "](" + b.zones[z].name + ")",
                                  "fixed airflow rates are unbalanced by " +
                                      std::to_string(net_flow) + " kg/s"});
            }
        }
    }
    return m;
}

// Converts the prescribed matrix into the directed-flow form the thermal and
// moisture balances consume.
inline AirflowSolution fixed_rates_solution(const std::vector<std::vector<double>>& matrix,
                                            int zone_count) {
    AirflowSolution sol;
    sol.pressures.assign(zone_count, 0.0);
    for (int a = 0; a <= zone_count; ++a) {
        for (int bnode = a + 1; bnode <= zone_count; ++bnode) {
            const double flow = matrix[a][bnode];
            if (flow > 0.0) sol.flows.push_back({a, bnode, flow});
            if (flow < 0.0) sol.flows.push_back({bnode, a, -flow});
        }
    }
    return sol;
}

}  // namespace zonal
