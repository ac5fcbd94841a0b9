// Per-zone nodal state equation C·dT/dt = A·T + B, with A and B decomposed
// into per-phenomenon elementary matrices and vectors:
//
//   A_cond     conduction chains (symmetric; ground-link diagonals included)
//   A_cvi_lin  interior convection among in-system nodes, current linearization
//   A_cve      exterior films: convection plus linearized sky longwave
//   A_lwi      interior longwave star couplings (surfaces <-> mean-radiant node)
//   A_airflow  advective damping on the air node
//   A_connex   diagonals of couplings whose far side lives in another zone system
//
//   B_swi      absorbed interior shortwave on owned faces
//   B_swe      absorbed exterior shortwave
//   B_lwe      sky-temperature products of the exterior longwave films
//   B_int_load internal loads (convective to air, radiative to faces)
//   B_hvac     delivered system power (convective to air, radiative to faces)
//   B_cvi_nlin affine remainder of the Newton-linearized nonlinear films
//   B_airflow  advected upstream-temperature products
//   B_connex   known-boundary-temperature products: outdoor air, deep ground,
//              neighbor zone air, neighbor-owned surface and radiant nodes
//
// Neighbor-zone temperatures enter only through A_connex diagonals and
// B_connex products, which the connection process refreshes between sweeps.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zonal/errors.hpp"

namespace zonal {

enum class NodeRole { Air, MeanRadiant, SurfaceA, Mass1, Mass2, SurfaceB };

inline const char* node_role_name(NodeRole r) {
    switch (r) {
        case NodeRole::Air: return "air";
        case NodeRole::MeanRadiant: return "mean_radiant";
        case NodeRole::SurfaceA: return "surface_a";
        case NodeRole::Mass1: return "mass_1";
        case NodeRole::Mass2: return "mass_2";
        case NodeRole::SurfaceB: return "surface_b";
    }
    return "?";
}

struct NodeKey {
    int interzone = -1;  // -1 for the air and mean-radiant nodes
    int component = -1;
    NodeRole role = NodeRole::Air;

    friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct ZoneSystem {
    int zone = -1;
    std::vector<NodeKey> node_index;  // row -> key

    Eigen::VectorXd capacity;  // J/K diagonal; zero rows are steady (massless)

    Eigen::MatrixXd a_cond, a_cvi_lin, a_cve, a_lwi, a_airflow, a_connex;
    Eigen::VectorXd b_swi, b_swe, b_lwe, b_int_load, b_hvac, b_cvi_nlin, b_airflow, b_connex;

    Eigen::VectorXd temperatures;        // latest iterate, °C
    Eigen::VectorXd temperatures_start;  // state at the beginning of the step

    int size() const { return static_cast<int>(node_index.size()); }
    int air_node() const { return 0; }

    int find_node(const NodeKey& key) const {
        for (std::size_t i = 0; i < node_index.size(); ++i)
            if (node_index[i] == key) return static_cast<int>(i);
        return -1;
    }

    void allocate(int n) {
        capacity = Eigen::VectorXd::Zero(n);
        a_cond = a_cvi_lin = a_cve = a_lwi = a_airflow = a_connex =
            Eigen::MatrixXd::Zero(n, n);
        b_swi = b_swe = b_lwe = b_int_load = b_hvac = b_cvi_nlin = b_airflow = b_connex =
            Eigen::VectorXd::Zero(n);
        temperatures = Eigen::VectorXd::Zero(n);
        temperatures_start = Eigen::VectorXd::Zero(n);
    }

    void clear_assembly() {
        const int n = size();
        capacity.setZero(n);
        a_cond.setZero(n, n);
        a_cvi_lin.setZero(n, n);
        a_cve.setZero(n, n);
        a_lwi.setZero(n, n);
        a_airflow.setZero(n, n);
        a_connex.setZero(n, n);
        b_swi.setZero(n);
        b_swe.setZero(n);
        b_lwe.setZero(n);
        b_int_load.setZero(n);
        b_hvac.setZero(n);
        b_cvi_nlin.setZero(n);
        b_airflow.setZero(n);
        b_connex.setZero(n);
    }

    Eigen::MatrixXd system_matrix() const {
        return a_cond + a_cvi_lin + a_cve + a_lwi + a_airflow + a_connex;
    }

    Eigen::VectorXd system_vector() const {
        return b_swi + b_swe + b_lwe + b_int_load + b_hvac + b_cvi_nlin + b_airflow + b_connex;
    }
};

namespace detail {

inline void check_solvable(const ZoneSystem& sys, const Eigen::MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i) {
        if (m.row(i).cwiseAbs().maxCoeff() == 0.0) {
            const NodeKey& k = sys.node_index[i];
            throw ConvergenceError(
                "zone system is singular: node " + std::to_string(i) + " (interzone " +
                std::to_string(k.interzone) + ", component " + std::to_string(k.component) +
                ", " + node_role_name(k.role) + ") has zero capacity and no connections");
        }
    }
}

}  // namespace detail

// One implicit finite-difference step: solves (C/dt - A)·T_new = (C/dt)·T_old + B.
// Unconditionally stable for dissipative A. Updates sys.temperatures.
inline const Eigen::VectorXd& step_implicit(ZoneSystem& sys, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step_implicit: dt must be > 0");
    const Eigen::MatrixXd m =
        Eigen::MatrixXd((sys.capacity / dt).asDiagonal()) - sys.system_matrix();
    detail::check_solvable(sys, m);
    const Eigen::VectorXd rhs =
        sys.capacity.cwiseQuotient(Eigen::VectorXd::Constant(sys.size(), dt))
            .cwiseProduct(sys.temperatures_start) +
        sys.system_vector();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    sys.temperatures = lu.solve(rhs);
    const double residual = (m * sys.temperatures - rhs).cwiseAbs().maxCoeff();
    const double scale = rhs.cwiseAbs().maxCoeff() + 1.0;
    if (!sys.temperatures.allFinite() || residual > 1e-6 * scale) {
        throw ConvergenceError("zone system solve failed (singular or ill-conditioned matrix)");
    }
    return sys.temperatures;
}

// Sensible power that pins the air node to `target_c` for this step: the air
// row is replaced by T_air = target, the remaining rows are solved, and the
// original air-row residual is the required power. Exact for the linearized
// system. Does not modify the stored temperatures.
inline double required_sensible_power(const ZoneSystem& sys, double dt, double target_c) {
    if (!(dt > 0.0)) throw ValidationError("required_sensible_power: dt must be > 0");
    const Eigen::MatrixXd m =
        Eigen::MatrixXd((sys.capacity / dt).asDiagonal()) - sys.system_matrix();
    const Eigen::VectorXd rhs =
        sys.capacity.cwiseQuotient(Eigen::VectorXd::Constant(sys.size(), dt))
            .cwiseProduct(sys.temperatures_start) +
        sys.system_vector();

    Eigen::MatrixXd pinned = m;
    Eigen::VectorXd pinned_rhs = rhs;
    const int air = sys.air_node();
    pinned.row(air).setZero();
    pinned(air, air) = 1.0;
    pinned_rhs(air) = target_c;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(pinned);
    const Eigen::VectorXd t = lu.solve(pinned_rhs);
    return (m * t - rhs)(air);
}

}  // namespace zonal
