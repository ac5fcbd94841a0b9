// Thermostat control for the air-conditioning component: deadband targeting,
// power clamping, convective/radiative split, and the sizing mode in which
// available power is treated as infinite.
#pragma once

#include <optional>

#include "zonal/building.hpp"

namespace zonal {

// Setpoint the system should drive toward, or nothing when the schedule is
// off or the free-float temperature sits inside the deadband. Heating targets
// setpoint_low, cooling targets setpoint_high.
inline std::optional<double> control_target(const HvacSystem& sys, double t_air_free_c,
                                            int hour_of_day) {
    if (!sys.schedule[hour_of_day % 24]) return std::nullopt;
    if (t_air_free_c < sys.setpoint_low) return sys.setpoint_low;
    if (t_air_free_c > sys.setpoint_high) return sys.setpoint_high;
    return std::nullopt;
}

struct HvacOutput {
    double convective = 0.0;  // W, signed (+ heating)
    double radiative = 0.0;   // W, signed
    bool clamped = false;

    double total() const { return convective + radiative; }
};

// Clamps the required power to the equipment limits (unless sizing), zeroes
// it outside the schedule or inside the deadband, and splits it by the
// radiative fraction.
inline HvacOutput apply_control(const HvacSystem& sys, double p_required, int hour_of_day,
                                double t_air_free_c, bool sizing_override = false) {
    HvacOutput out;
    if (!sys.schedule[hour_of_day % 24]) return out;
    if (t_air_free_c >= sys.setpoint_low && t_air_free_c <= sys.setpoint_high) return out;

    double p = p_required;
    if (!(sys.sizing_mode || sizing_override)) {
        if (p > sys.heating_power_max) {
            p = sys.heating_power_max;
            out.clamped = true;
        } else if (p < -sys.cooling_power_max) {
            p = -sys.cooling_power_max;
            out.clamped = true;
        }
    }
    out.convective = p * (1.0 - sys.radiative_fraction);
    out.radiative = p * sys.radiative_fraction;
    return out;
}

}  // namespace zonal
