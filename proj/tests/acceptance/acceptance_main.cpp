// Acceptance harness: runs the full criteria list against the bundled
// three-zone building and synthetic weather, printing one pass/fail line per
// criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "zonal/engine.hpp"

using namespace zonal;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %02d %s — %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

Project base_project(const std::string& weather_path, int days) {
    Project p;
    p.weather_path = weather_path;
    p.building = case_study_building();
    p.period_start = {2001, 2, 1, 0, 0, 0};
    p.period_end = add_seconds(p.period_start, static_cast<std::int64_t>(days) * 86400);
    return p;
}

const char* kTwoDayWeather = "acceptance_two_days.csv";
const char* kLongWeather = "acceptance_long.csv";

// ---------------------------------------------------------------------------

void criterion_1_isotropic_exact() {
    struct Row {
        double tilt_deg, factor;
    };
    const Row rows[] = {{0.0, 1.0}, {60.0, 0.75}, {90.0, 0.5}, {180.0, 0.0}};
    bool ok = true;
    double worst = 0.0;
    for (const Row& r : rows) {
        for (double dh : {55.0, 132.0, 347.0}) {
            const double expected = dh * r.factor;
            const double got = diffuse_isotropic({2.0 * dh, dh}, {deg2rad(r.tilt_deg), 1.1});
            const double err = expected != 0.0 ? std::abs(got - expected) / expected
                                               : std::abs(got);
            worst = std::max(worst, err);
            if (err > 1e-12) ok = false;
        }
    }
    report(1, "isotropic tilt reduction exact at s in {0,60,90,180} deg", ok,
           fmt("max relative error %.2e (tolerance 1e-12)", worst));
}

void criterion_2_willmott_exact() {
    // independent spreadsheet-style evaluation of the anisotropic expression
    std::mt19937 rng(20010201);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    bool ok = true;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double h = deg2rad(10.0 + 70.0 * u01(rng));
        const double gh_ext = 400.0 + 900.0 * u01(rng);
        const double gh = 50.0 + 0.9 * gh_ext * u01(rng);
        const double dh = gh * (0.1 + 0.85 * u01(rng));
        const double tilt = 0.05 + (kPi - 0.1) * u01(rng);
        const double az_surf = 2.0 * kPi * u01(rng);
        const double az_sun = 2.0 * kPi * u01(rng);

        SunPosition sun;
        sun.altitude = h;
        sun.azimuth = az_sun;
        sun.extraterrestrial_horizontal = gh_ext;
        const TiltedIrradiance got = diffuse_willmott({gh, dh}, sun, {tilt, az_surf});

        const double c_s = 1.00115 - 3.54e-2 * tilt - 2.46e-6 * tilt * tilt;
        double f = 1.0 - std::min(gh / gh_ext, 1.0) * (1.0 - dh / gh);
        f = std::clamp(f, 0.0, 1.0);
        const double cos_i = std::sin(h) * std::cos(tilt) +
                             std::cos(h) * std::sin(tilt) * std::cos(az_sun - az_surf);
        const double expected =
            (f * c_s * 0.5 * (1.0 + std::cos(tilt)) +
             (1.0 - f) * std::max(cos_i, 0.0) / std::sin(h)) *
            dh;
        const double err = std::abs(got.sky_diffuse - expected) / std::max(expected, 1e-6);
        worst = std::max(worst, err);
        if (err > 1e-9) ok = false;
    }
    report(2, "anisotropic expression matches independent evaluation (20 samples)", ok,
           fmt("max relative error %.2e (tolerance 1e-9)", worst));
}

struct TwoModelRuns {
    SimulationResult iso, wil;
};

TwoModelRuns run_two_diffuse_models() {
    TwoModelRuns out;
    Project p = base_project(kTwoDayWeather, 2);
    p.building.models.diffuse = DiffuseModel::Isotropic;
    out.iso = run_simulation(p).first;
    p.building.models.diffuse = DiffuseModel::Willmott;
    out.wil = run_simulation(p).first;
    return out;
}

void criterion_3_diffuse_ordering(const TwoModelRuns& runs) {
    // sunny day = second recorded day; east zone is index 1
    int daylight = 0, ordered = 0;
    for (int s = 24; s < 48; ++s) {
        const double iso = runs.iso.steps[s].zones[1].solar_diffuse_entering;
        const double wil = runs.wil.steps[s].zones[1].solar_diffuse_entering;
        if (iso <= 1.0) continue;
        ++daylight;
        if (wil <= iso + 1e-9) ++ordered;
    }
    const bool enough = daylight >= 6;
    const double share = daylight > 0 ? 100.0 * ordered / daylight : 0.0;
    report(3, "anisotropic sky diffuse entering the east zone <= isotropic (sunny day)",
           enough && share >= 90.0,
           fmt("%d/%d daylight hours ordered (%.0f%%, threshold 90%%)", ordered, daylight,
               share));
}

void criterion_4_model_insensitivity(const TwoModelRuns& runs) {
    double worst = 0.0;
    for (std::size_t s = 0; s < runs.iso.steps.size(); ++s) {
        worst = std::max(worst, std::abs(runs.iso.steps[s].zones[1].air_temperature -
                                         runs.wil.steps[s].zones[1].air_temperature));
    }
    report(4, "east-zone temperature insensitive to the diffuse model", worst < 0.5,
           fmt("max hourly difference %.3f K (tolerance 0.5)", worst));
}

void criterion_5_iteration_counts(const TimingReport& timing_b) {
    std::vector<int> counts;
    for (const ZoneTiming& z : timing_b.zones)
        counts.insert(counts.end(), z.iteration_counts.begin(), z.iteration_counts.end());
    std::sort(counts.begin(), counts.end());
    const double median = counts.empty()
                              ? 0.0
                              : (counts.size() % 2 == 1
                                     ? counts[counts.size() / 2]
                                     : 0.5 * (counts[counts.size() / 2 - 1] +
                                              counts[counts.size() / 2]));
    std::map<int, int> histogram;
    for (int c : counts) ++histogram[c];
    int mode = 0, mode_n = -1;
    for (const auto& [v, n] : histogram) {
        if (n > mode_n) {
            mode = v;
            mode_n = n;
        }
    }
    std::string hist;
    for (const auto& [v, n] : histogram) hist += fmt("%d:%d ", v, n);
    const bool ok = median >= 2.0 && median <= 6.0 && (mode == 3 || mode == 4);
    report(5, "nonlinear convection: median resolutions in [2,6], mode in {3,4}", ok,
           fmt("median %.1f, mode %d, histogram %s", median, mode, hist.c_str()));
}

void criterion_6_timing_ratio() {
    Project p = base_project(kLongWeather, 20);
    const std::vector<CaseSpec> cases = {canonical_case(p.building, "A"),
                                         canonical_case(p.building, "B"),
                                         canonical_case(p.building, "C")};
    // best-of-five repetitions filters scheduler noise out of the wall times
    double t_a = 1e9, t_b = 1e9, t_c = 1e9;
    std::vector<int> b_counts;
    for (int rep_count = 0; rep_count < 5; ++rep_count) {
        const CompareReport rep = compare_cases(p, cases, "B");
        for (const CaseRun& c : rep.cases) {
            if (c.label == "A") t_a = std::min(t_a, c.solve_seconds);
            if (c.label == "B") {
                t_b = std::min(t_b, c.solve_seconds);
                if (b_counts.empty()) {
                    for (const ZoneTiming& z : c.timing.zones)
                        b_counts.insert(b_counts.end(), z.iteration_counts.begin(),
                                        z.iteration_counts.end());
                }
            }
            if (c.label == "C") t_c = std::min(t_c, c.solve_seconds);
        }
    }
    const double ratio = t_c / t_b;
    std::sort(b_counts.begin(), b_counts.end());
    const double i_med = b_counts.empty() ? 3.0 : b_counts[b_counts.size() / 2];
    const int nb = 3;
    const double predicted = (i_med + nb - 1) / (nb * i_med);
    const bool ok = ratio >= 0.45 && ratio <= 0.70 && t_a < t_c && t_c < t_b &&
                    std::abs(ratio - predicted) <= 0.15;
    report(6, "selective-model timing: t_C/t_B in [0.45,0.70], t_A < t_C < t_B", ok,
           fmt("t_A=%.4fs t_B=%.4fs t_C=%.4fs ratio %.3f, count model (i=%g) predicts %.3f",
               t_a, t_b, t_c, ratio, i_med, predicted));
}

void criterion_7_error_ordering(const CompareReport& rep) {
    double errs_t[3] = {0, 0, 0}, errs_p[3] = {0, 0, 0};
    for (const CaseRun& c : rep.cases) {
        const int i = c.label == "A" ? 0 : c.label == "B" ? 1 : 2;
        errs_t[i] = c.max_temp_error;
        errs_p[i] = c.max_power_error;
    }
    const bool ok = errs_t[0] > errs_t[2] && errs_p[0] >= errs_p[2] && errs_t[2] < 0.3;
    report(7, "constant-everywhere errs more than selective nonlinear (vs B)", ok,
           fmt("temp A=%.3f C=%.3f K (C<0.3), power A=%.0f C=%.0f W", errs_t[0], errs_t[2],
               errs_p[0], errs_p[2]));
}

void criterion_8_sizing_and_clamping(const SimulationResult& sizing,
                                     const SimulationResult& limited) {
    // sizing holds the cooling setpoint whenever the system works
    double worst_hold = 0.0;
    double ceiling = 0.0;
    double peak_kw = 0.0;
    for (std::size_t s = 0; s < sizing.steps.size(); ++s) {
        const ZoneStepOutput& west = sizing.steps[s].zones[2];
        ceiling = std::max(ceiling, west.air_temperature);
        if (west.hvac_power < 0.0)
            worst_hold = std::max(worst_hold, std::abs(west.air_temperature - 20.0));
        if (s >= 24) peak_kw = std::max(peak_kw, -west.hvac_power / 1000.0);
    }
    const bool hold_ok = worst_hold <= 0.05 && ceiling <= 20.05;
    const bool peak_ok = peak_kw >= 1.5 && peak_kw <= 5.0;

    bool clamped_afternoon = false;
    double overheat = 0.0;
    for (int s = 36; s <= 42 && s < static_cast<int>(limited.steps.size()); ++s) {
        const ZoneStepOutput& west = limited.steps[s].zones[2];
        if (west.hvac_clamped && west.air_temperature > 20.05) {
            clamped_afternoon = true;
            overheat = std::max(overheat, west.air_temperature - 20.0);
        }
    }
    report(8, "sizing pins the west zone; the 2 kW unit clamps and overheats",
           hold_ok && peak_ok && clamped_afternoon,
           fmt("hold error %.3f K, peak %.2f kW (in [1.5,5]), sunny-afternoon overheat "
               "%.2f K with clamp=%d",
               worst_hold, peak_kw, overheat, clamped_afternoon ? 1 : 0));
}

void criterion_9_wall_oracle() {
    // chain with films to fixed airs; implicit hourly vs explicit 1 s reference
    Wall w;
    w.area = 18.0;
    w.layer = {0.12, 1.75, 2300.0, 920.0};
    const WallNodes n = discretize_wall(w);
    const double gq = 1.0 / n.resistance_quarter;
    const double gh = 1.0 / n.resistance_half;
    const double g_in = 5.0 * w.area, g_out = 16.7 * w.area;
    const double t_in = 30.0, t_out = 20.0;

    ZoneSystem sys;
    sys.zone = 0;
    sys.node_index = {{0, 0, NodeRole::SurfaceA},
                      {0, 0, NodeRole::Mass1},
                      {0, 0, NodeRole::Mass2},
                      {0, 0, NodeRole::SurfaceB}};
    sys.allocate(4);
    sys.capacity(1) = sys.capacity(2) = n.capacity_half;
    auto couple = [&](int i, int j, double g) {
        sys.a_cond(i, i) -= g;
        sys.a_cond(j, j) -= g;
        sys.a_cond(i, j) += g;
        sys.a_cond(j, i) += g;
    };
    couple(0, 1, gq);
    couple(1, 2, gh);
    couple(2, 3, gq);
    sys.a_cvi_lin(0, 0) -= g_in;
    sys.b_connex(0) = g_in * t_in;
    sys.a_cve(3, 3) -= g_out;
    sys.b_connex(3) = g_out * t_out;
    sys.temperatures_start.setConstant(20.0);
    sys.temperatures = sys.temperatures_start;

    const double r_in = 1.0 / g_in + 1.0 / gq;
    const double r_mid = 1.0 / gh;
    const double r_out = 1.0 / gq + 1.0 / g_out;
    double t1 = 20.0, t2 = 20.0;
    double max_dev = 0.0;
    for (int hour = 0; hour < 24; ++hour) {
        for (int s = 0; s < 3600; ++s) {
            const double d1 = ((t_in - t1) / r_in + (t2 - t1) / r_mid) / n.capacity_half;
            const double d2 = ((t_out - t2) / r_out + (t1 - t2) / r_mid) / n.capacity_half;
            t1 += d1;
            t2 += d2;
        }
        step_implicit(sys, 3600.0);
        sys.temperatures_start = sys.temperatures;
        max_dev = std::max(max_dev, std::abs(sys.temperatures(1) - t1));
        max_dev = std::max(max_dev, std::abs(sys.temperatures(2) - t2));
    }
    for (int hour = 0; hour < 600; ++hour) {
        step_implicit(sys, 3600.0);
        sys.temperatures_start = sys.temperatures;
    }
    const double flux = g_in * (t_in - sys.temperatures(0));
    const double analytic = (t_in - t_out) / (r_in + r_mid + r_out);
    const double flux_err = std::abs(flux - analytic) / analytic;
    report(9, "hourly implicit wall tracks a 1 s explicit reference", max_dev < 0.2 && flux_err < 1e-6,
           fmt("max 24 h deviation %.4f K (tol 0.2), steady flux error %.2e (tol 1e-6)",
               max_dev, flux_err));
}

void criterion_10_airflow_properties() {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    // (a) 1000 fuzzed networks conserve mass per zone
    double worst_residual = 0.0;
    int solved = 0;
    for (int k = 0; k < 1000; ++k) {
        const int nz = 1 + static_cast<int>(u01(rng) * 3.99);
        AirflowNetwork net;
        net.zone_count = nz;
        std::vector<double> temps;
        for (int z = 0; z < nz; ++z) temps.push_back(12.0 + 25.0 * u01(rng));
        for (int z = 0; z < nz; ++z) {
            AirflowLink l;
            l.from = z;
            l.to = nz;
            l.coefficient = 0.002 + 0.05 * u01(rng);
            l.exponent = 0.5 + 0.5 * u01(rng);
            l.from_height = 4.0 * u01(rng);
            l.to_height = l.from_height + 3.0 * (u01(rng) - 0.5);
            l.has_facade = u01(rng) < 0.7;
            l.facade_azimuth_deg = 360.0 * u01(rng);
            net.links.push_back(l);
        }
        const int extra = static_cast<int>(u01(rng) * 4.0);
        for (int e = 0; e < extra; ++e) {
            AirflowLink l;
            l.from = static_cast<int>(u01(rng) * nz);
            l.to = static_cast<int>(u01(rng) * (nz + 1));
            if (l.to == l.from) l.to = nz;
            l.coefficient = 0.002 + 0.05 * u01(rng);
            l.exponent = 0.5 + 0.5 * u01(rng);
            l.from_height = 3.0 * u01(rng);
            l.to_height = 3.0 * u01(rng);
            if (u01(rng) < 0.4)
                l.large_opening = LargeOpeningGeometry{0.5 + 2.0 * u01(rng),
                                                       0.4 + 1.0 * u01(rng), 0.61};
            net.links.push_back(l);
        }
        const ExteriorConditions ext{10.0 + 25.0 * u01(rng), 8.0 * u01(rng),
                                     360.0 * u01(rng)};
        const AirflowSolution sol = solve_pressure_network(net, temps, ext);
        ++solved;
        std::vector<double> residual(nz, 0.0);
        for (std::size_t i = 0; i < net.links.size(); ++i) {
            if (net.links[i].from < nz) residual[net.links[i].from] += sol.link_flows[i].mass_flow;
            if (net.links[i].to < nz) residual[net.links[i].to] -= sol.link_flows[i].mass_flow;
        }
        for (int z = 0; z < nz; ++z) worst_residual = std::max(worst_residual, std::abs(residual[z]));
    }

    // (b) power-law Jacobians against central differences
    double worst_jac = 0.0;
    for (int k = 0; k < 500; ++k) {
        const double cq = 0.001 + 0.1 * u01(rng);
        const double n = 0.5 + 0.5 * u01(rng);
        const double dp =
            std::exp(std::log(0.02) + u01(rng) * (std::log(50.0) - std::log(0.02)));
        const double h = 1e-4 * dp;
        const double fd = (power_law_flow(cq, n, dp + h).mass_flow -
                           power_law_flow(cq, n, dp - h).mass_flow) /
                          (2.0 * h);
        worst_jac = std::max(worst_jac,
                             std::abs(power_law_flow(cq, n, dp).derivative - fd) / fd);
    }

    // (c) stacked openings against the scalar neutral-plane oracle
    AirflowNetwork net;
    net.zone_count = 1;
    AirflowLink low;
    low.from = 1;
    low.to = 0;
    low.coefficient = 0.02;
    low.exponent = 0.5;
    low.id = "low";
    AirflowLink high = low;
    high.from = 0;
    high.to = 1;
    high.from_height = 2.0;
    high.to_height = 2.0;
    net.links = {low, high};
    const double t_in = 30.0, t_out = 20.0;
    const AirflowSolution sol = solve_pressure_network(net, {t_in}, {t_out, 0.0, 0.0});
    const double rho_in = air_density_of(t_in), rho_out = air_density_of(t_out);
    auto net_flow = [&](double p) {
        const auto f_low = power_law_flow(0.02, 0.5, -p);
        const auto f_high = power_law_flow(
            0.02, 0.5, (p - rho_in * kGravity * 2.0) + rho_out * kGravity * 2.0);
        return f_low.mass_flow - f_high.mass_flow;
    };
    double lo = -10.0, hi = 10.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (net_flow(mid) > 0.0 ? lo : hi) = mid;
    }
    const double p_oracle = 0.5 * (lo + hi);
    const double flow_oracle = power_law_flow(0.02, 0.5, -p_oracle).mass_flow;
    const double stack_err =
        std::abs(sol.link_flows[0].mass_flow - flow_oracle) / flow_oracle;

    const bool ok = worst_residual < 1e-6 && worst_jac <= 0.01 && stack_err <= 0.02;
    report(10, "airflow: mass conservation, Jacobians, stack oracle", ok,
           fmt("%d solves, worst residual %.2e kg/s (tol 1e-6), worst Jacobian error "
               "%.3f%% (tol 1%%), stack flow error %.2f%% (tol 2%%)",
               solved, worst_residual, 100.0 * worst_jac, 100.0 * stack_err));
}

void criterion_11_conservation() {
    // (a) interior shortwave distribution conserves the entering power
    std::mt19937 rng(1111);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_resid = 0.0;
    for (int k = 0; k < 300; ++k) {
        const int n = 2 + static_cast<int>(u01(rng) * 5.0);
        std::vector<EnclosureSurface> s;
        for (int i = 0; i < n; ++i) s.push_back({1.0 + 40.0 * u01(rng), 0.05 + 0.95 * u01(rng)});
        const double beam = 1500.0 * u01(rng);
        const double diffuse = 800.0 * u01(rng);
        const auto absorbed =
            distribute_solar_gains(s, beam, diffuse, static_cast<std::size_t>(u01(rng) * n));
        double sum = 0.0;
        for (double a : absorbed) sum += a;
        worst_resid = std::max(worst_resid, beam + diffuse - sum);
    }

    // (b) coupled moisture balance telescopes exactly
    Building mb;
    mb.models.airflow = AirflowModel::FixedRates;
    for (int z = 0; z < 3; ++z) {
        Zone zone;
        zone.name = "z" + std::to_string(z);
        zone.volume = 40.0 + 30.0 * z;
        mb.zones.push_back(zone);
        FixedFlow f;
        mb.interzones.push_back({zone.name, kExterior, {f}});
    }
    double worst_mass = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        AirflowSolution airflow;
        const double ring = 0.02 + 0.2 * u01(rng);
        const double vent = 0.01 + 0.1 * u01(rng);
        airflow.flows.push_back({0, 1, ring + vent});
        airflow.flows.push_back({1, 2, ring});
        airflow.flows.push_back({2, 0, ring});
        airflow.flows.push_back({3, 0, vent});
        airflow.flows.push_back({1, 3, vent});
        const std::vector<double> w_old = {0.004 + 0.01 * u01(rng), 0.004 + 0.01 * u01(rng),
                                           0.004 + 0.01 * u01(rng)};
        const double w_ext = 0.002 + 0.02 * u01(rng);
        const double dt = 3600.0;
        const auto w_new = step_humidity_coupled(mb, w_old, airflow, {0, 0, 0}, {0, 0, 0},
                                                 w_ext, dt);
        double storage = 0.0;
        for (int z = 0; z < 3; ++z)
            storage += kAirDensity * mb.zones[z].volume * (w_new[z] - w_old[z]);
        const double boundary = dt * (vent * w_ext - vent * w_new[1]);
        worst_mass = std::max(worst_mass, std::abs(storage - boundary));
    }

    // (c) an adiabatic no-gain building holds its temperatures
    Building ab = case_study_building();
    for (Interzone& iz : ab.interzones)
        for (Component& c : iz.components) {
            if (auto* w = std::get_if<Wall>(&c)) {
                w->emissivity_a = w->emissivity_b = 0.0;
            }
            if (auto* g = std::get_if<Glazing>(&c)) {
                Wall w;
                w.name = g->name;
                w.area = g->area;
                w.layer = {0.12, 1.75, 2300.0, 920.0};
                w.tilt = g->tilt;
                w.azimuth = g->azimuth;
                w.absorptance_a = w.absorptance_b = 0.0;
                w.emissivity_a = w.emissivity_b = 0.0;
                c = w;
            }
            if (auto* h = std::get_if<HvacSystem>(&c)) h->schedule.fill(0);
        }
    for (Zone& z : ab.zones) {
        z.initial_temperature = 25.0;
        z.initial_humidity = 0.015;
    }
    WeatherSeries constant;
    DateTime t{2001, 2, 1, 0, 0, 0};
    for (int s = 0; s < 48; ++s) {
        WeatherRecord r;
        r.timestamp = t;
        r.dry_bulb = 25.0;
        r.humidity_ratio = 0.015;
        constant.records.push_back(r);
        t = add_seconds(t, 3600);
    }
    save_weather(constant, "acceptance_constant.csv");
    Project ap;
    ap.weather_path = "acceptance_constant.csv";
    ap.building = ab;
    ap.period_start = {2001, 2, 1, 0, 0, 0};
    ap.period_end = {2001, 2, 3, 0, 0, 0};
    const SimulationResult ar = run_simulation(ap).first;
    double worst_drift = 0.0;
    for (const StepRecord& s : ar.steps)
        for (const auto& z : s.zones)
            worst_drift = std::max(worst_drift, std::abs(z.air_temperature - 25.0));

    const bool ok = worst_resid < 0.1 && worst_mass < 1e-9 && worst_drift < 1e-6;
    report(11, "conservation: shortwave split, moisture mass, adiabatic constancy", ok,
           fmt("solar residual %.3f W (tol 0.1), moisture error %.2e kg (tol 1e-9), "
               "temperature drift %.2e K (tol 1e-6)",
               worst_resid, worst_mass, worst_drift));
}

void criterion_12_determinism() {
    bool ok = true;
    std::string detail;
    int scenario = 0;

    auto check = [&](Project p, const std::string& name) {
        const std::string a = results_csv(run_simulation(p).first);
        const std::string b = results_csv(run_simulation(p).first);
        ++scenario;
        if (a != b) {
            ok = false;
            detail += name + " differs; ";
        }
    };

    Project iso = base_project(kTwoDayWeather, 2);
    check(iso, "isotropic");
    Project wil = iso;
    wil.building.models.diffuse = DiffuseModel::Willmott;
    check(wil, "willmott");
    Project sizing = iso;
    sizing.sizing_override = true;
    check(sizing, "sizing");
    for (const char* label : {"A", "B", "C"}) {
        Project pc = iso;
        pc.building = apply_case(pc.building, canonical_case(pc.building, label));
        check(pc, std::string("case ") + label);
    }
    if (ok) detail = fmt("%d scenarios, byte-identical result files", scenario);
    report(12, "re-running every scenario reproduces its result file exactly", ok, detail);
}

}  // namespace

int main() {
    std::printf("acceptance: three-zone reference building, synthetic cloudy+sunny weather\n");
    save_weather(synth_weather({SynthDay::Cloudy, SynthDay::Sunny}), kTwoDayWeather);
    {
        std::vector<SynthDay> days;
        for (int d = 0; d < 10; ++d) {
            days.push_back(SynthDay::Cloudy);
            days.push_back(SynthDay::Sunny);
        }
        save_weather(synth_weather(days), kLongWeather);
    }

    criterion_1_isotropic_exact();
    criterion_2_willmott_exact();

    const TwoModelRuns runs = run_two_diffuse_models();
    criterion_3_diffuse_ordering(runs);
    criterion_4_model_insensitivity(runs);

    // two-day comparison feeds criteria 5 and 7
    Project p2 = base_project(kTwoDayWeather, 2);
    const std::vector<CaseSpec> cases = {canonical_case(p2.building, "A"),
                                         canonical_case(p2.building, "B"),
                                         canonical_case(p2.building, "C")};
    const CompareReport rep2 = compare_cases(p2, cases, "B");
    const CaseRun* case_b = nullptr;
    for (const CaseRun& c : rep2.cases)
        if (c.label == "B") case_b = &c;
    criterion_5_iteration_counts(case_b->timing);
    criterion_6_timing_ratio();
    criterion_7_error_ordering(rep2);

    Project sizing = base_project(kTwoDayWeather, 2);
    sizing.sizing_override = true;
    const SimulationResult sizing_run = run_simulation(sizing).first;
    const SimulationResult limited_run = run_simulation(base_project(kTwoDayWeather, 2)).first;
    criterion_8_sizing_and_clamping(sizing_run, limited_run);

    criterion_9_wall_oracle();
    criterion_10_airflow_properties();
    criterion_11_conservation();
    criterion_12_determinism();

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
