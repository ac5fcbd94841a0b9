// Simulation orchestration: weather ingestion, the warm-up and recorded
// timestep loops, result/timing files, and the selective-model comparison
// harness.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "zonal/building_json.hpp"
#include "zonal/case_study.hpp"
#include "zonal/runtime.hpp"

namespace zonal {

struct ZoneTiming {
    std::string name;
    double solve_seconds = 0.0;
    std::vector<int> iteration_counts;  // first-visit resolutions, one per recorded step

    int min_iterations() const {
        return iteration_counts.empty()
                   ? 0
                   : *std::min_element(iteration_counts.begin(), iteration_counts.end());
    }
    int max_iterations() const {
        return iteration_counts.empty()
                   ? 0
                   : *std::max_element(iteration_counts.begin(), iteration_counts.end());
    }
    double median_iterations() const {
        if (iteration_counts.empty()) return 0.0;
        std::vector<int> sorted = iteration_counts;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }
    int mode_iterations() const {
        std::map<int, int> histogram;
        for (int c : iteration_counts) ++histogram[c];
        int best = 0, best_count = -1;
        for (const auto& [value, count] : histogram) {
            if (count > best_count) {
                best = value;
                best_count = count;
            }
        }
        return best;
    }
};

struct TimingReport {
    std::string case_label = "default";
    double wall_seconds = 0.0;  // recorded period only, I/O excluded
    std::vector<ZoneTiming> zones;

    double total_solve_seconds() const {
        double s = 0.0;
        for (const auto& z : zones) s += z.solve_seconds;
        return s;
    }
};

struct StepRecord {
    DateTime timestamp;
    std::vector<ZoneStepOutput> zones;
    std::vector<double> link_flows;  // net kg/s per network link
};

struct SimulationResult {
    std::vector<std::string> zone_names;
    std::vector<std::string> link_ids;
    std::vector<StepRecord> steps;
    Diagnostics diagnostics;
    bool verbose_columns = false;
};

namespace detail {

inline std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------

class Engine {
  public:
    explicit Engine(const Project& project) : project_(project) {
        weather_ = load_weather(project_.weather_path, &weather_diags_);
        init();
    }

    Engine(const Project& project, WeatherSeries preloaded)
        : project_(project), weather_(std::move(preloaded)) {
        init();
    }

    const WeatherSeries& weather() const { return weather_; }

    std::pair<SimulationResult, TimingReport> run() {
        BuildingRuntime runtime(project_.building, project_.solver);
        runtime.set_ground_temperature(weather_.mean_dry_bulb());

        SimulationResult result;
        result.diagnostics = weather_diags_;
        result.verbose_columns = project_.solver.verbose_surfaces;
        for (const Zone& z : project_.building.zones) result.zone_names.push_back(z.name);
        for (const AirflowLink& l : network_.links) result.link_ids.push_back(l.id);

        TimingReport timing;
        timing.zones.resize(project_.building.zones.size());
        for (std::size_t z = 0; z < project_.building.zones.size(); ++z)
            timing.zones[z].name = project_.building.zones[z].name;

        const double dt = project_.timestep;
        const std::int64_t period_seconds =
            to_unix_seconds(project_.period_end) - to_unix_seconds(project_.period_start);
        const int steps = static_cast<int>(period_seconds / static_cast<std::int64_t>(dt));
        const int steps_per_day =
            std::min(steps, static_cast<int>(86400.0 / dt > 0 ? 86400.0 / dt : 1));

        // Warm-up: the first simulated day repeated, excluded from results
        // and timing so the initial state decays.
        std::vector<ZoneStepOutput> outputs;
        for (int rep = 0; rep < project_.solver.warmup_repeats; ++rep) {
            for (int s = 0; s < steps_per_day; ++s) {
                advance(runtime, s, dt, outputs);
            }
        }

        const auto wall0 = std::chrono::steady_clock::now();
        for (int s = 0; s < steps; ++s) {
            advance(runtime, s, dt, outputs);
            StepRecord rec;
            rec.timestamp = step_time(s);
            rec.zones = outputs;
            for (const LinkFlowResult& lf : last_airflow_.link_flows)
                rec.link_flows.push_back(lf.mass_flow);
            if (rec.link_flows.empty()) rec.link_flows.assign(network_.links.size(), 0.0);
            result.steps.push_back(std::move(rec));
            for (std::size_t z = 0; z < outputs.size(); ++z) {
                timing.zones[z].solve_seconds += outputs[z].solve_seconds;
                timing.zones[z].iteration_counts.push_back(outputs[z].convection_iterations);
            }
        }
        timing.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
        return {std::move(result), std::move(timing)};
    }

  private:
    void init() {
        const Diagnostics diags = validate_building(project_.building);
        if (!diags.empty()) {
            std::string msg = "project building is invalid:";
            for (const auto& d : diags) msg += "\n  " + d.path + ": " + d.message;
            throw ValidationError(msg);
        }
        check_period_coverage();
        network_ = build_airflow_network(project_.building);
    }

    DateTime step_time(int step) const {
        return add_seconds(project_.period_start,
                           static_cast<std::int64_t>(step * project_.timestep));
    }

    void check_period_coverage() const {
        if (weather_.empty()) throw ValidationError("weather series is empty");
        const std::int64_t start = to_unix_seconds(project_.period_start);
        const std::int64_t end = to_unix_seconds(project_.period_end);
        if (end <= start) throw ValidationError("project period is empty");
        const std::int64_t w0 = to_unix_seconds(weather_.records.front().timestamp);
        const std::int64_t w1 = to_unix_seconds(weather_.records.back().timestamp) + 3600;
        if (start < w0 || end > w1) {
            throw ValidationError("project period " + format_datetime(project_.period_start) +
                                  " .. " + format_datetime(project_.period_end) +
                                  " is outside weather coverage " +
                                  format_datetime(weather_.records.front().timestamp) + " .. " +
                                  format_datetime(weather_.records.back().timestamp));
        }
    }

    void advance(BuildingRuntime& runtime, int step, double dt,
                 std::vector<ZoneStepOutput>& outputs) {
        try {
            advance_impl(runtime, step, dt, outputs);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("at " + format_datetime(step_time(step)) + ": " + e.what());
        }
    }

    void advance_impl(BuildingRuntime& runtime, int step, double dt,
                      std::vector<ZoneStepOutput>& outputs) {
        const DateTime t = step_time(step);
        const int idx = weather_.index_of(t);
        if (idx < 0) throw ValidationError("timestep outside weather coverage at " +
                                           format_datetime(t));
        const WeatherRecord& rec = weather_.records[idx];

        StepInputs in;
        in.hour = t.hour;
        in.outdoor_temp = rec.dry_bulb;
        in.outdoor_humidity = rec.humidity_ratio;
        in.wind_speed = rec.wind_speed;
        in.wind_direction = rec.wind_direction;
        in.sky_temp_c =
            sky_temperature(rec.dry_bulb, project_.building.models.sky_temperature) - 273.15;
        in.sizing_override = project_.sizing_override;
        in.airflow = solve_airflow(runtime, rec, t);
        last_airflow_ = in.airflow;

        runtime.begin_step(in);

        const SunPosition sun =
            solar_position(add_seconds(t, static_cast<std::int64_t>(dt / 2)),
                           project_.building.site.latitude, project_.building.site.longitude,
                           project_.building.site.utc_offset_hours);
        runtime.apply_solar({rec.global_horizontal, rec.diffuse_horizontal}, sun);

        outputs.assign(runtime.zone_count(), ZoneStepOutput{});
        runtime.couple_zones(dt, outputs);

        if (project_.solver.airflow_outer_iteration &&
            project_.building.models.airflow == AirflowModel::PressureNetwork) {
            runtime.set_airflow(solve_airflow_at(runtime, rec, current_air_temps(runtime)));
            last_airflow_ = runtime.step_inputs().airflow;
            runtime.couple_zones(dt, outputs);
        }

        runtime.finalize_step(dt, outputs);
        runtime.commit_step();
    }

    std::vector<double> current_air_temps(const BuildingRuntime& runtime) const {
        std::vector<double> t(runtime.zone_count());
        for (int z = 0; z < runtime.zone_count(); ++z) t[z] = runtime.zone_air_temperature(z);
        return t;
    }

    AirflowSolution solve_airflow(BuildingRuntime& runtime, const WeatherRecord& rec,
                                  const DateTime& t) {
        if (project_.building.models.airflow == AirflowModel::FixedRates) {
            const auto matrix = fixed_rates(project_.building, t.hour, nullptr);
            return fixed_rates_solution(matrix, runtime.zone_count());
        }
        std::vector<double> temps(runtime.zone_count());
        for (int z = 0; z < runtime.zone_count(); ++z)
            temps[z] = runtime.zone_system(z).temperatures_start(0);
        return solve_airflow_at(runtime, rec, temps);
    }

    AirflowSolution solve_airflow_at(BuildingRuntime& runtime, const WeatherRecord& rec,
                                     const std::vector<double>& temps) {
        (void)runtime;
        ExteriorConditions ext{rec.dry_bulb, rec.wind_speed, rec.wind_direction};
        return solve_pressure_network(network_, temps, ext, project_.solver.airflow_tolerance,
                                      project_.solver.airflow_max_iterations);
    }

    Project project_;
    WeatherSeries weather_;
    Diagnostics weather_diags_;
    AirflowNetwork network_;
    AirflowSolution last_airflow_;
};

inline std::pair<SimulationResult, TimingReport> run_simulation(const Project& project) {
    Engine engine(project);
    return engine.run();
}

// ---------------------------------------------------------------------------
// Result files.

inline std::string results_csv(const SimulationResult& result) {
    std::string out = "timestamp";
    for (const std::string& z : result.zone_names) {
        out += ",zone." + z + ".tair,zone." + z + ".w,zone." + z + ".p_hvac,zone." + z +
               ".clamped";
    }
    for (const std::string& l : result.link_ids) out += ",link." + l + ".mdot";
    if (result.verbose_columns) {
        for (const std::string& z : result.zone_names)
            out += ",zone." + z + ".solar_beam_w,zone." + z + ".solar_diffuse_w";
    }
    out += "\n";
    for (const StepRecord& s : result.steps) {
        out += format_datetime(s.timestamp);
        for (const ZoneStepOutput& z : s.zones) {
            out += "," + detail::format_g6(z.air_temperature);
            out += "," + detail::format_g6(z.humidity);
            out += "," + detail::format_g6(z.hvac_power);
            out += z.hvac_clamped ? ",1" : ",0";
        }
        for (double f : s.link_flows) out += "," + detail::format_g6(f);
        if (result.verbose_columns) {
            for (const ZoneStepOutput& z : s.zones) {
                out += "," + detail::format_g6(z.solar_beam_entering);
                out += "," + detail::format_g6(z.solar_diffuse_entering);
            }
        }
        out += "\n";
    }
    return out;
}

inline nlohmann::json timing_json(const TimingReport& timing) {
    nlohmann::json j;
    j["case"] = timing.case_label;
    j["wall_s"] = timing.wall_seconds;
    j["zones"] = nlohmann::json::array();
    for (const ZoneTiming& z : timing.zones) {
        j["zones"].push_back({{"name", z.name},
                              {"solve_s", z.solve_seconds},
                              {"iterations",
                               {{"min", z.min_iterations()},
                                {"median", z.median_iterations()},
                                {"max", z.max_iterations()}}}});
    }
    return j;
}

inline void write_results(const SimulationResult& result, const TimingReport& timing,
                          const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    const std::string csv_path = directory + "/results.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw IoError("cannot write " + csv_path);
    csv << results_csv(result);

    const std::string timing_path = directory + "/timing.json";
    std::ofstream tj(timing_path);
    if (!tj) throw IoError("cannot write " + timing_path);
    tj << timing_json(timing).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Selective-model comparison: runs the same project under per-zone convection
// assignments and reports temperature/power deviations against a reference
// case plus solve-time ratios.

struct CaseSpec {
    std::string label;
    std::map<std::string, ConvectionModel> assignments;  // zone name -> model
};

// The canonical assignments: A constant everywhere, B nonlinear everywhere,
// C nonlinear only in the zone of interest (the conditioned zone, falling
// back to the last declared zone).
inline CaseSpec canonical_case(const Building& b, const std::string& label) {
    CaseSpec spec;
    spec.label = label;
    ConvectionModel constant;  // constant 5 W/m²K
    ConvectionModel nonlinear;
    nonlinear.kind = ConvectionKind::Nonlinear;

    std::string interest = b.zones.empty() ? "" : b.zones.back().name;
    for (const Interzone& iz : b.interzones) {
        for (const Component& c : iz.components) {
            if (std::holds_alternative<HvacSystem>(c)) {
                interest = iz.side_a != kExterior ? iz.side_a : iz.side_b;
            }
        }
    }

    for (const Zone& z : b.zones) {
        if (label == "A")
            spec.assignments[z.name] = constant;
        else if (label == "B")
            spec.assignments[z.name] = nonlinear;
        else if (label == "C")
            spec.assignments[z.name] = z.name == interest ? nonlinear : constant;
        else
            throw ValidationError("unknown canonical case label '" + label + "'");
    }
    return spec;
}

struct CaseRun {
    std::string label;
    SimulationResult result;
    TimingReport timing;
    double max_temp_error = 0.0;   // K vs reference, zone of interest
    double max_power_error = 0.0;  // W vs reference
    double solve_seconds = 0.0;
    double time_ratio = 1.0;  // vs reference
};

struct CompareReport {
    std::string reference;
    std::string interest_zone;
    std::vector<CaseRun> cases;

    std::string table() const {
        char buf[160];
        std::string out = "case  temp_err_C  power_err_kW  time_s    ratio\n";
        for (const CaseRun& c : cases) {
            std::snprintf(buf, sizeof(buf), "%-4s  %10.3f  %12.3f  %8.4f  %5.2f\n",
                          c.label.c_str(), c.max_temp_error, c.max_power_error / 1000.0,
                          c.solve_seconds, c.time_ratio);
            out += buf;
        }
        return out;
    }
};

inline Building apply_case(const Building& base, const CaseSpec& spec) {
    Building b = base;
    for (Zone& z : b.zones) {
        const auto it = spec.assignments.find(z.name);
        if (it != spec.assignments.end()) z.convection = it->second;
    }
    return b;
}

inline CompareReport compare_cases(const Project& project, const std::vector<CaseSpec>& cases,
                                   const std::string& reference_label) {
    if (cases.size() < 2) throw ValidationError("compare needs at least two cases");

    CompareReport report;
    report.reference = reference_label;

    // Zone the errors are judged on: the conditioned zone when there is one.
    const CaseSpec canonical = canonical_case(project.building, "C");
    int interest = static_cast<int>(project.building.zones.size()) - 1;
    for (std::size_t z = 0; z < project.building.zones.size(); ++z) {
        const auto it = canonical.assignments.find(project.building.zones[z].name);
        if (it != canonical.assignments.end() && it->second.kind == ConvectionKind::Nonlinear)
            interest = static_cast<int>(z);
    }
    report.interest_zone = project.building.zones[interest].name;

    const WeatherSeries weather = load_weather(project.weather_path);

    for (const CaseSpec& spec : cases) {
        Project p = project;
        p.building = apply_case(project.building, spec);
        Engine engine(p, weather);
        CaseRun run;
        run.label = spec.label;
        auto [result, timing] = engine.run();
        timing.case_label = spec.label;
        run.result = std::move(result);
        run.timing = std::move(timing);
        run.solve_seconds = run.timing.total_solve_seconds();
        report.cases.push_back(std::move(run));
    }

    const CaseRun* ref = nullptr;
    for (const CaseRun& c : report.cases)
        if (c.label == reference_label) ref = &c;
    if (!ref) throw ValidationError("reference case '" + reference_label + "' not in case list");

    for (CaseRun& c : report.cases) {
        c.time_ratio = ref->solve_seconds > 0.0 ? c.solve_seconds / ref->solve_seconds : 1.0;
        if (c.result.steps.size() != ref->result.steps.size())
            throw ValidationError("case runs produced different step counts");
        for (std::size_t s = 0; s < c.result.steps.size(); ++s) {
            const ZoneStepOutput& a = c.result.steps[s].zones[interest];
            const ZoneStepOutput& b = ref->result.steps[s].zones[interest];
            c.max_temp_error =
                std::max(c.max_temp_error, std::abs(a.air_temperature - b.air_temperature));
            c.max_power_error =
                std::max(c.max_power_error, std::abs(a.hvac_power - b.hvac_power));
        }
    }
    return report;
}

}  // namespace zonal
