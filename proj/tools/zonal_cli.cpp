// Command-line front end: simulate / compare / weather synth / describe.
// Exit codes: 0 success, 2 validation or input error, 3 convergence failure.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zonal/zonal.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// "LABEL" (canonical A/B/C) or "LABEL=zone:model,zone:model,..." with model
// one of constant, per_surface, nonlinear.
zonal::CaseSpec parse_case_spec(const std::string& text, const zonal::Building& building) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) return zonal::canonical_case(building, text);

    zonal::CaseSpec spec;
    spec.label = text.substr(0, eq);
    for (const std::string& pair : split(text.substr(eq + 1), ',')) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos)
            throw zonal::ValidationError("bad --case assignment '" + pair +
                                         "', expected zone:model");
        const std::string zone = pair.substr(0, colon);
        const std::string model = pair.substr(colon + 1);
        if (building.zone_index(zone) < 0)
            throw zonal::ValidationError("--case names unknown zone '" + zone + "'");
        zonal::ConvectionModel m;
        if (model == "constant") {
            m.kind = zonal::ConvectionKind::ConstantH;
        } else if (model == "per_surface") {
            m.kind = zonal::ConvectionKind::PerSurfaceH;
        } else if (model == "nonlinear") {
            m.kind = zonal::ConvectionKind::Nonlinear;
        } else {
            throw zonal::ValidationError("unknown convection model '" + model +
                                         "' (constant | per_surface | nonlinear)");
        }
        spec.assignments[zone] = m;
    }
    return spec;
}

int run_simulate(const std::string& project_path, const std::vector<std::string>& period,
                 double timestep, bool sizing, const std::string& case_text,
                 const std::string& out_dir) {
    zonal::Project project = zonal::load_project(project_path);
    if (period.size() == 2) {
        project.period_start = zonal::parse_datetime(period[0]);
        project.period_end = zonal::parse_datetime(period[1]);
    }
    if (timestep > 0.0) project.timestep = timestep;
    if (sizing) project.sizing_override = true;
    if (!case_text.empty()) {
        const zonal::CaseSpec spec = parse_case_spec(case_text, project.building);
        project.building = zonal::apply_case(project.building, spec);
    }
    if (!out_dir.empty()) project.result_path = out_dir;

    auto [result, timing] = zonal::run_simulation(project);
    if (!case_text.empty()) timing.case_label = case_text.substr(0, case_text.find('='));
    zonal::write_results(result, timing, project.result_path);

    for (const auto& d : result.diagnostics)
        std::cerr << "warning: " << d.path << ": " << d.message << "\n";
    std::cout << "wrote " << project.result_path << "/results.csv ("
              << result.steps.size() << " steps, " << result.zone_names.size()
              << " zones)\n";
    std::cout << "wrote " << project.result_path << "/timing.json\n";
    return 0;
}

int run_compare(const std::string& project_path, const std::string& cases_text,
                const std::string& reference, const std::string& out_dir) {
    zonal::Project project = zonal::load_project(project_path);
    std::vector<zonal::CaseSpec> specs;
    for (const std::string& label : split(cases_text, ','))
        specs.push_back(parse_case_spec(label, project.building));

    const zonal::CompareReport report = zonal::compare_cases(project, specs, reference);
    std::cout << "reference: " << report.reference << "   zone of interest: "
              << report.interest_zone << "\n";
    std::cout << report.table();

    if (!out_dir.empty()) {
        for (const zonal::CaseRun& c : report.cases) {
            zonal::write_results(c.result, c.timing, out_dir + "/case_" + c.label);
        }
        std::cout << "wrote per-case results under " << out_dir << "\n";
    }
    return 0;
}

int run_weather_synth(const std::string& days_text, const std::string& out_path,
                      const std::string& start_text) {
    std::vector<zonal::SynthDay> days;
    for (const std::string& d : split(days_text, ',')) {
        if (d == "cloudy")
            days.push_back(zonal::SynthDay::Cloudy);
        else if (d == "sunny")
            days.push_back(zonal::SynthDay::Sunny);
        else
            throw zonal::ValidationError("unknown day kind '" + d + "' (cloudy | sunny)");
    }
    if (days.empty()) throw zonal::ValidationError("--days needs at least one day");
    zonal::DateTime start{2001, 2, 1, 0, 0, 0};
    if (!start_text.empty()) start = zonal::parse_datetime(start_text);
    zonal::save_weather(zonal::synth_weather(days, start), out_path);
    std::cout << "wrote " << out_path << " (" << days.size() * 24 << " rows)\n";
    return 0;
}

int run_describe(const std::string& project_path) {
    zonal::Project project = zonal::load_project(project_path);
    const zonal::Building& b = project.building;
    int components = 0;
    for (const auto& iz : b.interzones) components += static_cast<int>(iz.components.size());
    std::cout << "building: " << (b.name.empty() ? "(unnamed)" : b.name) << "\n"
              << "  zones: " << b.zones.size() << "  interzones: " << b.interzones.size()
              << "  components: " << components << "\n";
    for (const auto& z : b.zones) {
        const char* conv = z.convection.kind == zonal::ConvectionKind::ConstantH
                               ? "constant_h"
                               : z.convection.kind == zonal::ConvectionKind::PerSurfaceH
                                     ? "per_surface_h"
                                     : "nonlinear";
        std::cout << "  zone " << z.name << ": volume " << z.volume << " m3, convection "
                  << conv << "\n";
    }
    const zonal::Diagnostics diags = zonal::validate_building(b);
    if (diags.empty()) {
        std::cout << "validation: ok\n";
        return 0;
    }
    for (const auto& d : diags) std::cout << "diagnostic: " << d.path << ": " << d.message << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multizone building thermal/airflow/moisture simulation"};
    app.require_subcommand(1);

    std::string project_path, out_dir, case_text, cases_text = "A,B,C", reference = "B";
    std::vector<std::string> period;
    double timestep = 0.0;
    bool sizing = false;

    CLI::App* simulate = app.add_subcommand("simulate", "run a project and write results");
    simulate->add_option("--project", project_path, "project JSON file")->required();
    simulate->add_option("--period", period, "start and end timestamps")->expected(2);
    simulate->add_option("--timestep", timestep, "timestep in seconds");
    simulate->add_flag("--sizing", sizing, "treat every HVAC system's power as infinite");
    simulate->add_option("--case", case_text,
                         "convection assignment: LABEL or LABEL=zone:model,...");
    simulate->add_option("--out", out_dir, "output directory");

    CLI::App* compare = app.add_subcommand("compare", "run convection-model cases side by side");
    compare->add_option("--project", project_path, "project JSON file")->required();
    compare->add_option("--cases", cases_text, "comma-separated case specs (default A,B,C)");
    compare->add_option("--reference", reference, "reference case label (default B)");
    compare->add_option("--out", out_dir, "directory for per-case results");

    CLI::App* weather = app.add_subcommand("weather", "weather file utilities");
    weather->require_subcommand(1);
    std::string days_text, weather_out, start_text;
    CLI::App* synth = weather->add_subcommand("synth", "generate a synthetic day sequence");
    synth->add_option("--days", days_text, "comma-separated kinds: cloudy | sunny")->required();
    synth->add_option("--out", weather_out, "output CSV path")->required();
    synth->add_option("--start", start_text, "first day (default 2001-02-01)");

    CLI::App* describe = app.add_subcommand("describe", "validate and summarize a project");
    describe->add_option("--project", project_path, "project JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return run_simulate(project_path, period, timestep, sizing, case_text, out_dir);
        if (compare->parsed()) return run_compare(project_path, cases_text, reference, out_dir);
        if (weather->parsed()) return run_weather_synth(days_text, weather_out, start_text);
        if (describe->parsed()) return run_describe(project_path);
    } catch (const zonal::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const zonal::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zonal::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
