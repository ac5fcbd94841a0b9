// Hourly weather series: CSV ingestion with validation, and a synthetic
// two-regime (cloudy/sunny) generator for reproducible studies.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zonal/datetime.hpp"
#include "zonal/errors.hpp"

namespace zonal {

struct WeatherRecord {
    DateTime timestamp;
    double global_horizontal = 0.0;   // Gh, W/m²
    double diffuse_horizontal = 0.0;  // dh, W/m²
    double dry_bulb = 20.0;           // °C
    double humidity_ratio = 0.010;    // kg water / kg dry air
    double wind_speed = 0.0;          // m/s
    double wind_direction = 0.0;      // degrees from north, direction wind blows FROM
};

struct WeatherSeries {
    std::vector<WeatherRecord> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }

    // Index of the record whose hour contains `t`; -1 when out of coverage.
    int index_of(const DateTime& t) const {
        if (records.empty()) return -1;
        const std::int64_t start = to_unix_seconds(records.front().timestamp);
        const std::int64_t s = to_unix_seconds(t);
        if (s < start) return -1;
        const std::int64_t idx = (s - start) / 3600;
        if (idx >= static_cast<std::int64_t>(records.size())) return -1;
        return static_cast<int>(idx);
    }

    double mean_dry_bulb() const {
        if (records.empty()) return 15.0;
        double sum = 0.0;
        for (const auto& r : records) sum += r.dry_bulb;
        return sum / static_cast<double>(records.size());
    }
};

inline const char* kWeatherHeader = "timestamp,gh,dh,tdb,w,wind_speed,wind_dir";

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace detail

// Parses and validates the hourly weather CSV. Rows with dh > Gh are clamped
// (diagnostic); structural problems (missing column, nonmonotonic or gapped
// hours) throw IoError naming the row.
inline WeatherSeries load_weather(const std::string& path, Diagnostics* diags = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weather file: " + path);

    WeatherSeries series;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty weather file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kWeatherHeader) {
        throw IoError(path + ": bad header, expected '" + std::string(kWeatherHeader) +
                      "', got '" + line + "'");
    }

    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 7) {
            throw IoError(path + ": row " + std::to_string(row) + ": expected 7 columns, got " +
                          std::to_string(fields.size()));
        }
        WeatherRecord rec;
        try {
            rec.timestamp = parse_datetime(fields[0]);
            rec.global_horizontal = std::stod(fields[1]);
            rec.diffuse_horizontal = std::stod(fields[2]);
            rec.dry_bulb = std::stod(fields[3]);
            rec.humidity_ratio = std::stod(fields[4]);
            rec.wind_speed = std::stod(fields[5]);
            rec.wind_direction = std::stod(fields[6]);
        } catch (const std::exception& e) {
            throw IoError(path + ": row " + std::to_string(row) + ": " + e.what());
        }
        if (rec.global_horizontal < 0.0 || rec.diffuse_horizontal < 0.0) {
            throw IoError(path + ": row " + std::to_string(row) + ": negative irradiance");
        }
        if (rec.diffuse_horizontal > rec.global_horizontal) {
            if (diags) {
                diags->push_back({"weather row " + std::to_string(row),
                                  "dh > gh, clamped to gh"});
            }
            rec.diffuse_horizontal = rec.global_horizontal;
        }
        if (!series.records.empty()) {
            const std::int64_t prev = to_unix_seconds(series.records.back().timestamp);
            const std::int64_t cur = to_unix_seconds(rec.timestamp);
            if (cur <= prev) {
                throw IoError(path + ": row " + std::to_string(row) +
                              ": nonmonotonic timestamp " + format_datetime(rec.timestamp));
            }
            if (cur - prev != 3600) {
                throw IoError(path + ": row " + std::to_string(row) + ": gap before " +
                              format_datetime(rec.timestamp) + " (expected hourly cadence)");
            }
        }
        series.records.push_back(rec);
    }
    return series;
}

inline void save_weather(const WeatherSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write weather file: " + path);
    out << kWeatherHeader << "\n";
    char buf[256];
    for (const auto& r : series.records) {
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                      format_datetime(r.timestamp).c_str(), r.global_horizontal,
                      r.diffuse_horizontal, r.dry_bulb, r.humidity_ratio, r.wind_speed,
                      r.wind_direction);
        out << buf;
    }
}

enum class SynthDay { Cloudy, Sunny };

// Deterministic synthetic day sequence: sunny days carry a sinusoidal Gh with
// dh = 0.15*Gh, cloudy days a low Gh with dh = 0.90*Gh; dry bulb swings
// 22..30 °C peaking mid-afternoon. Stands in for a measured tropical summer
// sequence where no hourly file is available.
inline WeatherSeries synth_weather(const std::vector<SynthDay>& days,
                                   DateTime start = DateTime{2001, 2, 1, 0, 0, 0}) {
    WeatherSeries series;
    DateTime t = start;
    for (const SynthDay day : days) {
        for (int h = 0; h < 24; ++h) {
            WeatherRecord r;
            r.timestamp = t;
            const double hc = h + 0.5;  // row covers [h, h+1)
            const double up = std::max(0.0, std::sin(kPi * (hc - 6.0) / 12.0));
            if (day == SynthDay::Sunny) {
                r.global_horizontal = 900.0 * up;
                r.diffuse_horizontal = 0.15 * r.global_horizontal;
            } else {
                r.global_horizontal = 220.0 * up;
                r.diffuse_horizontal = 0.90 * r.global_horizontal;
            }
            r.dry_bulb = 26.0 + 4.0 * std::sin(2.0 * kPi * (hc - 9.0) / 24.0);
            r.humidity_ratio = 0.015;
            r.wind_speed = 3.0;
            r.wind_direction = 90.0;  // easterly trade wind
            series.records.push_back(r);
            t = add_seconds(t, 3600);
        }
    }
    return series;
}

}  // namespace zonal
