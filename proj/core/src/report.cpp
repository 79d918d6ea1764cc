#include "skewprod/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

namespace skewprod {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1.0.0";

ordered_json json_double(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json test_to_json(const TestReport& t) {
    ordered_json j;
    j["name"] = t.name;
    j["statistic"] = json_double(t.statistic);
    j["null_scale"] = json_double(t.null_scale);
    j["z_score"] = json_double(t.z_score);
    j["p_value"] = json_double(t.p_value);
    j["verdict"] = t.verdict ? "pass" : "fail";
    j["expected"] = t.expected;
    j["tolerance"] = json_double(t.tolerance);
    return j;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " +
                      ec.message());
    }
}

}  // namespace

std::string report_json_string(const RunSpec& spec,
                               const std::vector<SuiteResult>& results) {
    ordered_json root;
    root["schema_version"] = kSchemaVersion;

    ordered_json params;
    params["suite"] = spec.suite;
    params["scenario"] = spec.scenario;
    params["dt"] = json_double(spec.dt);
    params["horizon"] = json_double(spec.horizon);
    params["n_paths"] = spec.n_paths;
    params["seed"] = spec.seed;
    params["alpha"] = json_double(spec.alpha);
    root["params"] = params;

    bool all_ok = true;
    ordered_json suites = ordered_json::array();
    for (const auto& r : results) {
        ordered_json s;
        s["suite"] = r.suite;
        s["scenario"] = r.scenario;
        s["paths_used"] = r.paths_used;
        s["det_crossings"] = r.det_crossings;
        ordered_json tests = ordered_json::array();
        for (const auto& t : r.tests) tests.push_back(test_to_json(t));
        s["tests"] = tests;
        suites.push_back(s);
        all_ok = all_ok && r.all_as_expected();
    }
    root["suites"] = suites;
    root["all_as_expected"] = all_ok;
    return root.dump(2) + "\n";
}

std::string report_csv_string(const std::vector<SuiteResult>& results) {
    std::string out =
        "suite,name,statistic,null_scale,z_score,p_value,verdict,expected,"
        "tolerance\n";
    for (const auto& r : results) {
        for (const auto& t : r.tests) {
            out += r.suite;
            out += ',';
            out += t.name;
            out += ',';
            out += format_double(t.statistic);
            out += ',';
            out += format_double(t.null_scale);
            out += ',';
            out += format_double(t.z_score);
            out += ',';
            out += format_double(t.p_value);
            out += ',';
            out += t.verdict ? "pass" : "fail";
            out += ',';
            out += t.expected;
            out += ',';
            out += format_double(t.tolerance);
            out += '\n';
        }
    }
    return out;
}

std::string summary_text(const std::vector<SuiteResult>& results) {
    std::string out;
    char line[256];
    bool all_ok = true;
    for (const auto& r : results) {
        std::snprintf(line, sizeof(line), "suite %s (%s), %zu paths\n",
                      r.suite.c_str(), r.scenario.c_str(), r.paths_used);
        out += line;
        if (!r.det_crossings.empty()) {
            std::snprintf(line, sizeof(line),
                          "  %zu path(s) aborted on determinant sign loss\n",
                          r.det_crossings.size());
            out += line;
        }
        for (const auto& t : r.tests) {
            all_ok = all_ok && t.as_expected();
            std::snprintf(line, sizeof(line),
                          "  %-4s %-38s verdict=%-4s expected=%-4s z=%-11.4g "
                          "p=%.4g\n",
                          t.as_expected() ? "ok" : "DEV", t.name.c_str(),
                          t.verdict ? "pass" : "fail", t.expected.c_str(),
                          t.z_score, t.p_value);
            out += line;
        }
    }
    out += all_ok ? "overall: every verdict matched its expected polarity\n"
                  : "overall: DEVIATION, at least one verdict differed from "
                    "its expected polarity\n";
    return out;
}

std::vector<std::string> write_reports(const RunSpec& spec,
                                       const std::vector<SuiteResult>& results) {
    const fs::path dir(spec.out_dir);
    ensure_dir(dir);
    std::vector<std::string> written;
    auto emit = [&](const char* name, const std::string& body) {
        const fs::path p = dir / name;
        write_file(p, body);
        written.push_back(p.string());
    };
    if (spec.format_json) emit("report.json", report_json_string(spec, results));
    if (spec.format_csv) emit("report.csv", report_csv_string(results));
    emit("summary.txt", summary_text(results));
    return written;
}

namespace {

std::string trace_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "path_%05zu.csv", index);
    return buf;
}

void dump_planar(const fs::path& dir, const std::vector<SamplePath<Vec2>>& paths) {
    char line[128];
    for (std::size_t p = 0; p < paths.size(); ++p) {
        std::string body = "time,x1,x2\n";
        const auto& path = paths[p];
        for (std::size_t k = 0; k < path.size(); ++k) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n",
                          path.grid.time(k), path.values[k].x, path.values[k].y);
            body += line;
        }
        write_file(dir / trace_name(p), body);
    }
}

}  // namespace

void dump_suite_paths(const RunSpec& spec, const std::string& suite) {
    ScenarioConfig config;
    config.name = scenario_from_name(scenario_for_suite(suite));
    config.grid = spec.grid();
    config.n_paths = spec.n_paths;
    config.seed = primary_ensemble_key(suite, spec.seed);

    const fs::path dir = fs::path(spec.out_dir) / "paths" / suite;
    ensure_dir(dir);

    switch (config.name) {
        case Scenario::planar_bm:
            dump_planar(dir, planar_bm(config));
            return;
        case Scenario::rotated_bm:
            dump_planar(dir, rotated_bm(config));
            return;
        case Scenario::matrix_diffusion: {
            const MatrixEnsemble ensemble = matrix_diffusion(config);
            const std::set<std::size_t> crossed(ensemble.crossed_paths.begin(),
                                                ensemble.crossed_paths.end());
            char line[192];
            std::size_t next = 0;
            for (std::size_t p = 0; p < config.n_paths; ++p) {
                if (crossed.count(p)) continue;
                const auto& path = ensemble.paths[next++];
                std::string body = "time,a,b,c,d\n";
                for (std::size_t k = 0; k < path.size(); ++k) {
                    const Mat2& m = path.values[k];
                    std::snprintf(line, sizeof(line),
                                  "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                  path.grid.time(k), m.a, m.b, m.c, m.d);
                    body += line;
                }
                write_file(dir / trace_name(p), body);
            }
            return;
        }
    }
    throw UnknownScenario(scenario_name(config.name));
}

}  // namespace skewprod
