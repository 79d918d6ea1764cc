#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "skewprod/report.hpp"

using namespace skewprod;
namespace fs = std::filesystem;

namespace {

SuiteResult fake_result() {
    SuiteResult r;
    r.suite = "example1";
    r.scenario = "planar_bm";
    r.paths_used = 7;
    r.tests.push_back(make_z_report("plain_z", 1.0, 0.5, 0.01));
    TestReport tol = make_tolerance_report("out_of_bounds", 0.2, 0.1);
    tol.expected = "fail";
    r.tests.push_back(tol);
    return r;
}

fs::path fresh_dir(const char* leaf) {
    const fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    return dir;
}

std::size_t count_lines(const fs::path& p, std::string* first = nullptr) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (n == 0 && first) *first = line;
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("json report shape") {
    RunSpec spec;
    spec.n_paths = 7;
    const std::vector<SuiteResult> results{fake_result()};
    const std::string text = report_json_string(spec, results);
    CHECK(text.back() == '\n');
    CHECK(text == report_json_string(spec, results));

    const auto j = nlohmann::json::parse(text);
    CHECK(j["schema_version"] == "1.0.0");
    CHECK(j["params"]["suite"] == "all");
    CHECK(j["params"]["seed"] == spec.seed);
    CHECK(j["params"]["n_paths"] == 7);
    CHECK(j["suites"].size() == 1);
    const auto& s = j["suites"][0];
    CHECK(s["scenario"] == "planar_bm");
    CHECK(s["det_crossings"].empty());
    CHECK(s["tests"].size() == 2);
    CHECK(s["tests"][0]["name"] == "plain_z");
    CHECK(s["tests"][0]["verdict"] == "pass");
    // NaN fields serialize as null so the document stays valid JSON
    CHECK(s["tests"][0]["tolerance"].is_null());
    CHECK(s["tests"][1]["p_value"].is_null());
    CHECK(s["tests"][1]["verdict"] == "fail");
    CHECK(s["tests"][1]["expected"] == "fail");
    CHECK(j["all_as_expected"] == true);

    std::vector<SuiteResult> broken{fake_result()};
    broken[0].tests[1].expected = "pass";
    const auto j2 = nlohmann::json::parse(report_json_string(spec, broken));
    CHECK(j2["all_as_expected"] == false);
}

TEST_CASE("csv report rows") {
    const std::vector<SuiteResult> results{fake_result()};
    std::istringstream in(report_csv_string(results));
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "suite,name,statistic,null_scale,z_score,p_value,verdict,expected,"
          "tolerance");
    std::getline(in, line);
    CHECK(line.rfind("example1,plain_z,1,0.5,2,", 0) == 0);
    std::getline(in, line);
    CHECK(line.find(",nan") != std::string::npos);
    CHECK(line.find(",fail,fail,") != std::string::npos);
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("summary text marks deviations") {
    std::vector<SuiteResult> results{fake_result()};
    std::string s = summary_text(results);
    CHECK(s.find("suite example1 (planar_bm), 7 paths") != std::string::npos);
    CHECK(s.find("DEV") == std::string::npos);
    CHECK(s.find("every verdict matched") != std::string::npos);

    results[0].tests[1].expected = "pass";
    results[0].det_crossings = {3};
    s = summary_text(results);
    CHECK(s.find("DEV") != std::string::npos);
    CHECK(s.find("DEVIATION") != std::string::npos);
    CHECK(s.find("1 path(s) aborted on determinant sign loss") != std::string::npos);
}

TEST_CASE("report files land in the output directory") {
    RunSpec spec;
    spec.format_csv = true;
    const fs::path dir = fresh_dir("skewprod_report_test");
    spec.out_dir = dir.string();
    const auto written = write_reports(spec, {fake_result()});
    REQUIRE(written.size() == 3);
    for (const auto& p : written) CHECK(fs::exists(p));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "summary.txt"));
    fs::remove_all(dir);
}

TEST_CASE("an unwritable output directory raises IoError") {
    const fs::path file = fresh_dir("skewprod_report_blocker");
    std::ofstream(file).put('x');
    RunSpec spec;
    spec.out_dir = (file / "sub").string();
    CHECK_THROWS_AS(write_reports(spec, {fake_result()}), IoError&);
    fs::remove_all(file);
}

TEST_CASE("trace dumps reproduce the analyzed ensembles") {
    RunSpec spec;
    spec.dt = 0.05;
    spec.horizon = 1.0;
    spec.n_paths = 3;
    const fs::path dir = fresh_dir("skewprod_dump_test");
    spec.out_dir = dir.string();

    dump_suite_paths(spec, "example1");
    const fs::path planar = dir / "paths" / "example1";
    std::string header;
    for (int p = 0; p < 3; ++p) {
        char name[32];
        std::snprintf(name, sizeof(name), "path_%05d.csv", p);
        CHECK(count_lines(planar / name, &header) == 22);
        CHECK(header == "time,x1,x2");
    }
    {
        std::ifstream in(planar / "path_00000.csv");
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        CHECK(line == "0,1,0");
    }

    dump_suite_paths(spec, "example3");
    CHECK(count_lines(dir / "paths" / "example3" / "path_00000.csv", &header) ==
          22);
    CHECK(header == "time,a,b,c,d");
    fs::remove_all(dir);
}
