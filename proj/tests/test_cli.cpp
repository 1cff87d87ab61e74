#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hdfts/cli.hpp"
#include "hdfts/panel.hpp"
#include "hdfts/panel_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Mortality-like panel: two sections, ages 60..90, periods 1980..2019,
// rates rising in age and falling in period.
hdfts::FunctionalPanel mortality_panel() {
    hdfts::FunctionalPanel p;
    p.grid = hdfts::Grid::uniform(60.0, 90.0, 31);
    p.section_ids = {"north", "south"};
    for (std::int64_t t = 1980; t <= 2019; ++t) p.period_ids.push_back(t);
    for (int i = 0; i < 2; ++i) {
        Eigen::MatrixXd m(40, 31);
        for (Eigen::Index t = 0; t < 40; ++t)
            for (Eigen::Index j = 0; j < 31; ++j) {
                const double age = 60.0 + static_cast<double>(j);
                m(t, j) = std::exp(-9.5 + 0.09 * (age - 60.0) - 0.012 * static_cast<double>(t) +
                                   0.05 * i + 0.02 * std::sin(0.9 * static_cast<double>(t) + 0.3 * j));
            }
        p.values.push_back(m);
    }
    return p;
}

int count_lines(const fs::path& path) {
    std::ifstream in(path);
    int n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("simulate twice with the same flags is byte-identical") {
    testsupport::TempDir dir;
    const std::string d1 = (dir.path() / "one").string();
    const std::string d2 = (dir.path() / "two").string();
    const std::vector<std::string> base = {"simulate", "--N", "4", "--T", "8", "--seed", "7"};
    auto args1 = base;
    args1.insert(args1.end(), {"--out", d1});
    auto args2 = base;
    args2.insert(args2.end(), {"--out", d2});
    REQUIRE(hdfts::cli::run(args1) == 0);
    REQUIRE(hdfts::cli::run(args2) == 0);
    const std::string a = slurp(fs::path(d1) / "panel.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(fs::path(d2) / "panel.csv"));
    CHECK(fs::exists(fs::path(d1) / "truth_front.csv"));
    CHECK(fs::exists(fs::path(d1) / "truth_back.csv"));
    CHECK(fs::exists(fs::path(d1) / "truth_factors.csv"));
    CHECK(fs::exists(fs::path(d1) / "config_echo.txt"));
}

TEST_CASE("unknown flags and missing inputs exit with code 2") {
    CHECK(hdfts::cli::run({"simulate", "--bogus", "1"}) == 2);
    CHECK(hdfts::cli::run({"fit", "--panel", "/nonexistent/panel.csv", "--out", "/tmp/x"}) == 2);
    CHECK(hdfts::cli::run({"frobnicate"}) == 2);
}

TEST_CASE("fit, forecast and price run end to end on a mortality-like panel") {
    testsupport::TempDir dir;
    const hdfts::FunctionalPanel panel = mortality_panel();
    const std::string panel_path = (dir.path() / "panel.csv").string();
    hdfts::write_panel_csv_file(panel_path, panel);

    const std::string fit_dir = (dir.path() / "fit").string();
    REQUIRE(hdfts::cli::run({"fit", "--panel", panel_path, "--transform", "log", "--out",
                             fit_dir}) == 0);
    CHECK(fs::exists(fs::path(fit_dir) / "fit_summary.txt"));
    CHECK(fs::exists(fs::path(fit_dir) / "means.csv"));
    CHECK(fs::exists(fs::path(fit_dir) / "back_loadings.csv"));
    CHECK(fs::exists(fs::path(fit_dir) / "front_loadings.csv"));
    CHECK(fs::exists(fs::path(fit_dir) / "factors.csv"));
    CHECK(fs::exists(fs::path(fit_dir) / "fitted.csv"));

    const std::string fc_dir = (dir.path() / "fc").string();
    REQUIRE(hdfts::cli::run({"forecast", "--panel", panel_path, "--transform", "log", "--Hmax",
                             "3", "--no-intervals", "--out", fc_dir}) == 0);
    const fs::path fc_csv = fs::path(fc_dir) / "forecast.csv";
    REQUIRE(fs::exists(fc_csv));
    // header + one row per (section, horizon, age)
    CHECK(count_lines(fc_csv) == 1 + 2 * 3 * 31);

    const std::string pr_dir = (dir.path() / "price").string();
    REQUIRE(hdfts::cli::run({"price", "--panel", panel_path, "--transform", "log", "--train",
                             "35", "--ages", "85", "--periods", "2015", "--interest", "0.02",
                             "--out", pr_dir}) == 0);
    const fs::path pr_csv = fs::path(pr_dir) / "pricing.csv";
    REQUIRE(fs::exists(pr_csv));

    std::ifstream in(pr_csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "section,age,period,pv_true,pv_forecast,error");
    int rows = 0;
    while (std::getline(in, line) && !line.empty()) {
        ++rows;
        std::istringstream cells(line);
        std::string field;
        for (int skip = 0; skip < 3; ++skip) std::getline(cells, field, ',');
        std::getline(cells, field, ',');
        const double pv_true = std::stod(field);
        std::getline(cells, field, ',');
        const double pv_forecast = std::stod(field);
        // age 85: at most five 1-per-year payments, discounted
        CHECK(pv_true > 0.0);
        CHECK(pv_true < 5.0);
        CHECK(pv_forecast > 0.0);
        CHECK(pv_forecast < 5.0);
    }
    CHECK(rows == 3);  // two sections + the cross-section mean
}
