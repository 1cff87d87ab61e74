#include "hdfts/panel_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "hdfts/errors.hpp"
#include "hdfts/io_util.hpp"

namespace hdfts {

namespace {

constexpr const char* kHeader = "section,period,point,value";

struct RawRow {
    std::string section;
    std::int64_t period;
    double point;
    double value;
    std::size_t line_no;
};

bool all_numeric_ids(const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
        if (!io::parse_int(id)) {
            return false;
        }
    }
    return true;
}

}  // namespace

FunctionalPanel read_panel_csv(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;

    // Header.
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto stripped = io::strip_cr(line);
        if (stripped.empty()) {
            continue;
        }
        if (stripped != kHeader) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected header '" +
                             kHeader + "', got '" + std::string(stripped) + "'");
        }
        have_header = true;
        break;
    }
    if (!have_header) {
        throw ParseError(origin + ": empty input, expected header '" + std::string(kHeader) + "'");
    }

    std::vector<RawRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const auto stripped = io::strip_cr(line);
        if (stripped.empty()) {
            continue;
        }
        const auto fields = io::split_line(stripped);
        if (fields.size() != 4) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }
        RawRow row;
        row.section = std::string(fields[0]);
        row.line_no = line_no;
        if (row.section.empty()) {
            throw IngestError(origin + ":" + std::to_string(line_no) + ": empty section id");
        }
        const auto period = io::parse_int(fields[1]);
        if (!period) {
            throw IngestError(origin + ":" + std::to_string(line_no) + ": non-integer period '" +
                              std::string(fields[1]) + "'");
        }
        const auto point = io::parse_double(fields[2]);
        if (!point || !std::isfinite(*point)) {
            throw IngestError(origin + ":" + std::to_string(line_no) + ": non-numeric point '" +
                              std::string(fields[2]) + "'");
        }
        const auto value = io::parse_double(fields[3]);
        if (!value) {
            throw IngestError(origin + ":" + std::to_string(line_no) + ": non-numeric value '" +
                              std::string(fields[3]) + "'");
        }
        if (!std::isfinite(*value)) {
            throw IngestError(origin + ":" + std::to_string(line_no) + ": non-finite value '" +
                              std::string(fields[3]) + "'");
        }
        row.period = *period;
        row.point = *point;
        row.value = *value;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw IngestError(origin + ": no data rows");
    }

    // Canonical axes.
    std::vector<std::string> sections;
    {
        std::unordered_map<std::string, bool> seen;
        for (const auto& row : rows) {
            if (seen.emplace(row.section, true).second) {
                sections.push_back(row.section);
            }
        }
        if (all_numeric_ids(sections)) {
            std::sort(sections.begin(), sections.end(),
                      [](const std::string& a, const std::string& b) {
                          return *io::parse_int(a) < *io::parse_int(b);
                      });
        } else {
            std::sort(sections.begin(), sections.end());
        }
    }
    std::map<std::int64_t, std::size_t> period_index;
    std::map<double, std::size_t> point_index;
    for (const auto& row : rows) {
        period_index.emplace(row.period, 0);
        point_index.emplace(row.point, 0);
    }
    {
        std::size_t t = 0;
        for (auto& [period, idx] : period_index) {
            (void)period;
            idx = t++;
        }
        std::size_t j = 0;
        for (auto& [point, idx] : point_index) {
            (void)point;
            idx = j++;
        }
    }
    if (point_index.size() < 2) {
        throw IngestError(origin + ": panel needs at least 2 distinct grid points");
    }

    std::unordered_map<std::string, std::size_t> section_index;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        section_index.emplace(sections[i], i);
    }

    FunctionalPanel panel;
    panel.section_ids = sections;
    panel.period_ids.reserve(period_index.size());
    for (const auto& [period, idx] : period_index) {
        (void)idx;
        panel.period_ids.push_back(period);
    }
    {
        std::vector<double> pts;
        pts.reserve(point_index.size());
        for (const auto& [point, idx] : point_index) {
            (void)idx;
            pts.push_back(point);
        }
        panel.grid = Grid(std::move(pts));
    }

    const auto T = static_cast<Eigen::Index>(period_index.size());
    const auto J = static_cast<Eigen::Index>(point_index.size());
    panel.values.assign(sections.size(),
                        Eigen::MatrixXd::Constant(T, J, std::numeric_limits<double>::quiet_NaN()));

    for (const auto& row : rows) {
        const auto i = section_index.at(row.section);
        const auto t = static_cast<Eigen::Index>(period_index.at(row.period));
        const auto j = static_cast<Eigen::Index>(point_index.at(row.point));
        double& cell = panel.values[i](t, j);
        if (!std::isnan(cell)) {
            throw IngestError(origin + ":" + std::to_string(row.line_no) +
                              ": duplicate key (section '" + row.section + "', period " +
                              std::to_string(row.period) + ", point " + io::format_double(row.point) +
                              ")");
        }
        cell = row.value;
    }

    for (std::size_t i = 0; i < panel.values.size(); ++i) {
        for (Eigen::Index t = 0; t < T; ++t) {
            for (Eigen::Index j = 0; j < J; ++j) {
                if (std::isnan(panel.values[i](t, j))) {
                    throw IngestError(origin + ": missing cell (section '" + sections[i] +
                                      "', period " +
                                      std::to_string(panel.period_ids[static_cast<std::size_t>(t)]) +
                                      ", point " +
                                      io::format_double(panel.grid.point(static_cast<std::size_t>(j))) +
                                      ")");
                }
            }
        }
    }

    panel.validate();
    return panel;
}

FunctionalPanel read_panel_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file '" + path + "'");
    }
    return read_panel_csv(in, path);
}

void write_panel_csv(std::ostream& out, const FunctionalPanel& panel) {
    panel.validate();
    out << kHeader << '\n';
    for (std::size_t i = 0; i < panel.n_sections(); ++i) {
        for (std::size_t t = 0; t < panel.n_periods(); ++t) {
            for (std::size_t j = 0; j < panel.n_points(); ++j) {
                out << panel.section_ids[i] << ',' << panel.period_ids[t] << ','
                    << io::format_double(panel.grid.point(j)) << ','
                    << io::format_double(panel.values[i](static_cast<Eigen::Index>(t),
                                                         static_cast<Eigen::Index>(j)))
                    << '\n';
            }
        }
    }
}

void write_panel_csv_file(const std::string& path, const FunctionalPanel& panel) {
    std::ofstream out(path);
    if (!out) {
        throw IngestError("cannot open file '" + path + "' for writing");
    }
    write_panel_csv(out, panel);
    out.flush();
    if (!out) {
        throw IngestError("failed writing file '" + path + "'");
    }
}

}  // namespace hdfts
