#include <sstream>
#include <string>

#include "doctest.h"
#include "hdfts/errors.hpp"
#include "hdfts/io_util.hpp"
#include "hdfts/panel_io.hpp"

using namespace hdfts;

namespace {

std::string complete_csv() {
    std::string text = "section,period,point,value\n";
    for (const char* s : {"e", "w"})
        for (int t = 1; t <= 3; ++t)
            for (int j = 0; j < 4; ++j)
                text += std::string(s) + "," + std::to_string(t) + "," +
                        std::to_string(0.25 * j) + "," + std::to_string(t + j) + "\n";
    return text;
}

}  // namespace

TEST_CASE("complete file yields the expected shapes, sorted") {
    std::istringstream in(complete_csv());
    const FunctionalPanel p = read_panel_csv(in);
    CHECK(p.section_ids == std::vector<std::string>{"e", "w"});
    CHECK(p.period_ids == std::vector<std::int64_t>{1, 2, 3});
    CHECK(p.grid.size() == 4);
    REQUIRE(p.values.size() == 2);
    CHECK(p.values[0].rows() == 3);
    CHECK(p.values[0].cols() == 4);
    CHECK(p.values[1](2, 3) == doctest::Approx(6.0));
}

TEST_CASE("a missing cell is named in the error") {
    std::string text = complete_csv();
    const auto cut = text.find("w,2,0.500000");
    REQUIRE(cut != std::string::npos);
    text.erase(cut, text.find('\n', cut) - cut + 1);
    std::istringstream in(text);
    try {
        read_panel_csv(in);
        FAIL("expected IngestError");
    } catch (const IngestError& e) {
        const std::string what = e.what();
        CHECK(what.find('w') != std::string::npos);
        CHECK(what.find('2') != std::string::npos);
        CHECK(what.find("0.5") != std::string::npos);
    }
}

TEST_CASE("malformed rows raise errors with line numbers") {
    std::string text = complete_csv();
    const auto spot = text.find("w,3,0.750000,");
    REQUIRE(spot != std::string::npos);
    text.replace(spot + 13, 1, "x");
    std::istringstream bad_value(text);
    CHECK_THROWS_AS(read_panel_csv(bad_value), const IngestError&);

    std::istringstream bad_header("id,year,age,rate\n");
    CHECK_THROWS_AS(read_panel_csv(bad_header), const ParseError&);

    std::istringstream short_row("section,period,point,value\na,1,0.0\n");
    CHECK_THROWS_AS(read_panel_csv(short_row), const ParseError&);

    std::string dup = complete_csv();
    dup += "e,1,0,99\n";
    std::istringstream duplicated(dup);
    CHECK_THROWS_AS(read_panel_csv(duplicated), const IngestError&);
}

TEST_CASE("numeric text helpers round-trip and reject junk") {
    CHECK(io::parse_double(io::format_double(0.1)).value() == doctest::Approx(0.1).epsilon(1e-16));
    CHECK(io::format_double(2.0) == "2");
    CHECK(io::parse_int("42").value() == 42);
    CHECK_FALSE(io::parse_double("12.5x").has_value());
    CHECK_FALSE(io::parse_int("4.2").has_value());
    CHECK(io::split_line("a,b,,c") ==
          std::vector<std::string_view>{"a", "b", "", "c"});
    CHECK(io::strip_cr("line\r") == "line");
}
