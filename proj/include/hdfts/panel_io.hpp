#pragma once

#include <iosfwd>
#include <string>

#include "hdfts/panel.hpp"

namespace hdfts {

// Long-format panel CSV with header "section,period,point,value".
// Sections may appear in any row order; the loaded panel is canonical:
// sections sorted by id (numerically when every id is an integer),
// periods ascending, grid points ascending. Structural problems (bad
// header, wrong field count, unreadable file) throw ParseError; semantic
// problems (non-numeric fields, duplicate keys, missing cells, ragged
// sections, non-finite values) throw IngestError naming the offender.
FunctionalPanel read_panel_csv(std::istream& in, const std::string& origin = "<stream>");
FunctionalPanel read_panel_csv_file(const std::string& path);

// Writes rows grouped by section, then period, then point. Numbers use
// the shortest round-trip format, so write -> read -> write is
// byte-identical.
void write_panel_csv(std::ostream& out, const FunctionalPanel& panel);
void write_panel_csv_file(const std::string& path, const FunctionalPanel& panel);

}  // namespace hdfts
