// Output documents: a manifest, scalar metadata and named tables, written as
// one JSON object {manifest, data} or as CSV with '#' comment lines.

#ifndef PTEXP_TOOLS_OUTPUT_HPP
#define PTEXP_TOOLS_OUTPUT_HPP

#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ptexp/model.hpp"

namespace ptexp::cli {

using Json = nlohmann::ordered_json;

struct RunManifest {
    std::string command;
    PotentialParams params;
    bool has_a = true, has_g = true;
    std::map<std::string, std::string> options;
    std::string tool_version;
    std::string timestamp;
};

Json to_json(const RunManifest& m);

/// null is written as an empty CSV field.
using Cell = std::variant<std::nullptr_t, double, long long, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Document {
    RunManifest manifest;
    Json meta = Json::object();  ///< scalar and nested results besides the tables
    std::vector<Table> tables;
};

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

Json document_json(const Document& doc);
void write_json(const Document& doc, std::ostream& os);
/// "# manifest: {...}", one "# key: value" line per meta entry, then for each
/// table "# table: name", the header row and the records.
void write_csv(const Document& doc, std::ostream& os);

/// Parses write_csv output back into tables (cells as double, or string when
/// they do not parse as numbers; empty fields become null).
std::vector<Table> read_csv_tables(const std::string& text);

}  // namespace ptexp::cli

#endif
