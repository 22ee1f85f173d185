#include "output.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ptexp::cli {

namespace {

Json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        return std::isfinite(v) ? Json(v) : Json(format_double(v));
    }
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string cell_csv(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) return csv_quote(std::get<std::string>(c));
    return "";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Cell parse_cell(const std::string& s) {
    if (s.empty()) return nullptr;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
    return s;
}

}  // namespace

Json to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["params"] = {{"a", m.has_a ? Json(m.params.a) : Json(nullptr)},
                   {"g", m.has_g ? Json(m.params.g) : Json(nullptr)}};
    Json opts = Json::object();
    for (const auto& [k, v] : m.options) opts[k] = v;
    j["options"] = opts;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    return j;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Json document_json(const Document& doc) {
    Json data = doc.meta;
    for (const Table& t : doc.tables) {
        Json rows = Json::array();
        for (const auto& row : t.rows) {
            Json rec = Json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
            rows.push_back(std::move(rec));
        }
        data[t.name] = std::move(rows);
    }
    return Json{{"manifest", to_json(doc.manifest)}, {"data", std::move(data)}};
}

void write_json(const Document& doc, std::ostream& os) { os << document_json(doc).dump(2) << '\n'; }

void write_csv(const Document& doc, std::ostream& os) {
    os << "# manifest: " << to_json(doc.manifest).dump() << '\n';
    for (const auto& [k, v] : doc.meta.items()) os << "# " << k << ": " << v.dump() << '\n';
    for (const Table& t : doc.tables) {
        os << "# table: " << t.name << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
            os << '\n';
        }
    }
}

std::vector<Table> read_csv_tables(const std::string& text) {
    std::vector<Table> out;
    std::istringstream is(text);
    std::string line;
    bool want_header = false;
    while (std::getline(is, line)) {
        if (line.rfind("# table: ", 0) == 0) {
            out.push_back(Table{line.substr(9), {}, {}});
            want_header = true;
        } else if (line.empty() || line[0] == '#') {
            continue;
        } else if (out.empty()) {
            continue;
        } else if (want_header) {
            out.back().columns = split_csv_line(line);
            want_header = false;
        } else {
            std::vector<Cell> row;
            for (const auto& f : split_csv_line(line)) row.push_back(parse_cell(f));
            out.back().rows.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace ptexp::cli
