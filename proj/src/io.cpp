#include "stochlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stochlab/errors.hpp"

namespace stochlab {

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

namespace {

void dump(const Json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                dump(it.value(), depth + 1, out);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // flat numeric arrays stay on one line
            bool flat = true;
            for (const auto& e : j) flat = flat && e.is_primitive();
            out += flat ? "[" : "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat ? ", " : ",\n";
                first = false;
                if (!flat) out += pad;
                dump(e, depth + 1, out);
            }
            out += flat ? "]" : "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string to_json_text(const Json& j) {
    std::string out;
    dump(j, 0, out);
    out += "\n";
    return out;
}

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw ArgumentError("CsvTable: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string CsvTable::to_text() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + format_double(r[c]);
        out += "\n";
    }
    return out;
}

Json PlotData::to_json() const {
    return Json{{"x_label", x_label}, {"y_label", y_label}, {"x", x}, {"y", y}, {"yerr", yerr}};
}

PlotData PlotData::from_json(const Json& j) {
    PlotData p;
    try {
        p.x_label = j.at("x_label").get<std::string>();
        p.y_label = j.at("y_label").get<std::string>();
        p.x = j.at("x").get<std::vector<double>>();
        p.y = j.at("y").get<std::vector<double>>();
        p.yerr = j.at("yerr").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("plot data: ") + e.what());
    }
    if (p.y.size() != p.x.size() || p.yerr.size() != p.x.size())
        throw ArgumentError("plot data: x, y and yerr differ in length");
    return p;
}

CsvTable PlotData::to_csv() const {
    CsvTable t{{"x", "y", "yerr"}, {}};
    for (std::size_t i = 0; i < x.size(); ++i) t.add_row({x[i], y[i], yerr[i]});
    return t;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path);
    out << body;
    if (!out) throw ArgumentError("write failed: " + path);
}

}  // namespace stochlab
