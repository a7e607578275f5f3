#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace stochlab {

// Insertion-ordered so a record prints in the order it was built.
using Json = nlohmann::ordered_json;

// 17 significant digits; always carries a '.' or exponent so it reads back as a float.
std::string format_double(double v);

// Pretty JSON with every float through format_double. Non-finite floats become null.
std::string to_json_text(const Json& j);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::string to_text() const;
};

// x, y, yerr columns for an external plotting tool.
struct PlotData {
    std::string x_label, y_label;
    std::vector<double> x, y, yerr;

    Json to_json() const;
    static PlotData from_json(const Json& j);
    CsvTable to_csv() const;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& body);

}  // namespace stochlab
