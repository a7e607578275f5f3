#include <cmath>
#include <limits>

#include "doctest.h"
#include "stochlab/errors.hpp"
#include "stochlab/io.hpp"

using namespace stochlab;

TEST_SUITE("io") {

TEST_CASE("doubles print with 17 significant digits and round-trip") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(-2.0 / 3.0 * 1e-300) == "-6.6666666666666668e-301");
    for (double v : {1.0 / 3.0, 6.02214076e23, -1e-17, 0.0}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("JSON text keeps insertion order and full precision") {
    Json j;
    j["z"] = 0.1;
    j["a"] = Json::array({1, 2.0, "s"});
    j["n"] = std::nan("");
    j["o"] = Json::object();
    const std::string text = to_json_text(j);
    CHECK(text == "{\n  \"z\": 0.10000000000000001,\n  \"a\": [1, 2.0, \"s\"],\n  \"n\": null,\n  \"o\": {}\n}\n");
    const auto back = Json::parse(text);
    CHECK(back["z"].get<double>() == 0.1);
    CHECK(to_json_text(back).size() == text.size());
}

TEST_CASE("CSV table and plot data") {
    CsvTable t{{"x", "y"}, {}};
    t.add_row({0.5, 1.0 / 3.0});
    CHECK(t.to_text() == "x,y\n0.5,0.33333333333333331\n");
    CHECK_THROWS_AS(t.add_row({1.0}), ArgumentError);

    PlotData p{"u", "sup", {1, 2}, {0.3, 0.2}, {0, 0}};
    const auto q = PlotData::from_json(Json::parse(to_json_text(p.to_json())));
    CHECK(q.y == p.y);
    CHECK(q.to_csv().to_text() == "x,y,yerr\n1.0,0.29999999999999999,0.0\n2.0,0.20000000000000001,0.0\n");
    CHECK_THROWS_AS(PlotData::from_json(Json{{"x", 1}}), ArgumentError);
}

}
