// One line per acceptance criterion. Each criterion runs the CLI subcommands
// with the criterion's parameters and reads their verdicts; criterion 10 reruns
// every invocation and compares the JSON byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "commands.hpp"
#include "stochlab/io.hpp"

using stochlab::Json;

namespace {

struct Invocation {
    std::vector<std::string> args;
    int code;
    std::string text;
    Json record;
};

std::vector<Invocation> history;

const Json& invoke(std::vector<std::string> args) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = stochlab::cli::run(args);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string line;
    for (const auto& a : args) line += a + " ";
    std::fprintf(stderr, "  [%6.1fs] %s-> %s", secs, line.c_str(), out.err.c_str());
    Json record = out.out.empty() ? Json::object() : Json::parse(out.out);
    history.push_back({std::move(args), out.exit_code, out.out, std::move(record)});
    return history.back().record;
}

bool passed(const Json& r) { return r.contains("pass") && r["pass"].get<bool>(); }

std::string failures(const Json& r) {
    std::string s;
    if (!r.contains("checks")) return "no record";
    for (const auto& c : r["checks"])
        if (!c["pass"].get<bool>())
            s += (s.empty() ? "" : "; ") + c["name"].get<std::string>() + " " + stochlab::format_double(c["value"].get<double>()) +
                 " vs " + stochlab::format_double(c["bound"].get<double>());
    return s;
}

int failed_criteria = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed_criteria;
}

std::string fixture(const std::string& name) { return std::string(STOCHLAB_FIXTURES) + "/" + name; }

std::string num(double v) { return stochlab::format_double(v); }

void criterion_1() {
    bool ok = true;
    std::string detail;
    for (const char* D : {"3", "1", "1.4", "2", "2.5"}) {
        const auto& r = invoke({"bessel-density", "--D", D, "--grid", "10", "--seed", "1"});
        ok = ok && passed(r);
        detail += std::string("D=") + D + " mass err " + num(r["results"]["mass_error"].get<double>());
        if (r["results"].contains("closed_form_error")) detail += ", closed-form err " + num(r["results"]["closed_form_error"].get<double>());
        if (!passed(r)) detail += " [" + failures(r) + "]";
        detail += "; ";
    }
    report(1, ok, detail);
}

void criterion_2() {
    const auto& r = invoke({"cardy", "--D", "1.6666666666666667", "--x", "0.5", "--y", "1.0", "--paths", "200000", "--dt", "1e-4",
                            "--eps", "1e-2,3e-3,1e-3", "--seed", "7"});
    const auto& res = r["results"];
    std::string detail = "exact " + num(res["exact"].get<double>()) + ", mc " + num(res["mc"].get<double>()) + " +- " +
                         num(res["stderr"].get<double>()) + ", margin " + num(res["margin"].get<double>());
    const auto& ctl = invoke({"cardy", "--D", "1.2", "--x", "0.5", "--y", "1.0", "--paths", "50000", "--dt", "1e-4", "--seed", "8"});
    detail += "; D=1.2 tie frequency " + num(ctl["results"]["mc"].get<double>());
    const bool ok = passed(r) && passed(ctl);
    if (!ok) detail += " [" + failures(r) + " " + failures(ctl) + "]";
    report(2, ok, detail);
}

void criterion_3() {
    bool ok = true;
    std::string detail;
    const auto& tr = invoke({"sle-trace", "--D", "3", "--dt", "1e-4", "--horizon", "1", "--seed", "1"});
    ok = ok && passed(tr);
    detail += "hydrodynamic residual " + num(tr["results"]["hydrodynamic_residual"].get<double>());
    const auto& zero = invoke({"sle-trace", "--D", "3", "--dt", "1e-4", "--horizon", "1", "--zero-driving", "--seed", "1"});
    ok = ok && passed(zero);
    detail += ", zero driving |Re| " + num(zero["results"]["max_abs_re"].get<double>());

    struct Expect {
        const char* D;
        const char* phase;
        double dim;
    };
    for (const auto& e : {Expect{"3", "simple", 1.25}, Expect{"1.6666666666666667", "self_intersecting", 1.75},
                          Expect{"1.25", "space_filling", 2.0}}) {
        const auto& r = invoke({"sle-trace", "--D", e.D, "--dt", "1e-3", "--horizon", "0.1", "--zero-driving", "--seed", "1"});
        const bool match = r["results"]["phase"] == e.phase && std::fabs(r["results"]["hausdorff_dimension"].get<double>() - e.dim) < 1e-12;
        ok = ok && match;
        detail += std::string(", D=") + e.D + " " + r["results"]["phase"].get<std::string>();
    }
    for (const char* D : {"3", "1.6666666666666667"}) {
        const auto& r = invoke({"sle-swallow", "--D", D, "--dt", "1e-4", "--horizon", "1", "--chains", "100", "--point", "0.5,0.5",
                                "--seed", "1"});
        ok = ok && passed(r);
        detail += std::string(", swallow D=") + D + " " + num(r["results"]["points"][0]["frequency"].get<double>());
        if (!passed(r)) detail += " [" + failures(r) + "]";
    }
    report(3, ok, detail);
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    for (const char* N : {"2", "3"}) {
        const auto& r = invoke({"dyson-compare", "--N", N, "--t", "1", "--samples", "100000", "--seed", "4"});
        ok = ok && passed(r);
        double worst = 0.0;
        for (std::size_t k = 0; k < r["results"]["ks"].size(); ++k)
            worst = std::max(worst, r["results"]["ks"][k].get<double>() / r["results"]["critical"][k].get<double>());
        detail += std::string("N=") + N + " max ks/critical " + num(worst);
        if (r["results"].contains("gap_ks")) detail += ", gap ks " + num(r["results"]["gap_ks"].get<double>());
        if (!passed(r)) detail += " [" + failures(r) + "]";
        detail += "; ";
    }
    report(4, ok, detail);
}

void criterion_5() {
    bool ok = true;
    std::string detail;
    for (const char* xi : {"0.3", "-1,1", "-1.2,0.1,0.9"}) {
        const auto& r = invoke({"kernel-table", "--xi", xi, "--s", "0.5", "--t", "0.5", "--seed", "1"});
        ok = ok && passed(r);
        detail += std::string("xi={") + xi + "} mass " + num(r["results"]["mass"].get<double>()) + ", |K1-K2| " +
                  num(r["results"]["max_K1_K2_difference"].get<double>()) + "; ";
    }
    const auto& f = invoke({"fredholm", "--seed", "1"});
    ok = ok && passed(f);
    detail += "Fredholm residual ratio " + num(f["results"]["ratio"].get<double>()) + " (expected " +
              num(f["results"]["expected_ratio"].get<double>()) + ")";
    report(5, ok, detail);
}

void criterion_6() {
    const auto& r = invoke({"relax-curve", "--s", "0.5", "--t", "1", "--u", "1,2,4,8", "--grid", "5", "--seed", "1"});
    std::string detail = "sup by u=1,2,4,8:";
    for (const auto& v : r["results"]["sup"]) detail += " " + num(v.get<double>());
    if (!passed(r)) detail += " [" + failures(r) + "]";
    report(6, passed(r), detail);
}

void criterion_7() {
    const auto& r = invoke({"extremes", "--levels", "0.8,1.0,1.5,2.0", "--samples", "100000", "--dt", "1e-4", "--seed", "5"});
    std::string detail;
    for (const auto& row : r["results"]["rows"])
        detail += "h=" + num(row["h"].get<double>()) + " |mc-exact| " + num(std::fabs(row["mc"].get<double>() - row["exact"].get<double>())) +
                  " (3se+bias " + num(3 * row["stderr"].get<double>() + row["bias"].get<double>()) + "); ";
    const auto& m = r["results"]["second_moment"];
    detail += "E[H^2] xi " + num(m["xi"].get<double>()) + ", stieltjes " + num(m["stieltjes"].get<double>()) + "; N=1 reduction " +
              num(r["results"]["n1_reduction"].get<double>());
    if (!passed(r)) detail += " [" + failures(r) + "]";
    report(7, passed(r), detail);
}

void criterion_8() {
    bool ok = true;
    std::string detail;
    const auto& r = invoke({"charpoly", "--N", "2", "--alpha", "0.3,0,-1.1,0", "--sigma2", "0.7", "--samples", "1000000",
                            "--ishikawa", "100", "--seed", "6"});
    ok = ok && passed(r);
    detail += "forms gap " + num(r["results"]["determinant_forms_gap"].get<double>()) + ", det " +
              num(r["results"]["det"][0].get<double>()) + " mc " + num(r["results"]["mc"][0].get<double>()) + " +- " +
              num(r["results"]["stderr"][0].get<double>()) + ", Ishikawa " + num(r["results"]["ishikawa_max_deviation"].get<double>());
    if (!passed(r)) detail += " [" + failures(r) + "]";
    for (const char* N : {"1", "2"}) {
        const auto& ts = invoke({"charpoly", "--N", N, "--sigma2", "0.5", "--samples", "0", "--ishikawa", "0", "--ts-samples",
                                 "100000", "--t1", "0.5", "--seed", "11"});
        ok = ok && passed(ts);
        detail += std::string("; time shift N=") + N + (passed(ts) ? " pass" : " fail [" + failures(ts) + "]");
    }
    report(8, ok, detail);
}

void criterion_9() {
    bool ok = true;
    int count = 0;
    std::string detail;
    for (const char* f : {"edge2.txt", "path3.txt", "grid3_single.txt", "grid3.txt", "grid2x3.txt", "grid3x4.txt", "grid3_uneven.txt"}) {
        const auto& r = invoke({"fomin", "--net", fixture(f), "--tail", "1e-8", "--seed", "1"});
        const auto& res = r["results"];
        const bool shape = res["vertices"].get<int>() <= 12 && res["N"].get<int>() <= 2 && res["max_row_sum"].get<double>() <= 0.5;
        ok = ok && passed(r) && shape;
        ++count;
        detail += std::string(f) + " |det-brute| " + num(std::fabs(res["det"].get<double>() - res["brute"].get<double>())) +
                  " <= " + num(res["tail_bound"].get<double>()) + "; ";
    }
    report(9, ok && count >= 5, detail);
}

void criterion_10() {
    const std::size_t n = history.size();
    std::size_t same = 0;
    std::string differ;
    for (std::size_t i = 0; i < n; ++i) {
        const auto again = stochlab::cli::run(history[i].args);
        if (again.out == history[i].text && again.exit_code == history[i].code && !again.out.empty())
            ++same;
        else
            differ += history[i].args[0] + " ";
    }
    report(10, same == n, std::to_string(same) + "/" + std::to_string(n) + " reruns byte-identical" +
                              (differ.empty() ? "" : ", differing: " + differ));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria failed\n", failed_criteria);
    return failed_criteria == 0 ? 0 : 1;
}
