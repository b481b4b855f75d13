// hypcount: experiment runner for hyperbolic orbit counting.
//
// Subcommands: count-orbit, count-conj, count-adjusted, fit-growth,
// ratio-test, sigma-quad, check <suite>.  Flags mirror the JSON config file
// (--config loads defaults, explicit flags override).  Every run writes a
// JSON report (plus a CSV next to it when count series are present).  The
// report is byte-identical across runs with the same config and seed except
// for the "timestamp" field, which also carries the wall clock.
//
// Exit codes: 0 success, 1 property or threshold failure, 2 config error,
// 3 incomplete enumeration in a fit-bearing experiment.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypc/adjust.hpp"
#include "hypc/counting.hpp"
#include "hypc/fuchsian.hpp"
#include "hypc/measures.hpp"
#include "hypc/plane.hpp"
#include "hypc/properties.hpp"

using nlohmann::json;

namespace {

struct Options {
    std::string config_path;
    std::string group = "bolza";
    std::vector<double> x{0.0, 1.0};
    std::vector<double> y{0.0, 1.0};
    std::vector<int> class_word{0};
    std::string pair = "zero";
    std::string pair_b = "zero";
    std::vector<double> T_explicit;
    double t_from = 2.0;
    double t_to = 6.0;
    double t_step = 0.5;
    int word_cap = 9;
    int n_nodes = 128;
    unsigned long long seed = 1;
    int samples = 500;
    std::string suite = "all";
    double expected_slope = std::numeric_limits<double>::quiet_NaN();
    double max_rel_dev = 0.0;  // 0 = report only, no threshold
    std::string on = "orbit";  // fit-growth target series
    bool direct = false;       // count-conj without canonicalization
    std::string out = "report.json";
};

[[noreturn]] void bad_config(const std::string& msg) {
    throw std::invalid_argument(msg);
}

std::vector<int> parse_int_list(const json& j, const std::string& key) {
    if (!j.is_array()) bad_config(key + " must be an array of integers");
    std::vector<int> v;
    for (const auto& e : j) {
        if (!e.is_number_integer()) bad_config(key + " must hold integers");
        v.push_back(e.get<int>());
    }
    return v;
}

void apply_config_file(const std::string& path, Options& o) {
    std::ifstream f(path);
    if (!f) bad_config("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        bad_config("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) bad_config("config root must be a JSON object");
    if (j.contains("class_word") && j.contains("class_letter"))
        bad_config("give class_word or class_letter, not both");
    for (const auto& [key, val] : j.items()) {
        if (key == "group") o.group = val.get<std::string>();
        else if (key == "x") o.x = val.get<std::vector<double>>();
        else if (key == "y") o.y = val.get<std::vector<double>>();
        else if (key == "class_word") o.class_word = parse_int_list(val, key);
        else if (key == "class_letter") o.class_word = {val.get<int>()};
        else if (key == "pair") o.pair = val.get<std::string>();
        else if (key == "pair_b") o.pair_b = val.get<std::string>();
        else if (key == "T_grid") {
            if (val.is_array()) o.T_explicit = val.get<std::vector<double>>();
            else if (val.is_object()) {
                o.T_explicit.clear();
                o.t_from = val.at("from").get<double>();
                o.t_to = val.at("to").get<double>();
                o.t_step = val.at("step").get<double>();
            } else bad_config("T_grid must be an array or {from,to,step}");
        } else if (key == "word_cap") o.word_cap = val.get<int>();
        else if (key == "n_nodes") o.n_nodes = val.get<int>();
        else if (key == "seed") o.seed = val.get<unsigned long long>();
        else if (key == "samples") o.samples = val.get<int>();
        else if (key == "suite") o.suite = val.get<std::string>();
        else if (key == "expected_slope") o.expected_slope = val.get<double>();
        else if (key == "max_rel_dev") o.max_rel_dev = val.get<double>();
        else if (key == "on") o.on = val.get<std::string>();
        else if (key == "direct") o.direct = val.get<bool>();
        else if (key == "out") o.out = val.get<std::string>();
        else bad_config("unknown config key: " + key);
    }
}

hypc::HPoint parse_point(const std::vector<double>& v, const char* name) {
    if (v.size() != 2) bad_config(std::string(name) + " needs two coordinates");
    if (!(v[1] > 0.0)) bad_config(std::string(name) + " must lie in the upper half-plane (second coordinate > 0)");
    return hypc::HPoint{v[0], v[1]};
}

std::vector<double> resolve_grid(const Options& o) {
    std::vector<double> g = o.T_explicit;
    if (g.empty()) {
        if (!(o.t_step > 0.0)) bad_config("tstep must be positive");
        if (o.t_to < o.t_from) bad_config("tmax must be >= tmin");
        for (double t = o.t_from; t <= o.t_to + 1e-9; t += o.t_step) g.push_back(t);
    }
    if (g.empty()) bad_config("empty T grid");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) bad_config("T grid must be strictly increasing");
    return g;
}

hypc::ConjClass resolve_class(const hypc::GroupSpec& G, const Options& o) {
    if (o.class_word.empty()) bad_config("class word is empty");
    for (int letter : o.class_word)
        if (letter < 0 || letter >= static_cast<int>(G.alphabet.size()))
            bad_config("class word letter out of range for group " + G.name);
    hypc::GroupElement g = hypc::word_element(G, o.class_word);
    return hypc::conj_data(G, g);
}

// Pair selector grammar: zero | smooth | constant:c1,c2 | class-scaled:s1,s2.
hypc::AdjustmentPair parse_pair(const std::string& selector,
                                const hypc::ConjClass& c,
                                const hypc::HPoint& x, const hypc::HPoint& y) {
    if (selector == "zero") return hypc::zero_pair();
    if (selector == "smooth") return hypc::smooth_pair();
    auto colon = selector.find(':');
    if (colon != std::string::npos) {
        std::string head = selector.substr(0, colon);
        std::string args = selector.substr(colon + 1);
        double a = 0.0, b = 0.0;
        if (std::sscanf(args.c_str(), "%lf,%lf", &a, &b) == 2) {
            if (head == "constant") return hypc::constant_pair(a, b);
            if (head == "class-scaled") return hypc::scaled_class_pair(c, x, y, a, b);
        }
    }
    bad_config("unknown adjustment pair: " + selector +
               " (expected zero | smooth | constant:c1,c2 | class-scaled:s1,s2)");
}

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json series_json(const hypc::CountSeries& s) {
    bool all = true;
    for (bool c : s.complete) all = all && c;
    json j;
    j["kind"] = s.kind;
    j["params"] = s.params;
    j["T"] = s.T_grid;
    j["N"] = s.N;
    j["complete"] = s.complete;
    j["complete_all"] = all;
    j["skipped"] = s.skipped;
    return j;
}

json fit_json(const hypc::GrowthFit& f) {
    json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["sigma_hat"] = f.sigma_hat;
    j["stderr_slope"] = f.stderr_slope;
    j["window"] = {f.window_lo, f.window_hi};
    j["points_used"] = f.points_used;
    j["deviates"] = f.deviates;
    return j;
}

json sigma_json(const hypc::SigmaEstimate& e) {
    json j;
    j["value"] = e.value;
    j["quadrature_error"] = e.quadrature_error;
    j["n_nodes"] = e.n_nodes;
    j["normalization"] = e.normalization;
    return j;
}

json suites_json(const std::vector<hypc::SuiteReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json lines = json::array();
        for (const auto& l : r.lines)
            lines.push_back({{"label", l.label},
                             {"observed", l.observed},
                             {"bound", l.bound},
                             {"pass", l.pass}});
        arr.push_back({{"suite", r.suite}, {"pass", r.pass}, {"lines", lines}});
    }
    return arr;
}

json config_echo(const Options& o, const std::string& experiment,
                 const std::vector<double>& grid, bool has_grid) {
    json j;
    j["experiment"] = experiment;
    j["group"] = o.group;
    j["x"] = o.x;
    j["y"] = o.y;
    j["class_word"] = o.class_word;
    j["pair"] = o.pair;
    j["pair_b"] = o.pair_b;
    if (has_grid) j["T_grid"] = grid;
    j["word_cap"] = o.word_cap;
    j["n_nodes"] = o.n_nodes;
    j["seed"] = o.seed;
    j["samples"] = o.samples;
    j["suite"] = o.suite;
    if (!std::isnan(o.expected_slope)) j["expected_slope"] = o.expected_slope;
    j["max_rel_dev"] = o.max_rel_dev;
    j["on"] = o.on;
    j["direct"] = o.direct;
    j["out"] = o.out;
    return j;
}

void collect_warnings(const hypc::CountSeries& s, const std::string& label,
                      json& report) {
    std::ostringstream w;
    for (std::size_t i = 0; i < s.T_grid.size(); ++i)
        if (!s.complete[i]) {
            w.str("");
            w << label << ": enumeration incomplete at T = " << s.T_grid[i]
              << " (raise word_cap)";
            report["warnings"].push_back(w.str());
        }
    if (s.skipped > 0) {
        w.str("");
        w << label << ": " << s.skipped
          << " cosets skipped (base point mapped onto the axis)";
        report["warnings"].push_back(w.str());
    }
}

std::string csv_path(const std::string& out) {
    const std::string suffix = ".json";
    if (out.size() > suffix.size() &&
        out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out.substr(0, out.size() - suffix.size()) + ".csv";
    return out + ".csv";
}

void write_outputs(
    const Options& o, const json& report,
    const std::vector<std::pair<std::string, const hypc::CountSeries*>>& series) {
    std::string text = report.dump(2);
    text += '\n';
    if (o.out == "-") {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) bad_config("cannot write report: " + o.out);
        f << text;
        std::cout << "report: " << o.out << "\n";
    }
    if (series.empty() || o.out == "-") return;
    std::string cpath = csv_path(o.out);
    std::ofstream c(cpath);
    if (!c) bad_config("cannot write csv: " + cpath);
    c << "series,T,N,complete\n";
    for (const auto& [label, s] : series)
        for (std::size_t i = 0; i < s->T_grid.size(); ++i)
            c << label << ',' << s->T_grid[i] << ',' << s->N[i] << ','
              << (s->complete[i] ? 1 : 0) << '\n';
    std::cout << "csv: " << cpath << "\n";
}

void print_warnings(const json& report) {
    if (!report.contains("warnings")) return;
    for (const auto& w : report["warnings"])
        std::cerr << "warning: " << w.get<std::string>() << "\n";
}

int run_experiment(const std::string& kind, Options& o) {
    auto t0 = std::chrono::steady_clock::now();
    json report;
    report["warnings"] = json::array();
    std::vector<std::pair<std::string, const hypc::CountSeries*>> csv_series;
    hypc::CountSeries sa, sb;  // storage outliving report assembly
    int exit_code = 0;
    bool has_grid = kind != "check" && kind != "sigma-quad";
    std::vector<double> grid = has_grid ? resolve_grid(o) : std::vector<double>{};
    hypc::HPoint X = parse_point(o.x, "x");
    hypc::HPoint Y = parse_point(o.y, "y");

    if (kind == "count-orbit") {
        sa = hypc::count_orbit(hypc::load_group(o.group), X, Y, grid, o.word_cap);
        report["series"] = json::array({series_json(sa)});
        collect_warnings(sa, "orbit", report);
        csv_series.push_back({"orbit", &sa});
    } else if (kind == "count-conj") {
        hypc::GroupSpec G = hypc::load_group(o.group);
        hypc::ConjClass c = resolve_class(G, o);
        sa = o.direct ? hypc::count_conj_direct(G, c, X, Y, grid, o.word_cap)
                      : hypc::count_conj(G, c, X, Y, grid, o.word_cap);
        report["series"] = json::array({series_json(sa)});
        report["class"] = {{"translation_length", c.translation_length},
                           {"primitive_length", c.primitive_length()},
                           {"power", c.power}};
        collect_warnings(sa, "conj", report);
        csv_series.push_back({"conj", &sa});
    } else if (kind == "count-adjusted") {
        hypc::GroupSpec G = hypc::load_group(o.group);
        hypc::ConjClass c = resolve_class(G, o);
        hypc::AdjustmentPair pair = parse_pair(o.pair, c, X, Y);
        sa = hypc::count_adjusted(G, c, pair, X, grid, o.word_cap);
        report["series"] = json::array({series_json(sa)});
        report["pair"] = pair.label;
        collect_warnings(sa, "adjusted", report);
        csv_series.push_back({"adjusted", &sa});
    } else if (kind == "fit-growth") {
        hypc::GroupSpec G = hypc::load_group(o.group);
        if (o.on == "orbit") {
            sa = hypc::count_orbit(G, X, Y, grid, o.word_cap);
        } else if (o.on == "conj") {
            sa = hypc::count_conj(G, resolve_class(G, o), X, Y, grid, o.word_cap);
        } else if (o.on == "adjusted") {
            hypc::ConjClass c = resolve_class(G, o);
            sa = hypc::count_adjusted(G, c, parse_pair(o.pair, c, X, Y), X, grid,
                                      o.word_cap);
        } else {
            bad_config("fit-growth target must be orbit | conj | adjusted");
        }
        report["series"] = json::array({series_json(sa)});
        collect_warnings(sa, o.on, report);
        csv_series.push_back({o.on, &sa});
        bool all_complete = true;
        for (bool c : sa.complete) all_complete = all_complete && c;
        double expected =
            std::isnan(o.expected_slope) ? (o.on == "orbit" ? 1.0 : 0.5)
                                         : o.expected_slope;
        report["expected_slope"] = expected;
        if (!all_complete) {
            report["warnings"].push_back(
                "fit skipped grid points without a completeness certificate");
            exit_code = 3;
        }
        try {
            hypc::GrowthFit fit = hypc::fit_growth(sa, expected);
            report["fit"] = fit_json(fit);
            // Enforce the expectation only when the caller pinned one.
            if (exit_code == 0 && !std::isnan(o.expected_slope) && fit.deviates)
                exit_code = 1;
        } catch (const std::runtime_error& e) {
            report["error"] = e.what();
            if (exit_code == 0) exit_code = 2;
        }
    } else if (kind == "ratio-test") {
        hypc::GroupSpec G = hypc::load_group(o.group);
        hypc::ConjClass c = resolve_class(G, o);
        hypc::AdjustmentPair pa = parse_pair(o.pair, c, X, Y);
        hypc::AdjustmentPair pb = parse_pair(o.pair_b, c, X, Y);
        sa = hypc::count_adjusted(G, c, pa, X, grid, o.word_cap);
        sb = hypc::count_adjusted(G, c, pb, X, grid, o.word_cap);
        report["series"] = json::array({series_json(sa), series_json(sb)});
        collect_warnings(sa, "pair_a", report);
        collect_warnings(sb, "pair_b", report);
        csv_series.push_back({"pair_a", &sa});
        csv_series.push_back({"pair_b", &sb});
        int common = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (sa.complete[i] && sb.complete[i] && sa.N[i] > 0 && sb.N[i] > 0)
                ++common;
        if (common == 0) {
            report["error"] =
                "no grid point is complete with positive counts in both series";
            exit_code = 3;
        } else {
            hypc::RatioPrediction rp =
                hypc::predict_ratio(c, pa, pb, X, hypc::kOrigin, sa, sb);
            report["ratio"] = {{"pair_a", rp.pair_a},
                               {"pair_b", rp.pair_b},
                               {"predicted_ratio", rp.predicted_ratio},
                               {"empirical_ratio", rp.empirical_ratio},
                               {"rel_dev", rp.rel_dev},
                               {"low_confidence", rp.low_confidence},
                               {"common_points", common}};
            if (common < 3) {
                report["warnings"].push_back(
                    "empirical ratio rests on fewer than 3 complete grid points");
                exit_code = 3;
            } else if (o.max_rel_dev > 0.0 && rp.rel_dev > o.max_rel_dev) {
                exit_code = 1;
            }
        }
    } else if (kind == "sigma-quad") {
        hypc::GroupSpec G = hypc::load_group(o.group);
        hypc::ConjClass c = resolve_class(G, o);
        hypc::AdjustmentPair pair = parse_pair(o.pair, c, X, Y);
        hypc::SigmaEstimate sg =
            hypc::sigma_gamma_quad(c, pair.F1, hypc::kOrigin, o.n_nodes);
        hypc::SigmaEstimate sx =
            hypc::sigma_x_quad(X, pair.F2, hypc::kOrigin, o.n_nodes);
        report["sigma"] = {{"pair", pair.label},
                           {"gamma", sigma_json(sg)},
                           {"x", sigma_json(sx)},
                           {"product", sg.value * sx.value}};
    } else if (kind == "check") {
        std::vector<hypc::SuiteReport> suites =
            hypc::run_suites(o.suite, o.seed, o.samples);
        report["suites"] = suites_json(suites);
        bool all = true;
        for (const auto& s : suites) {
            for (const auto& l : s.lines)
                std::cout << "  " << (l.pass ? "ok   " : "FAIL ") << l.label
                          << " " << l.bound << "  (observed " << l.observed
                          << ")\n";
            std::cout << "[" << s.suite << "] "
                      << (s.pass ? "pass" : "FAIL") << "\n";
            all = all && s.pass;
        }
        if (!all) exit_code = 1;
    } else {
        bad_config("unknown experiment: " + kind);
    }

    report["config"] = config_echo(o, kind, grid, has_grid);
    report["exit_code"] = exit_code;
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Volatile values live under one key so reports diff clean modulo it.
    report["timestamp"] = {{"generated_utc", utc_now()},
                           {"wall_clock_seconds", wall}};
    write_outputs(o, report, csv_series);
    print_warnings(report);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    // First pass: pull --config so file values become flag defaults.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") o.config_path = argv[i + 1];
    try {
        if (!o.config_path.empty()) apply_config_file(o.config_path, o);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"orbit counting and boundary-measure experiments on hyperbolic surfaces"};
    app.fallthrough();
    app.require_subcommand(1);
    app.footer("Environment: HYPCOUNT_THREADS caps worker threads (default: hardware concurrency).");
    std::string class_word_csv, class_letter;
    app.add_option("--config", o.config_path, "JSON config file; flags override its values");
    app.add_option("--group", o.group, "builtin name (bolza, cyclic-demo, free2-demo) or path to a group JSON file");
    app.add_option("--x", o.x, "observation point, two coordinates")->delimiter(',')->expected(2);
    app.add_option("--y", o.y, "target point, two coordinates")->delimiter(',')->expected(2);
    auto* optw = app.add_option("--class-word", class_word_csv, "conjugacy class as comma-separated letter indices");
    auto* optl = app.add_option("--class-letter", class_letter, "conjugacy class as one generator index");
    optw->excludes(optl);
    app.add_option("--pair", o.pair, "adjustment pair: zero | smooth | constant:c1,c2 | class-scaled:s1,s2");
    app.add_option("--pair-b", o.pair_b, "second adjustment pair for ratio-test");
    app.add_option("--T", o.T_explicit, "explicit T grid values")->delimiter(',');
    app.add_option("--tmin", o.t_from, "T grid start");
    app.add_option("--tmax", o.t_to, "T grid end");
    app.add_option("--tstep", o.t_step, "T grid step");
    app.add_option("--word-cap", o.word_cap, "max word length for enumeration");
    app.add_option("--n-nodes", o.n_nodes, "quadrature nodes for sigma integrals");
    app.add_option("--seed", o.seed, "seed for all random sampling");
    app.add_option("--samples", o.samples, "samples per property check");
    app.add_option("--expected-slope", o.expected_slope, "enforced growth slope for fit-growth");
    app.add_option("--max-rel-dev", o.max_rel_dev, "fail ratio-test above this relative deviation");
    app.add_option("--on", o.on, "fit-growth target: orbit | conj | adjusted");
    app.add_flag("--direct", o.direct, "count-conj: count distinct conjugates instead of cosets");
    app.add_option("--out", o.out, "report path ('-' for stdout, no CSV)");

    app.add_subcommand("count-orbit", "count N(T) = #{g : d(x, g y) <= T}");
    app.add_subcommand("count-conj", "count coset representatives of a conjugacy class by d(g x, gamma g y)");
    app.add_subcommand("count-adjusted", "count cosets by axis depth minus the adjustment pair");
    app.add_subcommand("fit-growth", "run a count and fit log N(T) against T");
    app.add_subcommand("ratio-test", "compare predicted and empirical leading-constant ratios for two pairs");
    app.add_subcommand("sigma-quad", "quadrature for the boundary-measure integrals of a pair");
    auto* sub_check = app.add_subcommand("check", "run property suites (busemann, visual, projection, convergence, busemann-distance, midpoint, adjust, or all)");
    sub_check->add_option("suite", o.suite, "suite name or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits clean, parse errors are config errors
    }

    try {
        if (!class_word_csv.empty()) {
            o.class_word.clear();
            std::istringstream in(class_word_csv);
            std::string tok;
            while (std::getline(in, tok, ','))
                o.class_word.push_back(std::stoi(tok));
        }
        if (!class_letter.empty()) o.class_word = {std::stoi(class_letter)};
        return run_experiment(app.get_subcommands().front()->get_name(), o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
