#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "farey/curve_catalog.hpp"
#include "farey/farey_core.hpp"
#include "farey/phi_measure.hpp"
#include "format.hpp"
#include "verify.hpp"

namespace farey::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kSvgExtent = 5.0;
constexpr int kSvgPixels = 800;
constexpr double kCurveTruncation = 1e4;

struct Sink {
    std::ofstream file;
    std::ostream* stream;

    Sink(const std::string& path, std::ostream& fallback) : stream(&fallback) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
        stream = &file;
    }
    std::ostream& os() { return *stream; }
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string resolve_format(const std::string& format, const std::string& path) {
    if (!format.empty()) return format;
    return ends_with(path, ".svg") ? "svg" : "csv";
}

void svg_header(std::ostream& os) {
    const std::string e = fmt_fixed(kSvgExtent, 0);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgPixels << "\" height=\"" << kSvgPixels
       << "\" viewBox=\"0 0 " << e << ' ' << e << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << e << "\" height=\"" << e << "\" fill=\"white\"/>\n";
    const std::string b = fmt_fixed(kSixOverPiSquared, 6);
    const std::string yb = fmt_fixed(kSvgExtent - kSixOverPiSquared, 6);
    os << "<g stroke=\"gray\" stroke-width=\"0.008\" stroke-dasharray=\"0.05,0.05\">\n"
       << "<line x1=\"" << b << "\" y1=\"0\" x2=\"" << b << "\" y2=\"" << e << "\"/>\n"
       << "<line x1=\"0\" y1=\"" << yb << "\" x2=\"" << e << "\" y2=\"" << yb << "\"/>\n"
       << "</g>\n"
       << "<g font-size=\"0.12\" fill=\"gray\" font-family=\"sans-serif\">\n"
       << "<text x=\"" << fmt_fixed(kSixOverPiSquared + 0.03, 6) << "\" y=\"0.15\">x = 6/&#960;&#178;</text>\n"
       << "<text x=\"" << fmt_fixed(kSvgExtent - 0.9, 6) << "\" y=\"" << fmt_fixed(kSvgExtent - kSixOverPiSquared - 0.04, 6)
       << "\">y = 6/&#960;&#178;</text>\n"
       << "</g>\n";
}

int cmd_list(std::ostream& out, std::int64_t q, const std::string& interval, const std::string& format,
             const std::string& path) {
    const SequenceParams params{q, parse_interval(interval)};
    params.validate();
    Sink sink(path, out);
    auto& os = sink.os();
    std::int64_t index = 0;
    if (format == "csv") {
        os << "index,numerator,denominator,value\n";
        for (const auto& f : FareyRange(params))
            os << ++index << ',' << f.a << ',' << f.q << ',' << fmt17(static_cast<double>(f.a) / f.q) << '\n';
    } else {
        os << "[";
        for (const auto& f : FareyRange(params)) {
            const json row{{"index", ++index},
                           {"numerator", f.a},
                           {"denominator", f.q},
                           {"value", static_cast<double>(f.a) / f.q}};
            os << (index == 1 ? "\n" : ",\n") << row.dump();
        }
        os << "\n]\n";
    }
    return 0;
}

int cmd_gaps(std::ostream& out, std::int64_t q, int h, const std::string& interval, const std::string& format,
             const std::string& path) {
    const SequenceParams params{q, parse_interval(interval)};
    params.validate();
    if (h < 1) throw std::invalid_argument("--h must be >= 1");
    if (count(params) < h + 2) throw std::invalid_argument("Q too small for h: fewer than h + 2 fractions");
    Sink sink(path, out);
    auto& os = sink.os();
    if (format == "csv") {
        os << 'j';
        for (int i = 1; i <= h; ++i) os << ",g" << i;
        os << '\n';
        for_each_gap_tuple(params, h, [&](std::int64_t j, std::span<const double> g) {
            os << j;
            for (double v : g) os << ',' << fmt17(v);
            os << '\n';
        });
    } else {
        bool first = true;
        os << "[";
        for_each_gap_tuple(params, h, [&](std::int64_t j, std::span<const double> g) {
            const json row{{"j", j}, {"gaps", std::vector<double>(g.begin(), g.end())}};
            os << (first ? "\n" : ",\n") << row.dump();
            first = false;
        });
        os << "\n]\n";
    }
    return 0;
}

json result_json(const MeasureResult& r) {
    return json{{"value", std::clamp(r.value, 0.0, 1.0)},
                {"error_bound", r.error_bound},
                {"method", std::string(to_string(r.method))},
                {"cells_visited", r.cells_visited}};
}

int cmd_measure(std::ostream& out, std::ostream& err, const std::string& box_text, std::optional<int> h_opt,
                const std::string& method, double tol, int max_depth, std::int64_t samples, std::uint64_t seed) {
    const BoxSpec box = parse_box(box_text);
    const int h = h_opt.value_or(box.dim());
    if (h != box.dim()) throw std::invalid_argument("--h must equal the box dimension");
    MeasureResult r;
    if (method == "quad") {
        if (!(tol > 0)) throw std::invalid_argument("--tol must be positive");
        if (max_depth < 1) throw std::invalid_argument("--max-depth must be positive");
        try {
            r = measure_box(box, h, {tol, max_depth});
        } catch (const NonConvergence& e) {
            err << "farey: " << e.what() << '\n';
            out << result_json(e.partial()).dump() << '\n';
            return 1;
        }
    } else {
        if (samples < 1) throw std::invalid_argument("--samples must be positive");
        r = measure_box_mc(box, h, samples, seed);
    }
    out << result_json(r).dump() << '\n';
    return 0;
}

int cmd_support(std::ostream& out, std::int64_t kmax, int samples, int h, const std::string& format_flag,
                const std::string& path) {
    if (kmax < 2) throw std::invalid_argument("--kmax must be >= 2");
    if (samples < 1) throw std::invalid_argument("--samples must be positive");
    if (h < 1) throw std::invalid_argument("--h must be >= 1");
    const std::string format = resolve_format(format_flag, path);
    if (format == "svg" && h != 2) throw std::invalid_argument("svg output needs --h 2");
    const PointCloud cloud = support_points(h, kmax, samples);
    Sink sink(path, out);
    auto& os = sink.os();
    if (format == "csv") {
        if (h == 1) {
            os << "x\n";
        } else if (h == 2) {
            os << "x,y\n";
        } else {
            for (int i = 1; i <= h; ++i) os << (i > 1 ? ",x" : "x") << i;
            os << '\n';
        }
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const auto p = cloud.point(i);
            for (std::size_t d = 0; d < p.size(); ++d) os << (d ? "," : "") << fmt17(p[d]);
            os << '\n';
        }
        return 0;
    }
    svg_header(os);
    const double px = kSvgPixels / kSvgExtent;
    const std::string radius = fmt17(kSvgExtent / kSvgPixels);
    std::set<std::pair<long, long>> seen;
    os << "<g fill=\"black\">\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        if (!seen.insert({std::lround(p[0] * px), std::lround(p[1] * px)}).second) continue;
        // Full precision keeps the cloud's lower bound intact when parsed back.
        os << "<circle cx=\"" << fmt17(p[0]) << "\" cy=\"" << fmt17(kSvgExtent - p[1]) << "\" r=\"" << radius << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return 0;
}

std::vector<CurveSpec> select_rows(const std::string& selector) {
    std::vector<CurveSpec> rows;
    if (selector == "all") {
        for (const auto& r : curve_catalog()) {
            if (r.concrete()) {
                rows.push_back(r);
                continue;
            }
            for (std::int64_t n = 5; n <= 12; ++n)
                if (r.accepts(n)) rows.push_back(r.instantiate(n));
        }
        return rows;
    }
    const auto comma = selector.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--rows must be 'all' or 'k,l'");
    std::int64_t k = 0, l = 0;
    try {
        std::size_t used_k = 0, used_l = 0;
        const std::string ks = selector.substr(0, comma), ls = selector.substr(comma + 1);
        k = std::stoll(ks, &used_k);
        l = std::stoll(ls, &used_l);
        if (used_k != ks.size() || used_l != ls.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("--rows must be 'all' or 'k,l' with integer k, l");
    }
    if (k < 1 || l < 1) throw std::invalid_argument("--rows indices must be positive");
    rows = rows_for_cell(k, l);
    if (rows.empty()) throw std::invalid_argument("cell (" + std::to_string(k) + "," + std::to_string(l) + ") is empty");
    return rows;
}

/// Log-uniform midpoints of the row's t-domain, truncated for unbounded rows.
std::vector<double> curve_parameters(const CurveSpec& row, int n) {
    auto [lo, hi] = row.t_domain();
    if (std::isinf(hi)) hi = std::max(kCurveTruncation, lo * 2);
    const double a = std::log(lo), b = std::log(hi);
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * (i + 0.5) / n);
    return t;
}

int cmd_curves(std::ostream& out, const std::string& selector, int samples, const std::string& format_flag,
               const std::string& path) {
    if (samples < 2) throw std::invalid_argument("--samples must be >= 2");
    const std::string format = resolve_format(format_flag, path);
    const auto rows = select_rows(selector);
    Sink sink(path, out);
    auto& os = sink.os();
    if (format == "csv") {
        os << "k,l,edge_index,t,X,Y\n";
        for (const auto& r : rows)
            for (double t : curve_parameters(r, samples)) {
                const auto p = curve_eval(r, t);
                os << r.k << ',' << r.l << ',' << r.edge_index << ',' << fmt17(t) << ',' << fmt17(p[0]) << ','
                   << fmt17(p[1]) << '\n';
            }
        return 0;
    }
    svg_header(os);
    os << "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.01\">\n";
    for (const auto& r : rows) {
        os << "<polyline points=\"";
        bool first = true;
        for (double t : curve_parameters(r, samples)) {
            const auto p = curve_eval(r, t);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", first ? "" : " ", p[0], kSvgExtent - p[1]);
            os << buf;
            first = false;
        }
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return 0;
}

int cmd_verify(std::ostream& out, const std::string& suite, std::optional<std::int64_t> limit) {
    const auto checks = run_suite(suite, limit);
    print_checks(out, checks);
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.passed;
    out << (ok ? "suite " + suite + ": all checks passed\n" : "suite " + suite + ": FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Farey sequence gap statistics", "farey"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");  // -h would shadow --h

    std::int64_t q = 0;
    int h = 1;
    std::string interval = "0,1";
    std::string format;
    std::string path;

    auto* list = app.add_subcommand("list", "Enumerate the Farey sequence");
    list->add_option("--q", q, "Order Q")->required();
    list->add_option("--interval", interval, "Subinterval lo,hi of [0,1] (fractions allowed)");
    list->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    list->add_option("--out", path, "Output file (default: standard output)");

    auto* gaps = app.add_subcommand("gaps", "Normalized third-gap tuples");
    gaps->add_option("--q", q, "Order Q")->required();
    gaps->add_option("--h", h, "Tuple length");
    gaps->add_option("--interval", interval, "Subinterval lo,hi of [0,1]");
    gaps->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    gaps->add_option("--out", path, "Output file");

    std::string box;
    std::optional<int> measure_h;
    std::string method = "quad";
    double tol = 1e-4;
    int max_depth = 24;
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
    auto* measure = app.add_subcommand("measure", "Limit measure of a box");
    measure->add_option("--box", box, "lo1,hi1[,lo2,hi2]; inf allowed as an upper bound")->required();
    measure->add_option("--h", measure_h, "Dimension (default: box dimension)");
    measure->add_option("--method", method, "quad or mc")->check(CLI::IsMember({"quad", "mc"}));
    measure->add_option("--tol", tol, "Quadrature tolerance");
    measure->add_option("--max-depth", max_depth, "Maximum subdivision depth");
    measure->add_option("--samples", samples, "Monte Carlo samples");
    measure->add_option("--seed", seed, "Monte Carlo seed");

    std::int64_t kmax = 40;
    int support_samples = 2000;
    int support_h = 2;
    auto* support = app.add_subcommand("support", "Point cloud of the limit support");
    support->add_option("--kmax", kmax, "Largest cell index");
    support->add_option("--samples", support_samples, "Points per cell");
    support->add_option("--h", support_h, "Dimension");
    support->add_option("--format", format, "csv or svg (default from --out extension)")
        ->check(CLI::IsMember({"csv", "svg"}));
    support->add_option("--out", path, "Output file");

    std::string rows = "all";
    int curve_samples = 100;
    auto* curves = app.add_subcommand("curves", "Boundary curves of the support");
    curves->add_option("--rows", rows, "all or k,l");
    curves->add_option("--samples", curve_samples, "Points per curve");
    curves->add_option("--format", format, "csv or svg (default from --out extension)")
        ->check(CLI::IsMember({"csv", "svg"}));
    curves->add_option("--out", path, "Output file");

    std::string suite;
    std::optional<std::int64_t> limit;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite, "recurrence, cells, table1, symmetry or convergence")->required();
    verify->add_option("--max", limit, "Suite size override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "farey: " << e.what() << '\n';
        return 2;
    }

    try {
        if (list->parsed()) return cmd_list(out, q, interval, format.empty() ? "csv" : format, path);
        if (gaps->parsed()) return cmd_gaps(out, q, h, interval, format.empty() ? "csv" : format, path);
        if (measure->parsed())
            return cmd_measure(out, err, box, measure_h, method, tol, max_depth, samples, seed);
        if (support->parsed()) return cmd_support(out, kmax, support_samples, support_h, format, path);
        if (curves->parsed()) return cmd_curves(out, rows, curve_samples, format, path);
        if (verify->parsed()) return cmd_verify(out, suite, limit);
    } catch (const std::invalid_argument& e) {
        err << "farey: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "farey: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace farey::cli
