// Command line front end: per-word comparison tables for the curvature
// densities, the verification suites, and the commutative limits.
// Reports are JSON (one document per run, doubles at 17 significant
// digits so they round-trip) or a flat CSV projection; exit code 0 when
// everything agrees, 1 on a mismatch, 2 on a usage error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nct/classical.hpp"
#include "nct/tables.hpp"

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string jesc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        if (c == '\n') {
            o += "\\n";
            continue;
        }
        o += c;
    }
    return o;
}

std::string jstr(const std::string& s) { return "\"" + jesc(s) + "\""; }

std::string csvq(const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

bool write_doc(const std::string& out, const std::string& doc,
               const std::string& summary) {
    if (out.empty()) {
        std::cout << doc;
        return true;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return false;
    }
    f << doc;
    std::cout << summary << "\n";
    return true;
}

// --- comparison tables -------------------------------------------------

std::string tables_json(const std::string& metric, const std::string& object,
                        double tol, bool pass,
                        const std::vector<nct::WordTable>& tabs) {
    std::ostringstream os;
    os << "{\n  \"metric\": " << jstr(metric) << ",\n  \"object\": "
       << jstr(object) << ",\n  \"tol\": " << fmt17(tol) << ",\n  \"pass\": "
       << (pass ? "true" : "false") << ",\n  \"tables\": [\n";
    for (std::size_t k = 0; k < tabs.size(); ++k) {
        const nct::WordTable& t = tabs[k];
        os << "    {\"metric\": " << jstr(t.metric) << ", \"object\": "
           << jstr(t.object);
        if (t.has_entry) os << ", \"entry\": [" << t.entry_i << ", " << t.entry_j << "]";
        os << ", \"prefix\": " << t.prefix << ", \"basis_word\": "
           << jstr(t.basis_word) << ", \"closed_form\": " << jstr(t.closed_form)
           << ", \"rows\": [\n";
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const nct::TableRow& row = t.rows[r];
            os << "      {\"point\": [";
            for (std::size_t p = 0; p < row.point.size(); ++p)
                os << (p ? ", " : "") << fmt17(row.point[p]);
            os << "], \"engine\": " << fmt17(row.engine) << ", \"reference\": "
               << fmt17(row.reference) << ", \"abs_err\": " << fmt17(row.abs_err)
               << ", \"rel_err\": " << fmt17(row.rel_err) << "}"
               << (r + 1 < t.rows.size() ? ",\n" : "\n");
        }
        os << "    ]}" << (k + 1 < tabs.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

std::string tables_csv(const std::vector<nct::WordTable>& tabs) {
    std::ostringstream os;
    os << "metric,object,entry_i,entry_j,prefix,basis_word,closed_form,"
          "s,t,engine,reference,abs_err,rel_err\n";
    for (const nct::WordTable& t : tabs)
        for (const nct::TableRow& row : t.rows) {
            os << t.metric << ',' << t.object << ',';
            if (t.has_entry)
                os << t.entry_i << ',' << t.entry_j << ',';
            else
                os << ",,";
            os << t.prefix << ',' << csvq(t.basis_word) << ','
               << csvq(t.closed_form) << ',' << fmt17(row.point[0]) << ','
               << (row.point.size() > 1 ? fmt17(row.point[1]) : std::string())
               << ',' << fmt17(row.engine) << ',' << fmt17(row.reference) << ','
               << fmt17(row.abs_err) << ',' << fmt17(row.rel_err) << '\n';
        }
    return os.str();
}

struct TableArgs {
    std::string metric;
    std::string grid = "-3:3:25";
    std::string points_file;
    double tol = 1e-6;
    std::string out;
    std::string format = "json";
};

bool parse_grid(const std::string& spec, std::vector<double>& grid) {
    std::istringstream is(spec);
    double lo = 0, hi = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':') return false;
    if (is.rdbuf()->in_avail() != 0 || n < 1 || lo > hi) return false;
    if (n == 1) {
        grid = {lo};
        return true;
    }
    for (int k = 0; k < n; ++k) grid.push_back(lo + (hi - lo) * k / (n - 1));
    return true;
}

bool parse_points(const std::string& path,
                  std::vector<std::pair<double, double>>& pts) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open points file " << path << "\n";
        return false;
    }
    try {
        nlohmann::json j;
        f >> j;
        if (!j.is_array()) throw std::runtime_error("expected a JSON array of {s, t}");
        for (const auto& el : j)
            pts.emplace_back(el.at("s").get<double>(), el.at("t").get<double>());
        if (pts.empty()) throw std::runtime_error("empty point list");
    } catch (const std::exception& e) {
        std::cerr << "bad points file " << path << ": " << e.what() << "\n";
        return false;
    }
    return true;
}

int run_table_cmd(const std::string& object, const TableArgs& a) {
    if (a.metric != "conformal3" && a.metric != "nonconformal3") {
        std::cerr << "unsupported metric '" << a.metric << "' for " << object
                  << " tables; use conformal3 or nonconformal3\n";
        return 2;
    }
    if (a.format != "json" && a.format != "csv") {
        std::cerr << "unknown format '" << a.format << "'; use json or csv\n";
        return 2;
    }
    nct::TableRequest req;
    req.metric = a.metric;
    req.object = object;
    req.tol = a.tol;
    if (!a.points_file.empty()) {
        if (!parse_points(a.points_file, req.points)) return 2;
    } else if (!parse_grid(a.grid, req.grid)) {
        std::cerr << "bad grid spec '" << a.grid << "'; expected lo:hi:count\n";
        return 2;
    }

    std::vector<nct::WordTable> tabs;
    try {
        tabs = nct::build_tables(req);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    std::size_t nrows = 0, nfail = 0;
    double worst = 0;
    for (const nct::WordTable& t : tabs)
        for (const nct::TableRow& r : t.rows) {
            ++nrows;
            worst = std::max(worst, r.rel_err);
            if (!(r.rel_err < a.tol)) ++nfail;
        }
    if (nrows == 0) {
        std::cerr << "every requested point is within 1e-3 of a removable "
                     "singularity of the closed forms\n";
        return 2;
    }
    const bool pass = nfail == 0;

    std::ostringstream sum;
    sum << object << " " << a.metric << ": " << tabs.size() << " word tables, "
        << nrows << " rows, worst rel " << fmt17(worst) << ", "
        << (pass ? "pass" : "FAIL (" + std::to_string(nfail) + " rows)");
    const std::string doc = a.format == "json"
                                ? tables_json(a.metric, object, a.tol, pass, tabs)
                                : tables_csv(tabs);
    if (!write_doc(a.out, doc, sum.str())) return 2;
    return pass ? 0 : 1;
}

// --- verification suites ------------------------------------------------

std::string checks_json(const std::string& suite,
                        const std::vector<std::pair<std::string, std::string>>& params,
                        bool pass, const std::vector<nct::CheckResult>& checks) {
    std::ostringstream os;
    os << "{\n  \"suite\": " << jstr(suite) << ",\n  \"params\": {";
    for (std::size_t i = 0; i < params.size(); ++i)
        os << (i ? ", " : "") << jstr(params[i].first) << ": " << params[i].second;
    os << "},\n  \"pass\": " << (pass ? "true" : "false") << ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < checks.size(); ++i)
        os << "    {\"name\": " << jstr(checks[i].name) << ", \"pass\": "
           << (checks[i].pass ? "true" : "false") << ", \"detail\": "
           << jstr(checks[i].detail) << "}" << (i + 1 < checks.size() ? ",\n" : "\n");
    os << "  ]\n}\n";
    return os.str();
}

std::string checks_csv(const std::vector<nct::CheckResult>& checks) {
    std::ostringstream os;
    os << "name,pass,detail\n";
    for (const nct::CheckResult& c : checks)
        os << csvq(c.name) << ',' << (c.pass ? "true" : "false") << ','
           << csvq(c.detail) << '\n';
    return os.str();
}

struct VerifyArgs {
    std::string suite;
    double tol = 0;
    bool tol_set = false;
    unsigned seed = 0;
    bool seed_set = false;
    double eps = 1e-4;
    std::string out;
    std::string format = "json";
};

int run_verify(const VerifyArgs& a) {
    if (a.format != "json" && a.format != "csv") {
        std::cerr << "unknown format '" << a.format << "'; use json or csv\n";
        return 2;
    }
    std::vector<nct::CheckResult> checks;
    std::vector<std::pair<std::string, std::string>> params;
    if (a.suite == "appendix-b") {
        const double tol = a.tol_set ? a.tol : 1e-8;
        const unsigned seed = a.seed_set ? a.seed : 7;
        checks = nct::check_closed_forms(tol, 20, seed);
        params = {{"tol", fmt17(tol)}, {"points", "20"}, {"seed", std::to_string(seed)}};
    } else if (a.suite == "limits") {
        const double tol = a.tol_set ? a.tol : 1e-3;
        checks = nct::check_classical_limits(a.eps, tol);
        params = {{"eps", fmt17(a.eps)}, {"tol", fmt17(tol)}};
    } else if (a.suite == "structure") {
        const double tol = a.tol_set ? a.tol : 1e-10;
        const unsigned seed = a.seed_set ? a.seed : 11;
        checks = nct::check_structure(100, seed, tol);
        params = {{"tol", fmt17(tol)}, {"points", "100"}, {"seed", std::to_string(seed)}};
    } else if (a.suite == "appendix-a") {
        checks = nct::check_expansion_fixture();
        for (nct::CheckResult& c : nct::check_reduction_fixture())
            checks.push_back(std::move(c));
    } else if (a.suite == "product-decomposition") {
        const double tol = a.tol_set ? a.tol : 1e-6;
        checks = nct::check_product_split(tol);
        params = {{"tol", fmt17(tol)}};
    } else {
        std::cerr << "unknown suite '" << a.suite
                  << "'; use appendix-b, limits, structure, appendix-a or "
                     "product-decomposition\n";
        return 2;
    }

    bool pass = true;
    for (const nct::CheckResult& c : checks) pass = pass && c.pass;

    std::ostringstream sum;
    std::size_t nfail = 0;
    for (const nct::CheckResult& c : checks)
        if (!c.pass) ++nfail;
    sum << "suite " << a.suite << ": " << checks.size() << " checks, "
        << (pass ? "pass" : "FAIL (" + std::to_string(nfail) + ")");
    const std::string doc = a.format == "json"
                                ? checks_json(a.suite, params, pass, checks)
                                : checks_csv(checks);
    if (!write_doc(a.out, doc, sum.str())) return 2;
    return pass ? 0 : 1;
}

// --- commutative limits ---------------------------------------------------

struct AbelArgs {
    std::string metric;
    std::string object = "scalar";
    std::string out;
    std::string format = "text";
};

int run_abelianize(const AbelArgs& a) {
    if (a.metric != "conformal3" && a.metric != "nonconformal3"
        && a.metric != "flat3") {
        std::cerr << "unsupported metric '" << a.metric
                  << "'; use conformal3, nonconformal3 or flat3\n";
        return 2;
    }
    if (a.object != "scalar" && a.object != "ricci") {
        std::cerr << "unknown object '" << a.object << "'; use scalar or ricci\n";
        return 2;
    }
    if (a.format != "text" && a.format != "json" && a.format != "csv") {
        std::cerr << "unknown format '" << a.format << "'; use text, json or csv\n";
        return 2;
    }
    if (a.metric == "flat3" && a.object == "ricci") {
        std::cerr << "flat3 has no 1-form Laplacian; only the scalar density "
                     "abelianizes\n";
        return 2;
    }
    const nct::MetricDescriptor m = a.metric == "flat3"
                                        ? nct::metric_flat3()
                                        : *nct::metric_by_name(a.metric);

    // row-major; a single slot for the scalar density
    std::vector<std::string> exprs, classical;
    bool match = true;
    try {
        if (a.object == "scalar") {
            const nct::ClassicalExpr got = nct::abelianize(nct::cached_scalar(m), m);
            const nct::ClassicalExpr want = nct::classical_scalar(m);
            match = nct::classical_equal(got, want);
            exprs.push_back(nct::classical_str(got));
            classical.push_back(nct::classical_str(want));
        } else {
            const nct::ClassicalMat got = nct::abelianize_matrix(nct::cached_ricci(m), m);
            const nct::ClassicalMat want = nct::classical_ricci(m);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    match = match && nct::classical_equal(got[i][j], want[i][j]);
                    exprs.push_back(nct::classical_str(got[i][j]));
                    classical.push_back(nct::classical_str(want[i][j]));
                }
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    std::ostringstream os;
    if (a.format == "text") {
        for (std::size_t k = 0; k < exprs.size(); ++k) {
            if (a.object == "ricci") os << "(" << k / 3 + 1 << "," << k % 3 + 1 << ") ";
            os << exprs[k] << "\n";
        }
        os << "match: " << (match ? "yes" : "no") << "\n";
    } else if (a.format == "json") {
        os << "{\n  \"metric\": " << jstr(a.metric) << ",\n  \"object\": "
           << jstr(a.object) << ",\n";
        auto emit = [&os](const char* name, const std::vector<std::string>& v) {
            if (v.size() == 1) {
                os << "  \"" << name << "\": " << jstr(v[0]) << ",\n";
                return;
            }
            os << "  \"" << name << "\": [\n";
            for (int i = 0; i < 3; ++i) {
                os << "    [";
                for (int j = 0; j < 3; ++j)
                    os << (j ? ", " : "") << jstr(v[3 * i + j]);
                os << "]" << (i < 2 ? "," : "") << "\n";
            }
            os << "  ],\n";
        };
        emit("expr", exprs);
        emit("classical", classical);
        os << "  \"match\": " << (match ? "true" : "false") << "\n}\n";
    } else {
        os << "entry_i,entry_j,expr,classical,match\n";
        for (std::size_t k = 0; k < exprs.size(); ++k) {
            if (a.object == "ricci")
                os << k / 3 + 1 << ',' << k % 3 + 1 << ',';
            else
                os << ",,";
            os << csvq(exprs[k]) << ',' << csvq(classical[k]) << ','
               << (match ? "true" : "false") << '\n';
        }
    }
    const std::string verdict = std::string("match: ") + (match ? "yes" : "no");
    if (!write_doc(a.out, os.str(), verdict)) return 2;
    return match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    // CLI11 reads a leading '-' as an option name, so reattach grid
    // values like -3:3:25 to their flag before parsing
    std::vector<std::string> args(argv, argv + argc);
    for (std::size_t i = 1; i + 1 < args.size(); ++i)
        if (args[i] == "--grid" && !args[i + 1].empty() && args[i + 1][0] == '-') {
            args[i] += "=" + args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
    std::vector<char*> cargv;
    cargv.reserve(args.size());
    for (std::string& s : args) cargv.push_back(s.data());

    CLI::App app{
        "Second heat-trace densities on noncommutative 2- and 3-tori: per-word\n"
        "comparison tables, verification suites and commutative limits.\n"
        "The environment variable NCG_QUAD_TOL overrides the quadrature\n"
        "tolerance (default 1e-12)."};
    app.require_subcommand(1);

    TableArgs ta;
    const char* metrics_help = "conformal3 | nonconformal3";
    auto add_table_opts = [&](CLI::App* s) {
        s->add_option("--metric", ta.metric, metrics_help)->required();
        s->add_option("--grid", ta.grid, "lo:hi:count, endpoints included (default -3:3:25)");
        s->add_option("--points", ta.points_file, "JSON file holding an array of {s, t}");
        s->add_option("--tol", ta.tol, "relative tolerance per row (default 1e-6)");
        s->add_option("--out", ta.out, "write the report to this file");
        s->add_option("--format", ta.format, "json | csv (default json)");
    };
    CLI::App* sc_scalar = app.add_subcommand(
        "scalar", "scalar density against its closed-form weights");
    CLI::App* sc_density = app.add_subcommand(
        "density", "1-form density matrix against its closed-form weights");
    CLI::App* sc_ricci = app.add_subcommand(
        "ricci", "Ricci density matrix against its closed-form weights");
    add_table_opts(sc_scalar);
    add_table_opts(sc_density);
    add_table_opts(sc_ricci);

    VerifyArgs va;
    CLI::App* sc_verify = app.add_subcommand("verify", "run a verification suite");
    sc_verify
        ->add_option("suite", va.suite,
                     "appendix-b | limits | structure | appendix-a | "
                     "product-decomposition")
        ->required();
    CLI::Option* vtol = sc_verify->add_option("--tol", va.tol,
                                              "tolerance (default per suite)");
    CLI::Option* vseed = sc_verify->add_option("--seed", va.seed,
                                               "sample seed (default per suite)");
    sc_verify->add_option("--eps", va.eps,
                          "evaluation offset for the limits suite (default 1e-4)");
    sc_verify->add_option("--out", va.out, "write the report to this file");
    sc_verify->add_option("--format", va.format, "json | csv (default json)");

    AbelArgs aa;
    CLI::App* sc_abel = app.add_subcommand(
        "abelianize", "commutative limit as a jet polynomial, with verdict");
    sc_abel->add_option("--metric", aa.metric, "conformal3 | nonconformal3 | flat3")
        ->required();
    sc_abel->add_option("--object", aa.object, "scalar | ricci (default scalar)");
    sc_abel->add_option("--out", aa.out, "write the report to this file");
    sc_abel->add_option("--format", aa.format, "text | json | csv (default text)");

    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    va.tol_set = vtol->count() > 0;
    va.seed_set = vseed->count() > 0;

    try {
        if (app.got_subcommand(sc_scalar)) return run_table_cmd("scalar", ta);
        if (app.got_subcommand(sc_density)) return run_table_cmd("density", ta);
        if (app.got_subcommand(sc_ricci)) return run_table_cmd("ricci", ta);
        if (app.got_subcommand(sc_verify)) return run_verify(va);
        if (app.got_subcommand(sc_abel)) return run_abelianize(aa);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 2;
}
