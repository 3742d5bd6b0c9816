// Command-line front end: describe osculating structures, run verification
// suites, and drive the numerical probes. Exit codes: 0 pass, 1 verification
// failure, 2 configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "osculate/groupoid.hpp"
#include "osculate/report.hpp"
#include "osculate/suites.hpp"

namespace {

using osc::Json;

void emit(const Json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw osc::Error("cannot write '" + out_path + "'");
        out << text << "\n";
    }
}

std::vector<osc::ExprPtr> parse_curve(const osc::Geometry& geom, const std::string& text) {
    auto it = geom.spec().curves.find(text);
    if (it != geom.spec().curves.end()) return it->second;
    std::vector<osc::ExprPtr> comps;
    for (const std::string& part : osc::split_component_list(text))
        comps.push_back(osc::parse_expr(part, {"t"}));
    if (int(comps.size()) != geom.dim())
        throw osc::DimensionMismatch("curve needs " + std::to_string(geom.dim()) +
                                     " components");
    return comps;
}

int run_describe(const osc::RunConfig& cfg) {
    osc::Geometry geom(osc::load_geometry(cfg.geometry_path));
    osc::Vec point = cfg.points.empty() ? osc::Vec(std::size_t(geom.dim()), 0.0)
                                        : cfg.points.front();
    osc::Rng rng(cfg.seed);
    emit(osc::report_envelope("describe", osc::describe_report(geom, point, rng)),
         cfg.out_path);
    return 0;
}

int run_verify(const osc::RunConfig& cfg) {
    osc::Geometry geom(osc::load_geometry(cfg.geometry_path));
    osc::SuiteOptions opt;
    opt.points = cfg.points;
    if (!cfg.handles.empty()) opt.handles = cfg.handles;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.grid = {cfg.grid_kmin, cfg.grid_kmax};

    osc::SuiteResult result = osc::run_suite(geom, cfg.suite, opt);
    Json payload{{"geometry", geom.spec().name},
                 {"suite", cfg.suite},
                 {"seed", cfg.seed},
                 {"checks", result.checks},
                 {"pass", result.pass}};
    emit(osc::report_envelope("verify", std::move(payload)), cfg.out_path);
    return result.pass ? 0 : 1;
}

int run_probe(const std::string& kind, const osc::RunConfig& cfg, const std::string& x_text,
              const std::string& y_text, const std::string& a_text, const std::string& b_text,
              const std::string& h1_name, const std::string& h2_name) {
    osc::Geometry geom(osc::load_geometry(cfg.geometry_path));
    osc::Vec point =
        cfg.points.empty() ? osc::Vec(std::size_t(geom.dim()), 0.0) : cfg.points.front();
    osc::DyadicGrid grid{cfg.grid_kmin, cfg.grid_kmax};
    osc::Rng jitter(cfg.seed ^ 0x686eULL);
    std::vector<osc::Vec> samples = {point};
    for (int k = 0; k < 2; ++k)
        samples.push_back(osc::add(point, jitter.uniform_vec(geom.dim(), -0.1, 0.1)));

    Json payload;
    bool pass = false;
    if (kind == "second-order" || kind == "commutator") {
        if (x_text.empty() || y_text.empty())
            throw osc::SchemaError("probe " + kind + " needs --X and --Y");
        osc::VectorField x = osc::resolve_field(geom, x_text);
        osc::VectorField y = osc::resolve_field(geom, y_text);
        osc::ProbeReport report =
            kind == "second-order"
                ? osc::oracle_second_order(geom, x, y, point, {}, grid)
                : osc::flow_commutator_probe(geom, x, y, point, {}, grid);
        pass = report.pass;
        if (!cfg.csv_path.empty()) osc::write_probe_csv(cfg.csv_path, report);
        payload = osc::to_json(report);
    } else if (kind == "transition") {
        if (h1_name.empty() || h2_name.empty())
            throw osc::SchemaError("probe transition needs --h1 and --h2");
        osc::ExpMapHandle h1 = osc::make_handle(geom, h1_name, samples);
        osc::ExpMapHandle h2 = osc::make_handle(geom, h2_name, samples);
        osc::Rng rng(cfg.seed);
        osc::GroupElement v{rng.uniform_vec(geom.hdim(), -0.5, 0.5),
                            rng.uniform_vec(geom.qdim(), -0.5, 0.5)};
        osc::TransitionReport report = osc::transition_probe(h1, h2, point, v, grid);
        pass = report.bounded;
        payload = osc::to_json(report);
    } else if (kind == "convergence") {
        if (a_text.empty() || b_text.empty())
            throw osc::SchemaError("probe convergence needs --a and --b");
        osc::ExpMapHandle handle =
            osc::make_handle(geom, cfg.handles.empty() ? "fs" : cfg.handles.front(), samples);
        osc::ConvergenceReport report = osc::convergence_probe(
            handle, parse_curve(geom, a_text), parse_curve(geom, b_text), grid);
        pass = report.pass;
        payload = osc::to_json(report);
    } else {
        throw osc::SchemaError("unknown probe kind '" + kind + "'");
    }

    emit(osc::report_envelope("probe " + kind, std::move(payload)), cfg.out_path);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"osculating-structure computations and verification probes"};
    app.require_subcommand(1);

    // shared options, filled per subcommand
    std::string geom_path, point_text, out_path, csv_path, suite = "all", tgrid;
    std::vector<std::string> handles;
    std::uint64_t seed = 0;
    int samples = 50;

    auto add_common = [&](CLI::App* cmd, bool with_point = true) {
        cmd->add_option("geometry", geom_path, "geometry (.geom) or run (.run) file")
            ->required();
        if (with_point) cmd->add_option("--point", point_text, "base point, e.g. 0,0,0");
        cmd->add_option("--seed", seed, "RNG seed (reports are reproducible per seed)");
        cmd->add_option("--out", out_path, "write the JSON report here instead of stdout");
    };

    CLI::App* describe = app.add_subcommand("describe", "osculating group at a point");
    add_common(describe);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify);
    verify->add_option("--suite", suite, "group|oracle|expmap|groupoid|all");
    verify->add_option("--handles", handles, "exponential-map handles to build");
    verify->add_option("--samples", samples, "random sample count");

    std::string probe_kind, x_text, y_text, a_text, b_text, h1_name, h2_name;
    CLI::App* probe = app.add_subcommand("probe", "run one numerical probe");
    probe->add_option("kind", probe_kind, "second-order|commutator|transition|convergence")
        ->required();
    add_common(probe);
    probe->add_option("--X", x_text, "field name or components");
    probe->add_option("--Y", y_text, "field name or components");
    probe->add_option("--a", a_text, "curve name or components in t");
    probe->add_option("--b", b_text, "curve name or components in t");
    probe->add_option("--h1", h1_name, "handle inverted by the transition probe");
    probe->add_option("--h2", h2_name, "handle evaluated by the transition probe");
    probe->add_option("--tgrid", tgrid, "dyadic grid exponents, e.g. 3:10");
    probe->add_option("--csv", csv_path, "write the probe t-grid as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        osc::RunConfig cfg;
        if (geom_path.size() > 4 && geom_path.substr(geom_path.size() - 4) == ".run") {
            cfg = osc::load_run_config(geom_path);
        } else {
            cfg.geometry_path = geom_path;
        }
        if (!point_text.empty()) cfg.points = {osc::parse_point(point_text)};
        if (verify->parsed()) {
            if (verify->count("--suite")) cfg.suite = suite;
            if (!handles.empty()) cfg.handles = handles;
            if (verify->count("--samples")) cfg.samples = samples;
        }
        if (seed != 0) cfg.seed = seed;
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!csv_path.empty()) cfg.csv_path = csv_path;
        if (!tgrid.empty()) {
            auto colon = tgrid.find(':');
            if (colon == std::string::npos) throw osc::SchemaError("tgrid must be kmin:kmax");
            cfg.grid_kmin = std::stoi(tgrid.substr(0, colon));
            cfg.grid_kmax = std::stoi(tgrid.substr(colon + 1));
        }

        if (describe->parsed()) return run_describe(cfg);
        if (verify->parsed()) return run_verify(cfg);
        return run_probe(probe_kind, cfg, x_text, y_text, a_text, b_text, h1_name, h2_name);
    } catch (const osc::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
