#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osculate/expr.hpp"
#include "osculate/linalg.hpp"

namespace osc {

/// Sparse Christoffel-symbol table entry: Gamma^k_{ij} (all 1-based in the
/// config file, stored 0-based). Unlisted entries are zero.
struct ChristoffelEntry {
    int k;
    int i;
    int j;
    ExprPtr expr;
};

/// A geometry definition: chart variables, an H-frame (first `hdim` fields
/// span H), plus optional named curves, chart maps and connections.
struct GeometrySpec {
    std::string name;
    int dim = 0;   // n
    int hdim = 0;  // p
    std::vector<std::string> vars;

    std::vector<std::string> field_names;        // size n
    std::vector<std::vector<ExprPtr>> frame;     // n fields x n components

    std::map<std::string, std::vector<ExprPtr>> curves;  // components in the variable t
    std::map<std::string, std::vector<ExprPtr>> charts;  // chart maps in `vars`
    std::map<std::string, std::vector<ChristoffelEntry>> connections;

    std::vector<std::string> expr_sources;  // every expression as written

    int qdim() const { return dim - hdim; }
    int field_index(const std::string& name) const;  // -1 when absent
};

GeometrySpec parse_geometry(const std::string& text);
GeometrySpec load_geometry(const std::string& path);

/// Splits "a, b, c" on top-level commas (parentheses respected), trimming
/// whitespace; an optional outer paren pair around the whole list is removed.
std::vector<std::string> split_component_list(const std::string& text);

/// Parses "x,y,z" into a point.
Vec parse_point(const std::string& text);

/// Batch-run description (.run files); same key = value surface syntax.
struct RunConfig {
    std::string geometry_path;
    std::string command = "verify";
    std::string suite = "all";
    std::vector<Vec> points;
    std::vector<std::string> handles;
    int grid_kmin = 3;
    int grid_kmax = 10;
    int samples = 50;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string csv_path;
};

RunConfig parse_run_config(const std::string& text, const std::string& base_dir);
RunConfig load_run_config(const std::string& path);

}  // namespace osc
