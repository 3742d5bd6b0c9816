#include "osculate/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace osc {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

// Splits "a, b, c" on top-level commas (parentheses respected).
std::vector<std::string> split_components(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw SchemaError("expected an integer for " + what + ", got '" + s + "'");
    return v;
}

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

struct KeyValue {
    std::string key;
    std::string value;
    int line_no;
};

struct Section {
    std::string name;
    std::vector<KeyValue> entries;
};

std::vector<Section> read_sections(const std::string& text) {
    std::vector<Section> sections;
    sections.push_back({"", {}});
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SchemaError("line " + std::to_string(line_no) + ": unterminated section");
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError("line " + std::to_string(line_no) + ": expected key = value");
        sections.back().entries.push_back(
            {trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
    }
    return sections;
}

ChristoffelEntry parse_christoffel_key(const std::string& key, int dim) {
    // key shape: G<k>_<i>_<j>, indices 1-based
    if (key.size() < 2 || key[0] != 'G')
        throw SchemaError("connection entry '" + key + "' must look like G<k>_<i>_<j>");
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t c = 1; c < key.size(); ++c) {
        if (key[c] == '_') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += key[c];
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw SchemaError("connection entry '" + key + "' must look like G<k>_<i>_<j>");
    ChristoffelEntry e;
    e.k = parse_int(parts[0], "connection index") - 1;
    e.i = parse_int(parts[1], "connection index") - 1;
    e.j = parse_int(parts[2], "connection index") - 1;
    if (e.k < 0 || e.k >= dim || e.i < 0 || e.i >= dim || e.j < 0 || e.j >= dim)
        throw SchemaError("connection entry '" + key + "' out of range");
    return e;
}

}  // namespace

std::vector<std::string> split_component_list(const std::string& text) {
    std::string body = trim(text);
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
        int depth = 0;
        bool wraps = true;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '(') ++depth;
            if (body[i] == ')' && --depth == 0 && i + 1 != body.size()) {
                wraps = false;
                break;
            }
        }
        if (wraps) body = trim(body.substr(1, body.size() - 2));
    }
    return split_components(body);
}

Vec parse_point(const std::string& text) {
    Vec pt;
    for (const std::string& c : split_component_list(text)) pt.push_back(std::stod(c));
    return pt;
}

int GeometrySpec::field_index(const std::string& name) const {
    for (std::size_t i = 0; i < field_names.size(); ++i)
        if (field_names[i] == name) return int(i);
    return -1;
}

GeometrySpec parse_geometry(const std::string& text) {
    GeometrySpec spec;
    auto sections = read_sections(text);

    for (const KeyValue& kv : sections.front().entries) {
        if (kv.key == "name") {
            spec.name = kv.value;
        } else if (kv.key == "dim") {
            spec.dim = parse_int(kv.value, "dim");
        } else if (kv.key == "hdim") {
            spec.hdim = parse_int(kv.value, "hdim");
        } else if (kv.key == "vars") {
            spec.vars = split_words(kv.value);
        } else {
            throw SchemaError("line " + std::to_string(kv.line_no) + ": unknown key '" +
                              kv.key + "'");
        }
    }

    if (spec.name.empty()) throw SchemaError("missing 'name'");
    if (spec.dim < 2) throw SchemaError("'dim' must be at least 2");
    if (spec.hdim < 1) throw SchemaError("'hdim' must be at least 1");
    if (spec.hdim >= spec.dim) throw SchemaError("q = dim - hdim must be at least 1");
    if (int(spec.vars.size()) != spec.dim)
        throw DimensionMismatch("expected " + std::to_string(spec.dim) + " variables, got " +
                                std::to_string(spec.vars.size()));
    for (const std::string& v : spec.vars) {
        if (!valid_identifier(v)) throw SchemaError("invalid variable name '" + v + "'");
        if (v == "sin" || v == "cos" || v == "exp")
            throw SchemaError("variable name '" + v + "' is reserved");
        if (v == "t") throw SchemaError("variable name 't' is reserved for curves");
        if (std::count(spec.vars.begin(), spec.vars.end(), v) != 1)
            throw SchemaError("duplicate variable name '" + v + "'");
    }

    auto parse_components = [&](const KeyValue& kv, const std::vector<std::string>& vars,
                                int expected) {
        std::vector<std::string> parts = split_components(kv.value);
        if (int(parts.size()) != expected)
            throw DimensionMismatch("line " + std::to_string(kv.line_no) + ": '" + kv.key +
                                    "' needs " + std::to_string(expected) + " components, got " +
                                    std::to_string(parts.size()));
        std::vector<ExprPtr> comps;
        for (const std::string& p : parts) {
            comps.push_back(parse_expr(p, vars));
            spec.expr_sources.push_back(p);
        }
        return comps;
    };

    const std::vector<std::string> curve_vars = {"t"};
    for (std::size_t s = 1; s < sections.size(); ++s) {
        const Section& sec = sections[s];
        if (sec.name == "frame") {
            for (const KeyValue& kv : sec.entries) {
                if (!valid_identifier(kv.key))
                    throw SchemaError("invalid field name '" + kv.key + "'");
                spec.field_names.push_back(kv.key);
                spec.frame.push_back(parse_components(kv, spec.vars, spec.dim));
            }
        } else if (sec.name == "curves") {
            for (const KeyValue& kv : sec.entries)
                spec.curves[kv.key] = parse_components(kv, curve_vars, spec.dim);
        } else if (sec.name == "charts") {
            for (const KeyValue& kv : sec.entries)
                spec.charts[kv.key] = parse_components(kv, spec.vars, spec.dim);
        } else if (sec.name.rfind("connection", 0) == 0) {
            std::string conn_name = sec.name == "connection" ? "default" : trim(sec.name.substr(10));
            auto& entries = spec.connections[conn_name];
            for (const KeyValue& kv : sec.entries) {
                ChristoffelEntry e = parse_christoffel_key(kv.key, spec.dim);
                e.expr = parse_expr(kv.value, spec.vars);
                spec.expr_sources.push_back(kv.value);
                entries.push_back(e);
            }
        } else {
            throw SchemaError("unknown section [" + sec.name + "]");
        }
    }

    if (int(spec.frame.size()) != spec.dim)
        throw DimensionMismatch("frame needs exactly " + std::to_string(spec.dim) +
                                " fields, got " + std::to_string(spec.frame.size()));
    return spec;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

GeometrySpec load_geometry(const std::string& path) { return parse_geometry(read_file(path)); }

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
    RunConfig cfg;
    auto sections = read_sections(text);
    if (sections.size() != 1) throw SchemaError("run configs have no sections");
    for (const KeyValue& kv : sections.front().entries) {
        if (kv.key == "geometry") {
            std::filesystem::path p(kv.value);
            cfg.geometry_path = p.is_absolute() || base_dir.empty()
                                    ? kv.value
                                    : (std::filesystem::path(base_dir) / p).string();
        } else if (kv.key == "command") {
            cfg.command = kv.value;
        } else if (kv.key == "suite") {
            cfg.suite = kv.value;
        } else if (kv.key == "point") {
            Vec pt;
            for (const std::string& c : split_components(kv.value))
                pt.push_back(std::stod(c));
            cfg.points.push_back(pt);
        } else if (kv.key == "handles") {
            cfg.handles = split_words(kv.value);
        } else if (kv.key == "tgrid") {
            auto colon = kv.value.find(':');
            if (colon == std::string::npos) throw SchemaError("tgrid must look like kmin:kmax");
            cfg.grid_kmin = parse_int(trim(kv.value.substr(0, colon)), "tgrid");
            cfg.grid_kmax = parse_int(trim(kv.value.substr(colon + 1)), "tgrid");
        } else if (kv.key == "samples") {
            cfg.samples = parse_int(kv.value, "samples");
        } else if (kv.key == "seed") {
            cfg.seed = std::stoull(kv.value);
        } else if (kv.key == "out") {
            cfg.out_path = kv.value;
        } else if (kv.key == "csv") {
            cfg.csv_path = kv.value;
        } else {
            throw SchemaError("unknown run key '" + kv.key + "'");
        }
    }
    if (cfg.geometry_path.empty()) throw SchemaError("run config needs 'geometry'");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_file(path),
                            std::filesystem::path(path).parent_path().string());
}

}  // namespace osc
