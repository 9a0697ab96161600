#include "finsler/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace finsler {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed,
                  const std::set<std::string>& required = {}) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.find(key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
    for (const auto& key : required)
        if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + " must be a number");
    return v.get<double>();
}

Domain parse_domain(const json& j) {
    require_keys(j, "domain", {"box", "exclusions"}, {"box"});
    Domain d;
    const auto& box = j.at("box");
    if (!box.is_array() || box.size() != 4) throw ConfigError("domain.box must be [x1min,x1max,x2min,x2max]");
    for (std::size_t i = 0; i < 4; ++i) d.box[i] = as_number(box[i], "domain.box entry");
    if (j.contains("exclusions")) {
        const auto& ex = j.at("exclusions");
        if (!ex.is_array()) throw ConfigError("domain.exclusions must be an array");
        for (const auto& e : ex) {
            require_keys(e, "domain exclusion", {"type", "center", "radius"}, {"type", "center", "radius"});
            Exclusion x;
            const std::string type = e.at("type").get<std::string>();
            if (type == "disc") x.kind = Exclusion::Kind::Disc;
            else if (type == "outside") x.kind = Exclusion::Kind::Outside;
            else throw ConfigError("exclusion type must be 'disc' or 'outside', got '" + type + "'");
            const auto& c = e.at("center");
            if (!c.is_array() || c.size() != 2) throw ConfigError("exclusion center must be [x1,x2]");
            x.center = {as_number(c[0], "exclusion center"), as_number(c[1], "exclusion center")};
            x.radius = as_number(e.at("radius"), "exclusion radius");
            if (x.radius < 0.0) throw ConfigError("exclusion radius must be non-negative");
            d.exclusions.push_back(x);
        }
    }
    return d;
}

StructureSpec parse_structure(const json& j) {
    StructureSpec s;
    if (j.contains("f_poly")) {
        require_keys(j, "structure", {"f_poly", "B"}, {"f_poly", "B"});
        s.use_poly = true;
        const auto& poly = j.at("f_poly");
        if (!poly.is_array() || poly.empty()) throw ConfigError("structure.f_poly must be a non-empty array");
        for (const auto& c : poly) {
            if (!c.is_array() || c.size() != 2) throw ConfigError("f_poly entries must be [re, im]");
            s.f_poly.emplace_back(as_number(c[0], "f_poly"), as_number(c[1], "f_poly"));
        }
    } else {
        require_keys(j, "structure", {"u", "v", "B"}, {"u", "v", "B"});
        s.u = j.at("u").get<std::string>();
        s.v = j.at("v").get<std::string>();
    }
    s.B = j.at("B").get<std::string>();
    return s;
}

SamplingSpec parse_sampling(const json& j) {
    require_keys(j, "sampling", {"mode", "count", "grid", "seed", "directions", "proof_points"});
    SamplingSpec s;
    const std::string mode = j.value("mode", std::string("random"));
    if (mode == "random") s.mode = SamplingSpec::Mode::Random;
    else if (mode == "grid") s.mode = SamplingSpec::Mode::Grid;
    else throw ConfigError("sampling.mode must be 'random' or 'grid'");
    if (j.contains("count")) s.count = j.at("count").get<int>();
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_array() || g.size() != 2) throw ConfigError("sampling.grid must be [nx, ny]");
        s.grid = {g[0].get<int>(), g[1].get<int>()};
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("directions")) s.directions = j.at("directions").get<int>();
    if (j.contains("proof_points")) s.proof_points = j.at("proof_points").get<int>();
    if (s.directions < 1) throw ConfigError("sampling.directions must be positive");
    return s;
}

} // namespace

Scenario load_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
    }
    try {
        require_keys(j, "scenario", {"params", "structure", "domain", "sampling", "tolerances", "checks"},
                     {"params", "structure", "domain"});

        const auto& pj = j.at("params");
        require_keys(pj, "params", {"k1", "k2", "eps"}, {"k1", "k2", "eps"});
        FamilyParams params;
        try {
            params = FamilyParams(as_number(pj.at("k1"), "params.k1"), as_number(pj.at("k2"), "params.k2"),
                                  pj.at("eps").get<int>());
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid params: ") + e.what());
        }

        Scenario sc;
        sc.params = params;
        sc.structure = parse_structure(j.at("structure"));
        sc.domain = parse_domain(j.at("domain"));
        if (j.contains("sampling")) sc.sampling = parse_sampling(j.at("sampling"));
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            if (!t.is_object()) throw ConfigError("tolerances must be an object");
            for (const auto& [key, value] : t.items()) {
                if (default_tolerances().find(key) == default_tolerances().end())
                    throw ConfigError("unknown tolerance key '" + key + "'");
                sc.tolerances[key] = as_number(value, "tolerance " + key);
            }
        }
        if (j.contains("checks")) {
            const auto& c = j.at("checks");
            if (!c.is_array()) throw ConfigError("checks must be an array of check names");
            const std::set<std::string> known = {"structure_pde",       "positivity",
                                                 "s_curvature",         "einstein_isotropy",
                                                 "k_closed_vs_numeric", "r00_condition",
                                                 "killing_deformation", "flag_identity",
                                                 "proof_chain",         "rigidity"};
            for (const auto& name : c) {
                const std::string n = name.get<std::string>();
                if (known.find(n) == known.end()) throw ConfigError("unknown check '" + n + "'");
                sc.checks.push_back(n);
            }
        }

        // parse expression fields eagerly so syntax errors surface as config errors
        try {
            if (!sc.structure.use_poly) {
                Expression::parse(sc.structure.u);
                Expression::parse(sc.structure.v);
            }
            Expression::parse(sc.structure.B);
        } catch (const Error& e) {
            throw ConfigError(std::string("invalid field expression: ") + e.what());
        }
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario JSON structure error: ") + e.what());
    }
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

} // namespace finsler
