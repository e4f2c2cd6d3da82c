#include "starfode/config.hpp"

#include "starfode/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace starfode {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!j.is_object())
        throw config_error("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw config_error("config: unknown key '" + key + "' in " + where);
    }
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw config_error("config: '" + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw config_error("config: '" + key + "' must be an integer");
    return j.at(key).get<int>();
}

std::string get_string(const json& j, const std::string& key,
                       const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string())
        throw config_error("config: '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw config_error("config: '" + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

} // namespace

ProblemConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    require_keys(j,
                 {"kind", "alpha", "T", "m", "cutoff", "solver", "dt", "tol",
                  "krylov_dim", "scalar", "system", "schrodinger"},
                 "top level");

    ProblemConfig cfg;
    const std::string kind = get_string(j, "kind", "scalar");
    if (kind == "scalar")
        cfg.kind = ProblemKind::scalar;
    else if (kind == "system")
        cfg.kind = ProblemKind::system;
    else if (kind == "schrodinger")
        cfg.kind = ProblemKind::schrodinger;
    else
        throw config_error("config: unknown kind '" + kind + "'");

    cfg.alpha = get_number(j, "alpha", cfg.alpha);
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
        throw config_error("config: alpha must lie in (0, 1]");
    cfg.T = get_number(j, "T", cfg.T);
    if (!(cfg.T > 0.0)) throw config_error("config: T must be positive");
    cfg.m = get_int(j, "m", cfg.m);
    if (cfg.m < 8) throw config_error("config: m must be >= 8");

    if (j.contains("cutoff")) {
        const json& c = j.at("cutoff");
        if (c.is_string() && c.get<std::string>() == "auto")
            cfg.cutoff = CutoffPolicy::auto_policy();
        else if (c.is_number_integer() && c.get<int>() >= 1)
            cfg.cutoff = CutoffPolicy::fixed(c.get<int>());
        else
            throw config_error("config: cutoff must be \"auto\" or an integer >= 1");
    }

    const std::string solver = get_string(j, "solver", "dense");
    if (solver == "dense")
        cfg.solver = SolverKind::dense;
    else if (solver == "stein")
        cfg.solver = SolverKind::stein;
    else if (solver == "projected")
        cfg.solver = SolverKind::projected;
    else if (solver == "lowrank")
        cfg.solver = SolverKind::lowrank;
    else if (solver == "abm")
        cfg.solver = SolverKind::abm;
    else
        throw config_error("config: unknown solver '" + solver + "'");

    cfg.dt = get_number(j, "dt", cfg.dt);
    if (!(cfg.dt > 0.0)) throw config_error("config: dt must be positive");
    cfg.tol = get_number(j, "tol", cfg.tol);
    if (!(cfg.tol > 0.0)) throw config_error("config: tol must be positive");
    cfg.krylov_dim = get_int(j, "krylov_dim", cfg.krylov_dim);
    if (cfg.krylov_dim < 1)
        throw config_error("config: krylov_dim must be >= 1");

    if (j.contains("scalar")) {
        const json& s = j.at("scalar");
        require_keys(s, {"field", "F", "y0", "manufactured"}, "scalar");
        cfg.scalar.field = get_string(s, "field", cfg.scalar.field);
        if (cfg.scalar.field != "const" && cfg.scalar.field != "linear")
            throw config_error("config: scalar.field must be 'const' or 'linear'");
        cfg.scalar.F = get_number(s, "F", cfg.scalar.F);
        cfg.scalar.y0 = get_number(s, "y0", cfg.scalar.y0);
        cfg.scalar.manufactured =
            get_bool(s, "manufactured", cfg.scalar.manufactured);
    }
    if (j.contains("system")) {
        const json& s = j.at("system");
        require_keys(s, {"name"}, "system");
        cfg.system.name = get_string(s, "name", cfg.system.name);
        if (cfg.system.name != "pathsum2")
            throw config_error("config: system.name must be 'pathsum2'");
    }
    if (j.contains("schrodinger")) {
        const json& s = j.at("schrodinger");
        require_keys(s, {"grid_n", "time_dependent"}, "schrodinger");
        cfg.schrodinger.grid_n = get_int(s, "grid_n", cfg.schrodinger.grid_n);
        if (cfg.schrodinger.grid_n < 5)
            throw config_error("config: schrodinger.grid_n must be >= 5");
        cfg.schrodinger.time_dependent =
            get_bool(s, "time_dependent", cfg.schrodinger.time_dependent);
    }
    return cfg;
}

std::string serialize_config(const ProblemConfig& cfg) {
    json j;
    switch (cfg.kind) {
    case ProblemKind::scalar: j["kind"] = "scalar"; break;
    case ProblemKind::system: j["kind"] = "system"; break;
    case ProblemKind::schrodinger: j["kind"] = "schrodinger"; break;
    }
    j["alpha"] = cfg.alpha;
    j["T"] = cfg.T;
    j["m"] = cfg.m;
    if (cfg.cutoff.kind == CutoffPolicy::Kind::automatic)
        j["cutoff"] = "auto";
    else
        j["cutoff"] = cfg.cutoff.k;
    switch (cfg.solver) {
    case SolverKind::dense: j["solver"] = "dense"; break;
    case SolverKind::stein: j["solver"] = "stein"; break;
    case SolverKind::projected: j["solver"] = "projected"; break;
    case SolverKind::lowrank: j["solver"] = "lowrank"; break;
    case SolverKind::abm: j["solver"] = "abm"; break;
    }
    j["dt"] = cfg.dt;
    j["tol"] = cfg.tol;
    j["krylov_dim"] = cfg.krylov_dim;
    j["scalar"] = {{"field", cfg.scalar.field},
                   {"F", cfg.scalar.F},
                   {"y0", cfg.scalar.y0},
                   {"manufactured", cfg.scalar.manufactured}};
    j["system"] = {{"name", cfg.system.name}};
    j["schrodinger"] = {{"grid_n", cfg.schrodinger.grid_n},
                        {"time_dependent", cfg.schrodinger.time_dependent}};
    return j.dump(2) + "\n";
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace starfode
