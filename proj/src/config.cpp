#include "longdiff/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "longdiff/error.hpp"

namespace longdiff {
namespace {

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& what) {
    require(j.is_object(), what + " must be a JSON object");
    for (const auto& key : required) {
        require(j.contains(key), what + " is missing field '" + key + "'");
    }
    for (const auto& [key, _] : j.items()) {
        require(required.count(key) || optional.count(key),
                what + " has unknown field '" + key + "'");
    }
}

template <typename T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("field '") + key + "': " + e.what());
    }
}

std::size_t get_count(const json& j, const char* key) {
    const auto& v = j.at(key);
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
            std::string("field '") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace

void RunConfig::validate() const {
    require(G >= 2 && G <= N, "config requires 2 <= G <= N");
    require(L < N, "config requires 0 <= L < N");
    require(n <= N, "config requires 0 <= n <= N");
    require(std::isfinite(alpha) && alpha >= 0.0, "config requires alpha >= 0");
    require(replace_fraction >= 0.0 && replace_fraction <= 1.0,
            "config requires 0 <= replace_fraction <= 1");
    longdiff::validate(rpe);
}

json to_json(const RPEKind& rpe) {
    if (const auto* rope = std::get_if<Rotary>(&rpe)) {
        return json{{"kind", "rotary"},
                    {"head_dim", rope->head_dim},
                    {"rotary_dims", rope->rotary_dims},
                    {"base", rope->base}};
    }
    const auto& bias = std::get<AdditiveBias>(rpe);
    return json{{"kind", "additive_bias"},
                {"head_dim", bias.head_dim},
                {"max_distance", bias.max_distance},
                {"bias_table", bias.bias_table}};
}

RPEKind rpe_from_json(const json& j) {
    require(j.is_object() && j.contains("kind"), "rpe must be an object with a 'kind' field");
    const auto kind = get_field<std::string>(j, "kind");
    RPEKind rpe;
    if (kind == "rotary") {
        require_keys(j, {"kind", "head_dim", "rotary_dims"}, {"base"}, "rotary rpe");
        Rotary rope;
        rope.head_dim = get_count(j, "head_dim");
        rope.rotary_dims = get_count(j, "rotary_dims");
        if (j.contains("base")) rope.base = get_field<double>(j, "base");
        rpe = rope;
    } else if (kind == "additive_bias") {
        require_keys(j, {"kind", "head_dim", "max_distance", "bias_table"}, {},
                     "additive_bias rpe");
        AdditiveBias bias;
        bias.head_dim = get_count(j, "head_dim");
        bias.max_distance = static_cast<long>(get_count(j, "max_distance"));
        bias.bias_table = get_field<std::vector<double>>(j, "bias_table");
        rpe = bias;
    } else {
        fail(ErrorCode::InvalidArgument, "unknown rpe kind '" + kind + "'");
    }
    validate(rpe);
    return rpe;
}

json to_json(const RunConfig& cfg) {
    return json{{"N", cfg.N},
                {"G", cfg.G},
                {"L", cfg.L},
                {"n", cfg.n},
                {"alpha", cfg.alpha},
                {"replace_fraction", cfg.replace_fraction},
                {"seed", cfg.seed},
                {"rpe", to_json(cfg.rpe)}};
}

RunConfig run_config_from_json(const json& j) {
    require_keys(j, {"N", "G", "L", "n", "alpha", "replace_fraction", "seed", "rpe"}, {},
                 "run config");
    RunConfig cfg;
    cfg.N = get_count(j, "N");
    cfg.G = get_count(j, "G");
    cfg.L = get_count(j, "L");
    cfg.n = get_count(j, "n");
    cfg.alpha = get_field<double>(j, "alpha");
    cfg.replace_fraction = get_field<double>(j, "replace_fraction");
    cfg.seed = get_field<std::uint64_t>(j, "seed");
    cfg.rpe = rpe_from_json(j.at("rpe"));
    cfg.validate();
    return cfg;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::InvalidArgument, "invalid JSON in " + path.string() + ": " + e.what());
    }
}

void save_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return run_config_from_json(load_json(path));
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
    save_json(to_json(cfg), path);
}

}  // namespace longdiff
