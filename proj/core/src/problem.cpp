#include "tsys/problem.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tsys {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw SpecError(where + ": expected a number");
    return j.get<double>();
}

ExprPtr parse_expression(const std::string& src, const std::string& where) {
    try {
        return parse(src);
    } catch (const ParseError& e) {
        throw SpecError(where + ": " + e.what());
    }
}

}  // namespace

ProblemSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec parse error: ") + e.what());
    }
    if (!doc.is_object()) throw SpecError("spec: top level must be an object");

    ProblemSpec spec;

    if (!doc.contains("interval") || !doc["interval"].is_array() || doc["interval"].size() != 2) {
        throw SpecError("spec: 'interval' must be an array [a, b]");
    }
    spec.a = require_number(doc["interval"][0], "interval[0]");
    spec.b = require_number(doc["interval"][1], "interval[1]");
    if (!(spec.a < spec.b)) throw SpecError("spec: interval requires a < b");

    if (!doc.contains("functions") || !doc["functions"].is_array() || doc["functions"].empty()) {
        throw SpecError("spec: 'functions' must be a nonempty array of expression strings");
    }
    for (std::size_t i = 0; i < doc["functions"].size(); ++i) {
        const json& f = doc["functions"][i];
        std::string where = "functions[" + std::to_string(i) + "]";
        if (!f.is_string()) throw SpecError(where + ": expected an expression string");
        spec.function_sources.push_back(f.get<std::string>());
        spec.functions.push_back(parse_expression(spec.function_sources.back(), where));
    }

    if (!doc.contains("objective") || !doc["objective"].is_string()) {
        throw SpecError("spec: 'objective' must be an expression string");
    }
    spec.objective_source = doc["objective"].get<std::string>();
    spec.objective = parse_expression(spec.objective_source, "objective");

    if (!doc.contains("moments") || !doc["moments"].is_array()) {
        throw SpecError("spec: 'moments' must be an array of numbers");
    }
    for (std::size_t i = 0; i < doc["moments"].size(); ++i) {
        spec.moments.push_back(require_number(doc["moments"][i], "moments[" + std::to_string(i) + "]"));
    }
    if (spec.moments.size() != spec.functions.size()) {
        throw SpecError("spec: " + std::to_string(spec.functions.size()) + " functions but " +
                        std::to_string(spec.moments.size()) + " moments");
    }

    if (doc.contains("options")) {
        const json& o = doc["options"];
        if (!o.is_object()) throw SpecError("spec: 'options' must be an object");
        if (o.contains("grid")) {
            if (!o["grid"].is_number_integer()) throw SpecError("options.grid: expected an integer");
            spec.options.grid = o["grid"].get<int>();
            if (spec.options.grid < 2) throw SpecError("options.grid: need at least 2 nodes");
        }
        if (o.contains("seed")) {
            if (!o["seed"].is_number_unsigned()) throw SpecError("options.seed: expected an unsigned integer");
            spec.options.seed = o["seed"].get<std::uint64_t>();
        }
        if (o.contains("tol")) {
            double tol = require_number(o["tol"], "options.tol");
            if (!(tol > 0.0)) throw SpecError("options.tol: must be positive");
            spec.options.tol = tol;
        }
        if (o.contains("rescale")) {
            if (!o["rescale"].is_string()) throw SpecError("options.rescale: expected an expression string");
            spec.options.rescale_source = o["rescale"].get<std::string>();
            spec.options.rescale_h = parse_expression(spec.options.rescale_source, "options.rescale");
        }
    }
    return spec;
}

ProblemSpec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

FunctionSystem ProblemSpec::make_system() const {
    std::vector<ExprPtr> funcs = functions;
    funcs.push_back(objective);
    FunctionSystem sys(a, b, std::move(funcs));
    if (options.rescale_h) {
        return rescale(sys, options.rescale_h);
    }
    return sys;
}

}  // namespace tsys
