#include "ionpulse/json_io.hpp"

#include <fstream>

namespace ionpulse {

namespace {

void reject_unknown(const Json& j, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw UsageError("unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
T get_or(const Json& j, const std::string& key, const T& fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

} // namespace

Json spec_to_json(const PulseSpec& spec) {
    return Json{{"m", spec.m},     {"n", spec.n},     {"delta", spec.delta},
                {"f", spec.f},     {"eta", spec.eta}, {"f_tg", spec.f_tg}};
}

namespace {
void check_schema(const Json& j, const std::string& where) {
    if (j.contains("schema") && j.at("schema") != 1)
        throw UsageError("unsupported schema version in " + where + " (expected 1)");
}
} // namespace

PulseSpec spec_from_json(const Json& j) {
    if (!j.is_object()) throw UsageError("pulse spec must be a JSON object");
    reject_unknown(j, {"schema", "m", "n", "delta", "f", "eta", "f_tg"}, "pulse spec");
    check_schema(j, "pulse spec");
    PulseSpec spec;
    try {
        spec.m = j.at("m").get<int>();
        spec.n = j.at("n").get<int>();
        spec.delta = j.at("delta").get<double>();
        spec.f = j.at("f").get<std::vector<double>>();
        if (j.at("eta").is_number())
            spec.eta.assign(static_cast<std::size_t>(2 * spec.n + 1), j.at("eta").get<double>());
        else
            spec.eta = j.at("eta").get<std::vector<double>>();
        spec.f_tg = j.at("f_tg").get<double>();
    } catch (const Json::exception& e) {
        throw UsageError(std::string("bad pulse spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

namespace {

ObjectiveKind objective_kind_from(const std::string& name) {
    if (name == "state") return ObjectiveKind::state;
    if (name == "gate_truncated") return ObjectiveKind::gate_truncated;
    if (name == "gate_asymptotic") return ObjectiveKind::gate_asymptotic;
    throw UsageError("unknown objective '" + name + "'");
}

std::string objective_kind_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::state: return "state";
        case ObjectiveKind::gate_truncated: return "gate_truncated";
        default: return "gate_asymptotic";
    }
}

} // namespace

Json problem_to_json(const OptimizationProblem& p) {
    return Json{{"schema", 1},
                {"objective", objective_kind_name(p.objective.kind)},
                {"initial", basis_label(p.objective.initial)},
                {"average_pair", p.objective.average_pair},
                {"d", p.objective.d},
                {"constraints", p.constraints == ConstraintChoice::seven ? "seven" : "five"},
                {"m", p.m},
                {"n", p.n},
                {"eta", p.eta},
                {"f_tg", p.f_tg},
                {"delta_scan",
                 Json{{"lo", p.scan.lo},
                      {"hi", p.scan.hi},
                      {"step", p.scan.step},
                      {"refine_iters", p.scan.refine_iters}}}};
}

OptimizationProblem problem_from_json(const Json& j) {
    if (!j.is_object()) throw UsageError("problem must be a JSON object");
    reject_unknown(j,
                   {"schema", "objective", "initial", "average_pair", "d", "constraints", "m", "n",
                    "eta", "f_tg", "delta_scan"},
                   "problem");
    check_schema(j, "problem");
    OptimizationProblem p;
    try {
        p.objective.kind = objective_kind_from(get_or<std::string>(j, "objective", "state"));
        p.objective.initial = parse_basis_label(get_or<std::string>(j, "initial", "g1"));
        p.objective.average_pair = get_or(j, "average_pair", false);
        p.objective.d = get_or(j, "d", 2);
        const std::string cons = get_or<std::string>(j, "constraints", "five");
        if (cons != "five" && cons != "seven")
            throw UsageError("constraints must be 'five' or 'seven'");
        p.constraints = cons == "seven" ? ConstraintChoice::seven : ConstraintChoice::five;
        p.m = j.at("m").get<int>();
        p.n = j.at("n").get<int>();
        p.eta = j.at("eta").get<double>();
        p.f_tg = j.at("f_tg").get<double>();
        if (j.contains("delta_scan")) {
            const Json& s = j.at("delta_scan");
            reject_unknown(s, {"lo", "hi", "step", "refine_iters"}, "delta_scan");
            p.scan.lo = get_or(s, "lo", p.scan.lo);
            p.scan.hi = get_or(s, "hi", p.scan.hi);
            p.scan.step = get_or(s, "step", p.scan.step);
            p.scan.refine_iters = get_or(s, "refine_iters", p.scan.refine_iters);
        }
    } catch (const Json::exception& e) {
        throw UsageError(std::string("bad problem file: ") + e.what());
    }
    p.validate();
    return p;
}

Json result_to_json(const OptimizationResult& r) {
    Json profile = Json::array();
    for (const auto& [delta, value] : r.delta_profile) profile.push_back(Json{delta, value});
    return Json{{"schema", 1},
                {"delta_opt", r.delta_opt},
                {"f_opt", std::vector<double>(r.f_opt.data(), r.f_opt.data() + r.f_opt.size())},
                {"objective_value", r.objective_value},
                {"residuals",
                 std::vector<double>(r.residuals.data(), r.residuals.data() + r.residuals.size())},
                {"residual_norm", r.residual_norm},
                {"feasible", r.feasible},
                {"iterations", r.iterations},
                {"kkt_norm", r.kkt_norm},
                {"delta_profile", profile}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw UsageError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

PulseSpec load_spec(const std::string& path) { return spec_from_json(load_json_file(path)); }

OptimizationProblem load_problem(const std::string& path) {
    return problem_from_json(load_json_file(path));
}

void apply_override(Json& doc, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("override must look like key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::exception&) {
        value = raw; // treat as a plain string
    }
    Json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw UsageError("bad override path '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

} // namespace ionpulse
