#ifndef IONPULSE_JSON_IO_HPP
#define IONPULSE_JSON_IO_HPP

#include <json.hpp>

#include "ionpulse/optimizer.hpp"

namespace ionpulse {

using Json = nlohmann::json;

// Pulse files carry exactly {m, n, delta, f, eta, f_tg}; f and eta are
// ordered j = -n..n. Unknown keys are usage errors.
Json spec_to_json(const PulseSpec& spec);
PulseSpec spec_from_json(const Json& j);

Json problem_to_json(const OptimizationProblem& problem);
OptimizationProblem problem_from_json(const Json& j);

Json result_to_json(const OptimizationResult& result);

Json load_json_file(const std::string& path); // parsed document
PulseSpec load_spec(const std::string& path);
OptimizationProblem load_problem(const std::string& path);

// Applies one `key=value` override to a JSON document; dotted keys descend
// into nested objects, values are parsed as JSON with string fallback.
void apply_override(Json& doc, const std::string& assignment);

} // namespace ionpulse

#endif
