#pragma once

#include "driftwalk/environment.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace driftwalk {

/// An environment argument on the command line resolves to one of these.
using EnvSpec = std::variant<LineEnvironment, FiniteEnvironment>;

/// Schema: {"kind": ..., "p": "num/den", "lambda": "num/den", "shift": s,
/// "params": {...}}.  Lossless: parsing the emitted document reproduces an
/// equal environment, rationals included.
nlohmann::json env_to_json(const LineEnvironment& env);
nlohmann::json env_to_json(const FiniteEnvironment& env);
nlohmann::json env_to_json(const EnvSpec& spec);
EnvSpec env_from_json(const nlohmann::json& j);

/// Accepts, in order of recognition: an inline "kind:key=val,key=val" string
/// (list values use ';'), inline JSON (leading '{'), or a path to a JSON
/// file.  Inline kinds: driftless, explicit, periodic, equally-spaced, ceil,
/// upsilon, iid, finite.
EnvSpec parse_env_spec(const std::string& text);

/// %.15g, the float precision used in all CSV output.
std::string format_double(double x);

/// CSV lines "site,prob" (exact rationals) for sites in [lo, hi].
std::string env_window_csv(const LineEnvironment& env, int64_t lo, int64_t hi);

}  // namespace driftwalk
