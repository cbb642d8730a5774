#include "driftwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace driftwalk {

namespace {

using nlohmann::json;

const char* kind_name(EnvKind kind) {
    switch (kind) {
        case EnvKind::Explicit: return "explicit";
        case EnvKind::Periodic: return "periodic";
        case EnvKind::Ceil: return "ceil";
        case EnvKind::Upsilon: return "upsilon";
        case EnvKind::IidSample: return "iid";
    }
    return "?";
}

}  // namespace

json env_to_json(const LineEnvironment& env) {
    json j;
    j["kind"] = kind_name(env.kind());
    j["p"] = rational_str(env.p().value());
    j["lambda"] = rational_str(env.lambda());
    j["shift"] = env.shift_offset();
    json params = json::object();
    switch (env.kind()) {
        case EnvKind::Explicit: {
            json sites = json::object();
            for (const auto& [site, prob] : env.sites())
                sites[std::to_string(site)] = rational_str(prob);
            params["sites"] = std::move(sites);
            break;
        }
        case EnvKind::Periodic:
            params["period"] = env.period();
            params["offsets"] = env.offsets();
            break;
        case EnvKind::Ceil:
            break;  // p and lambda say it all
        case EnvKind::Upsilon:
            params["m"] = env.upsilon_m();
            break;
        case EnvKind::IidSample:
            params["window"] = env.window();
            params["seed"] = env.seed();
            break;
    }
    j["params"] = std::move(params);
    return j;
}

json env_to_json(const FiniteEnvironment& env) {
    json j;
    j["kind"] = "finite";
    j["p"] = rational_str(env.p().value());
    j["params"] = {{"N", env.N()}, {"drifts", env.drifts()}};
    return j;
}

json env_to_json(const EnvSpec& spec) {
    return std::visit([](const auto& env) { return env_to_json(env); }, spec);
}

namespace {

Probability prob_from(const json& j, const char* key, const Rational& fallback) {
    if (!j.contains(key)) return Probability(fallback);
    return Probability::parse(j.at(key).get<std::string>());
}

LineEnvironment line_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const json& params = j.contains("params") ? j.at("params") : json::object();
    const Probability p = prob_from(j, "p", Rational(1));
    LineEnvironment env = [&] {
        if (kind == "explicit") {
            std::map<int64_t, Rational> sites;
            if (params.contains("sites"))
                for (const auto& [site, prob] : params.at("sites").items())
                    sites.emplace(std::stoll(site), parse_rational(prob.get<std::string>()));
            return LineEnvironment::explicit_sites(std::move(sites), p);
        }
        if (kind == "periodic")
            return LineEnvironment::periodic(params.at("period").get<int64_t>(),
                                             params.at("offsets").get<std::vector<int64_t>>(), p);
        if (kind == "ceil")
            return LineEnvironment::ceil_construction(
                p, parse_rational(j.at("lambda").get<std::string>()));
        if (kind == "upsilon")
            return LineEnvironment::upsilon(params.at("m").get<int64_t>(),
                                            parse_rational(j.at("lambda").get<std::string>()), p);
        if (kind == "iid")
            return LineEnvironment::iid_sample(p,
                                               parse_rational(j.at("lambda").get<std::string>()),
                                               params.at("window").get<int64_t>(),
                                               params.at("seed").get<uint64_t>());
        throw std::invalid_argument("unknown environment kind: " + kind);
    }();
    return env.shifted(j.value("shift", int64_t{0}));
}

}  // namespace

EnvSpec env_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("environment document needs a \"kind\" field");
    if (j.at("kind").get<std::string>() == "finite") {
        const json& params = j.at("params");
        return FiniteEnvironment(params.at("N").get<int64_t>(),
                                 prob_from(j, "p", Rational(1)),
                                 params.at("drifts").get<std::vector<int64_t>>());
    }
    return line_from_json(j);
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

bool known_inline_kind(const std::string& kind) {
    return kind == "driftless" || kind == "explicit" || kind == "periodic" ||
           kind == "equally-spaced" || kind == "ceil" || kind == "upsilon" || kind == "iid" ||
           kind == "finite";
}

std::vector<int64_t> int_list(const std::string& text) {
    std::vector<int64_t> out;
    if (text.empty()) return out;
    for (const std::string& part : split(text, ';')) out.push_back(std::stoll(part));
    return out;
}

EnvSpec parse_inline_spec(const std::string& kind, const std::string& rest) {
    std::map<std::string, std::string> kv;
    if (!rest.empty())
        for (const std::string& field : split(rest, ',')) {
            const auto eq = field.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("expected key=value in environment spec, got: " +
                                            field);
            kv[field.substr(0, eq)] = field.substr(eq + 1);
        }
    const auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("environment spec '") + kind +
                                        "' needs " + key + "=...");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const auto take_or = [&](const char* key, const std::string& fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    const int64_t shift = std::stoll(take_or("shift", "0"));
    EnvSpec spec = [&]() -> EnvSpec {
        if (kind == "driftless") return LineEnvironment::driftless();
        if (kind == "explicit") {
            const Probability p = Probability::parse(take("p"));
            std::map<int64_t, Rational> sites;
            for (int64_t site : int_list(take_or("drifts", "")))
                sites.emplace(site, p.value());
            return LineEnvironment::explicit_sites(std::move(sites), p);
        }
        if (kind == "periodic")
            return LineEnvironment::periodic(std::stoll(take("period")),
                                             int_list(take("offsets")),
                                             Probability::parse(take("p")));
        if (kind == "equally-spaced")
            return LineEnvironment::equally_spaced(std::stoll(take("m")),
                                                   Probability::parse(take("p")));
        if (kind == "ceil")
            return LineEnvironment::ceil_construction(Probability::parse(take("p")),
                                                      parse_rational(take("lambda")));
        if (kind == "upsilon")
            return LineEnvironment::upsilon(std::stoll(take("m")),
                                            parse_rational(take("lambda")),
                                            Probability::parse(take_or("p", "1")));
        if (kind == "iid")
            return LineEnvironment::iid_sample(Probability::parse(take("p")),
                                               parse_rational(take("lambda")),
                                               std::stoll(take("window")),
                                               std::stoull(take("seed")));
        // finite
        return FiniteEnvironment(std::stoll(take("N")), Probability::parse(take("p")),
                                 int_list(take_or("drifts", "")));
    }();
    if (!kv.empty())
        throw std::invalid_argument("unknown key in environment spec: " + kv.begin()->first);
    if (shift != 0) {
        auto* line = std::get_if<LineEnvironment>(&spec);
        if (!line) throw std::invalid_argument("shift applies to line environments only");
        return line->shifted(shift);
    }
    return spec;
}

}  // namespace

EnvSpec parse_env_spec(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty environment spec");
    if (text.front() == '{') return env_from_json(json::parse(text));
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon == std::string::npos ? text.size() : colon);
    if (known_inline_kind(head))
        return parse_inline_spec(head,
                                 colon == std::string::npos ? "" : text.substr(colon + 1));
    std::ifstream in(text);
    if (!in) throw std::invalid_argument("environment spec is neither inline nor a readable file: " +
                                         text);
    json j;
    in >> j;
    return env_from_json(j);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string env_window_csv(const LineEnvironment& env, int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("window start exceeds window end");
    std::ostringstream out;
    out << "site,prob\n";
    for (int64_t x = lo; x <= hi; ++x)
        out << x << ',' << rational_str(env.right_prob(x)) << '\n';
    return out.str();
}

}  // namespace driftwalk
