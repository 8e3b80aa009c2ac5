#include "finecog/gateway.hpp"

#include "finecog/errors.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <optional>

namespace finecog {

using nlohmann::json;

namespace {

std::optional<std::string> fenced_json_block(const std::string& raw) {
    const std::string open = "```json";
    const auto start = raw.find(open);
    if (start == std::string::npos) {
        return std::nullopt;
    }
    auto body = start + open.size();
    if (body < raw.size() && raw[body] == '\r') {
        ++body;
    }
    if (body < raw.size() && raw[body] == '\n') {
        ++body;
    }
    const auto end = raw.find("```", body);
    if (end == std::string::npos) {
        return std::nullopt;
    }
    return raw.substr(body, end - body);
}

// First balanced {...} or [...] region, respecting string literals.
std::optional<std::string> balanced_json_region(const std::string& raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c != '{' && c != '[') {
            continue;
        }
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t j = i; j < raw.size(); ++j) {
            const char d = raw[j];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (d == '\\') {
                    escaped = true;
                } else if (d == '"') {
                    in_string = false;
                }
                continue;
            }
            if (d == '"') {
                in_string = true;
            } else if (d == '{' || d == '[') {
                ++depth;
            } else if (d == '}' || d == ']') {
                --depth;
                if (depth == 0) {
                    return raw.substr(i, j - i + 1);
                }
            }
        }
    }
    return std::nullopt;
}

const json& require_field(const json& doc, const char* field, Role role) {
    if (!doc.is_object() || !doc.contains(field)) {
        throw SchemaMismatch(role_name(role) + " reply missing field: " + field);
    }
    return doc[field];
}

std::string require_string(const json& doc, const char* field, Role role) {
    const json& v = require_field(doc, field, role);
    if (!v.is_string()) {
        throw SchemaMismatch(role_name(role) + " field must be a string: " + field);
    }
    return v.get<std::string>();
}

int decision_action_id(const json& v) {
    if (v.is_number_integer()) {
        return v.get<int>();
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
                return std::isdigit(c);
            })) {
            return std::stoi(s);
        }
    }
    throw SchemaMismatch("decision selected_action must be an action number");
}

void validate_schema(const json& doc, Role role) {
    switch (role) {
    case Role::InstructionParser: {
        if (!doc.is_array() || doc.empty()) {
            throw SchemaMismatch("instruction_parser reply must be a non-empty array");
        }
        for (const auto& item : doc) {
            require_string(item, "sub-instruction", role);
            const json& landmarks = require_field(item, "landmark", role);
            if (!landmarks.is_array()) {
                throw SchemaMismatch("instruction_parser landmark must be an array");
            }
            for (const auto& lm : landmarks) {
                if (!lm.is_string()) {
                    throw SchemaMismatch("instruction_parser landmarks must be strings");
                }
            }
        }
        break;
    }
    case Role::SubgoalExtractor: {
        if (!doc.is_array() || doc.empty()) {
            throw SchemaMismatch("subgoal_extractor reply must be a non-empty array");
        }
        for (const auto& item : doc) {
            if (!item.is_string() || item.get<std::string>().empty()) {
                throw SchemaMismatch("subgoals must be non-empty strings");
            }
        }
        break;
    }
    case Role::Attention: {
        if (!doc.is_array()) {
            throw SchemaMismatch("attention reply must be an array");
        }
        for (const auto& item : doc) {
            require_string(item, "landmark", role);
            require_string(item, "question", role);
        }
        break;
    }
    case Role::Perception: {
        if (require_string(doc, "overall", role).empty() ||
            require_string(doc, "details", role).empty()) {
            throw SchemaMismatch("perception overall/details must be non-empty");
        }
        break;
    }
    case Role::Imagination: {
        if (require_string(doc, "state", role).empty()) {
            throw SchemaMismatch("imagination state must be non-empty");
        }
        break;
    }
    case Role::SubgoalJudger: {
        require_string(doc, "subgoal", role);
        const json& achieved = require_field(doc, "achieved", role);
        if (!achieved.is_boolean()) {
            throw SchemaMismatch("subgoal_judger achieved must be a boolean");
        }
        require_string(doc, "reason", role);
        break;
    }
    case Role::StepMemory:
        require_string(doc, "step_memory", role);
        break;
    case Role::SubgoalMemory:
        require_string(doc, "subgoal_memory", role);
        break;
    case Role::Decision: {
        require_string(doc, "thought", role);
        const json& probs = require_field(doc, "probabilities", role);
        if (!probs.is_object()) {
            throw SchemaMismatch("decision probabilities must be an object");
        }
        for (auto it = probs.begin(); it != probs.end(); ++it) {
            if (!it.value().is_number()) {
                throw SchemaMismatch("decision probabilities must be numeric");
            }
            if (it.value().get<double>() < 0.0) {
                throw SchemaMismatch("decision probabilities must be non-negative");
            }
        }
        const int selected = decision_action_id(require_field(doc, "selected_action", role));
        if (selected < 0 || selected > 7) {
            throw SchemaMismatch("decision selected_action out of action range: " +
                                 std::to_string(selected));
        }
        break;
    }
    }
}

} // namespace

json extract_json_payload(const std::string& raw) {
    if (auto fenced = fenced_json_block(raw)) {
        json doc = json::parse(*fenced, nullptr, false);
        if (!doc.is_discarded()) {
            return doc;
        }
        throw MalformedOutput("json code fence does not contain valid JSON");
    }
    if (auto region = balanced_json_region(raw)) {
        json doc = json::parse(*region, nullptr, false);
        if (!doc.is_discarded()) {
            return doc;
        }
    }
    throw MalformedOutput("reply contains no parseable JSON value");
}

json extract_structured(const std::string& raw, Role role) {
    json doc = extract_json_payload(raw);
    validate_schema(doc, role);
    return doc;
}

} // namespace finecog
