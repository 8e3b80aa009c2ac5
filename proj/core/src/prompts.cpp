#include "finecog/prompts.hpp"

#include "finecog/checksum.hpp"
#include "finecog/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace finecog {

using nlohmann::json;

std::string to_hex(std::uint64_t value) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string role_name(Role role) {
    switch (role) {
    case Role::InstructionParser:
        return "instruction_parser";
    case Role::SubgoalExtractor:
        return "subgoal_extractor";
    case Role::Attention:
        return "attention";
    case Role::Perception:
        return "perception";
    case Role::Imagination:
        return "imagination";
    case Role::SubgoalJudger:
        return "subgoal_judger";
    case Role::StepMemory:
        return "step_memory";
    case Role::SubgoalMemory:
        return "subgoal_memory";
    case Role::Decision:
        return "decision";
    }
    throw ContractViolation("unknown role");
}

Role role_from_name(const std::string& name) {
    for (Role role : kAllRoles) {
        if (role_name(role) == name) {
            return role;
        }
    }
    throw ContractViolation("unknown role name: " + name);
}

const std::set<std::string>& required_placeholders(Role role) {
    static const std::map<Role, std::set<std::string>> table = {
        {Role::InstructionParser, {"navigation_instruction"}},
        {Role::SubgoalExtractor, {"instruction", "observation"}},
        {Role::Attention, {"current_instruction", "next_instruction"}},
        {Role::Perception, {"suggestion"}},
        {Role::Imagination, {"subgoal", "landmark", "next_subgoal"}},
        {Role::SubgoalJudger, {"subgoal", "history", "scene", "state", "next_subgoal"}},
        {Role::StepMemory, {"observation", "action", "landmarks"}},
        {Role::SubgoalMemory, {"raw_memory", "landmarks"}},
        {Role::Decision,
         {"memory", "observation", "collisions_warning", "current_instruction", "subgoal",
          "actions"}},
    };
    return table.at(role);
}

std::set<std::string> placeholders_in(const std::string& tmpl) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                ++i;
                continue;
            }
            const auto end = tmpl.find('}', i + 1);
            if (end == std::string::npos) {
                throw ContractViolation("unterminated placeholder in template");
            }
            names.insert(tmpl.substr(i + 1, end - i - 1));
            i = end;
        } else if (tmpl[i] == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                ++i;
                continue;
            }
            throw ContractViolation("stray '}' in template");
        }
    }
    return names;
}

std::string assemble_prompt(const std::string& tmpl,
                            const std::map<std::string, std::string>& fields) {
    std::string out;
    out.reserve(tmpl.size() + 256);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            const auto end = tmpl.find('}', i + 1);
            if (end == std::string::npos) {
                throw ContractViolation("unterminated placeholder in template");
            }
            const std::string name = tmpl.substr(i + 1, end - i - 1);
            const auto it = fields.find(name);
            if (it == fields.end()) {
                throw ContractViolation("no value for template placeholder: {" + name + "}");
            }
            out += it->second;
            i = end;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out += '}';
                ++i;
                continue;
            }
            throw ContractViolation("stray '}' in template");
        } else {
            out += c;
        }
    }
    return out;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib;
    lib.dir_ = dir;

    for (Role role : kAllRoles) {
        const auto path = dir / (role_name(role) + ".txt");
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error("missing prompt template: " + path.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        lib.templates_[role] = buf.str();
    }

    const auto manifest_path = dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        json manifest = json::parse(in);
        for (Role role : kAllRoles) {
            const std::string file = role_name(role) + ".txt";
            if (!manifest.contains(file)) {
                throw Error("prompt manifest missing entry for " + file);
            }
            const std::string expect = manifest[file].get<std::string>();
            const std::string got = to_hex(fnv1a64(lib.templates_.at(role)));
            if (expect != got) {
                throw Error("prompt template checksum mismatch for " + file + ": expected " +
                            expect + ", got " + got);
            }
        }
    }

    // A template using a placeholder outside its role's contract is a
    // packaging error; catch it at load time.
    for (Role role : kAllRoles) {
        const auto used = placeholders_in(lib.templates_.at(role));
        const auto& allowed = required_placeholders(role);
        for (const auto& name : used) {
            if (!allowed.count(name)) {
                throw Error("template for " + role_name(role) +
                            " uses unexpected placeholder {" + name + "}");
            }
        }
    }
    return lib;
}

const std::string& PromptLibrary::template_for(Role role) const {
    return templates_.at(role);
}

std::string PromptLibrary::render(Role role,
                                  const std::map<std::string, std::string>& fields) const {
    const auto& expected = required_placeholders(role);
    for (const auto& [name, value] : fields) {
        if (!expected.count(name)) {
            throw ContractViolation("unexpected field for " + role_name(role) + ": " + name);
        }
    }
    for (const auto& name : expected) {
        if (!fields.count(name)) {
            throw ContractViolation("missing field for " + role_name(role) + ": " + name);
        }
    }
    return assemble_prompt(template_for(role), fields);
}

std::filesystem::path default_prompt_dir() {
    if (const char* env = std::getenv("FINECOG_PROMPT_DIR")) {
        return env;
    }
#ifdef FINECOG_SOURCE_PROMPT_DIR
    return FINECOG_SOURCE_PROMPT_DIR;
#else
    return "assets/prompts";
#endif
}

} // namespace finecog
