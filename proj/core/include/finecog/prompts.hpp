#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace finecog {

/// The nine cognitive roles, one prompt template each.
enum class Role {
    InstructionParser,
    SubgoalExtractor,
    Attention,
    Perception,
    Imagination,
    SubgoalJudger,
    StepMemory,
    SubgoalMemory,
    Decision,
};

inline constexpr Role kAllRoles[] = {
    Role::InstructionParser, Role::SubgoalExtractor, Role::Attention,
    Role::Perception,        Role::Imagination,      Role::SubgoalJudger,
    Role::StepMemory,        Role::SubgoalMemory,    Role::Decision,
};

std::string role_name(Role role);
Role role_from_name(const std::string& name);

/// Placeholder names each role's template is allowed to use. Assembly must
/// supply exactly these fields.
const std::set<std::string>& required_placeholders(Role role);

/// Placeholder tokens found in a template ({name}; doubled braces escape).
std::set<std::string> placeholders_in(const std::string& tmpl);

/// Fill a template: "{{"/"}}" become literal braces, "{name}" is replaced by
/// fields.at(name). Unknown placeholders or stray braces raise
/// ContractViolation; the result never contains an unfilled token.
std::string assemble_prompt(const std::string& tmpl,
                            const std::map<std::string, std::string>& fields);

/// Loads the per-role template text files from a directory and, when a
/// manifest.json is present, verifies their checksums.
class PromptLibrary {
public:
    static PromptLibrary load(const std::filesystem::path& dir);

    const std::string& template_for(Role role) const;
    const std::filesystem::path& dir() const { return dir_; }

    /// Assemble the prompt for a role, validating the field set.
    std::string render(Role role, const std::map<std::string, std::string>& fields) const;

private:
    std::filesystem::path dir_;
    std::map<Role, std::string> templates_;
};

/// Directory with the shipped templates: $FINECOG_PROMPT_DIR when set,
/// otherwise the source-tree asset directory compiled into the library.
std::filesystem::path default_prompt_dir();

} // namespace finecog
