#pragma once

#include "finecog/prompts.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace finecog {

/// One model invocation. Only the perception role may carry an image
/// reference; the prompt is the fully assembled role template.
struct RoleRequest {
    Role role = Role::Decision;
    std::string prompt;
    std::optional<std::string> image_ref;
    std::string episode_id;
    int step_index = 0;
};

struct BackendConfig {
    enum class Kind {
        Scripted,  ///< canned responses from a script file
        Http,      ///< chat-completion style endpoint
        Synthetic, ///< perception only: observation rendered from the world
    };

    Kind kind = Kind::Scripted;
    std::string endpoint;   // http only, e.g. "http://host:port/v1/chat/completions"
    std::string model_name;
    double timeout_s = 30.0;
    int max_retries = 2;
    std::filesystem::path script_path; // scripted only
    std::string api_key_env = "FINECOG_API_KEY";

    void validate() const;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const RoleRequest& request) = 0;
};

/// Deterministic stand-in model. Responses are keyed by
/// "episode_id/role/index" where index is a per-(episode, role) counter that
/// advances on every call, so one environment step may consume several
/// entries of the same role. Counters are independent across episodes and
/// may be consumed concurrently.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::map<std::string, std::string> script);
    static std::shared_ptr<ScriptedBackend> load_file(const std::filesystem::path& path);

    std::string complete(const RoleRequest& request) override;

    /// Starts the episode's counters over (used when re-running an episode).
    void reset_episode(const std::string& episode_id);

private:
    std::map<std::string, std::string> script_;
    std::mutex mutex_;
    std::map<std::string, int> counters_; // "episode_id/role" -> next index
};

/// Minimal chat-completion client. Credentials come from the environment
/// variable named in the config, never from files; transport failures are
/// retried up to max_retries before BackendUnavailable.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config);

    std::string complete(const RoleRequest& request) override;

private:
    BackendConfig config_;
    std::string host_;
    int port_ = 80;
    std::string path_;
};

std::shared_ptr<Backend> make_backend(const BackendConfig& config);

/// Verbatim request/response pair kept for audit in the episode log.
struct TranscriptEntry {
    Role role = Role::Decision;
    int step_index = 0;
    std::string prompt;
    std::optional<std::string> image_ref;
    std::string response;
    int attempts = 1; // raw calls consumed, retries included
};

/// Locates the first ```json fenced block (or, failing that, the first
/// balanced top-level JSON value) and parses it. Throws MalformedOutput when
/// nothing parseable exists.
nlohmann::json extract_json_payload(const std::string& raw);

/// Payload extraction plus per-role schema validation (required fields and
/// their shapes). Throws MalformedOutput / SchemaMismatch.
nlohmann::json extract_structured(const std::string& raw, Role role);

/// Episode-scoped gateway handle: issues requests against a shared backend,
/// records transcripts, and retries malformed replies with the same prompt.
/// One session belongs to exactly one episode and is not thread-safe.
class GatewaySession {
public:
    GatewaySession(std::shared_ptr<Backend> backend, std::string episode_id,
                   int malformed_retries = 2);

    const std::string& episode_id() const { return episode_id_; }

    /// Single raw completion, no parsing.
    std::string complete_raw(Role role, const std::string& prompt,
                             const std::optional<std::string>& image_ref, int step_index);

    /// Completion + extract_structured, retrying MalformedOutput and
    /// SchemaMismatch up to the configured retry budget with the same prompt.
    /// The optional validator runs inside the retry loop and may throw
    /// SchemaMismatch for reply-content checks the schema alone cannot cover.
    nlohmann::json complete_structured(
        Role role, const std::string& prompt, const std::optional<std::string>& image_ref,
        int step_index,
        const std::function<void(const nlohmann::json&)>& validate = nullptr);

    /// Logical operation invocations per role (retries not counted).
    int invocations(Role role) const;
    /// Raw backend calls per role (retries counted).
    int raw_calls(Role role) const;

    const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
    /// Hands the accumulated transcript to the caller and clears it.
    std::vector<TranscriptEntry> drain_transcript();

private:
    std::shared_ptr<Backend> backend_;
    std::string episode_id_;
    int malformed_retries_;
    std::vector<TranscriptEntry> transcript_;
    std::map<Role, int> invocations_;
    std::map<Role, int> raw_calls_;
};

} // namespace finecog
