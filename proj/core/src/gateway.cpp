#include "finecog/gateway.hpp"

#include "finecog/errors.hpp"

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>

namespace finecog {

using nlohmann::json;

void BackendConfig::validate() const {
    switch (kind) {
    case Kind::Scripted:
        if (script_path.empty()) {
            throw ContractViolation("scripted backend requires script_path");
        }
        break;
    case Kind::Http:
        if (endpoint.empty()) {
            throw ContractViolation("http backend requires an endpoint");
        }
        break;
    case Kind::Synthetic:
        break;
    }
    if (max_retries < 0) {
        throw ContractViolation("max_retries must be non-negative");
    }
}

// ---------------------------------------------------------------------------
// Scripted backend

ScriptedBackend::ScriptedBackend(std::map<std::string, std::string> script)
    : script_(std::move(script)) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open script file: " + path.string());
    }
    json doc = json::parse(in);
    std::map<std::string, std::string> script;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        script[it.key()] = it.value().get<std::string>();
    }
    return std::make_shared<ScriptedBackend>(std::move(script));
}

std::string ScriptedBackend::complete(const RoleRequest& request) {
    const std::string stream = request.episode_id + "/" + role_name(request.role);
    int index = 0;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        index = counters_[stream]++;
    }
    const std::string key = stream + "/" + std::to_string(index);
    const auto it = script_.find(key);
    if (it == script_.end()) {
        throw ScriptExhausted("no scripted response for " + key);
    }
    return it->second;
}

void ScriptedBackend::reset_episode(const std::string& episode_id) {
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string prefix = episode_id + "/";
    for (auto it = counters_.begin(); it != counters_.end();) {
        if (it->first.rfind(prefix, 0) == 0) {
            it = counters_.erase(it);
        } else {
            ++it;
        }
    }
}

// ---------------------------------------------------------------------------
// HTTP backend

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    config_.validate();
    // Accept "http://host:port/path"; httplib handles the scheme-less form too.
    std::string rest = config_.endpoint;
    const auto scheme = rest.find("://");
    if (scheme != std::string::npos) {
        rest = rest.substr(scheme + 3);
    }
    const auto slash = rest.find('/');
    const std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : rest.substr(slash);
    const auto colon = hostport.find(':');
    if (colon == std::string::npos) {
        host_ = hostport;
        port_ = 80;
    } else {
        host_ = hostport.substr(0, colon);
        port_ = std::stoi(hostport.substr(colon + 1));
    }
}

std::string HttpBackend::complete(const RoleRequest& request) {
    json body = {
        {"model", config_.model_name},
        {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
    };
    if (request.image_ref) {
        body["image_reference"] = *request.image_ref;
    }

    const int attempts = config_.max_retries + 1;
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        httplib::Client client(host_, port_);
        client.set_connection_timeout(static_cast<int>(config_.timeout_s),
                                      static_cast<int>(config_.timeout_s * 1e6) % 1000000);
        client.set_read_timeout(static_cast<int>(config_.timeout_s), 0);
        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
        auto res = client.Post(path_, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error: HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw BackendUnavailable("backend rejected request: HTTP " +
                                     std::to_string(res->status) + " " + res->body);
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded()) {
            throw BackendUnavailable("backend returned non-JSON body");
        }
        if (reply.contains("choices") && reply["choices"].is_array() &&
            !reply["choices"].empty()) {
            const auto& choice = reply["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content")) {
                return choice["message"]["content"].get<std::string>();
            }
            if (choice.contains("text")) {
                return choice["text"].get<std::string>();
            }
        }
        throw BackendUnavailable("backend reply has no text choice");
    }
    throw BackendUnavailable("backend unreachable after " + std::to_string(attempts) +
                             " attempts: " + last_error);
}

std::shared_ptr<Backend> make_backend(const BackendConfig& config) {
    config.validate();
    switch (config.kind) {
    case BackendConfig::Kind::Scripted:
        return ScriptedBackend::load_file(config.script_path);
    case BackendConfig::Kind::Http:
        return std::make_shared<HttpBackend>(config);
    case BackendConfig::Kind::Synthetic:
        throw ContractViolation("synthetic perception does not use a gateway backend");
    }
    throw ContractViolation("unknown backend kind");
}

// ---------------------------------------------------------------------------
// Session

GatewaySession::GatewaySession(std::shared_ptr<Backend> backend, std::string episode_id,
                               int malformed_retries)
    : backend_(std::move(backend)), episode_id_(std::move(episode_id)),
      malformed_retries_(malformed_retries) {
    if (!backend_) {
        throw ContractViolation("gateway session requires a backend");
    }
}

std::string GatewaySession::complete_raw(Role role, const std::string& prompt,
                                         const std::optional<std::string>& image_ref,
                                         int step_index) {
    if (image_ref && role != Role::Perception) {
        throw ContractViolation("only the perception role may carry an image");
    }
    RoleRequest request{role, prompt, image_ref, episode_id_, step_index};
    const std::string response = backend_->complete(request);
    raw_calls_[role] += 1;
    transcript_.push_back({role, step_index, prompt, image_ref, response, 1});
    return response;
}

json GatewaySession::complete_structured(Role role, const std::string& prompt,
                                         const std::optional<std::string>& image_ref,
                                         int step_index,
                                         const std::function<void(const json&)>& validate) {
    invocations_[role] += 1;
    std::string diagnostic;
    for (int attempt = 0; attempt <= malformed_retries_; ++attempt) {
        const std::string raw = complete_raw(role, prompt, image_ref, step_index);
        try {
            json payload = extract_structured(raw, role);
            if (validate) {
                validate(payload);
            }
            return payload;
        } catch (const MalformedOutput& e) {
            diagnostic = e.what();
        } catch (const SchemaMismatch& e) {
            diagnostic = e.what();
        }
    }
    throw EpisodeAborted("episode " + episode_id_ + ": " + role_name(role) + " reply at step " +
                         std::to_string(step_index) + " unusable after " +
                         std::to_string(malformed_retries_ + 1) + " attempts: " + diagnostic);
}

int GatewaySession::invocations(Role role) const {
    const auto it = invocations_.find(role);
    return it == invocations_.end() ? 0 : it->second;
}

int GatewaySession::raw_calls(Role role) const {
    const auto it = raw_calls_.find(role);
    return it == raw_calls_.end() ? 0 : it->second;
}

std::vector<TranscriptEntry> GatewaySession::drain_transcript() {
    std::vector<TranscriptEntry> out;
    out.swap(transcript_);
    return out;
}

} // namespace finecog
