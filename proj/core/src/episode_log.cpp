#include "finecog/episode_log.hpp"

#include "finecog/errors.hpp"
#include "finecog/json_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace finecog {

using nlohmann::json;

std::string to_string(TerminalReason reason) {
    switch (reason) {
    case TerminalReason::TaskFinish:
        return "task-finish";
    case TerminalReason::AllSentencesComplete:
        return "all-sentences-complete";
    case TerminalReason::StepCap:
        return "cap";
    case TerminalReason::BackendAbort:
        return "backend-abort";
    }
    throw ContractViolation("unknown terminal reason");
}

TerminalReason terminal_reason_from_string(const std::string& name) {
    for (TerminalReason r : {TerminalReason::TaskFinish, TerminalReason::AllSentencesComplete,
                             TerminalReason::StepCap, TerminalReason::BackendAbort}) {
        if (to_string(r) == name) {
            return r;
        }
    }
    throw ContractViolation("unknown terminal reason: " + name);
}

void EpisodeConfig::validate() const {
    if (step_cap < 1) {
        throw ContractViolation("step_cap must be at least 1");
    }
    collision.validate();
    if (render_width != collision.img_width || render_height != collision.img_height) {
        throw ContractViolation("render resolution must match collision params dimensions");
    }
    if (fov_deg != collision.fov) {
        throw ContractViolation("render fov must match collision params fov");
    }
    for (int id : prompt_action_ids) {
        if (!is_valid_action_id(id)) {
            throw ContractViolation("prompt action id out of range: " + std::to_string(id));
        }
    }
}

json EpisodeConfig::to_json() const {
    return {
        {"step_cap", step_cap},
        {"judger_first_step", judger_first_step},
        {"sentence_transition_replan", sentence_transition_replan},
        {"collision",
         {{"img_width", collision.img_width},
          {"img_height", collision.img_height},
          {"drone_width", collision.drone_width},
          {"drone_height", collision.drone_height},
          {"fov", collision.fov},
          {"forward_distance", collision.forward_distance},
          {"vertical_distance", collision.vertical_distance},
          {"gradient_threshold", collision.gradient_threshold},
          {"band_fraction", collision.band_fraction}}},
        {"collision_mode", to_string(collision_mode)},
        {"render_width", render_width},
        {"render_height", render_height},
        {"fov_deg", fov_deg},
        {"max_range", max_range},
        {"prompt_action_ids", prompt_action_ids},
        {"malformed_retries", malformed_retries},
    };
}

EpisodeConfig EpisodeConfig::from_json(const json& j) {
    EpisodeConfig cfg;
    cfg.step_cap = j.at("step_cap").get<int>();
    cfg.judger_first_step = j.at("judger_first_step").get<bool>();
    cfg.sentence_transition_replan = j.at("sentence_transition_replan").get<bool>();
    const auto& c = j.at("collision");
    cfg.collision.img_width = c.at("img_width").get<int>();
    cfg.collision.img_height = c.at("img_height").get<int>();
    cfg.collision.drone_width = c.at("drone_width").get<double>();
    cfg.collision.drone_height = c.at("drone_height").get<double>();
    cfg.collision.fov = c.at("fov").get<double>();
    cfg.collision.forward_distance = c.at("forward_distance").get<double>();
    cfg.collision.vertical_distance = c.at("vertical_distance").get<double>();
    cfg.collision.gradient_threshold = c.at("gradient_threshold").get<double>();
    cfg.collision.band_fraction = c.at("band_fraction").get<double>();
    cfg.collision_mode = collision_mode_from_string(j.at("collision_mode").get<std::string>());
    cfg.render_width = j.at("render_width").get<int>();
    cfg.render_height = j.at("render_height").get<int>();
    cfg.fov_deg = j.at("fov_deg").get<double>();
    cfg.max_range = j.at("max_range").get<double>();
    cfg.prompt_action_ids = j.at("prompt_action_ids").get<std::vector<int>>();
    cfg.malformed_retries = j.at("malformed_retries").get<int>();
    return cfg;
}

namespace {

json observation_to_json(const Observation& obs) {
    return {{"overall", obs.overall}, {"details", obs.details}};
}

Observation observation_from_json(const json& j) {
    return {j.at("overall").get<std::string>(), j.at("details").get<std::string>()};
}

json transcript_to_json(const TranscriptEntry& t) {
    json j = {{"role", role_name(t.role)},
              {"step", t.step_index},
              {"prompt", t.prompt},
              {"response", t.response},
              {"attempts", t.attempts}};
    if (t.image_ref) {
        j["image_ref"] = *t.image_ref;
    }
    return j;
}

TranscriptEntry transcript_from_json(const json& j) {
    TranscriptEntry t;
    t.role = role_from_name(j.at("role").get<std::string>());
    t.step_index = j.at("step").get<int>();
    t.prompt = j.at("prompt").get<std::string>();
    t.response = j.at("response").get<std::string>();
    t.attempts = j.at("attempts").get<int>();
    if (j.contains("image_ref")) {
        t.image_ref = j["image_ref"].get<std::string>();
    }
    return t;
}

json step_to_json(const StepRecord& s) {
    json j = {
        {"type", "step"},
        {"step", s.step},
        {"pose_before", pose_to_json(s.pose_before)},
        {"pose_after", pose_to_json(s.pose_after)},
        {"observation", observation_to_json(s.observation)},
        {"warning", s.warning},
        {"sentence_index", s.sentence_index},
        {"subgoal_index", s.subgoal_index},
        {"subgoal", s.subgoal},
        {"sentence_completed", s.sentence_completed},
        {"instruction_memory_size", s.instruction_memory_size},
    };
    if (s.pre_transition_observation) {
        j["pre_transition_observation"] = observation_to_json(*s.pre_transition_observation);
    }
    if (s.verdict) {
        j["verdict"] = {{"subgoal", s.verdict->subgoal},
                        {"achieved", s.verdict->achieved},
                        {"reason", s.verdict->reason}};
    }
    if (s.decision) {
        json probs = json::object();
        for (const auto& [id, w] : s.decision->probabilities) {
            probs[std::to_string(id)] = w;
        }
        j["decision"] = {{"thought", s.decision->thought},
                         {"probabilities", probs},
                         {"selected_action", s.decision->selected_action},
                         {"argmax_divergence", s.decision->argmax_divergence}};
    }
    if (s.action) {
        j["action"] = static_cast<int>(s.action->kind);
    }
    if (s.step_memory) {
        j["step_memory"] = *s.step_memory;
    }
    json transcripts = json::array();
    for (const auto& t : s.transcripts) {
        transcripts.push_back(transcript_to_json(t));
    }
    j["transcripts"] = transcripts;
    return j;
}

StepRecord step_from_json(const json& j) {
    StepRecord s;
    s.step = j.at("step").get<int>();
    s.pose_before = pose_from_json(j.at("pose_before"));
    s.pose_after = pose_from_json(j.at("pose_after"));
    s.observation = observation_from_json(j.at("observation"));
    s.warning = j.at("warning").get<std::string>();
    s.sentence_index = j.at("sentence_index").get<int>();
    s.subgoal_index = j.at("subgoal_index").get<int>();
    s.subgoal = j.at("subgoal").get<std::string>();
    s.sentence_completed = j.at("sentence_completed").get<bool>();
    s.instruction_memory_size = j.at("instruction_memory_size").get<int>();
    if (j.contains("pre_transition_observation")) {
        s.pre_transition_observation = observation_from_json(j["pre_transition_observation"]);
    }
    if (j.contains("verdict")) {
        const auto& v = j["verdict"];
        s.verdict = JudgerVerdict{v.at("subgoal").get<std::string>(),
                                  v.at("achieved").get<bool>(),
                                  v.at("reason").get<std::string>()};
    }
    if (j.contains("decision")) {
        const auto& d = j["decision"];
        Decision dec;
        dec.thought = d.at("thought").get<std::string>();
        for (auto it = d.at("probabilities").begin(); it != d.at("probabilities").end(); ++it) {
            dec.probabilities.emplace_back(std::stoi(it.key()), it.value().get<double>());
        }
        dec.selected_action = d.at("selected_action").get<int>();
        dec.argmax_divergence = d.at("argmax_divergence").get<bool>();
        s.decision = dec;
    }
    if (j.contains("action")) {
        s.action = ActionCommand::of(action_from_id(j["action"].get<int>()));
    }
    if (j.contains("step_memory")) {
        s.step_memory = j["step_memory"].get<std::string>();
    }
    for (const auto& t : j.at("transcripts")) {
        s.transcripts.push_back(transcript_from_json(t));
    }
    return s;
}

} // namespace

std::vector<Pose> EpisodeLog::visited_poses() const {
    std::vector<Pose> poses;
    poses.push_back(header.start);
    for (const auto& s : steps) {
        if (s.action) {
            poses.push_back(s.pose_after);
        }
    }
    return poses;
}

Pose EpisodeLog::final_pose() const {
    const auto poses = visited_poses();
    return poses.back();
}

std::string EpisodeLog::to_ndjson() const {
    std::ostringstream out;
    json h = {{"type", "header"},
              {"schema_version", header.schema_version},
              {"episode_id", header.episode_id},
              {"instruction", header.instruction},
              {"start", pose_to_json(header.start)},
              {"destination", pose_to_json(header.destination)},
              {"world_checksum", header.world_checksum},
              {"config", header.config.to_json()}};
    out << h.dump() << '\n';
    for (const auto& s : steps) {
        out << step_to_json(s).dump() << '\n';
    }
    json end = {{"type", "end"},
                {"reason", to_string(terminal_reason)},
                {"steps", static_cast<int>(steps.size())},
                {"sentence_completion_steps", sentence_completion_steps},
                {"final_pose", pose_to_json(final_pose())},
                {"argmax_divergences", argmax_divergences}};
    if (abort_message) {
        end["abort_message"] = *abort_message;
    }
    out << end.dump() << '\n';
    return out.str();
}

EpisodeLog EpisodeLog::from_ndjson(const std::string& text) {
    EpisodeLog log;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    bool have_end = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json j = json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            if (j.at("schema_version").get<int>() != 1) {
                throw Error("unsupported episode log schema version");
            }
            log.header.schema_version = 1;
            log.header.episode_id = j.at("episode_id").get<std::string>();
            log.header.instruction = j.at("instruction").get<std::string>();
            log.header.start = pose_from_json(j.at("start"));
            log.header.destination = pose_from_json(j.at("destination"));
            log.header.world_checksum = j.at("world_checksum").get<std::string>();
            log.header.config = EpisodeConfig::from_json(j.at("config"));
            have_header = true;
        } else if (type == "step") {
            log.steps.push_back(step_from_json(j));
        } else if (type == "end") {
            log.terminal_reason = terminal_reason_from_string(j.at("reason").get<std::string>());
            log.sentence_completion_steps =
                j.at("sentence_completion_steps").get<std::vector<int>>();
            log.argmax_divergences = j.at("argmax_divergences").get<int>();
            if (j.contains("abort_message")) {
                log.abort_message = j["abort_message"].get<std::string>();
            }
            have_end = true;
        } else {
            throw Error("unknown log record type: " + type);
        }
    }
    if (!have_header || !have_end) {
        throw Error("episode log is missing its header or terminal record");
    }
    return log;
}

void EpisodeLog::save_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write episode log: " + path.string());
    }
    out << to_ndjson();
}

EpisodeLog EpisodeLog::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open episode log: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_ndjson(buf.str());
}

} // namespace finecog
