#pragma once

#include "finecog/cognition.hpp"
#include "finecog/collision.hpp"
#include "finecog/gateway.hpp"
#include "finecog/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace finecog {

/// Why an episode stopped.
enum class TerminalReason {
    TaskFinish,
    AllSentencesComplete,
    StepCap,
    BackendAbort,
};

std::string to_string(TerminalReason reason);
TerminalReason terminal_reason_from_string(const std::string& name);

/// Orchestration knobs, snapshotted into every log header.
struct EpisodeConfig {
    int step_cap = 150;
    bool judger_first_step = true;
    bool sentence_transition_replan = true;
    CollisionParams collision;
    CollisionMode collision_mode = CollisionMode::Corrected;
    int render_width = 672;
    int render_height = 672;
    double fov_deg = 90.0;
    double max_range = 1000.0;
    /// Action ids enumerated in the decision prompt; TaskFinish (0) is
    /// admissible regardless.
    std::vector<int> prompt_action_ids = {1, 2, 3, 4, 5, 6, 7};
    int malformed_retries = 2;

    void validate() const;
    nlohmann::json to_json() const;
    static EpisodeConfig from_json(const nlohmann::json& j);
};

/// Everything observed and decided during one environment step.
struct StepRecord {
    int step = 0;
    Pose pose_before;
    Pose pose_after;
    Observation observation; // the observation the decision saw
    /// First perception of a sentence-transition step (the view the judger
    /// and subgoal extractor saw before re-perceiving).
    std::optional<Observation> pre_transition_observation;
    std::string warning;
    std::optional<JudgerVerdict> verdict;
    std::optional<Decision> decision;
    std::optional<ActionCommand> action;
    int sentence_index = 0; // active at decision time
    int subgoal_index = 0;
    std::string subgoal;
    bool sentence_completed = false;
    int instruction_memory_size = 0; // entries at decision time
    std::optional<std::string> step_memory;
    std::vector<TranscriptEntry> transcripts;
};

struct EpisodeLogHeader {
    int schema_version = 1;
    std::string episode_id;
    std::string instruction;
    Pose start;
    Pose destination;
    std::string world_checksum;
    EpisodeConfig config;
};

/// Newline-delimited JSON on disk: one header record, one record per step,
/// one terminal record. The contract consumed by metrics and replay.
struct EpisodeLog {
    EpisodeLogHeader header;
    std::vector<StepRecord> steps;
    TerminalReason terminal_reason = TerminalReason::StepCap;
    std::optional<std::string> abort_message;
    std::vector<int> sentence_completion_steps;
    int argmax_divergences = 0;

    /// Start pose followed by each step's resulting pose.
    std::vector<Pose> visited_poses() const;
    Pose final_pose() const;

    std::string to_ndjson() const;
    static EpisodeLog from_ndjson(const std::string& text);
    void save_file(const std::filesystem::path& path) const;
    static EpisodeLog load_file(const std::filesystem::path& path);
};

} // namespace finecog
