#pragma once

#include "finecog/episode_log.hpp"
#include "finecog/prompts.hpp"
#include "finecog/world.hpp"

#include <memory>
#include <optional>
#include <string>

namespace finecog {

/// Drives one episode through the full loop: perception guided by cached
/// attention queries, collision advisory, subgoal judging against cached
/// imagination, hierarchical memory upkeep, decision, and action execution,
/// until TaskFinish, sentence exhaustion, or the step cap.
///
/// perception_backend may be null, which switches the perception role to the
/// synthetic observation oracle computed from the world's labeled objects.
/// Gateway failures stop the episode with reason backend-abort; the steps
/// executed so far stay in the returned log.
EpisodeLog run_episode(const VoxelWorld& world, const Pose& start,
                       const std::string& instruction, const Pose& destination,
                       const EpisodeConfig& config, const PromptLibrary& prompts,
                       std::shared_ptr<Backend> text_backend,
                       std::shared_ptr<Backend> perception_backend,
                       const std::string& episode_id);

struct ReplayDivergence {
    int step = 0;
    std::string kind; // "pose" | "warning" | "world"
    std::string detail;
};

struct ReplayReport {
    int steps_checked = 0;
    std::vector<ReplayDivergence> divergences;

    bool clean() const { return divergences.empty(); }
    int count(const std::string& kind) const;
};

/// Re-executes kinematics and collision checks from the logged decisions and
/// reports every pose or warning that disagrees with the log. The collision
/// mode may be overridden to compare estimator variants on the same episode.
ReplayReport replay(const EpisodeLog& log, const VoxelWorld& world,
                    std::optional<CollisionMode> mode_override = std::nullopt);

} // namespace finecog
