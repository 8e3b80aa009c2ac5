#pragma once

#include "finecog/gateway.hpp"
#include "finecog/geometry.hpp"
#include "finecog/sensing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finecog {

/// One instruction sentence with its landmarks (landmark-free sentences keep
/// an empty list).
struct InstructionSentence {
    std::string text;
    std::vector<std::string> landmarks;

    bool operator==(const InstructionSentence&) const = default;
};

struct ParsedInstruction {
    std::vector<InstructionSentence> sentences;
};

struct SubgoalList {
    std::vector<std::string> subgoals;
    int source_sentence_index = 0;
};

struct AttentionQuery {
    std::string landmark;
    std::string question;
};

struct AttentionQueries {
    std::vector<AttentionQuery> entries;
};

struct Observation {
    std::string overall;
    std::string details;

    /// Prompt form: overall line followed by the details line.
    std::string render() const { return overall + "\n" + details; }
};

struct ImaginedState {
    std::string state;
};

struct JudgerVerdict {
    std::string subgoal;
    bool achieved = false;
    std::string reason;
};

struct Decision {
    std::string thought;
    std::vector<std::pair<int, double>> probabilities; // action id -> weight
    int selected_action = 0;
    /// Set when selected_action differs from the argmax of probabilities;
    /// selected_action wins, the caller counts the divergence.
    bool argmax_divergence = false;
};

// --- prompt fill helpers (pure; shared with tests) -------------------------

/// "None" marker used for absent optional fills.
inline constexpr const char* kNoneMarker = "None";

/// " | "-joined landmark list, or "None" when empty.
std::string join_landmarks(const std::vector<std::string>& landmarks);

/// Sentence text plus a "Landmark: ..." line, the attention-template shape.
std::string format_sentence_block(const InstructionSentence& sentence);

/// Questions, one per line; "None" when there are none.
std::string format_queries(const AttentionQueries& queries);

/// Numbered action list, one "id: LABEL" line per id.
std::string format_valid_actions(const std::vector<int>& action_ids);

/// Collision warnings are emphasized in the decision prompt; "None" passes
/// through unchanged.
std::string format_warning_for_prompt(const std::string& warning);

// --- operations -------------------------------------------------------------

ParsedInstruction parse_instruction(GatewaySession& session, const PromptLibrary& prompts,
                                    const std::string& instruction, int step_index);

SubgoalList extract_subgoals(GatewaySession& session, const PromptLibrary& prompts,
                             const std::string& sentence_text, const Observation& observation,
                             int sentence_index, int step_index);

AttentionQueries make_attention_queries(GatewaySession& session, const PromptLibrary& prompts,
                                        const InstructionSentence& current,
                                        const std::optional<InstructionSentence>& next,
                                        int step_index);

Observation perceive(GatewaySession& session, const PromptLibrary& prompts,
                     const std::string& image_ref, const AttentionQueries& queries,
                     int step_index);

/// Offline perception oracle: renders the observation text directly from the
/// labeled-object oracle instead of a model. Objects are bucketed at +-15
/// degrees bearing into front/left/right; occluded objects are not reported.
Observation synthetic_observation(const std::vector<VisibleObject>& objects);

ImaginedState imagine(GatewaySession& session, const PromptLibrary& prompts,
                      const std::string& subgoal, const std::vector<std::string>& landmarks,
                      const std::optional<std::string>& next_subgoal, int step_index);

JudgerVerdict judge_subgoal(GatewaySession& session, const PromptLibrary& prompts,
                            const Observation& observation, const std::string& subgoal,
                            const std::string& subgoal_memory_rendered,
                            const ImaginedState& imagined, const std::string& next_subgoal,
                            int step_index);

Decision decide(GatewaySession& session, const PromptLibrary& prompts,
                const std::string& subgoal, const std::string& sentence_text,
                const Observation& observation, const std::string& warning,
                const std::string& instruction_memory_rendered,
                const std::vector<int>& valid_action_ids, int step_index);

std::string summarize_step(GatewaySession& session, const PromptLibrary& prompts,
                           const Observation& observation, const ActionCommand& action,
                           const std::vector<std::string>& landmarks, int step_index);

std::string consolidate_subgoal(GatewaySession& session, const PromptLibrary& prompts,
                                const std::string& raw_memory_rendered,
                                const std::vector<std::string>& landmarks, int step_index);

} // namespace finecog
