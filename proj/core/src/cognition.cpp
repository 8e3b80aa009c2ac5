#include "finecog/cognition.hpp"

#include "finecog/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace finecog {

using nlohmann::json;

std::string join_landmarks(const std::vector<std::string>& landmarks) {
    if (landmarks.empty()) {
        return kNoneMarker;
    }
    std::string out;
    for (std::size_t i = 0; i < landmarks.size(); ++i) {
        if (i > 0) {
            out += " | ";
        }
        out += landmarks[i];
    }
    return out;
}

std::string format_sentence_block(const InstructionSentence& sentence) {
    return sentence.text + "\nLandmark: " + join_landmarks(sentence.landmarks);
}

std::string format_queries(const AttentionQueries& queries) {
    if (queries.entries.empty()) {
        return kNoneMarker;
    }
    std::string out;
    for (std::size_t i = 0; i < queries.entries.size(); ++i) {
        if (i > 0) {
            out += "\n";
        }
        out += queries.entries[i].question;
    }
    return out;
}

std::string format_valid_actions(const std::vector<int>& action_ids) {
    std::string out;
    for (std::size_t i = 0; i < action_ids.size(); ++i) {
        if (i > 0) {
            out += "\n";
        }
        out += std::to_string(action_ids[i]) + ": " + action_label(action_from_id(action_ids[i]));
    }
    return out;
}

std::string format_warning_for_prompt(const std::string& warning) {
    if (warning == kNoneMarker) {
        return warning;
    }
    return "**" + warning + "**";
}

ParsedInstruction parse_instruction(GatewaySession& session, const PromptLibrary& prompts,
                                    const std::string& instruction, int step_index) {
    if (instruction.empty()) {
        throw ContractViolation("instruction must be non-empty");
    }
    const std::string prompt = prompts.render(
        Role::InstructionParser, {{"navigation_instruction", instruction}});
    const json reply =
        session.complete_structured(Role::InstructionParser, prompt, std::nullopt, step_index);

    ParsedInstruction parsed;
    for (const auto& item : reply) {
        InstructionSentence sentence;
        sentence.text = item.at("sub-instruction").get<std::string>();
        for (const auto& lm : item.at("landmark")) {
            sentence.landmarks.push_back(lm.get<std::string>());
        }
        parsed.sentences.push_back(std::move(sentence));
    }
    return parsed;
}

SubgoalList extract_subgoals(GatewaySession& session, const PromptLibrary& prompts,
                             const std::string& sentence_text, const Observation& observation,
                             int sentence_index, int step_index) {
    const std::string prompt = prompts.render(
        Role::SubgoalExtractor,
        {{"instruction", sentence_text}, {"observation", observation.render()}});
    const json reply =
        session.complete_structured(Role::SubgoalExtractor, prompt, std::nullopt, step_index);

    SubgoalList list;
    list.source_sentence_index = sentence_index;
    for (const auto& item : reply) {
        list.subgoals.push_back(item.get<std::string>());
    }
    return list;
}

AttentionQueries make_attention_queries(GatewaySession& session, const PromptLibrary& prompts,
                                        const InstructionSentence& current,
                                        const std::optional<InstructionSentence>& next,
                                        int step_index) {
    const std::string prompt = prompts.render(
        Role::Attention,
        {{"current_instruction", format_sentence_block(current)},
         {"next_instruction", next ? format_sentence_block(*next) : kNoneMarker}});
    const json reply =
        session.complete_structured(Role::Attention, prompt, std::nullopt, step_index);

    AttentionQueries queries;
    for (const auto& item : reply) {
        queries.entries.push_back(
            {item.at("landmark").get<std::string>(), item.at("question").get<std::string>()});
    }
    return queries;
}

Observation perceive(GatewaySession& session, const PromptLibrary& prompts,
                     const std::string& image_ref, const AttentionQueries& queries,
                     int step_index) {
    const std::string prompt =
        prompts.render(Role::Perception, {{"suggestion", format_queries(queries)}});
    const json reply =
        session.complete_structured(Role::Perception, prompt, image_ref, step_index);
    return {reply.at("overall").get<std::string>(), reply.at("details").get<std::string>()};
}

Observation synthetic_observation(const std::vector<VisibleObject>& objects) {
    std::vector<std::string> front, left, right;
    for (const auto& obj : objects) {
        if (obj.occluded) {
            continue;
        }
        std::ostringstream part;
        part << obj.label << ", about " << static_cast<long long>(std::llround(obj.distance_m))
             << " meters away";
        if (obj.bearing_deg > 15.0) {
            left.push_back(part.str());
        } else if (obj.bearing_deg < -15.0) {
            right.push_back(part.str());
        } else {
            front.push_back(part.str());
        }
    }

    const auto join = [](const std::vector<std::string>& parts) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i > 0) {
                out += "; ";
            }
            out += parts[i];
        }
        return out;
    };

    Observation obs;
    const std::size_t visible = front.size() + left.size() + right.size();
    std::ostringstream overall;
    overall << "Overall: I see a scene of a simulated voxel environment with " << visible
            << " visible labeled object" << (visible == 1 ? "" : "s") << ".";
    obs.overall = overall.str();

    if (visible == 0) {
        obs.details = "None of the listed landmarks are visible.";
        return obs;
    }
    std::string details;
    if (!front.empty()) {
        details += "In Front: " + join(front) + ".";
    }
    if (!left.empty()) {
        if (!details.empty()) {
            details += " ";
        }
        details += "On my Left: " + join(left) + ".";
    }
    if (!right.empty()) {
        if (!details.empty()) {
            details += " ";
        }
        details += "On my Right: " + join(right) + ".";
    }
    obs.details = details;
    return obs;
}

ImaginedState imagine(GatewaySession& session, const PromptLibrary& prompts,
                      const std::string& subgoal, const std::vector<std::string>& landmarks,
                      const std::optional<std::string>& next_subgoal, int step_index) {
    const std::string prompt = prompts.render(
        Role::Imagination, {{"subgoal", subgoal},
                            {"landmark", join_landmarks(landmarks)},
                            {"next_subgoal", next_subgoal ? *next_subgoal : kNoneMarker}});
    const json reply =
        session.complete_structured(Role::Imagination, prompt, std::nullopt, step_index);
    return {reply.at("state").get<std::string>()};
}

JudgerVerdict judge_subgoal(GatewaySession& session, const PromptLibrary& prompts,
                            const Observation& observation, const std::string& subgoal,
                            const std::string& subgoal_memory_rendered,
                            const ImaginedState& imagined, const std::string& next_subgoal,
                            int step_index) {
    const std::string prompt = prompts.render(Role::SubgoalJudger,
                                              {{"subgoal", subgoal},
                                               {"history", subgoal_memory_rendered},
                                               {"scene", observation.render()},
                                               {"state", imagined.state},
                                               {"next_subgoal", next_subgoal}});
    const json reply =
        session.complete_structured(Role::SubgoalJudger, prompt, std::nullopt, step_index);
    return {reply.at("subgoal").get<std::string>(), reply.at("achieved").get<bool>(),
            reply.at("reason").get<std::string>()};
}

Decision decide(GatewaySession& session, const PromptLibrary& prompts,
                const std::string& subgoal, const std::string& sentence_text,
                const Observation& observation, const std::string& warning,
                const std::string& instruction_memory_rendered,
                const std::vector<int>& valid_action_ids, int step_index) {
    const std::string prompt =
        prompts.render(Role::Decision, {{"memory", instruction_memory_rendered},
                                        {"observation", observation.render()},
                                        {"collisions_warning", format_warning_for_prompt(warning)},
                                        {"current_instruction", sentence_text},
                                        {"subgoal", subgoal},
                                        {"actions", format_valid_actions(valid_action_ids)}});

    // TaskFinish (0) stays admissible even when the rendered list starts at 1;
    // the template itself references "the action 0".
    std::set<int> admissible(valid_action_ids.begin(), valid_action_ids.end());
    admissible.insert(0);

    const auto parse_id = [](const json& v) {
        return v.is_string() ? std::stoi(v.get<std::string>()) : v.get<int>();
    };
    const auto validate = [&](const json& payload) {
        const int selected = parse_id(payload.at("selected_action"));
        if (!admissible.count(selected)) {
            throw SchemaMismatch("selected_action " + std::to_string(selected) +
                                 " is not in the valid action set");
        }
        for (auto it = payload.at("probabilities").begin();
             it != payload.at("probabilities").end(); ++it) {
            const int id = std::stoi(it.key());
            if (!admissible.count(id)) {
                throw SchemaMismatch("probability key " + it.key() +
                                     " is not in the valid action set");
            }
        }
    };

    const json reply = session.complete_structured(Role::Decision, prompt, std::nullopt,
                                                   step_index, validate);

    Decision decision;
    decision.thought = reply.at("thought").get<std::string>();
    for (auto it = reply.at("probabilities").begin(); it != reply.at("probabilities").end();
         ++it) {
        decision.probabilities.emplace_back(std::stoi(it.key()), it.value().get<double>());
    }
    std::sort(decision.probabilities.begin(), decision.probabilities.end());
    decision.selected_action = parse_id(reply.at("selected_action"));

    if (!decision.probabilities.empty()) {
        double max_weight = 0.0;
        double selected_weight = -1.0;
        for (const auto& [id, weight] : decision.probabilities) {
            max_weight = std::max(max_weight, weight);
            if (id == decision.selected_action) {
                selected_weight = weight;
            }
        }
        // selected_action wins over the argmax; the flag just records that
        // the model contradicted its own weights.
        decision.argmax_divergence = selected_weight < max_weight;
    }
    return decision;
}

std::string summarize_step(GatewaySession& session, const PromptLibrary& prompts,
                           const Observation& observation, const ActionCommand& action,
                           const std::vector<std::string>& landmarks, int step_index) {
    const std::string prompt =
        prompts.render(Role::StepMemory, {{"observation", observation.render()},
                                          {"action", action_label(action.kind)},
                                          {"landmarks", join_landmarks(landmarks)}});
    const json reply =
        session.complete_structured(Role::StepMemory, prompt, std::nullopt, step_index);
    return reply.at("step_memory").get<std::string>();
}

std::string consolidate_subgoal(GatewaySession& session, const PromptLibrary& prompts,
                                const std::string& raw_memory_rendered,
                                const std::vector<std::string>& landmarks, int step_index) {
    const std::string prompt =
        prompts.render(Role::SubgoalMemory, {{"raw_memory", raw_memory_rendered},
                                             {"landmarks", join_landmarks(landmarks)}});
    const json reply =
        session.complete_structured(Role::SubgoalMemory, prompt, std::nullopt, step_index);
    return reply.at("subgoal_memory").get<std::string>();
}

} // namespace finecog
