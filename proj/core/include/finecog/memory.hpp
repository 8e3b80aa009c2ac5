#pragma once

#include <optional>
#include <string>
#include <vector>

namespace finecog {

struct StepMemoryEntry {
    int step_index = 0; // environment step the summary was produced at
    std::string text;

    bool operator==(const StepMemoryEntry&) const = default;
};

/// Raw per-subgoal accumulation of step summaries, consolidated exactly once
/// when the subgoal completes.
struct SubgoalMemory {
    std::string subgoal;
    std::vector<StepMemoryEntry> raw;
    std::optional<std::string> consolidated;
};

/// Appends one step summary; indices must be strictly increasing within the
/// subgoal.
void append_step(SubgoalMemory& memory, const StepMemoryEntry& entry);

struct InstructionMemoryEntry {
    std::string subgoal;
    std::string consolidated;
};

/// Ordered consolidated summaries of the current sentence's completed
/// subgoals. Resets to empty at every sentence transition.
struct InstructionMemory {
    std::vector<InstructionMemoryEntry> entries;

    void clear() { entries.clear(); }
    std::size_t size() const { return entries.size(); }
};

/// "At step-k: <text>" lines, renumbered 1..n within the subgoal;
/// empty memory renders as "None".
std::string render_subgoal_raw(const SubgoalMemory& memory);

/// Completed subgoal blocks ("For <subgoal>:" followed by the consolidated
/// text) in completion order, then the active subgoal's block holding its raw
/// rendering. An empty active_subgoal omits the active block; when nothing
/// remains the rendering is "None".
std::string render_instruction_memory(const InstructionMemory& memory,
                                      const std::string& active_subgoal,
                                      const SubgoalMemory& active_raw);

/// Finishes a subgoal: marks the memory consolidated, appends the entry to
/// the instruction memory, and returns a fresh empty memory for the next
/// subgoal. consolidated may be empty only when raw was empty.
SubgoalMemory complete_subgoal(SubgoalMemory& memory, const std::string& consolidated,
                               InstructionMemory& instruction_memory);

} // namespace finecog
