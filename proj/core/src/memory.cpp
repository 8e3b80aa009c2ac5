#include "finecog/memory.hpp"

#include "finecog/errors.hpp"

#include <sstream>

namespace finecog {

void append_step(SubgoalMemory& memory, const StepMemoryEntry& entry) {
    if (!memory.raw.empty() && entry.step_index <= memory.raw.back().step_index) {
        throw ContractViolation("step memory indices must be strictly increasing (got " +
                                std::to_string(entry.step_index) + " after " +
                                std::to_string(memory.raw.back().step_index) + ")");
    }
    memory.raw.push_back(entry);
}

std::string render_subgoal_raw(const SubgoalMemory& memory) {
    if (memory.raw.empty()) {
        return "None";
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < memory.raw.size(); ++i) {
        if (i > 0) {
            out << '\n';
        }
        // Renumbered from 1 per subgoal regardless of environment step.
        out << "At step-" << (i + 1) << ": " << memory.raw[i].text;
    }
    return out.str();
}

std::string render_instruction_memory(const InstructionMemory& memory,
                                      const std::string& active_subgoal,
                                      const SubgoalMemory& active_raw) {
    std::vector<std::string> blocks;
    for (const auto& entry : memory.entries) {
        blocks.push_back("For <" + entry.subgoal + ">:\n" + entry.consolidated);
    }
    if (!active_subgoal.empty()) {
        blocks.push_back("For <" + active_subgoal + ">:\n" + render_subgoal_raw(active_raw));
    }
    if (blocks.empty()) {
        return "None";
    }
    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0) {
            out += "\n";
        }
        out += blocks[i];
    }
    return out;
}

SubgoalMemory complete_subgoal(SubgoalMemory& memory, const std::string& consolidated,
                               InstructionMemory& instruction_memory) {
    if (memory.consolidated.has_value()) {
        throw ContractViolation("subgoal already consolidated: " + memory.subgoal);
    }
    if (consolidated.empty() && !memory.raw.empty()) {
        throw ContractViolation("non-empty raw memory needs a non-empty consolidation");
    }
    memory.consolidated = consolidated;
    instruction_memory.entries.push_back({memory.subgoal, consolidated});
    return SubgoalMemory{};
}

} // namespace finecog
