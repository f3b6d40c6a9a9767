#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hallubench/llm/types.hpp"

namespace hallubench::predict {

enum class Task { HIV, BBBP, Clintox, SIDER, Tox21 };

std::string_view to_string(Task task) noexcept;
// Case-insensitive. Throws UnknownTask.
Task parse_task(std::string_view name);

// The yes/no question for the task, ending "Only answer Yes or No:".
std::string_view task_instruction(Task task) noexcept;

// user = smiles [+ " " + description] + "\n" + instruction. A blank
// description is left out entirely.
llm::ChatPrompt build_task_prompt(std::string_view smiles, std::string_view description, Task task);

}  // namespace hallubench::predict
