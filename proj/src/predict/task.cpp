#include "hallubench/predict/task.hpp"

#include "hallubench/describe/description.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::predict {

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::HIV: return "HIV";
    case Task::BBBP: return "BBBP";
    case Task::Clintox: return "Clintox";
    case Task::SIDER: return "SIDER";
    case Task::Tox21: return "Tox21";
  }
  return "HIV";
}

Task parse_task(std::string_view name) {
  const auto lower = to_lower(trim(name));
  if (lower == "hiv") return Task::HIV;
  if (lower == "bbbp") return Task::BBBP;
  if (lower == "clintox") return Task::Clintox;
  if (lower == "sider") return Task::SIDER;
  if (lower == "tox21") return Task::Tox21;
  throw Error(ErrorCode::UnknownTask, "unknown task '" + std::string(name) + "'");
}

std::string_view task_instruction(Task task) noexcept {
  switch (task) {
    case Task::HIV:
      return "Does the molecule have the ability to inhibit HIV replication? Only answer Yes or No:";
    case Task::BBBP:
      return "Does the molecule have the ability to penetrate the blood-brain barrier? Only answer Yes or No:";
    case Task::Clintox:
      return "Did the molecule fail clinical trials due to toxicity? Only answer Yes or No:";
    case Task::SIDER:
      return "Does the molecule cause side effects on the reproductive system or breast? Only answer Yes or No:";
    case Task::Tox21:
      return "Does the molecule have the potential toxicity affecting mitochondrial membrane potential (SR-MMP)? "
             "Only answer Yes or No:";
  }
  return {};
}

llm::ChatPrompt build_task_prompt(std::string_view smiles, std::string_view description, Task task) {
  std::string user(smiles);
  if (const auto text = trim(description); !text.empty()) user += " " + text;
  user += "\n";
  user += task_instruction(task);
  return {std::string(describe::kExpertSystemPrompt), std::move(user)};
}

}  // namespace hallubench::predict
