#include "seekbench/harness/replay.hpp"

#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace seekbench::harness {

std::string replay_transcript(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::string out;
  std::string header;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(fmt::format("line {}: {}", line_no, e.what()));
    }
    if (!j.is_object() || !j.contains("a") || !j.contains("o")) {
      throw std::invalid_argument(fmt::format("line {}: expected an object with \"a\" and \"o\"", line_no));
    }
    if (j.value("marker", false)) out += "---- history reset ----\n";
    std::string h = "Steps";
    if (j.contains("attempt")) {
      h = fmt::format("Attempt {} / {}", j["attempt"].get<int>(), j.value("phase", std::string("?")));
      if (j.contains("goal")) h += ": " + j["goal"].get<std::string>();
    }
    if (h != header) {
      out += h + '\n';
      header = h;
    }
    out += fmt::format("  {:>3}. {}\n       -> {}\n", j.value("i", line_no - 1) + 1, j["a"].get<std::string>(),
                       j["o"].get<std::string>());
  }
  if (out.empty()) out = "(empty transcript)\n";
  return out;
}

}  // namespace seekbench::harness
