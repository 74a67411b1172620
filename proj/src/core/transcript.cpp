#include "seekbench/core/transcript.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "seekbench/core/text.hpp"

namespace seekbench {

bool ActionText::is_valid(std::string_view raw) noexcept {
  return !text::trim(raw).empty() && raw.find_first_of("\r\n") == std::string_view::npos;
}

ActionText::ActionText(std::string_view raw) {
  if (!is_valid(raw)) {
    throw std::invalid_argument("action text must be a single non-empty line");
  }
  raw_ = std::string(text::trim(raw));
}

void Transcript::append(std::string action, std::string observation) {
  entries_.push_back({std::move(action), std::move(observation)});
}

void Transcript::mark() {
  if (markers_.empty() || markers_.back() != entries_.size()) markers_.push_back(entries_.size());
}

std::size_t Transcript::marker_offset() const noexcept { return markers_.empty() ? 0 : markers_.back(); }

std::span<const TranscriptEntry> Transcript::since_marker() const noexcept {
  return std::span<const TranscriptEntry>(entries_).subspan(marker_offset());
}

bool Transcript::marker_before(std::size_t i) const noexcept {
  return std::binary_search(markers_.begin(), markers_.end(), i);
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    nlohmann::ordered_json line;
    line["i"] = i;
    line["a"] = entries_[i].action;
    line["o"] = entries_[i].observation;
    line["marker"] = marker_before(i);
    out += line.dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
  Transcript t;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text::trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.value("marker", false)) t.mark();
    t.append(j.at("a").get<std::string>(), j.at("o").get<std::string>());
  }
  return t;
}

}  // namespace seekbench
