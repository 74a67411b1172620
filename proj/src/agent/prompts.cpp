#include "seekbench/agent/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "seekbench/core/assets.hpp"

namespace seekbench::agent {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Length of the `{identifier}` at `pos`, or 0.
std::size_t placeholder_at(std::string_view s, std::size_t pos) {
  if (s[pos] != '{') return 0;
  std::size_t end = pos + 1;
  while (end < s.size() && is_ident_char(s[end])) ++end;
  if (end == pos + 1 || end >= s.size() || s[end] != '}') return 0;
  return end - pos + 1;
}

std::string builtin_asset(std::string_view name) {
  const auto text = assets::find(name);
  if (!text) throw RenderError(fmt::format("missing built-in prompt asset {}", name));
  return std::string(*text);
}

struct Field {
  std::string_view file;
  std::string PromptSet::*member;
};

constexpr Field kFields[] = {
    {"seek_initial.txt", &PromptSet::seek_initial},
    {"seek_with_history.txt", &PromptSet::seek_with_history},
    {"extract.txt", &PromptSet::extract},
    {"plan.txt", &PromptSet::plan},
    {"llm3_backtrack.txt", &PromptSet::llm3_backtrack},
    {"llm3_from_scratch.txt", &PromptSet::llm3_from_scratch},
    {"react_fewshot.txt", &PromptSet::react_fewshot},
    {"icl.txt", &PromptSet::icl},
    {"uncertainty_preamble.txt", &PromptSet::uncertainty_preamble},
    {"failure_classifier.txt", &PromptSet::failure_classifier},
};

}  // namespace

PromptSet PromptSet::builtin() {
  PromptSet p;
  for (const auto& f : kFields) p.*f.member = builtin_asset(f.file);
  return p;
}

PromptSet PromptSet::load(const std::string& dir) {
  PromptSet p = builtin();
  for (const auto& f : kFields) {
    const auto path = std::filesystem::path(dir) / f.file;
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    p.*f.member = ss.str();
  }
  p.validate();
  return p;
}

void PromptSet::validate() const {
  for (const auto& f : kFields) {
    for (const auto& name : placeholders(this->*f.member)) {
      if (name != kDomainDesc && name != kInteractionHistory && name != kInformation) {
        throw RenderError(fmt::format("prompt {} uses unknown placeholder {{{}}}", f.file, name));
      }
    }
  }
}

std::vector<std::string> placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (const auto len = placeholder_at(tmpl, i)) {
      out.emplace_back(tmpl.substr(i + 1, len - 2));
      i += len - 1;
    }
  }
  return out;
}

std::string render_prompt(std::string_view tmpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const auto len = placeholder_at(tmpl, i);
    if (len == 0) {
      out += tmpl[i];
      continue;
    }
    const auto name = tmpl.substr(i + 1, len - 2);
    const auto it = bindings.find(name);
    if (it == bindings.end()) throw RenderError(fmt::format("no binding for placeholder {{{}}}", name));
    out += it->second;
    i += len - 1;
  }
  return out;
}

std::string render_history(std::span<const HistoryItem> items) {
  if (items.empty()) return std::string(kNoPreviousPlan);
  std::string out;
  const HistoryItem* group = nullptr;
  int seek_step = 0;
  for (const auto& item : items) {
    const bool new_group = !group || group->attempt != item.attempt || group->phase != item.phase ||
                           group->goal != item.goal;
    if (new_group) {
      if (!group || group->attempt != item.attempt || group->phase != item.phase) seek_step = 0;
      if (!out.empty()) out += '\n';
      if (item.phase == "seek") {
        out += fmt::format("## Attempt {}, exploration step {}: {}\n", item.attempt, ++seek_step,
                           item.goal.empty() ? "explore" : item.goal);
      } else {
        out += fmt::format("## Attempt {}, plan execution\n", item.attempt);
      }
      group = &item;
    }
    out += fmt::format("- Act: {}\n- Obs: {}\n", item.action, item.observation);
  }
  out.pop_back();
  return out;
}

std::string render_react_history(std::span<const HistoryItem> items) {
  std::string out;
  for (const auto& item : items) out += fmt::format("> {}\n{}\n", item.action, item.observation);
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace seekbench::agent
