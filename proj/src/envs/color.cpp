#include "seekbench/envs/color.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "seekbench/core/assets.hpp"
#include "seekbench/core/errors.hpp"
#include "seekbench/core/rng.hpp"
#include "seekbench/core/text.hpp"

namespace seekbench::color {

namespace {

std::pair<Base, Base> ordered(Base a, Base b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::optional<std::size_t> parse_container(std::string_view token) {
  for (std::size_t i = 0; i < kContainers.size(); ++i) {
    if (token.size() == 1 && std::toupper(static_cast<unsigned char>(token[0])) == kContainers[i]) return i;
  }
  return std::nullopt;
}

Base require_base(const nlohmann::json& j, std::string_view what) {
  const auto b = j.is_string() ? parse_base(j.get<std::string>()) : std::nullopt;
  if (!b) throw InvalidTask(fmt::format("color param '{}' must name a base color", what));
  return *b;
}

}  // namespace

std::string_view to_string(Base b) {
  switch (b) {
    case Base::red: return "red";
    case Base::yellow: return "yellow";
    case Base::blue: return "blue";
    case Base::white: return "white";
    case Base::black: return "black";
  }
  return "?";
}

std::optional<Base> parse_base(std::string_view name) {
  for (const auto b : kBases) {
    if (text::iequals(name, to_string(b))) return b;
  }
  return std::nullopt;
}

MixingTable MixingTable::parse(std::string_view text) {
  MixingTable table;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text::trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;

    const auto plus = line.find('+');
    const auto eq = line.find('=');
    if (plus == std::string_view::npos || eq == std::string_view::npos || eq < plus) {
      throw std::invalid_argument(fmt::format("mixing table: malformed line '{}'", line));
    }
    const auto a = parse_base(text::trim(line.substr(0, plus)));
    const auto b = parse_base(text::trim(line.substr(plus + 1, eq - plus - 1)));
    const auto result = text::trim(line.substr(eq + 1));
    if (!a || !b || *a == *b || result.empty()) {
      throw std::invalid_argument(fmt::format("mixing table: bad pair in '{}'", line));
    }
    if (!table.pairs_.emplace(ordered(*a, *b), std::string(result)).second) {
      throw std::invalid_argument(fmt::format("mixing table: pair listed twice in '{}'", line));
    }
  }
  if (table.pairs_.size() != kBases.size() * (kBases.size() - 1) / 2) {
    throw std::invalid_argument("mixing table: every pair of base colors needs an entry");
  }
  return table;
}

const MixingTable& MixingTable::builtin() {
  static const MixingTable table = parse(assets::find("mixing_table.txt").value());
  return table;
}

const std::string& MixingTable::result(Base a, Base b) const { return pairs_.at(ordered(a, b)); }

std::vector<std::string> MixingTable::palette() const {
  std::vector<std::string> out;
  auto add = [&out](std::string_view c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.emplace_back(c);
  };
  for (const auto b : kBases) add(to_string(b));
  for (const auto& [pair, result] : pairs_) add(result);
  add(kMurky);
  return out;
}

MixResult mix(std::span<const Portion> contents, const MixingTable& table) {
  MixResult out{std::string(kNone), 0};
  std::set<Base> distinct;
  for (const auto& p : contents) {
    out.ml += p.ml;
    if (p.ml > 0) distinct.insert(p.base);
  }
  if (distinct.size() == 1) {
    out.color = to_string(*distinct.begin());
  } else if (distinct.size() == 2) {
    out.color = table.result(*distinct.begin(), *std::next(distinct.begin()));
  } else if (distinct.size() > 2) {
    out.color = kMurky;
  }
  return out;
}

bool ColorState::labels_identity() const {
  for (std::size_t i = 0; i < kBases.size(); ++i) {
    if (tube_content[i] != kBases[i]) return false;
  }
  return true;
}

ColorEnv::ColorEnv(TaskSpec spec) : Environment(std::move(spec)) {
  const auto& s = this->spec();
  if (s.family != Family::color) throw InvalidTask("ColorEnv requires a color task, got " + s.id());
  const auto& params = s.params;
  const auto& table = MixingTable::builtin();

  state_.tube_content = kBases;
  Rng rng(s.seed);
  {
    const Base a = kBases[rng.index(kBases.size())];
    Base b = kBases[rng.index(kBases.size() - 1)];
    if (b >= a) b = kBases[static_cast<std::size_t>(b) + 1];
    state_.target = {table.result(a, b), 2};
  }

  if (s.variant == Variant::contaminated) {
    const std::size_t container = rng.index(kContainers.size());
    const Base base = kBases[rng.index(kBases.size())];
    state_.containers[container].push_back({base, 1});
  } else if (s.variant == Variant::wronglabel) {
    auto content = kBases;
    auto has_fixed_point = [&content] {
      for (std::size_t i = 0; i < content.size(); ++i) {
        if (content[i] == kBases[i]) return true;
      }
      return false;
    };
    do {
      rng.shuffle(std::span<Base>(content));
    } while (has_fixed_point());
    state_.tube_content = content;
  }

  if (params.contains("target")) {
    const auto palette = table.palette();
    const auto name = params["target"].is_string() ? text::to_lower(params["target"].get<std::string>()) : "";
    if (std::find(palette.begin(), palette.end(), name) == palette.end() || name == kMurky) {
      throw InvalidTask("color param 'target' must be a palette color");
    }
    state_.target.color = name;
  }
  if (params.contains("target_ml")) {
    state_.target.ml = params["target_ml"].get<int>();
    if (state_.target.ml < 1) throw InvalidTask("color param 'target_ml' must be positive");
  }
  if (params.contains("contaminant")) {
    if (s.variant != Variant::contaminated) throw InvalidTask("'contaminant' applies to color/contaminated only");
    const auto& c = params["contaminant"];
    const auto container = parse_container(c.value("container", ""));
    if (!container) throw InvalidTask("color contaminant container must be A or B");
    state_.containers = {};
    state_.containers[*container].push_back({require_base(c.at("color"), "contaminant.color"), 1});
  }
  if (params.contains("labels")) {
    if (s.variant != Variant::wronglabel) throw InvalidTask("'labels' applies to color/wronglabel only");
    std::array<Base, 5> content = kBases;
    std::set<Base> seen;
    for (const auto& [label, value] : params["labels"].items()) {
      const auto l = parse_base(label);
      if (!l) throw InvalidTask("color label map has an unknown label");
      content[static_cast<std::size_t>(*l)] = require_base(value, "labels");
    }
    for (std::size_t i = 0; i < content.size(); ++i) {
      if (content[i] == kBases[i]) throw InvalidTask("color label map must be a derangement");
      seen.insert(content[i]);
    }
    if (seen.size() != kBases.size()) throw InvalidTask("color label map must be a permutation");
    state_.tube_content = content;
  }
}

std::string ColorEnv::describe() const {
  const auto& table = MixingTable::builtin();
  std::vector<std::string> rules;
  for (std::size_t i = 0; i < kBases.size(); ++i) {
    for (std::size_t j = i + 1; j < kBases.size(); ++j) {
      rules.push_back(fmt::format("{}+{}={}", to_string(kBases[i]), to_string(kBases[j]),
                                  table.result(kBases[i], kBases[j])));
    }
  }
  return fmt::format(
      "There are five paint tubes labeled red, yellow, blue, white and black, and two containers, A and B.\n"
      "The goal is to create {} ml of {} paint in container A or container B.\n"
      "Mixing two different paints gives: {}. Mixing three or more different paints gives {}. "
      "The ratio of a two-paint mix does not change its color.\n"
      "\n"
      "The following primitive actions are available:\n"
      "{}",
      state_.target.ml, state_.target.color, text::join(rules, ", "), kMurky, help());
}

std::string ColorEnv::help() const {
  return "1) Add <color> to <container>: Add 1 ml of paste from the tube with that label into container A or B.\n"
         "2) Check <container>: Check the paint in container A or B.\n"
         "3) Clean <container>: Empty container A or B.\n"
         "4) Help: View the available action options.";
}

std::string ColorEnv::add(Base label, std::size_t container) {
  state_.containers.at(container).push_back({state_.tube_content[static_cast<std::size_t>(label)], 1});
  return fmt::format("You add 1 ml of paste from {} tube into container {}.", to_string(label),
                     kContainers[container]);
}

std::string ColorEnv::check(std::size_t container) const {
  const auto result = mix(state_.containers.at(container));
  if (result.ml == 0) return fmt::format("Container {} is empty.", kContainers[container]);
  return fmt::format("Container {} has {} ml of {} paint.", kContainers[container], result.ml, result.color);
}

std::string ColorEnv::clean(std::size_t container) {
  state_.containers.at(container).clear();
  return fmt::format("You clean container {}.", kContainers[container]);
}

std::optional<std::string> ColorEnv::execute(std::string_view command) {
  const auto tokens = text::split_ws(command);
  if (tokens.size() == 4 && text::iequals(tokens[0], "add") && text::iequals(tokens[2], "to")) {
    const auto label = parse_base(tokens[1]);
    const auto container = parse_container(tokens[3]);
    if (label && container) return add(*label, *container);
    return std::nullopt;
  }
  if (tokens.size() == 2) {
    const auto container = parse_container(tokens[1]);
    if (!container) return std::nullopt;
    if (text::iequals(tokens[0], "check")) return check(*container);
    if (text::iequals(tokens[0], "clean")) return clean(*container);
  }
  return std::nullopt;
}

bool ColorEnv::goal_reached() const {
  return std::any_of(state_.containers.begin(), state_.containers.end(), [this](const auto& c) {
    const auto r = mix(c);
    return r.color == state_.target.color && r.ml == state_.target.ml;
  });
}

}  // namespace seekbench::color
