#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seekbench::agent {

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Placeholder names a template may use.
inline constexpr std::string_view kDomainDesc = "domain_desc";
inline constexpr std::string_view kInteractionHistory = "interaction_history";
inline constexpr std::string_view kInformation = "information";

inline constexpr std::string_view kNoPreviousPlan = "No previous plan";

struct PromptSet {
  std::string seek_initial;
  std::string seek_with_history;
  std::string extract;
  std::string plan;
  std::string llm3_backtrack;
  std::string llm3_from_scratch;
  std::string react_fewshot;
  std::string icl;
  std::string uncertainty_preamble;
  std::string failure_classifier;

  /// The compiled-in templates.
  static PromptSet builtin();
  /// Built-in templates, each replaced by <dir>/<name>.txt when that file exists.
  static PromptSet load(const std::string& dir);

  /// Throws RenderError if a template uses a placeholder outside the three
  /// known names.
  void validate() const;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Names of the `{identifier}` placeholders in `tmpl`, in order of appearance.
/// JSON braces in the templates never match: they enclose quotes or newlines.
std::vector<std::string> placeholders(std::string_view tmpl);

/// Literal substitution of every `{name}`. Throws RenderError naming the
/// first placeholder without a binding.
std::string render_prompt(std::string_view tmpl, const Bindings& bindings);

/// One executed action as the agent remembers it.
struct HistoryItem {
  int attempt = 0;
  std::string phase;  // "seek", "plan" or "react"
  std::string goal;   // step goal for seek actions
  std::string action;
  std::string observation;
};

/// Renders a history in the "- Act: ... / - Obs: ..." style, grouped under
/// "## Attempt n, ..." headers. An empty history renders as kNoPreviousPlan.
std::string render_history(std::span<const HistoryItem> items);

/// "> action\nobservation" lines, the transcript style of the few-shot prefix.
std::string render_react_history(std::span<const HistoryItem> items);

}  // namespace seekbench::agent
