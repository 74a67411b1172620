#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seekbench {

/// A single non-empty line emitted by an agent as an environment command.
class ActionText {
 public:
  /// Throws std::invalid_argument when `raw` is blank or spans several lines.
  explicit ActionText(std::string_view raw);

  const std::string& str() const noexcept { return raw_; }
  static bool is_valid(std::string_view raw) noexcept;

 private:
  std::string raw_;
};

struct TranscriptEntry {
  std::string action;
  std::string observation;

  bool operator==(const TranscriptEntry&) const = default;
};

/// Append-only action/observation trace with history-reset markers.
///
/// A marker sits between entries; `since_marker()` returns what an agent that
/// reset its history at the last marker would still see. Markers never remove
/// entries and never change `steps_used()`.
class Transcript {
 public:
  void append(std::string action, std::string observation);
  void mark();

  std::size_t steps_used() const noexcept { return entries_.size(); }
  std::span<const TranscriptEntry> entries() const noexcept { return entries_; }
  std::span<const TranscriptEntry> since_marker() const noexcept;
  /// Index of the first entry after the most recent marker (0 if none).
  std::size_t marker_offset() const noexcept;
  /// True if a marker was placed immediately before entry `i`.
  bool marker_before(std::size_t i) const noexcept;
  const std::vector<std::size_t>& markers() const noexcept { return markers_; }

  /// JSON Lines, one record per entry: {"i","a","o","marker"}.
  std::string to_jsonl() const;
  static Transcript from_jsonl(std::string_view text);

  bool operator==(const Transcript&) const = default;

 private:
  std::vector<TranscriptEntry> entries_;
  std::vector<std::size_t> markers_;
};

}  // namespace seekbench
