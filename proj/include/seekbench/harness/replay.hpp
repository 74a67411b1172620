#pragma once

#include <string>
#include <string_view>

namespace seekbench::harness {

/// Pretty-prints a transcripts/<id>.jsonl file: one block per attempt and
/// phase, numbered steps, and a line wherever the agent reset its history.
/// Throws std::invalid_argument on malformed lines.
std::string replay_transcript(std::string_view jsonl);

}  // namespace seekbench::harness
