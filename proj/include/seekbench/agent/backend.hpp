#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace seekbench::agent {

struct Message {
  std::string role;
  std::string content;
};

/// Network failure, timeout or non-2xx reply after the retry budget.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScriptedUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const std::vector<Message>& messages) = 0;
  /// Model name and sampling settings, stored with each run.
  virtual nlohmann::json info() const = 0;
};

/// Returns queued replies in order, then throws ScriptedUnderflow.
class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(std::vector<std::string> replies);

  std::string complete(const std::vector<Message>& messages) override;
  nlohmann::json info() const override;

  std::size_t remaining() const noexcept { return replies_.size(); }
  const std::vector<std::vector<Message>>& requests() const noexcept { return requests_; }

 private:
  std::deque<std::string> replies_;
  std::vector<std::vector<Message>> requests_;
};

/// Computes each reply from the request with a deterministic function.
class PolicyBackend final : public Backend {
 public:
  using Fn = std::function<std::string(const std::vector<Message>&)>;
  PolicyBackend(std::string name, Fn fn);

  std::string complete(const std::vector<Message>& messages) override;
  nlohmann::json info() const override;

 private:
  std::string name_;
  Fn fn_;
};

struct ChatConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";  // empty or unset: no Authorization header
  std::chrono::milliseconds timeout{60000};
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{500};
  nlohmann::json extra = nlohmann::json::object();  // merged into the request body (temperature, ...)

  static ChatConfig from_json(const nlohmann::json& j);
};

/// POST {base_url}/chat/completions with {"model", "messages"} and returns
/// choices[0].message.content. Connection errors, timeouts, 429 and 5xx are
/// retried up to max_retries times; other statuses fail immediately.
class ChatCompletionsClient final : public Backend {
 public:
  explicit ChatCompletionsClient(ChatConfig config);

  std::string complete(const std::vector<Message>& messages) override;
  nlohmann::json info() const override;

 private:
  ChatConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace seekbench::agent
