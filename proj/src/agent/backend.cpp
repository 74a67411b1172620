#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "seekbench/agent/backend.hpp"

#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

namespace seekbench::agent {

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}

std::string ScriptedBackend::complete(const std::vector<Message>& messages) {
  requests_.push_back(messages);
  if (replies_.empty()) throw ScriptedUnderflow("scripted backend has no replies left");
  auto reply = std::move(replies_.front());
  replies_.pop_front();
  return reply;
}

nlohmann::json ScriptedBackend::info() const { return {{"backend", "scripted"}}; }

PolicyBackend::PolicyBackend(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

std::string PolicyBackend::complete(const std::vector<Message>& messages) { return fn_(messages); }

nlohmann::json PolicyBackend::info() const { return {{"backend", "policy"}, {"policy", name_}}; }

ChatConfig ChatConfig::from_json(const nlohmann::json& j) {
  ChatConfig c;
  c.base_url = j.value("base_url", c.base_url);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(c.timeout.count())));
  c.max_retries = j.value("max_retries", c.max_retries);
  c.retry_backoff =
      std::chrono::milliseconds(j.value("retry_backoff_ms", static_cast<long long>(c.retry_backoff.count())));
  if (j.contains("params")) c.extra = j.at("params");
  if (c.model.empty()) throw std::invalid_argument("chat backend needs a model name");
  if (c.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!c.extra.is_object()) throw std::invalid_argument("chat backend params must be an object");
  return c;
}

ChatCompletionsClient::ChatCompletionsClient(ChatConfig config) : config_(std::move(config)) {
  const auto& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("base_url needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

nlohmann::json ChatCompletionsClient::info() const {
  nlohmann::json j{{"backend", "chat"}, {"base_url", config_.base_url}, {"model", config_.model}};
  j["params"] = config_.extra.empty() ? nlohmann::json("api defaults") : config_.extra;
  return j;
}

std::string ChatCompletionsClient::complete(const std::vector<Message>& messages) {
  if (messages.empty()) throw std::invalid_argument("complete() needs at least one message");

  nlohmann::json body = config_.extra;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) throw TransportError("cannot create an HTTP client for " + scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string path = path_prefix_ + "/chat/completions";
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.retry_backoff * attempt);
    const auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = fmt::format("request to {}{} failed: {}", scheme_host_port_, path, httplib::to_string(res.error()));
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {} from {}{}", res->status, scheme_host_port_, path);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw TransportError(fmt::format("HTTP {} from {}{}: {}", res->status, scheme_host_port_, path,
                                       res->body.substr(0, 500)));
    }
    const auto reply = nlohmann::json::parse(res->body, nullptr, false);
    try {
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw TransportError("chat completion reply lacks choices[0].message.content");
    }
  }
  throw TransportError(fmt::format("{} (after {} attempts)", last_error, config_.max_retries + 1));
}

}  // namespace seekbench::agent
