#include "tempsweep/endpoint.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tempsweep/errors.hpp"

namespace tempsweep {

using nlohmann::json;

std::string ChatRequest::to_json() const {
  json body;
  body["model"] = model;
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(msgs);
  body["temperature"] = temperature;
  body["top_p"] = top_p;
  body["repetition_penalty"] = repetition_penalty;
  if (top_k) body["top_k"] = *top_k;
  body["max_tokens"] = max_tokens;
  body["seed"] = seed;
  return body.dump();
}

ChatClient::ChatClient(EndpointConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw InvalidInputError("endpoint base_url is empty");
  while (!config_.base_url.empty() && config_.base_url.back() == '/') config_.base_url.pop_back();
}

ChatResponse ChatClient::complete(const ChatRequest& request) const {
  const std::string body = request.to_json();
  std::string last_error;

  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long long>(config_.backoff_initial_ms) << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto result =
        client.Post("/v1/chat/completions", headers, body, "application/json");
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      last_error = "http status " + std::to_string(result->status);
      continue;
    }
    try {
      const json reply = json::parse(result->body);
      ChatResponse response;
      response.content =
          reply.at("choices").at(0).at("message").at("content").get<std::string>();
      response.attempts = attempt + 1;
      return response;
    } catch (const std::exception& e) {
      last_error = std::string("unparseable completion body: ") + e.what();
      continue;
    }
  }
  throw EndpointError("endpoint " + config_.base_url + " failed after " +
                      std::to_string(config_.max_retries + 1) + " attempts; last error: " +
                      last_error);
}

}  // namespace tempsweep
