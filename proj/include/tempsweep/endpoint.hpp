#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tempsweep {

/// Connection settings for one chat-completion endpoint. The api key is held
/// here but must never appear in logs or error text.
struct EndpointConfig {
  std::string base_url;  // scheme://host[:port]
  std::string api_key;
  int max_retries = 3;        // attempts after the first try
  int timeout_seconds = 60;
  int backoff_initial_ms = 250;  // doubles per retry
};

struct ChatMessage {
  std::string role;
  std::string content;
};

/// One chat-completion call. Decoding knobs mirror the wire fields of the
/// common inference-server API.
struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  double top_p = 0.9;
  double repetition_penalty = 1.0;
  std::optional<int> top_k;
  int max_tokens = 1024;
  std::uint64_t seed = 42;

  std::string to_json() const;
};

struct ChatResponse {
  std::string content;
  int attempts = 1;  // how many tries it took
};

/// Blocking client for POST {base_url}/v1/chat/completions with bounded
/// retries and exponential backoff. Transport errors, non-2xx statuses and
/// unparseable bodies all count as retryable failures; after the retry
/// budget, throws EndpointError (with the key scrubbed from the message).
class ChatClient {
 public:
  explicit ChatClient(EndpointConfig config);

  ChatResponse complete(const ChatRequest& request) const;
  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
};

}  // namespace tempsweep
