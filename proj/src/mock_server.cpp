#include "tempsweep/mock_server.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "tempsweep/errors.hpp"
#include "tempsweep/util.hpp"

namespace tempsweep {

using nlohmann::json;

double hash01(std::uint64_t hash) {
  // Same folding as Rng::next_uniform: top 53 bits over 2^53.
  return static_cast<double>(hash >> 11) * 0x1.0p-53;
}

std::string mock_canonical_label(std::string_view prompt) {
  return (fnv1a64(prompt) & 1) ? "beta" : "alpha";
}

std::string mock_wrong_label(std::string_view prompt) {
  return (fnv1a64(prompt) & 1) ? "alpha" : "beta";
}

MockServer::MockServer(MockServerOptions options) : options_(std::move(options)) {
  if (!options_.judge && !options_.model_path.empty())
    model_ = TrigramModel::load(options_.model_path);
  else if (!options_.judge && !options_.rigged)
    throw InvalidInputError("mock server needs a model_path unless rigged or judge mode is set");
  server_ = std::make_unique<httplib::Server>();
  server_->Post("/v1/chat/completions",
                [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
}

MockServer::~MockServer() { stop(); }

int MockServer::start(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw Error("mock server: bind failed");
  } else {
    if (!server_->bind_to_port("127.0.0.1", port))
      throw Error("mock server: bind to port " + std::to_string(port) + " failed");
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void MockServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
  if (thread_.joinable()) thread_.join();
}

int MockServer::request_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_;
}

void MockServer::handle(const httplib::Request& req, httplib::Response& res) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++requests_;
    if (options_.fail_first_attempts > 0) {
      const auto key = fnv1a64(req.body);
      if (++attempts_[key] <= options_.fail_first_attempts) {
        res.status = 500;
        res.set_content(R"({"error":{"message":"injected failure"}})", "application/json");
        return;
      }
    }
  }

  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error&) {
    res.status = 400;
    res.set_content(R"({"error":{"message":"bad json"}})", "application/json");
    return;
  }

  std::string prompt;
  if (body.contains("messages") && body["messages"].is_array() && !body["messages"].empty())
    prompt = body["messages"].back().value("content", std::string());

  const double temperature = body.value("temperature", 1.0);
  const std::uint64_t seed = body.value("seed", std::uint64_t{42});

  std::string content;
  if (options_.judge) {
    // Deterministic near-greedy verdict: three yes out of four by hash.
    content = (fnv1a64(prompt) % 4 != 0) ? "YES" : "NO";
  } else if (options_.rigged) {
    const std::string draw_key =
        std::string(prompt) + "\x1f" + std::to_string(seed) + "\x1f" + format_double(temperature);
    const double p = std::fabs(temperature - options_.rigged_t_star) < 1e-9
                         ? options_.rigged_p_star
                         : options_.rigged_p_other;
    content = hash01(fnv1a64(draw_key)) < p ? mock_canonical_label(prompt)
                                            : mock_wrong_label(prompt);
  } else {
    sampling::SamplingConfig config;
    config.temperature = temperature;
    config.top_p = body.value("top_p", 0.9);
    config.repetition_penalty = body.value("repetition_penalty", 1.0);
    if (body.contains("top_k")) config.top_k = body["top_k"].get<int>();
    config.seed = seed;
    config.max_new_tokens = std::min(body.value("max_tokens", 1024), options_.token_cap);
    try {
      config.validate();
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", {{"message", e.what()}}}}.dump(), "application/json");
      return;
    }
    content = model_.generate(prompt, config);
  }

  json reply;
  reply["id"] = "mock-" + std::to_string(fnv1a64(req.body) & 0xffffff);
  reply["object"] = "chat.completion";
  reply["model"] = body.value("model", "mock");
  reply["choices"] = json::array({{{"index", 0},
                                   {"message", {{"role", "assistant"}, {"content", content}}},
                                   {"finish_reason", "stop"}}});
  res.set_content(reply.dump(), "application/json");
}

}  // namespace tempsweep
