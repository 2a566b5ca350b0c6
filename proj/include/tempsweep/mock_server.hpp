#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "tempsweep/mock_model.hpp"

namespace httplib {
class Server;
struct Request;
struct Response;
}  // namespace httplib

namespace tempsweep {

/// Fold a 64-bit hash into [0, 1). Shared by the rigged server and its tests.
double hash01(std::uint64_t hash);

/// The two-label answer space the rigged server draws from; which label is
/// "correct" for a prompt is a pure function of the prompt text, so fixture
/// files and the server agree without sharing state.
std::string mock_canonical_label(std::string_view prompt);
std::string mock_wrong_label(std::string_view prompt);

struct MockServerOptions {
  std::filesystem::path model_path;  // trigram table json
  int token_cap = 48;                // server-side ceiling on generated tokens

  // Rigged-accuracy mode: answer with the canonical label with probability
  // p_star at t_star and p_other elsewhere, deterministically keyed on
  // (prompt, seed, temperature). Used to force a selector-benefit gap.
  bool rigged = false;
  double rigged_t_star = 0.4;
  double rigged_p_star = 0.9;
  double rigged_p_other = 0.4;

  // Judge mode: reply YES or NO (hash-keyed on the prompt) instead of text.
  bool judge = false;

  // Fail the first N attempts of every distinct request body with a 500,
  // to exercise the client's retry path.
  int fail_first_attempts = 0;
};

/// In-process chat-completion endpoint. Serves POST /v1/chat/completions
/// from the bundled trigram model (or a rigged/judge rule) on a loopback
/// port; fully deterministic for identical requests.
class MockServer {
 public:
  explicit MockServer(MockServerOptions options);
  ~MockServer();

  /// Binds (port 0 → ephemeral) and serves on a background thread.
  /// Returns the bound port.
  int start(int port = 0);
  void stop();

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int request_count() const;

 private:
  void handle(const httplib::Request& req, httplib::Response& res);

  MockServerOptions options_;
  TrigramModel model_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mutex_;
  int requests_ = 0;
  std::map<std::uint64_t, int> attempts_;
};

}  // namespace tempsweep
