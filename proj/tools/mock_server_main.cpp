// Stand-alone deterministic chat-completions endpoint for demos and manual
// testing. Serves the bundled trigram model (or the rigged / judge reply
// rules) on loopback until interrupted.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tempsweep/errors.hpp"
#include "tempsweep/mock_server.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic local chat-completions endpoint"};
  std::string model_path;
  int port = 8089;
  tempsweep::MockServerOptions options;
  bool rigged = false, judge = false;

  app.add_option("--model", model_path, "Trigram model JSON (required unless --rigged or --judge)");
  app.add_option("--port", port, "Port to bind on 127.0.0.1; 0 picks a free one");
  app.add_option("--token-cap", options.token_cap, "Server-side ceiling on generated tokens");
  app.add_flag("--rigged", rigged, "Answer with fixed-accuracy labels instead of text");
  app.add_option("--t-star", options.rigged_t_star, "Rigged mode: temperature with boosted accuracy");
  app.add_option("--p-star", options.rigged_p_star, "Rigged mode: accuracy at the starred temperature");
  app.add_option("--p-other", options.rigged_p_other, "Rigged mode: accuracy elsewhere");
  app.add_flag("--judge", judge, "Reply YES/NO like a judge instead of generating text");
  app.add_option("--fail-first", options.fail_first_attempts,
                 "Fail the first N attempts of every distinct request with a 500");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  options.model_path = model_path;
  options.rigged = rigged;
  options.judge = judge;

  try {
    tempsweep::MockServer server(options);
    const int bound = server.start(port);
    std::cout << "listening on 127.0.0.1:" << bound << std::endl;

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
  } catch (const tempsweep::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
