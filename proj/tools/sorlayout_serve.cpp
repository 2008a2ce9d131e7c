#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "sorlayout/error.hpp"
#include "sorlayout/server.hpp"
#include "sorlayout/service.hpp"

namespace {
sorlayout::Server* g_server = nullptr;
}

int main(int argc, char** argv) {
  CLI::App app{"Layout solver service (HTTP + WebSocket, or JSON lines on stdio)"};
  sorlayout::ServiceConfig config;
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  int threads = 4;
  bool stdio = false;

  app.add_option("--address", address, "listen address")->envname("SORLAYOUT_ADDRESS");
  app.add_option("--port", port, "listen port, 0 for any")->envname("SORLAYOUT_PORT");
  app.add_option("--max-sessions", config.max_sessions, "session cap")
      ->envname("SORLAYOUT_MAX_SESSIONS");
  app.add_option("--omega", config.default_omega, "default relaxation parameter")
      ->envname("SORLAYOUT_OMEGA");
  app.add_option("--tolerance", config.default_tolerance, "default convergence tolerance")
      ->envname("SORLAYOUT_TOLERANCE");
  app.add_option("--threads", threads, "I/O threads")->check(CLI::PositiveNumber);
  app.add_flag("--stdio", stdio, "read requests from stdin, one JSON object per line");
  CLI11_PARSE(app, argc, argv);

  try {
    sorlayout::SolverService service(config);
    if (stdio) {
      sorlayout::run_line_channel(service, std::cin, std::cout);
      return 0;
    }
    sorlayout::Server server(service, address, port, threads);
    g_server = &server;
    std::signal(SIGINT, [](int) { g_server->stop(); });
    std::signal(SIGTERM, [](int) { g_server->stop(); });
    std::cerr << "listening on " << address << ':' << server.port() << std::endl;
    server.run();
  } catch (const sorlayout::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
