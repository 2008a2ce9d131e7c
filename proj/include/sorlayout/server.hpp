#pragma once

#include <memory>
#include <string>

#include "sorlayout/service.hpp"

namespace sorlayout {

/// HTTP front end for SolverService.
///
/// POST /load, /resize, /mutate and /stats take one JSON request each; the
/// "type" field is implied by the path. Any path accepts a WebSocket upgrade,
/// after which every text frame is a protocol message and resizes that queue
/// up behind a running solve are coalesced.
class Server {
 public:
  /// Binds immediately; port 0 picks an ephemeral port.
  Server(SolverService& service, const std::string& address, unsigned short port,
         int threads = 4);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  /// Serves until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sorlayout
