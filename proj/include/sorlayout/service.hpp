#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "sorlayout/layout.hpp"
#include "sorlayout/sor_engine.hpp"

namespace sorlayout {

struct ServiceConfig {
  std::size_t max_sessions = 64;
  int max_areas = 500;
  double default_omega = 0.7;
  double default_tolerance = 0.01;
  int max_iterations = 1000;
  std::chrono::seconds idle_timeout{600};
  /// Seed for session tokens; 0 draws one from std::random_device.
  std::uint64_t token_seed = 0;
};

struct SolveStats {
  long long sweeps = 0;
  std::int64_t time_ns = 0;
  bool warm = false;
  std::vector<ConstraintId> disabled;
};

inline constexpr std::size_t kStatsRingCapacity = 256;

struct Session {
  std::string id;
  LayoutSpec layout;
  Solution last_solution;
  SolverConfig config;
  std::deque<SolveStats> stats_ring;
  Rng rng;
  std::uint64_t seed = 0;
  std::uint64_t solves = 0;
  std::chrono::steady_clock::time_point last_used;
};

/// Session-oriented layout solving behind a JSON message protocol.
///
/// Requests carry a "type" of load, resize, mutate or stats. Each session is
/// executed serially; distinct sessions run concurrently. A resize that is
/// superseded by a newer resize for the same session before its solve
/// starts is answered with the newer result and "coalesced": true.
class SolverService {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SolverService(ServiceConfig config = {}, Clock clock = &std::chrono::steady_clock::now);

  /// Dispatches on "type". Never throws for protocol errors; those come back
  /// as {"type":"error","code":...,"message":...}.
  nlohmann::json handle(const nlohmann::json& request);

  // Typed entry points; these throw Error on failure.
  nlohmann::json load(const nlohmann::json& request);
  nlohmann::json resize(const nlohmann::json& request);
  nlohmann::json mutate(const nlohmann::json& request);
  nlohmann::json stats(const nlohmann::json& request);

  /// Drops sessions idle for longer than the configured timeout.
  std::size_t expire_idle();
  std::size_t session_count() const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct ResizeTarget {
    double width;
    double height;
    bool warm;
  };

  struct Slot {
    std::mutex run;
    Session session;
    std::mutex pending_mutex;
    std::optional<ResizeTarget> pending;
  };

  std::shared_ptr<Slot> find(const nlohmann::json& request);
  std::string new_token();

  ServiceConfig config_;
  Clock clock_;
  mutable std::shared_mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::mutex token_mutex_;
  Rng token_rng_;
};

/// FIFO of protocol messages that drops a queued resize when a newer resize
/// for the same session is queued behind it.
class MessageQueue {
 public:
  void push(nlohmann::json message);
  /// Blocks until a message is available or the queue is closed. Returns
  /// nullopt once closed and drained.
  std::optional<nlohmann::json> pop();
  void close();
  std::size_t dropped() const;

 private:
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<nlohmann::json> queue_;
  bool closed_ = false;
  std::size_t dropped_ = 0;
};

/// Newline-delimited JSON channel: reads requests from `in` on a reader
/// thread, handles them through a coalescing queue and writes one response
/// line per handled request to `out`. Returns when `in` is exhausted.
void run_line_channel(SolverService& service, std::istream& in, std::ostream& out);

}  // namespace sorlayout
