#include "sorlayout/service.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <thread>

#include "sorlayout/benchmark.hpp"
#include "sorlayout/error.hpp"
#include "sorlayout/insertion.hpp"
#include "sorlayout/json_io.hpp"

namespace sorlayout {

using nlohmann::json;

namespace {

double number_field(const json& request, const char* key) {
  auto it = request.find(key);
  if (it == request.end() || !it->is_number()) {
    throw Error(ErrorCode::kBadRequest, std::string("'") + key + "' must be a number");
  }
  return it->get<double>();
}

double number_field_or(const json& request, const char* key, double fallback) {
  return request.contains(key) ? number_field(request, key) : fallback;
}

std::string session_field(const json& request) {
  auto it = request.find("session");
  if (it == request.end() || !it->is_string()) {
    throw Error(ErrorCode::kBadRequest, "'session' must be a string");
  }
  return it->get<std::string>();
}

json ids_to_json(const std::vector<ConstraintId>& ids) {
  json out = json::array();
  for (ConstraintId id : ids) out.push_back(id.value);
  return out;
}

json stats_to_json(const SolveStats& s) {
  return {{"sweeps", s.sweeps},
          {"time_ns", s.time_ns},
          {"warm", s.warm},
          {"disabled", ids_to_json(s.disabled)},
          {"disabled_count", s.disabled.size()}};
}

json areas_to_json(const LayoutSpec& layout, const Solution& solution) {
  json out = json::array();
  for (const Rect& r : area_rects(layout, solution)) {
    out.push_back({{"left", r.left}, {"top", r.top}, {"right", r.right}, {"bottom", r.bottom}});
  }
  return out;
}

json solution_message(const Session& session, const SolveStats& stats) {
  return {{"type", "solution"},
          {"session", session.id},
          {"width", session.layout.width},
          {"height", session.layout.height},
          {"values", solution_to_json(session.last_solution)},
          {"areas", areas_to_json(session.layout, session.last_solution)},
          {"stats", stats_to_json(stats)}};
}

// Solves the session's current layout and records the outcome.
SolveStats solve_session(Session& session, bool warm) {
  SolverConfig cfg = session.config;
  cfg.seed = derive_seed(session.seed, 0x736f6c76u, session.solves++);
  InsertionOptions options;
  options.accept_feasible_start = warm;
  const Solution start = warm ? session.last_solution : Solution::zeros(session.layout.system);
  ResolvedSolve resolved = solve_with_insertion(session.layout.system, start, cfg, options);

  SolveStats stats{resolved.total_sweeps, resolved.wall_time.count(), warm,
                   std::move(resolved.disabled)};
  session.last_solution = std::move(resolved.solution);
  session.stats_ring.push_back(stats);
  while (session.stats_ring.size() > kStatsRingCapacity) session.stats_ring.pop_front();
  return stats;
}

}  // namespace

SolverService::SolverService(ServiceConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  token_rng_.seed(config_.token_seed != 0 ? config_.token_seed : std::random_device{}());
}

std::string SolverService::new_token() {
  std::lock_guard lock(token_mutex_);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(token_rng_()));
  return buf;
}

std::shared_ptr<SolverService::Slot> SolverService::find(const json& request) {
  const std::string id = session_field(request);
  std::shared_lock lock(table_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kUnknownSession, "unknown session '" + id + "'");
  }
  return it->second;
}

std::size_t SolverService::session_count() const {
  std::shared_lock lock(table_mutex_);
  return sessions_.size();
}

std::size_t SolverService::expire_idle() {
  const auto now = clock_();
  std::unique_lock lock(table_mutex_);
  std::size_t removed = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    // A slot that is busy right now is not idle.
    std::unique_lock run(it->second->run, std::try_to_lock);
    if (run.owns_lock() && now - it->second->session.last_used > config_.idle_timeout) {
      run.unlock();
      it = sessions_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

json SolverService::load(const json& request) {
  const double n = number_field(request, "n_areas");
  if (n < 0 || n != static_cast<int>(n)) {
    throw Error(ErrorCode::kBadRequest, "'n_areas' must be a non-negative integer");
  }
  if (n > config_.max_areas) {
    throw Error(ErrorCode::kLimitExceeded,
                "at most " + std::to_string(config_.max_areas) + " areas per session");
  }
  const double width = number_field(request, "width");
  const double height = number_field(request, "height");
  if (!(width >= kMinWindow && height >= kMinWindow)) {
    throw Error(ErrorCode::kBelowMinimum, "window below the minimum size");
  }
  std::uint64_t seed = 0;
  if (request.contains("seed")) {
    if (!request["seed"].is_number_unsigned()) {
      throw Error(ErrorCode::kBadRequest, "'seed' must be a non-negative integer");
    }
    seed = request["seed"].get<std::uint64_t>();
  }

  auto slot = std::make_shared<Slot>();
  Session& s = slot->session;
  s.config.omega = number_field_or(request, "omega", config_.default_omega);
  s.config.tolerance = number_field_or(request, "tolerance", config_.default_tolerance);
  s.config.max_iterations = config_.max_iterations;
  try {
    s.config.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
  s.seed = seed;
  s.rng.seed(derive_seed(seed, 0x6d757461u));
  s.layout = generate_layout(static_cast<int>(n), width, height, seed);
  s.last_solution = Solution::zeros(s.layout.system);
  const SolveStats stats = solve_session(s, false);
  s.last_used = clock_();

  {
    std::unique_lock lock(table_mutex_);
    if (sessions_.size() >= config_.max_sessions) {
      throw Error(ErrorCode::kLimitExceeded, "session limit reached");
    }
    do {
      s.id = new_token();
    } while (sessions_.contains(s.id));
    sessions_.emplace(s.id, slot);
  }

  json out = solution_message(s, stats);
  out["type"] = "loaded";
  out["session_id"] = s.id;
  out["layout"] = layout_to_json(s.layout);
  return out;
}

json SolverService::resize(const json& request) {
  auto slot = find(request);
  ResizeTarget target{number_field(request, "width"), number_field(request, "height"), true};
  if (request.contains("warm")) {
    if (!request["warm"].is_boolean()) throw Error(ErrorCode::kBadRequest, "'warm' must be a boolean");
    target.warm = request["warm"].get<bool>();
  }
  if (!(target.width >= kMinWindow && target.height >= kMinWindow)) {
    throw Error(ErrorCode::kBelowMinimum, "window below the minimum size");
  }

  {
    std::lock_guard lock(slot->pending_mutex);
    slot->pending = target;
  }
  std::lock_guard run(slot->run);
  std::optional<ResizeTarget> taken;
  {
    std::lock_guard lock(slot->pending_mutex);
    taken.swap(slot->pending);
  }
  Session& s = slot->session;
  s.last_used = clock_();

  if (!taken) {
    // A later request already solved a newer target.
    json out = solution_message(s, s.stats_ring.empty() ? SolveStats{} : s.stats_ring.back());
    out["coalesced"] = true;
    return out;
  }
  const bool superseded = taken->width != target.width || taken->height != target.height ||
                          taken->warm != target.warm;
  sorlayout::resize(s.layout, taken->width, taken->height);
  const SolveStats stats = solve_session(s, taken->warm);
  json out = solution_message(s, stats);
  out["coalesced"] = superseded;
  return out;
}

json SolverService::mutate(const json& request) {
  auto slot = find(request);
  const double fraction = number_field(request, "fraction");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kBadRequest, "'fraction' must lie in (0, 1]");
  }
  std::lock_guard run(slot->run);
  Session& s = slot->session;
  s.last_used = clock_();
  const std::vector<ConstraintId> changed = perturb_constraints(s.layout, fraction, s.rng);

  SolveStats stats;
  if (changed.empty()) {
    stats.warm = true;
    if (!s.stats_ring.empty()) stats.disabled = s.stats_ring.back().disabled;
  } else {
    stats = solve_session(s, true);
  }
  json out = solution_message(s, stats);
  out["changed_ids"] = ids_to_json(changed);
  return out;
}

json SolverService::stats(const json& request) {
  auto slot = find(request);
  std::lock_guard run(slot->run);
  Session& s = slot->session;
  s.last_used = clock_();
  json history = json::array();
  for (const SolveStats& entry : s.stats_ring) history.push_back(stats_to_json(entry));
  return {{"type", "stats"}, {"session", s.id}, {"history", std::move(history)}};
}

json SolverService::handle(const json& request) {
  try {
    expire_idle();
    if (!request.is_object() || !request.contains("type") || !request["type"].is_string()) {
      throw Error(ErrorCode::kBadRequest, "message needs a string 'type'");
    }
    const std::string type = request["type"].get<std::string>();
    if (type == "load") return load(request);
    if (type == "resize") return resize(request);
    if (type == "mutate") return mutate(request);
    if (type == "stats") return stats(request);
    throw Error(ErrorCode::kBadRequest, "unknown message type '" + type + "'");
  } catch (const Error& e) {
    return {{"type", "error"}, {"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  } catch (const json::exception& e) {
    return {{"type", "error"},
            {"code", std::string(to_string(ErrorCode::kBadRequest))},
            {"message", e.what()}};
  }
}

void MessageQueue::push(json message) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    const bool is_resize = message.is_object() && message.value("type", "") == "resize" &&
                           message.contains("session");
    if (is_resize) {
      // Only the newest queued message of the session may be replaced, so
      // ordering against other message types is preserved.
      for (auto it = queue_.rbegin(); it != queue_.rend(); ++it) {
        if (!it->is_object() || it->value("session", json()) != message["session"]) continue;
        if (it->value("type", "") == "resize") {
          queue_.erase(std::next(it).base());
          ++dropped_;
        }
        break;
      }
    }
    queue_.push_back(std::move(message));
  }
  ready_.notify_one();
}

std::optional<json> MessageQueue::pop() {
  std::unique_lock lock(mutex_);
  ready_.wait(lock, [this] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  json message = std::move(queue_.front());
  queue_.pop_front();
  return message;
}

void MessageQueue::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  ready_.notify_all();
}

std::size_t MessageQueue::dropped() const {
  std::lock_guard lock(mutex_);
  return dropped_;
}

void run_line_channel(SolverService& service, std::istream& in, std::ostream& out) {
  MessageQueue queue;
  std::thread reader([&] {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json message = json::parse(line, nullptr, false);
      if (message.is_discarded()) {
        message = {{"type", "invalid"}, {"raw", line}};
      }
      queue.push(std::move(message));
    }
    queue.close();
  });
  while (auto message = queue.pop()) {
    json response;
    if (message->is_object() && message->value("type", "") == "invalid") {
      response = {{"type", "error"},
                  {"code", std::string(to_string(ErrorCode::kBadRequest))},
                  {"message", "malformed JSON"}};
    } else {
      response = service.handle(*message);
    }
    out << response.dump() << '\n' << std::flush;
  }
  reader.join();
}

}  // namespace sorlayout
