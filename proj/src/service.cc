#include "mojikit/service.h"

#include <chrono>

#include "mojikit/format.h"
#include "mojikit/serial_transport.h"

namespace mojikit {

std::string ControllerTarget::describe() const {
  if (kind == Kind::kSimulator) return "simulator";
  return "serial:" + port + "@" + std::to_string(baud);
}

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::kIdle: return "idle";
    case SessionState::kPlaying: return "playing";
    case SessionState::kStopped: return "stopped";
  }
  return "unknown";
}

std::string TelemetryEvent::to_json() const {
  std::string out = "{\"t_ms\":" + std::to_string(t_ms) + ",\"angles\":[";
  for (std::size_t j = 0; j < kJointCount; ++j) {
    if (j > 0) out += ',';
    out += format_deg(pose.angle(j));
  }
  out += "],\"status\":\"" + status + "\"";
  if (!error.empty()) {
    // Error texts are produced internally and never contain quotes.
    out += ",\"error\":\"" + error + "\"";
  }
  out += '}';
  return out;
}

TelemetrySubscription::TelemetrySubscription(std::size_t every, std::size_t backlog)
    : every_(every == 0 ? 1 : every), backlog_(backlog == 0 ? 1 : backlog) {}

void TelemetrySubscription::publish(const TelemetryEvent& event, bool force) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    const bool keep = force || seen_ % every_ == 0;
    ++seen_;
    if (!keep) return;
    if (queue_.size() >= backlog_) {
      queue_.pop_front();
      ++dropped_;
    }
    queue_.push_back(event);
  }
  cv_.notify_all();
}

void TelemetrySubscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::optional<TelemetryEvent> TelemetrySubscription::next(Millis timeout_ms) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
               [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  TelemetryEvent e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

bool TelemetrySubscription::finished() const {
  std::lock_guard lock(mu_);
  return closed_ && queue_.empty();
}

std::size_t TelemetrySubscription::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

PlaybackService::PlaybackService(ServiceOptions options, const PresetLibrary& presets)
    : options_(std::move(options)), presets_(presets) {
  if (options_.tick_ms <= 0) throw DomainError("tick_ms must be positive");
  options_.link.check();
  if (options_.target.kind == ControllerTarget::Kind::kSimulator) {
    controller_ = std::make_unique<VirtualController>();
    link_ = std::make_unique<SimulatedTransport>(*controller_, options_.faults, options_.link,
                                                 options_.tick_ms);
  } else {
    link_ = std::make_unique<SerialTransport>(
        SerialTransport::open_device(options_.target.port, options_.target.baud));
  }
  relay_ = std::make_unique<Relay>(*link_, options_.link);
}

PlaybackService::~PlaybackService() { shutdown(); }

void PlaybackService::start() {
  if (options_.clock != ClockMode::kWall || running_.exchange(true)) return;
  worker_ = std::thread([this] { worker(); });
}

void PlaybackService::shutdown() {
  running_ = false;
  if (worker_.joinable()) worker_.join();
  std::lock_guard lock(mu_);
  for (auto& [id, s] : sessions_) {
    for (auto& w : s.subscribers) {
      if (auto sub = w.lock()) sub->close();
    }
    s.subscribers.clear();
  }
}

void PlaybackService::worker() {
  using Clock = std::chrono::steady_clock;
  auto next = Clock::now();
  while (running_) {
    next += std::chrono::milliseconds(options_.tick_ms);
    std::this_thread::sleep_until(next);
    std::lock_guard lock(mu_);
    step_locked();
  }
}

ValidationReport PlaybackService::validate(std::string_view document) const {
  return validate_sequence(parse_sequence_document(document));
}

std::string PlaybackService::play(const PlayRequest& request) {
  if (request.preset.has_value() == request.document.has_value()) {
    throw std::invalid_argument("give exactly one of a preset name or a sequence document");
  }
  Sequence seq;
  if (request.preset) {
    const Sequence* p = presets_.find(*request.preset);
    if (p == nullptr) throw NotFound("unknown preset '" + *request.preset + "'");
    seq = *p;
  } else {
    seq = import_sequence(*request.document);
  }
  const std::vector<TimedCommand> commands = compile_sequence_to_commands(seq);

  std::lock_guard lock(mu_);
  if (active_) {
    if (!request.replace) throw Busy("session " + *active_ + " is playing");
    end_session_locked(find_locked(*active_), SessionState::kStopped);
  }
  const Millis now = engine_.clock_ms();
  engine_.enqueue(seq);
  for (const TimedCommand& c : commands) relay_->submit(now + c.at_ms, c.command);

  const std::string id = "s" + std::to_string(next_session_++);
  Session& s = sessions_[id];
  s.info = {id, seq.name, SessionState::kPlaying, options_.target.describe(), now, {}};
  active_ = id;
  return id;
}

SessionInfo PlaybackService::stop(const std::string& session_id) {
  std::lock_guard lock(mu_);
  Session& s = find_locked(session_id);
  if (s.info.state == SessionState::kPlaying) end_session_locked(s, SessionState::kStopped);
  return s.info;
}

void PlaybackService::end_session_locked(Session& s, SessionState final_state) {
  if (final_state == SessionState::kStopped) {
    engine_.stop();
    relay_->clear_pending();
    relay_->submit(engine_.clock_ms(), StopCommand{});
    relay_->run_until(engine_.clock_ms());
  }
  s.info.state = final_state;
  if (active_ == s.info.id) active_.reset();
  broadcast_locked(s, snapshot_locked(s), /*force=*/true);
  for (auto& w : s.subscribers) {
    if (auto sub = w.lock()) sub->close();
  }
  s.subscribers.clear();
}

void PlaybackService::broadcast_locked(Session& s, const TelemetryEvent& event, bool force) {
  std::erase_if(s.subscribers, [](const auto& w) { return w.expired(); });
  for (auto& w : s.subscribers) {
    if (auto sub = w.lock()) sub->publish(event, force);
  }
}

TelemetryEvent PlaybackService::snapshot_locked(const Session& s) const {
  return {engine_.clock_ms(), engine_.pose(), std::string(to_string(s.info.state)), {}};
}

PlaybackService::Session& PlaybackService::find_locked(const std::string& id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return it->second;
}

const PlaybackService::Session& PlaybackService::find_locked(const std::string& id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return it->second;
}

void PlaybackService::step_locked() {
  engine_.tick(options_.tick_ms);
  const Millis now = engine_.clock_ms();
  relay_->run_until(now);
  if (auto* sim = dynamic_cast<SimulatedTransport*>(link_.get())) sim->pump(now);
  if (controller_) controller_->advance_to(now);

  Session* s = active_ ? &find_locked(*active_) : nullptr;

  const auto& outcomes = relay_->outcomes();
  for (; outcomes_seen_ < outcomes.size(); ++outcomes_seen_) {
    const RelayOutcome& o = outcomes[outcomes_seen_];
    if (o.status == SendStatus::kDelivered || s == nullptr) continue;
    std::string msg = "frame seq " + std::to_string(o.frame.seq) + " " +
                      std::string(to_string(o.status)) + " after " +
                      std::to_string(o.attempts) + " attempts";
    s->info.errors.push_back(msg);
    broadcast_locked(*s, {now, engine_.pose(), "error", std::move(msg)}, /*force=*/true);
  }

  if (s == nullptr) return;
  if (engine_.status() != EngineStatus::kPlaying) {
    end_session_locked(*s, SessionState::kIdle);
    return;
  }
  broadcast_locked(*s, snapshot_locked(*s));
}

std::shared_ptr<TelemetrySubscription> PlaybackService::subscribe(const std::string& session_id,
                                                                  std::size_t every) {
  auto sub = std::make_shared<TelemetrySubscription>(every, options_.subscriber_backlog);
  std::lock_guard lock(mu_);
  Session& s = find_locked(session_id);
  sub->publish(snapshot_locked(s), /*force=*/true);
  if (s.info.state == SessionState::kPlaying) {
    s.subscribers.push_back(sub);
  } else {
    sub->close();
  }
  return sub;
}

Millis PlaybackService::advance(std::size_t ticks) {
  if (options_.clock != ClockMode::kVirtual) {
    throw WrongClockMode("advance is only available with the virtual clock");
  }
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < ticks; ++i) step_locked();
  return engine_.clock_ms();
}

SessionInfo PlaybackService::session(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  return find_locked(session_id).info;
}

std::optional<std::string> PlaybackService::active_session() const {
  std::lock_guard lock(mu_);
  return active_;
}

Millis PlaybackService::now_ms() const {
  std::lock_guard lock(mu_);
  return engine_.clock_ms();
}

JointState PlaybackService::pose() const {
  std::lock_guard lock(mu_);
  return engine_.pose();
}

std::optional<JointState> PlaybackService::controller_pose() const {
  std::lock_guard lock(mu_);
  if (!controller_) return std::nullopt;
  return controller_->pose();
}

std::vector<RelayOutcome> PlaybackService::link_outcomes() const {
  std::lock_guard lock(mu_);
  return relay_->outcomes();
}

}  // namespace mojikit
