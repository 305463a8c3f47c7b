// Playback service: owns the engine and the controller link, runs playback
// sessions, and fans telemetry out to subscribers.
//
// Every engine mutation (play, stop, tick) happens under one lock, so calls
// from concurrent clients are applied one at a time in arrival order. With
// the virtual clock the service only moves when advance() is called; with the
// wall clock a worker thread ticks it.

#ifndef MOJIKIT_SERVICE_H_
#define MOJIKIT_SERVICE_H_

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mojikit/executor.h"
#include "mojikit/presets.h"
#include "mojikit/protocol.h"
#include "mojikit/relay.h"
#include "mojikit/sequence.h"
#include "mojikit/simulator.h"

namespace mojikit {

enum class ClockMode { kVirtual, kWall };

struct ControllerTarget {
  enum class Kind { kSimulator, kSerial };
  Kind kind = Kind::kSimulator;
  std::string port;  // serial only
  std::int64_t baud = 115200;

  std::string describe() const;
};

struct ServiceOptions {
  ClockMode clock = ClockMode::kVirtual;
  Millis tick_ms = 20;
  ControllerTarget target;
  LinkConfig link;
  FaultProfile faults;  // simulator target only
  // Events kept per subscriber before the oldest are discarded.
  std::size_t subscriber_backlog = 4096;
};

enum class SessionState { kIdle, kPlaying, kStopped };

std::string_view to_string(SessionState state);

struct TelemetryEvent {
  Millis t_ms;
  JointState pose;
  std::string status;  // session state, or "error"
  std::string error;   // set when status is "error"

  // {"t_ms":..,"angles":[16 values, one decimal],"status":..} on one line.
  std::string to_json() const;
};

struct SessionInfo {
  std::string id;
  std::string sequence_name;
  SessionState state;
  std::string target;
  Millis started_ms;
  std::vector<std::string> errors;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Busy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WrongClockMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One subscriber's view of a session's telemetry. The first event is always
// the pose at subscription time. The stream ends after the session stops or
// finishes, or once the session was already over when subscribing.
class TelemetrySubscription {
 public:
  explicit TelemetrySubscription(std::size_t every, std::size_t backlog);

  // Waits up to `timeout_ms` for the next event. Returns nullopt on timeout
  // or when the stream has ended; check finished() to tell which.
  std::optional<TelemetryEvent> next(Millis timeout_ms);
  bool finished() const;
  std::size_t dropped() const;

  // Called by the service.
  void publish(const TelemetryEvent& event, bool force = false);
  void close();

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<TelemetryEvent> queue_;
  std::size_t every_;
  std::size_t backlog_;
  std::size_t seen_ = 0;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

struct PlayRequest {
  std::optional<std::string> preset;
  std::optional<std::string> document;
  bool replace = false;
};

class PlaybackService {
 public:
  explicit PlaybackService(ServiceOptions options = {},
                           const PresetLibrary& presets = load_presets());
  ~PlaybackService();
  PlaybackService(const PlaybackService&) = delete;
  PlaybackService& operator=(const PlaybackService&) = delete;

  // Starts the wall-clock worker. No-op with the virtual clock.
  void start();
  void shutdown();

  const ServiceOptions& options() const { return options_; }
  const PresetLibrary& presets() const { return presets_; }

  // Parses the document; throws SequenceParseError when it is not well formed.
  ValidationReport validate(std::string_view document) const;

  // Returns the new session id. Throws NotFound (unknown preset), Busy
  // (another session is playing and replace is false), SequenceParseError or
  // SequenceValidationError (bad document), std::invalid_argument (neither or
  // both of preset and document given).
  std::string play(const PlayRequest& request);

  // Idempotent for sessions that are not playing. Throws NotFound.
  SessionInfo stop(const std::string& session_id);

  // Throws NotFound.
  std::shared_ptr<TelemetrySubscription> subscribe(const std::string& session_id,
                                                   std::size_t every = 1);

  // Virtual clock only (throws WrongClockMode otherwise). Runs `ticks` ticks
  // and returns the new clock value.
  Millis advance(std::size_t ticks);

  SessionInfo session(const std::string& session_id) const;
  std::optional<std::string> active_session() const;
  Millis now_ms() const;
  JointState pose() const;
  // The simulated controller's pose; nullopt for a serial target.
  std::optional<JointState> controller_pose() const;
  std::vector<RelayOutcome> link_outcomes() const;

 private:
  struct Session {
    SessionInfo info;
    std::vector<std::weak_ptr<TelemetrySubscription>> subscribers;
  };

  void step_locked();
  void end_session_locked(Session& s, SessionState final_state);
  void broadcast_locked(Session& s, const TelemetryEvent& event, bool force = false);
  TelemetryEvent snapshot_locked(const Session& s) const;
  Session& find_locked(const std::string& id);
  const Session& find_locked(const std::string& id) const;
  void worker();

  ServiceOptions options_;
  const PresetLibrary& presets_;

  mutable std::mutex mu_;
  Engine engine_;
  std::unique_ptr<VirtualController> controller_;
  std::unique_ptr<Transport> link_;
  std::unique_ptr<Relay> relay_;
  std::size_t outcomes_seen_ = 0;
  std::map<std::string, Session> sessions_;
  std::optional<std::string> active_;
  std::size_t next_session_ = 1;

  std::atomic<bool> running_{false};
  std::thread worker_;
};

}  // namespace mojikit

#endif  // MOJIKIT_SERVICE_H_
