#include "mojikit/cli.h"

#include <pthread.h>
#include <signal.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mojikit/executor.h"
#include "mojikit/format.h"
#include "mojikit/http_server.h"
#include "mojikit/knowledge.h"
#include "mojikit/presets.h"
#include "mojikit/relay.h"
#include "mojikit/sequence.h"
#include "mojikit/service.h"
#include "mojikit/simulator.h"

namespace mojikit {
namespace {

class CliFailure : public std::runtime_error {
 public:
  CliFailure(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure(kExitRuntime, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads a document from a file, or a bundled preset when no such file exists.
Sequence load_sequence(const std::string& source) {
  if (!std::filesystem::exists(source)) {
    if (const Sequence* p = load_presets().find(source)) return *p;
    throw CliFailure(kExitRuntime, "no such file or preset: " + source);
  }
  const std::string text = read_file(source);
  try {
    return import_sequence(text);
  } catch (const SequenceParseError& e) {
    throw CliFailure(kExitParse, source + ": " + e.what());
  } catch (const SequenceValidationError& e) {
    throw CliFailure(kExitValidation, source + ": invalid sequence\n" + describe(e.report()));
  }
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const std::string text = read_file(path);
  Sequence seq;
  try {
    seq = parse_sequence_document(text);
  } catch (const SequenceParseError& e) {
    throw CliFailure(kExitParse, path + ": " + e.what());
  }
  const ValidationReport report = validate_sequence(seq);
  if (!report.ok()) {
    out << path << ": invalid\n" << describe(report);
    return kExitValidation;
  }
  out << path << ": ok (" << seq.block_count() << " blocks, " << seq.total_duration_ms()
      << " ms)\n";
  return kExitOk;
}

struct PlayFlags {
  std::string source;
  std::optional<std::size_t> ticks;
  Millis tick_ms = kDefaultTickMs;
  double loss = 0.0;
  double corrupt = 0.0;
  double ack_loss = 0.0;
  std::uint64_t seed = 1;
};

int cmd_play(const PlayFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.tick_ms <= 0) throw CliFailure(kExitUsage, "--tick-ms must be positive");
  const Sequence seq = load_sequence(flags.source);
  const FaultProfile faults{flags.loss, flags.corrupt, flags.ack_loss, flags.seed};
  try {
    faults.check();
  } catch (const DomainError& e) {
    throw CliFailure(kExitUsage, e.what());
  }

  const LinkConfig link;
  Engine engine;
  VirtualController controller;
  SimulatedTransport transport(controller, faults, link, flags.tick_ms);
  Relay relay(transport, link);
  engine.enqueue(seq);
  for (const TimedCommand& c : compile_sequence_to_commands(seq)) relay.submit(c.at_ms, c.command);

  // By default run past the end long enough for the last retries to finish.
  const Millis tail = link.ack_timeout_ms * link.max_attempts() + flags.tick_ms;
  const std::size_t ticks =
      flags.ticks.value_or(static_cast<std::size_t>((seq.total_duration_ms() + tail + flags.tick_ms - 1) /
                                                    flags.tick_ms));
  double divergence = 0.0;
  for (std::size_t i = 1; i <= ticks; ++i) {
    const Millis t = static_cast<Millis>(i) * flags.tick_ms;
    engine.tick(flags.tick_ms);
    relay.run_until(t);
    transport.pump(t);
    controller.advance_to(t);
    out << format_telemetry_line(t, controller.pose()) << '\n';
    for (std::size_t j = 0; j < kJointCount; ++j) {
      divergence =
          std::max(divergence, std::abs(engine.pose().angle(j) - controller.pose().angle(j)));
    }
  }

  std::size_t delivered = 0;
  for (const RelayOutcome& o : relay.outcomes()) delivered += o.status == SendStatus::kDelivered;
  err << "sequence " << seq.name << ": " << ticks << " ticks of " << flags.tick_ms << " ms, "
      << relay.outcomes().size() << " frames, " << delivered << " delivered, "
      << relay.total_attempts() << " transmissions, max divergence " << format_deg(divergence)
      << " deg\n";
  return kExitOk;
}

int cmd_presets(const std::string& export_name, std::ostream& out) {
  const PresetLibrary& lib = load_presets();
  if (!export_name.empty()) {
    const Sequence* p = lib.find(export_name);
    if (p == nullptr) throw CliFailure(kExitRuntime, "unknown preset '" + export_name + "'");
    out << export_sequence(*p);
    return kExitOk;
  }
  for (const Sequence& p : lib.all()) {
    out << p.name << "  " << p.total_duration_ms() << " ms  " << p.block_count() << " blocks ";
    for (std::size_t i = 0; i < p.tracks.size(); ++i) {
      out << (i == 0 ? " " : ",") << to_string(p.tracks[i].structure);
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_stats(std::ostream& out) {
  const PatternStats st = KnowledgeBase::bundled().compute_stats();
  auto rows = [&](const char* dim, const std::vector<StatRow>& v) {
    for (const StatRow& r : v) {
      out << dim << "  " << r.category << "  " << r.count << "  "
          << format_percent_tenths(r.percent_tenths) << "%\n";
    }
  };
  out << "patterns  " << st.total << '\n';
  rows("intent", st.intent);
  rows("trigger", st.trigger);
  rows("behavior", st.behavior);
  rows("affect", st.affect);
  rows("affect", {st.positive_affect});
  return kExitOk;
}

int cmd_cards(const std::string& id, const std::string& module, std::ostream& out) {
  const KnowledgeBase& kb = KnowledgeBase::bundled();
  if (!id.empty()) {
    const Card* c = nullptr;
    try {
      c = &kb.lookup_card(id);
    } catch (const NotFoundError& e) {
      throw CliFailure(kExitRuntime, e.what());
    }
    out << c->title << " [" << to_string(c->module);
    if (c->species) out << ", " << to_string(*c->species);
    out << "]\n";
    for (const CardSection& s : c->sections) {
      out << "  " << s.heading << '\n';
      for (const std::string& item : s.items) out << "    - " << item << '\n';
    }
    return kExitOk;
  }
  std::optional<CardModule> filter;
  if (!module.empty()) {
    filter = parse_card_module(module);
    if (!filter) throw CliFailure(kExitUsage, "unknown module '" + module + "'");
  }
  for (const Card* c : kb.list_cards(filter)) {
    out << c->id << "  " << to_string(c->module) << "  " << c->title << '\n';
  }
  return kExitOk;
}

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string target = "simulator";
  std::int64_t baud = 115200;
  std::string clock = "wall";
};

int cmd_serve(const ServeFlags& flags, std::ostream& out, std::ostream& err) {
  ServiceOptions options;
  if (flags.clock == "virtual") {
    options.clock = ClockMode::kVirtual;
  } else if (flags.clock == "wall") {
    options.clock = ClockMode::kWall;
  } else {
    throw CliFailure(kExitUsage, "--clock must be wall or virtual");
  }
  if (flags.target.rfind("serial:", 0) == 0) {
    options.target.kind = ControllerTarget::Kind::kSerial;
    options.target.port = flags.target.substr(7);
    options.target.baud = flags.baud;
  } else if (flags.target != "simulator") {
    throw CliFailure(kExitUsage, "--target must be simulator or serial:<device>");
  }

  // Block termination signals in every thread; one thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  PlaybackService service(options);
  HttpServer server(service, KnowledgeBase::bundled());
  const int port = server.bind(flags.host, flags.port);
  if (port < 0) throw CliFailure(kExitRuntime, "cannot bind " + flags.host + ":" + std::to_string(flags.port));
  service.start();
  out << "serving on http://" << flags.host << ":" << port << " (target "
      << options.target.describe() << ", " << flags.clock << " clock)" << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  const bool ok = server.listen();
  // Wake the waiter if the server stopped for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  service.shutdown();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  if (!ok) err << "server stopped with an error\n";
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Motion sequencing toolkit for a 16-joint companion robot", "mojikit"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a sequence document");
  validate->add_option("path", validate_path, "Sequence document")->required();

  PlayFlags play_flags;
  auto* play = app.add_subcommand(
      "play", "Play a document or preset through the simulated link; prints telemetry per tick");
  play->add_option("source", play_flags.source, "Document path or preset name")->required();
  play->add_option("--ticks", play_flags.ticks, "Ticks to run (default: until done)");
  play->add_option("--tick-ms", play_flags.tick_ms, "Tick length in ms")->capture_default_str();
  play->add_option("--loss", play_flags.loss, "Probability a frame is lost on the way out")
      ->check(CLI::Range(0.0, 1.0));
  play->add_option("--corrupt", play_flags.corrupt, "Probability a frame arrives corrupted")
      ->check(CLI::Range(0.0, 1.0));
  play->add_option("--ack-loss", play_flags.ack_loss, "Probability a reply is lost")
      ->check(CLI::Range(0.0, 1.0));
  play->add_option("--seed", play_flags.seed, "Fault injection seed")->capture_default_str();

  std::string export_name;
  auto* presets = app.add_subcommand("presets", "List the preset library");
  presets->add_option("--export", export_name, "Print one preset as a document");

  auto* stats = app.add_subcommand("stats", "Summary counts of the interaction patterns");

  std::string card_id;
  std::string card_module;
  auto* cards = app.add_subcommand("cards", "List reference cards or show one");
  cards->add_option("id", card_id, "Card id");
  cards->add_option("--module", card_module, "human_centric, environmental or animal_centric");

  ServeFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", serve_flags.host)->capture_default_str();
  serve->add_option("--port", serve_flags.port)->capture_default_str();
  serve->add_option("--target", serve_flags.target, "simulator or serial:<device>")
      ->capture_default_str();
  serve->add_option("--baud", serve_flags.baud)->capture_default_str();
  serve->add_option("--clock", serve_flags.clock, "wall or virtual")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path, out);
    if (*play) return cmd_play(play_flags, out, err);
    if (*presets) return cmd_presets(export_name, out);
    if (*stats) return cmd_stats(out);
    if (*cards) return cmd_cards(card_id, card_module, out);
    if (*serve) return cmd_serve(serve_flags, out, err);
  } catch (const CliFailure& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace mojikit
