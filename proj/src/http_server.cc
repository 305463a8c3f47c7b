#include "mojikit/http_server.h"

#include <charconv>

#include <httplib.h>
#include <json.hpp>

namespace mojikit {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, json{{"error", message}}, status);
}

json violations_json(const ValidationReport& report) {
  json out = json::array();
  for (const Violation& v : report.violations) {
    out.push_back({{"kind", to_string(v.kind)},
                   {"structure", to_string(v.structure)},
                   {"blocks", v.blocks},
                   {"message", v.message}});
  }
  return out;
}

json session_json(const SessionInfo& s) {
  return {{"session", s.id},         {"sequence", s.sequence_name},
          {"state", to_string(s.state)}, {"target", s.target},
          {"started_ms", s.started_ms},  {"errors", s.errors}};
}

json card_json(const Card& c) {
  json sections = json::array();
  for (const CardSection& s : c.sections) {
    sections.push_back({{"heading", s.heading}, {"items", s.items}});
  }
  json out = {{"id", c.id},
              {"module", to_string(c.module)},
              {"title", c.title},
              {"sections", std::move(sections)}};
  if (c.species) out["species"] = to_string(*c.species);
  return out;
}

json pattern_json(const InteractionPattern& p) {
  json behaviors = json::array();
  for (BehaviorPrimitive b : p.behaviors) behaviors.push_back(to_string(b));
  json out = {{"id", p.id},
              {"intent", to_string(p.intent)},
              {"trigger", to_string(p.trigger)},
              {"behaviors", std::move(behaviors)},
              {"affect", to_string(p.affect)},
              {"summary",
               {{"human_intent", p.summary.human_intent},
                {"robot_behavior", p.summary.robot_behavior},
                {"affective_meaning", p.summary.affective_meaning}}}};
  if (!p.note.empty()) out["note"] = p.note;
  return out;
}

json stat_rows_json(const std::vector<StatRow>& rows) {
  json out = json::array();
  for (const StatRow& r : rows) {
    out.push_back({{"category", r.category},
                   {"count", r.count},
                   {"percent", r.percent_tenths / 10.0}});
  }
  return out;
}

std::optional<std::size_t> parse_size(const std::string& s) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

bool truthy(const std::string& s) { return s == "1" || s == "true" || s == "yes"; }

// Reads an optional enum-valued query parameter. Returns false (after
// writing a 400) when the value is present but unknown.
template <typename E>
bool enum_param(const httplib::Request& req, httplib::Response& res, const char* name,
                std::optional<E> (*parse)(std::string_view), std::optional<E>& out) {
  if (!req.has_param(name)) return true;
  const std::string v = req.get_param_value(name);
  out = parse(v);
  if (!out) {
    send_error(res, 400, std::string("unknown ") + name + " '" + v + "'");
    return false;
  }
  return true;
}

}  // namespace

HttpServer::HttpServer(PlaybackService& service, const KnowledgeBase& knowledge)
    : service_(service), knowledge_(knowledge), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  stopping_ = true;
  server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void HttpServer::install_routes() {
  httplib::Server& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  s.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                             std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });

  s.Get("/presets", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const Sequence& p : service_.presets().all()) {
      json structures = json::array();
      for (const Track& t : p.tracks) structures.push_back(to_string(t.structure));
      out.push_back({{"name", p.name},
                     {"duration_ms", p.total_duration_ms()},
                     {"blocks", p.block_count()},
                     {"structures", std::move(structures)},
                     {"document", json::parse(export_sequence(p))}});
    }
    send_json(res, out);
  });

  s.Post("/validate", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const ValidationReport report = service_.validate(req.body);
      send_json(res, {{"ok", report.ok()}, {"violations", violations_json(report)}});
    } catch (const SequenceParseError& e) {
      send_error(res, 400, e.what());
    }
  });

  s.Post("/play", [this](const httplib::Request& req, httplib::Response& res) {
    PlayRequest play;
    if (req.has_param("preset")) play.preset = req.get_param_value("preset");
    if (!req.body.empty()) play.document = req.body;
    play.replace = req.has_param("replace") && truthy(req.get_param_value("replace"));
    try {
      const std::string id = service_.play(play);
      send_json(res, session_json(service_.session(id)));
    } catch (const NotFound& e) {
      send_error(res, 404, e.what());
    } catch (const Busy& e) {
      send_error(res, 409, e.what());
    } catch (const SequenceParseError& e) {
      send_error(res, 400, e.what());
    } catch (const SequenceValidationError& e) {
      send_json(res, {{"error", e.what()}, {"violations", violations_json(e.report())}}, 422);
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, e.what());
    }
  });

  s.Post("/stop", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("session")) return send_error(res, 400, "missing session parameter");
    try {
      send_json(res, session_json(service_.stop(req.get_param_value("session"))));
    } catch (const NotFound& e) {
      send_error(res, 404, e.what());
    }
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    try {
      send_json(res, session_json(service_.session(req.matches[1])));
    } catch (const NotFound& e) {
      send_error(res, 404, e.what());
    }
  });

  s.Get("/telemetry", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("session")) return send_error(res, 400, "missing session parameter");
    std::size_t every = 1;
    if (req.has_param("every")) {
      const auto v = parse_size(req.get_param_value("every"));
      if (!v || *v == 0) return send_error(res, 400, "every must be a positive integer");
      every = *v;
    }
    std::shared_ptr<TelemetrySubscription> sub;
    try {
      sub = service_.subscribe(req.get_param_value("session"), every);
    } catch (const NotFound& e) {
      return send_error(res, 404, e.what());
    }
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, sub](std::size_t, httplib::DataSink& sink) {
          while (!stopping_) {
            if (auto e = sub->next(50)) {
              const std::string line = e->to_json() + "\n";
              return sink.write(line.data(), line.size());
            }
            if (sub->finished()) break;
            if (!sink.is_writable()) return false;
          }
          sink.done();
          return true;
        });
  });

  s.Post("/advance", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t ticks = 1;
    if (req.has_param("ticks")) {
      const auto v = parse_size(req.get_param_value("ticks"));
      if (!v) return send_error(res, 400, "ticks must be a non-negative integer");
      ticks = *v;
    }
    try {
      send_json(res, {{"t_ms", service_.advance(ticks)}});
    } catch (const WrongClockMode& e) {
      send_error(res, 409, e.what());
    }
  });

  s.Get("/cards", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<CardModule> module;
    if (!enum_param(req, res, "module", parse_card_module, module)) return;
    json out = json::array();
    for (const Card* c : knowledge_.list_cards(module)) out.push_back(card_json(*c));
    send_json(res, out);
  });

  s.Get(R"(/cards/([A-Za-z0-9_-]+))", [this](const httplib::Request& req,
                                            httplib::Response& res) {
    try {
      send_json(res, card_json(knowledge_.lookup_card(req.matches[1].str())));
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    }
  });

  s.Get("/patterns", [this](const httplib::Request& req, httplib::Response& res) {
    PatternFilter f;
    if (!enum_param(req, res, "intent", parse_intent, f.intent) ||
        !enum_param(req, res, "trigger", parse_trigger, f.trigger) ||
        !enum_param(req, res, "behavior", parse_behavior, f.behavior) ||
        !enum_param(req, res, "affect", parse_affect, f.affect)) {
      return;
    }
    const auto all = knowledge_.query_patterns(f);
    std::size_t offset = 0;
    std::size_t limit = all.size();
    for (auto [name, target] : {std::pair{"offset", &offset}, std::pair{"limit", &limit}}) {
      if (!req.has_param(name)) continue;
      const auto v = parse_size(req.get_param_value(name));
      if (!v) return send_error(res, 400, std::string(name) + " must be a non-negative integer");
      *target = *v;
    }
    json items = json::array();
    for (std::size_t i = offset; i < all.size() && i - offset < limit; ++i) {
      items.push_back(pattern_json(*all[i]));
    }
    send_json(res, {{"total", all.size()}, {"offset", offset}, {"items", std::move(items)}});
  });

  s.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
    const PatternStats st = knowledge_.compute_stats();
    send_json(res, {{"total", st.total},
                    {"intent", stat_rows_json(st.intent)},
                    {"trigger", stat_rows_json(st.trigger)},
                    {"behavior", stat_rows_json(st.behavior)},
                    {"affect", stat_rows_json(st.affect)},
                    {"positive_affect",
                     {{"count", st.positive_affect.count},
                      {"percent", st.positive_affect.percent_tenths / 10.0}}}});
  });
}

}  // namespace mojikit
