// HTTP front end for PlaybackService and the knowledge base.
//
//   GET  /presets                     preset names, durations and documents
//   POST /validate                    body: sequence document
//   POST /play?preset=&replace=       or body: sequence document
//   POST /stop?session=
//   GET  /sessions/{id}
//   GET  /telemetry?session=&every=   NDJSON stream of telemetry events
//   POST /advance?ticks=              virtual clock only
//   GET  /cards?module=   GET /cards/{id}
//   GET  /patterns?intent=&trigger=&behavior=&affect=&offset=&limit=
//   GET  /stats
//
// Errors are JSON objects {"error": "..."} with a 4xx status.

#ifndef MOJIKIT_HTTP_SERVER_H_
#define MOJIKIT_HTTP_SERVER_H_

#include <atomic>
#include <memory>
#include <string>

#include "mojikit/knowledge.h"
#include "mojikit/service.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace mojikit {

class HttpServer {
 public:
  HttpServer(PlaybackService& service, const KnowledgeBase& knowledge);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves until stop() is called. Call bind() first.
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  PlaybackService& service_;
  const KnowledgeBase& knowledge_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
};

}  // namespace mojikit

#endif  // MOJIKIT_HTTP_SERVER_H_
