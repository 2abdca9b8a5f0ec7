#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "aigiqa/rating/service.hpp"

namespace httplib {
class Server;
}

namespace aigiqa::rating {

/// HTTP front end of RatingService. All bodies are JSON.
///
///   POST /api/sessions                         {"evaluator_id", "stage"} -> session
///   GET  /api/sessions/{evaluator}/{stage}/next                           -> item | complete
///   POST /api/sessions/{evaluator}/{stage}/ratings
///        {"image_id", "quality", "authenticity", "correspondence"}        -> ack
///   GET  /api/evaluators/{evaluator}/progress                             -> per-stage counts
///   GET  /api/health
///
/// Images are embedded base64 with their MIME type. Errors come back as
/// {"error": <code>, "message": ...} with 400 (bad input), 404 (unknown
/// evaluator or image) or 409 (ordering, duplicate, concurrency, completion).
class RatingHttpServer {
 public:
  explicit RatingHttpServer(RatingService& service,
                            const std::filesystem::path& ui_dir = {});
  ~RatingHttpServer();

  RatingHttpServer(const RatingHttpServer&) = delete;
  RatingHttpServer& operator=(const RatingHttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop().
  bool listen_after_bind();
  void stop();
  bool wait_until_ready() const;

 private:
  RatingService& service_;
  std::unique_ptr<httplib::Server> server_;
};

int http_status_for(Errc code);

}  // namespace aigiqa::rating
