#include "aigiqa/rating/http_server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::rating {
namespace {

using util::Json;

std::string base64(const std::vector<unsigned char>& bytes) {
  return httplib::detail::base64_encode(std::string(bytes.begin(), bytes.end()));
}

Json session_json(const Session& s) {
  return {{"evaluator_id", s.evaluator_id},
          {"stage", s.stage},
          {"stage_size", s.order.size()},
          {"cursor", s.cursor},
          {"complete", s.complete()}};
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view code,
                 const std::string& message) {
  reply(res, status, {{"error", code}, {"message", message}});
}

int parse_stage(const std::string& text) {
  try {
    std::size_t used = 0;
    const int stage = std::stoi(text, &used);
    if (used == text.size()) return stage;
  } catch (const std::exception&) {
  }
  throw RatingError(Errc::StageOutOfRange, "stage `" + text + "` is not an integer");
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const RatingError& e) {
      reply_error(res, http_status_for(e.code()), to_string(e.code()), e.what());
    } catch (const Json::exception& e) {
      reply_error(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      reply_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

int http_status_for(Errc code) {
  switch (code) {
    case Errc::UnknownEvaluator:
    case Errc::UnknownImage: return 404;
    case Errc::StageOutOfRange:
    case Errc::OffGrid:
    case Errc::ScoreOutOfRange: return 400;
    case Errc::OutOfOrder:
    case Errc::Duplicate:
    case Errc::ConcurrentSubmission:
    case Errc::StageComplete: return 409;
  }
  return 400;
}

RatingHttpServer::RatingHttpServer(RatingService& service, const std::filesystem::path& ui_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;

  srv.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}});
  });

  srv.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = Json::parse(req.body);
    const auto session = service_.open_session(body.at("evaluator_id").get<std::string>(),
                                               body.at("stage").get<int>());
    reply(res, 200, session_json(session));
  }));

  srv.Get(R"(/api/sessions/([^/]+)/(\d+)/next)",
          guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto session = service_.open_session(req.matches[1], parse_stage(req.matches[2]));
            const auto next = service_.next_item(session);
            if (const auto* done = std::get_if<StageComplete>(&next)) {
              reply(res, 200, {{"status", "complete"},
                               {"rated", done->rated},
                               {"stage_size", done->stage_size}});
              return;
            }
            const auto& item = std::get<Item>(next);
            Json body{{"status", "item"},
                      {"image_id", item.image_id},
                      {"text_prompt", item.text_prompt},
                      {"position", item.position},
                      {"stage_size", item.stage_size},
                      {"image", {{"mime", item.image_mime}, {"data", base64(item.image)}}}};
            if (item.reference) {
              body["reference"] = {{"mime", item.reference_mime},
                                   {"data", base64(*item.reference)}};
            }
            reply(res, 200, body);
          }));

  srv.Post(R"(/api/sessions/([^/]+)/(\d+)/ratings)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             const auto body = Json::parse(req.body);
             const auto ack = service_.submit_rating(
                 req.matches[1], parse_stage(req.matches[2]),
                 body.at("image_id").get<std::string>(), body.at("quality").get<double>(),
                 body.at("authenticity").get<double>(), body.at("correspondence").get<double>());
             reply(res, 200, {{"status", "stored"},
                              {"cursor", ack.cursor},
                              {"stage_complete", ack.stage_complete}});
           }));

  srv.Get(R"(/api/evaluators/([^/]+)/progress)",
          guarded([this](const httplib::Request& req, httplib::Response& res) {
            Json stages = Json::array();
            for (const auto& p : service_.progress(req.matches[1])) {
              stages.push_back({{"stage", p.stage},
                                {"rated", p.rated},
                                {"total", p.total},
                                {"complete", p.complete()}});
            }
            reply(res, 200, {{"evaluator_id", std::string(req.matches[1])}, {"stages", stages}});
          }));

  if (!ui_dir.empty()) srv.set_mount_point("/", ui_dir.string());
}

RatingHttpServer::~RatingHttpServer() { stop(); }

int RatingHttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool RatingHttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void RatingHttpServer::stop() {
  if (server_) server_->stop();
}

bool RatingHttpServer::wait_until_ready() const {
  server_->wait_until_ready();
  return server_->is_running();
}

}  // namespace aigiqa::rating
