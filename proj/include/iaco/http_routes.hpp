#pragma once

// service.hpp (and Eigen) must precede httplib.h: <resolv.h> defines a `_res` macro
// that collides with Eigen parameter names.
#include "service.hpp"

#include <httplib.h>

namespace iaco {

namespace detail {

inline int http_status(ServiceError::Kind k) {
    switch (k) {
        case ServiceError::Kind::bad_request: return 400;
        case ServiceError::Kind::not_found: return 404;
        case ServiceError::Kind::conflict: return 409;
    }
    return 500;
}

template <typename F>
void respond(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const ServiceError& e) {
        res.status = http_status(e.kind());
        res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    } catch (const nlohmann::json::exception& e) {
        res.status = 400;
        res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    }
}

}  // namespace detail

/// Routes:
///   GET  /health
///   GET  /sessions                      list handles
///   POST /sessions                      create (201)
///   GET  /sessions/{id}/snapshot
///   POST /sessions/{id}/start           search to the first interaction point
///   POST /sessions/{id}/interactions    rating | freeze | unfreeze | archive | halt
///   GET  /sessions/{id}/archive
///   GET  /sessions/{id}/log[?format=csv]
inline void mount_routes(httplib::Server& server, SessionService& service) {
    using httplib::Request;
    using httplib::Response;
    constexpr const char* kJson = "application/json";

    server.Get("/health", [](const Request&, Response& res) {
        res.set_content(nlohmann::json{{"status", "ok"}, {"schemaVersion", kApiSchemaVersion}}.dump(), kJson);
    });

    server.Get("/sessions", [&service](const Request&, Response& res) {
        detail::respond(res, [&] {
            auto list = nlohmann::ordered_json::array();
            for (const auto& h : service.list_sessions()) list.push_back(to_json(h));
            res.set_content(list.dump(), kJson);
        });
    });

    server.Post("/sessions", [&service](const Request& req, Response& res) {
        detail::respond(res, [&] {
            const auto handle = service.create_session(nlohmann::json::parse(req.body));
            res.status = 201;
            res.set_content(to_json(handle).dump(), kJson);
        });
    });

    server.Get(R"(/sessions/([^/]+)/snapshot)", [&service](const Request& req, Response& res) {
        detail::respond(res, [&] { res.set_content(service.get_snapshot(req.matches[1]).dump(), kJson); });
    });

    server.Post(R"(/sessions/([^/]+)/start)", [&service](const Request& req, Response& res) {
        detail::respond(res, [&] { res.set_content(service.start(req.matches[1]).dump(), kJson); });
    });

    server.Post(R"(/sessions/([^/]+)/interactions)", [&service](const Request& req, Response& res) {
        detail::respond(res, [&] {
            res.set_content(service.submit_interaction(req.matches[1], nlohmann::json::parse(req.body)).dump(), kJson);
        });
    });

    server.Get(R"(/sessions/([^/]+)/archive)", [&service](const Request& req, Response& res) {
        detail::respond(res, [&] { res.set_content(service.list_archive(req.matches[1]).dump(), kJson); });
    });

    server.Get(R"(/sessions/([^/]+)/log)", [&service](const Request& req, Response& res) {
        detail::respond(res, [&] {
            if (req.get_param_value("format") == "csv") {
                res.set_content(service.export_log_csv(req.matches[1]), "text/csv");
            } else {
                res.set_content(service.export_log(req.matches[1]), "application/x-ndjson");
            }
        });
    });
}

}  // namespace iaco
