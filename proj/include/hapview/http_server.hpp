#pragma once

#include <memory>
#include <string>
#include <thread>

#include "hapview/service.hpp"

namespace httplib {
class Server;
}

namespace hapview {

/// Binds a Service to HTTP/1.1. Requests are forwarded verbatim to
/// Service::handle; the body limit follows ServiceConfig::max_upload_bytes.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds host:port (port 0 picks a free port). Returns false on failure.
    bool bind(const std::string& host, int port);
    int port() const noexcept { return port_; }

    /// Serves on a background thread until stop().
    void start();
    void stop();

private:
    Service& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = -1;
};

}  // namespace hapview
