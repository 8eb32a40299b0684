#include "hapview/http_server.hpp"

#include "httplib.h"

namespace hapview {

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    server_->set_payload_max_length(service_.config().max_upload_bytes);
    // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which would let a
    // second server share an occupied port instead of failing.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        Query query;
        for (const auto& [key, value] : req.params) query[key] = value;
        const Response out = service_.handle(req.method, req.path, query, req.body);
        res.status = out.status;
        res.set_content(out.body, out.content_type.c_str());
    };
    server_->Get(R"(/.*)", forward);
    server_->Post(R"(/.*)", forward);
    server_->Delete(R"(/.*)", forward);
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        return port_ > 0;
    }
    if (!server_->bind_to_port(host, port)) return false;
    port_ = port;
    return true;
}

void HttpServer::start() {
    thread_ = std::thread([this] { server_->listen_after_bind(); });
}

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace hapview
