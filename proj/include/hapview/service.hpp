#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "hapview/render.hpp"
#include "hapview/transform.hpp"

namespace hapview {

struct ServiceConfig {
    std::filesystem::path data_root = ".";
    std::chrono::seconds session_ttl{3600};
    std::size_t max_upload_bytes = std::size_t{256} << 20;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

using Query = std::map<std::string, std::string>;

/// Parses "a..b" into the half-open range [a, b); throws Error(InvalidRange).
IndexRange parse_index_range(const std::string& text);

/// Render options from export/overview query parameters (encoding, agg_style,
/// cell_w, cell_h, grid, color.<role>=RRGGBB).
RenderOptions render_options_from_query(const Query& query);

/// Transport-independent implementation of the HTTP API. Every route is
/// reachable through handle(); the HTTP binding only forwards requests.
///
///   POST   /datasets                      load a dataset (path under data root, or inline content)
///   POST   /sessions                      {"datasetId"} -> {"sessionId"}
///   GET    /sessions/{id}                 derived summary
///   DELETE /sessions/{id}
///   POST   /sessions/{id}/steps           append one step
///   DELETE /sessions/{id}/steps/last      undo
///   GET    /sessions/{id}/tile?rows=a..b&cols=c..d[&version=n]
///   GET    /sessions/{id}/overview?maxW=&maxH=
///   GET    /sessions/{id}/export?format=png|svg&region=full|visible&rows=&cols=
///   GET    /sessions/{id}/meta
///   GET    /sessions/{id}/log
class Service {
public:
    explicit Service(ServiceConfig config);

    Response handle(const std::string& method, const std::string& path, const Query& query,
                    const std::string& body);

    /// Registers an already-parsed dataset; returns its ID.
    std::string add_dataset(std::shared_ptr<const Dataset> dataset);
    /// Creates a session directly; returns its ID or throws std::out_of_range.
    std::string open_session(const std::string& dataset_id);

    std::size_t session_count() const;
    const ServiceConfig& config() const noexcept { return config_; }

    /// Drops sessions idle for longer than the TTL.
    void sweep_expired();

private:
    struct Session {
        std::string id;
        std::string dataset_id;
        mutable std::shared_mutex mutex;
        ViewChain chain;
        std::vector<std::string> timestamps;
        std::chrono::steady_clock::time_point last_access;
        std::mutex access_mutex;

        Session(std::string id, std::string dataset_id, std::shared_ptr<const Dataset> ds)
            : id(std::move(id)), dataset_id(std::move(dataset_id)), chain(std::move(ds)) {}
    };

    Response post_dataset(const std::string& body);
    Response post_session(const std::string& body);
    Response get_summary(Session& s);
    Response post_step(Session& s, const std::string& body);
    Response undo_step(Session& s);
    Response get_tile(Session& s, const Query& query);
    Response get_overview(Session& s, const Query& query);
    Response get_export(Session& s, const Query& query);
    Response get_meta(Session& s);
    Response get_log(Session& s);

    std::shared_ptr<Session> find_session(const std::string& id);
    std::filesystem::path resolve(const std::string& relative) const;

    ServiceConfig config_;
    std::filesystem::path root_;
    mutable std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t dataset_counter_ = 0;
};

/// Dataset summary as served by POST /datasets and printed by the CLI.
std::string summary_json(const Dataset& ds);

}  // namespace hapview
