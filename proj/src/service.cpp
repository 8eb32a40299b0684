#include "hapview/service.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "hapview/error.hpp"
#include "hapview/ingest.hpp"
#include "hapview/step_json.hpp"
#include "hapview/tile.hpp"
#include "text_util.hpp"

namespace hapview {

using nlohmann::json;

namespace {

constexpr const char* category_palette[] = {"#A6CEE3", "#1F78B4", "#B2DF8A", "#33A02C", "#FB9A99", "#E31A1C",
                                            "#FDBF6F", "#FF7F00", "#CAB2D6", "#6A3D9A", "#FFFF99", "#B15928"};

Response json_response(int status, const json& body) { return Response{status, "application/json", body.dump()}; }

Response error_response(int status, const std::string& kind, const std::string& message,
                        std::optional<std::size_t> line = std::nullopt) {
    json body = {{"error", kind}, {"message", message}};
    if (line) body["line"] = *line;
    return json_response(status, body);
}

Response error_response(int status, const Error& e) {
    return error_response(status, std::string(to_string(e.kind())), e.what(), e.line());
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string random_token() {
    static std::mutex mutex;
    static std::mt19937_64 engine{std::random_device{}()};
    std::lock_guard lock(mutex);
    std::ostringstream out;
    out << std::hex;
    for (int i = 0; i < 2; ++i) {
        out.width(16);
        out.fill('0');
        out << engine();
    }
    return out.str();
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t slash = path.find('/', start);
        const std::size_t end = slash == std::string::npos ? path.size() : slash;
        if (end > start) parts.push_back(path.substr(start, end - start));
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    return parts;
}

std::size_t query_size(const Query& q, const char* key, std::size_t fallback) {
    auto it = q.find(key);
    if (it == q.end()) return fallback;
    auto v = detail::parse_int<std::size_t>(it->second);
    if (!v) throw Error(ErrorKind::InvalidRange, std::string("bad value for ") + key + ": '" + it->second + "'");
    return *v;
}

json meta_value_json(const MetaValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return nullptr;
}

json view_summary(const ViewChain& chain) {
    const View& v = chain.view();
    return {{"version", chain.version()},
            {"steps", chain.steps().size()},
            {"nRows", v.n_rows()},
            {"nColumns", v.n_columns()},
            {"nVariants", v.n_variants()},
            {"aggregated", v.has_aggregates()},
            {"selectedRows", v.selected_row_indices().size()},
            {"selectedColumns", v.selected_column_indices().size()}};
}

}  // namespace

IndexRange parse_index_range(const std::string& text) {
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) throw Error(ErrorKind::InvalidRange, "range '" + text + "' is not a..b");
    auto a = detail::parse_int<std::size_t>(std::string_view(text).substr(0, dots));
    auto b = detail::parse_int<std::size_t>(std::string_view(text).substr(dots + 2));
    if (!a || !b || *a > *b) throw Error(ErrorKind::InvalidRange, "range '" + text + "' is not a..b with a <= b");
    return {*a, *b};
}

RenderOptions render_options_from_query(const Query& query) {
    RenderOptions options;
    if (auto it = query.find("encoding"); it != query.end()) options.encoding = parse_encoding(it->second);
    if (auto it = query.find("agg_style"); it != query.end()) options.agg_style = parse_agg_style(it->second);
    options.cell_width = query_size(query, "cell_w", 1);
    options.cell_height = query_size(query, "cell_h", 1);
    if (options.cell_width == 0 || options.cell_height == 0)
        throw Error(ErrorKind::InvalidRange, "cell sizes must be at least 1 pixel");
    if (auto it = query.find("grid"); it != query.end()) options.show_grid = it->second == "1" || it->second == "true";
    for (const auto& [key, value] : query) {
        if (!key.starts_with("color.")) continue;
        auto role = color_role_from_string(std::string_view(key).substr(6));
        if (!role) throw Error(ErrorKind::InvalidFormat, "unknown colour role '" + key.substr(6) + "'");
        options.colors.set(*role, Rgb::from_hex(value));
    }
    return options;
}

std::string summary_json(const Dataset& ds) {
    const ParseReport& r = ds.report();
    json report = {{"lines", r.lines},
                   {"records", r.records},
                   {"retained", r.retained},
                   {"skipped", r.skipped()},
                   {"skippedNonSnv", r.skipped_non_snv},
                   {"renamedDuplicateIds", r.renamed_duplicate_ids},
                   {"phasedCalls", r.phased_calls},
                   {"unphasedCalls", r.unphased_calls},
                   {"mixedPhase", r.mixed_phase}};
    json unknown = json::object();
    for (const auto* tables : {&ds.subject_meta(), &ds.variant_meta()})
        for (const auto& t : *tables) unknown[t->name] = t->unknown_ids.size();
    report["unknownMetaIds"] = unknown;
    return json{{"nSubjects", ds.n_subjects()},
                {"nVariants", ds.n_variants()},
                {"phased", ds.phased()},
                {"miColumns", ds.mi_columns()},
                {"miRows", ds.mi_rows()},
                {"parseReport", report}}
        .dump();
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    root_ = std::filesystem::weakly_canonical(std::filesystem::absolute(config_.data_root));
}

std::string Service::add_dataset(std::shared_ptr<const Dataset> dataset) {
    std::lock_guard lock(registry_mutex_);
    std::string id = "ds-" + std::to_string(++dataset_counter_);
    datasets_.emplace(id, std::move(dataset));
    return id;
}

std::string Service::open_session(const std::string& dataset_id) {
    std::lock_guard lock(registry_mutex_);
    auto ds = datasets_.find(dataset_id);
    if (ds == datasets_.end()) throw std::out_of_range("unknown dataset " + dataset_id);
    std::string id = random_token();
    auto session = std::make_shared<Session>(id, dataset_id, ds->second);
    session->last_access = std::chrono::steady_clock::now();
    sessions_.emplace(id, std::move(session));
    return id;
}

std::size_t Service::session_count() const {
    std::lock_guard lock(registry_mutex_);
    return sessions_.size();
}

void Service::sweep_expired() {
    const auto now = std::chrono::steady_clock::now();
    std::lock_guard lock(registry_mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        std::chrono::steady_clock::time_point last;
        {
            std::lock_guard access(it->second->access_mutex);
            last = it->second->last_access;
        }
        if (now - last > config_.session_ttl)
            it = sessions_.erase(it);
        else
            ++it;
    }
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) {
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(registry_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return nullptr;
        s = it->second;
    }
    std::lock_guard access(s->access_mutex);
    s->last_access = std::chrono::steady_clock::now();
    return s;
}

std::filesystem::path Service::resolve(const std::string& relative) const {
    namespace fs = std::filesystem;
    const fs::path candidate = fs::weakly_canonical(root_ / fs::path(relative));
    const auto [root_end, ignored] = std::mismatch(root_.begin(), root_.end(), candidate.begin(), candidate.end());
    if (root_end != root_.end()) throw std::invalid_argument("path '" + relative + "' escapes the data root");
    return candidate;
}

Response Service::handle(const std::string& method, const std::string& path, const Query& query,
                         const std::string& body) {
    sweep_expired();
    const std::vector<std::string> parts = split_path(path);
    try {
        if (parts.size() == 1 && parts[0] == "datasets" && method == "POST") return post_dataset(body);
        if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") return post_session(body);
        if (parts.size() >= 2 && parts[0] == "sessions") {
            if (parts.size() == 2 && method == "DELETE") {
                std::lock_guard lock(registry_mutex_);
                if (sessions_.erase(parts[1]) == 0)
                    return error_response(404, "UnknownSession", "no session " + parts[1]);
                return json_response(200, {{"deleted", parts[1]}});
            }
            auto session = find_session(parts[1]);
            if (!session) return error_response(404, "UnknownSession", "no session " + parts[1]);
            Session& s = *session;
            const std::string tail = parts.size() > 2 ? parts[2] : "";
            if (parts.size() == 2 && method == "GET") return get_summary(s);
            if (parts.size() == 3 && tail == "steps" && method == "POST") return post_step(s, body);
            if (parts.size() == 4 && tail == "steps" && parts[3] == "last" && method == "DELETE") return undo_step(s);
            if (parts.size() == 3 && method == "GET") {
                if (tail == "tile") return get_tile(s, query);
                if (tail == "overview") return get_overview(s, query);
                if (tail == "export") return get_export(s, query);
                if (tail == "meta") return get_meta(s);
                if (tail == "log") return get_log(s);
            }
        }
        return error_response(404, "NotFound", method + " " + path);
    } catch (const Error& e) {
        return error_response(400, e);
    } catch (const json::exception& e) {
        return error_response(400, "BadRequest", e.what());
    }
}

Response Service::post_dataset(const std::string& body) {
    if (body.size() > config_.max_upload_bytes) return error_response(413, "PayloadTooLarge", "request body too large");
    const json req = json::parse(body);
    if (!req.is_object()) return error_response(400, "BadRequest", "expected a JSON object");

    InputFormat format = InputFormat::Vcf;
    if (auto it = req.find("format"); it != req.end()) {
        const std::string token = detail::upper(it->get<std::string>());
        if (token == "IMPUTE2")
            format = InputFormat::Impute2;
        else if (token != "VCF")
            return error_response(400, "InvalidFormat", "format must be VCF or IMPUTE2");
    }

    // Each input is either "<key>" (path under the data root) or "<key>Content" (inline text).
    auto open_input = [&](const json& obj, const std::string& key) -> std::unique_ptr<std::istream> {
        if (auto it = obj.find(key + "Content"); it != obj.end())
            return std::make_unique<std::istringstream>(it->get<std::string>());
        auto it = obj.find(key);
        if (it == obj.end()) throw Error(ErrorKind::IoError, "missing '" + key + "'");
        const auto path = resolve(it->get<std::string>());
        auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
        if (!std::filesystem::is_regular_file(path) || !*in)
            throw Error(ErrorKind::IoError, "no such file " + it->get<std::string>());
        return in;
    };

    std::shared_ptr<const Dataset> dataset;
    try {
        auto in = open_input(req, "path");
        Dataset ds = [&] {
            if (format == InputFormat::Vcf) return parse_vcf(*in);
            auto samples = open_input(req, "samples");
            return parse_impute2(*in, *samples);
        }();
        if (auto it = req.find("meta"); it != req.end()) {
            for (const auto& m : *it) {
                const std::string kind_token = detail::upper(m.value("kind", std::string("SUBJECT")));
                if (kind_token != "SUBJECT" && kind_token != "VARIANT")
                    return error_response(400, "BadRequest", "meta kind must be SUBJECT or VARIANT");
                const MetaKind kind = kind_token == "SUBJECT" ? MetaKind::Subject : MetaKind::Variant;
                std::string name = m.value("name", std::string());
                if (name.empty() && m.contains("path")) name = std::filesystem::path(m["path"].get<std::string>()).stem().string();
                if (name.empty()) name = "meta" + std::to_string(ds.subject_meta().size() + ds.variant_meta().size());
                auto meta_in = open_input(m, "path");
                ds = attach_meta(std::move(ds), parse_meta(*meta_in, kind, name), kind);
            }
        }
        dataset = std::make_shared<const Dataset>(std::move(ds));
    } catch (const std::invalid_argument& e) {
        return error_response(403, "PathEscape", e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IoError) return error_response(404, e);
        return error_response(422, e);
    }
    const std::string id = add_dataset(dataset);
    return json_response(200, {{"datasetId", id}, {"summary", json::parse(summary_json(*dataset))}});
}

Response Service::post_session(const std::string& body) {
    const json req = json::parse(body);
    const std::string dataset_id = req.value("datasetId", std::string());
    try {
        return json_response(200, {{"sessionId", open_session(dataset_id)}});
    } catch (const std::out_of_range& e) {
        return error_response(404, "UnknownDataset", e.what());
    }
}

Response Service::get_summary(Session& s) {
    std::shared_lock lock(s.mutex);
    json body = view_summary(s.chain);
    body["sessionId"] = s.id;
    body["datasetId"] = s.dataset_id;
    return json_response(200, body);
}

Response Service::post_step(Session& s, const std::string& body) {
    Step step = step_from_json(json::parse(body));
    std::unique_lock lock(s.mutex);
    try {
        const StepReport& report = s.chain.push(std::move(step));
        s.timestamps.push_back(timestamp_now());
        json out = view_summary(s.chain);
        out["report"] = report.summary;
        out["unknownIds"] = report.unknown_ids;
        return json_response(200, out);
    } catch (const Error& e) {
        return error_response(400, e);
    }
}

Response Service::undo_step(Session& s) {
    std::unique_lock lock(s.mutex);
    if (!s.chain.undo()) return error_response(409, "NothingToUndo", "the step log is empty");
    s.timestamps.pop_back();
    return json_response(200, view_summary(s.chain));
}

Response Service::get_tile(Session& s, const Query& query) {
    std::shared_lock lock(s.mutex);
    if (auto it = query.find("version"); it != query.end()) {
        auto expected = detail::parse_int<std::uint64_t>(it->second);
        if (!expected || *expected != s.chain.version())
            return error_response(409, "VersionMismatch",
                                  "view is at version " + std::to_string(s.chain.version()));
    }
    try {
        const auto rows_it = query.find("rows");
        const auto cols_it = query.find("cols");
        if (rows_it == query.end() || cols_it == query.end())
            return error_response(400, "BadRequest", "tile needs rows=a..b and cols=c..d");
        const Tile tile = make_tile(s.chain.view(), parse_index_range(rows_it->second), parse_index_range(cols_it->second));
        return Response{200, "application/octet-stream", encode_tile(tile)};
    } catch (const Error& e) {
        return error_response(416, e);
    }
}

Response Service::get_overview(Session& s, const Query& query) {
    const RenderOptions options = render_options_from_query(query);
    const std::size_t max_w = query_size(query, "maxW", 256);
    const std::size_t max_h = query_size(query, "maxH", 256);
    std::shared_lock lock(s.mutex);
    return Response{200, "image/png", encode_png(render_overview(s.chain.view(), options, max_w, max_h))};
}

Response Service::get_export(Session& s, const Query& query) {
    const RenderOptions options = render_options_from_query(query);
    const auto format_it = query.find("format");
    const ImageFormat format = parse_image_format(format_it == query.end() ? "png" : format_it->second);
    ExportRegion region;
    if (auto it = query.find("region"); it != query.end() && detail::upper(it->second) == "VISIBLE") {
        const auto rows_it = query.find("rows");
        const auto cols_it = query.find("cols");
        if (rows_it == query.end() || cols_it == query.end())
            return error_response(400, "BadRequest", "visible export needs rows=a..b and cols=c..d");
        region = ExportRegion::visible(parse_index_range(rows_it->second), parse_index_range(cols_it->second));
    } else if (it != query.end() && detail::upper(it->second) != "FULL") {
        return error_response(400, "InvalidFormat", "region must be full or visible");
    }
    std::shared_lock lock(s.mutex);
    try {
        std::string bytes = export_image(s.chain.view(), options, format, region);
        return Response{200, format == ImageFormat::Png ? "image/png" : "image/svg+xml", std::move(bytes)};
    } catch (const Error& e) {
        return error_response(e.kind() == ErrorKind::OutOfBounds ? 416 : 400, e);
    }
}

Response Service::get_meta(Session& s) {
    std::shared_lock lock(s.mutex);
    const View& view = s.chain.view();
    const Dataset& ds = view.dataset();

    json rows = json::array();
    for (const auto& r : view.rows()) rows.push_back(r.label);

    json subject_columns = json::array();
    for (const auto& column : ds.subject_columns()) {
        json values = json::array();
        for (const auto& r : view.rows()) values.push_back(meta_value_json(view.row_meta(r, column)));
        json entry = {{"name", column.column->name},
                      {"table", column.table},
                      {"type", to_string(column.column->type)},
                      {"values", values}};
        if (column.column->type == MetaType::Categorical) {
            const auto categories = column.column->categories();
            json palette = json::object();
            for (std::size_t i = 0; i < categories.size(); ++i)
                palette[categories[i]] = category_palette[i % std::size(category_palette)];
            entry["categories"] = categories;
            entry["palette"] = palette;
        }
        subject_columns.push_back(entry);
    }

    json columns = json::array();
    for (const auto& c : view.columns())
        columns.push_back({{"variant", ds.variants()[c.variant].id}, {"allele", c.allele == 0 ? "P" : "M"}});

    json variant_rows = json::array();
    if (ds.phased()) {
        json values = json::array();
        for (const auto& c : view.columns()) values.push_back(c.allele == 0 ? "P" : "M");
        variant_rows.push_back({{"name", paternal_maternal_row}, {"type", "CATEGORICAL"}, {"values", values}});
    }
    for (const auto& row : ds.variant_columns()) {
        json values = json::array();
        for (const auto& c : view.columns()) values.push_back(meta_value_json(row.by_index[c.variant]));
        variant_rows.push_back({{"name", row.column->name},
                                {"table", row.table},
                                {"type", to_string(row.column->type)},
                                {"values", values}});
    }
    return json_response(200, {{"version", s.chain.version()},
                               {"rows", rows},
                               {"columns", columns},
                               {"subjectColumns", subject_columns},
                               {"variantRows", variant_rows},
                               {"selection",
                                {{"rows", view.selected_row_indices()}, {"cols", view.selected_column_indices()}}}});
}

Response Service::get_log(Session& s) {
    std::shared_lock lock(s.mutex);
    json steps = json::array();
    for (std::size_t i = 0; i < s.chain.steps().size(); ++i) {
        json entry = step_to_json(s.chain.steps()[i]);
        entry["timestamp"] = s.timestamps[i];
        entry["report"] = s.chain.reports()[i].summary;
        steps.push_back(entry);
    }
    return json_response(200, {{"version", s.chain.version()}, {"steps", steps}});
}

}  // namespace hapview
