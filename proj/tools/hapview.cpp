// hapview: headless driver for the haplotype exploration engine.
//
//   hapview info   <input> [--samples f] [--subject-meta f]... [--variant-meta f]...
//   hapview render <input> --pipeline steps.json -o out.png [--format png|svg] ...
//   hapview serve  --bind 127.0.0.1:8080 --data-root DIR
//
// Exit codes: 0 success, 1 input error, 2 pipeline error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "hapview/error.hpp"
#include "hapview/http_server.hpp"
#include "hapview/ingest.hpp"
#include "hapview/render.hpp"
#include "hapview/service.hpp"
#include "hapview/step_json.hpp"

namespace {

constexpr int exit_input_error = 1;
constexpr int exit_pipeline_error = 2;

std::atomic<bool> stop_requested{false};

extern "C" void on_signal(int) { stop_requested = true; }

struct InputOptions {
    std::string path;
    std::string format;
    std::string samples;
    std::vector<std::string> subject_meta;
    std::vector<std::string> variant_meta;

    void add_to(CLI::App& cmd) {
        cmd.add_option("input", path, "VCF or IMPUTE2 haplotype file")->required()->check(CLI::ExistingFile);
        cmd.add_option("--input-format", format, "vcf or impute2 (default: from extension)")
            ->check(CLI::IsMember({"vcf", "impute2"}, CLI::ignore_case));
        cmd.add_option("--samples", samples, "IMPUTE2 sample file")->check(CLI::ExistingFile);
        cmd.add_option("--subject-meta", subject_meta, "subject meta-information file")->check(CLI::ExistingFile);
        cmd.add_option("--variant-meta", variant_meta, "variant meta-information file")->check(CLI::ExistingFile);
    }

    hapview::DatasetSource source() const {
        hapview::DatasetSource src;
        src.path = path;
        src.format = format.empty() ? hapview::guess_format(path)
                                    : (CLI::detail::to_lower(format) == "impute2" ? hapview::InputFormat::Impute2
                                                                                  : hapview::InputFormat::Vcf);
        src.samples = samples;
        for (const auto& m : subject_meta) src.meta.push_back({m, hapview::MetaKind::Subject, {}});
        for (const auto& m : variant_meta) src.meta.push_back({m, hapview::MetaKind::Variant, {}});
        return src;
    }
};

int run_info(const InputOptions& input) {
    const hapview::Dataset ds = hapview::load_dataset(input.source());
    const hapview::ParseReport& r = ds.report();
    std::cout << "subjects: " << ds.n_subjects() << '\n'
              << "variants: " << ds.n_variants() << '\n'
              << "phased: " << (ds.phased() ? "yes" : "no") << '\n'
              << "MI columns: " << ds.mi_columns() << '\n'
              << "MI rows: " << ds.mi_rows() << '\n'
              << "records: " << r.records << '\n'
              << "skipped: " << r.skipped() << " (non-SNV " << r.skipped_non_snv << ")\n"
              << "renamed duplicate IDs: " << r.renamed_duplicate_ids << '\n'
              << "mixed phase: " << (r.mixed_phase ? "yes" : "no") << '\n'
              << "packed bytes: " << ds.matrix().memory_footprint() << '\n';
    for (const auto* tables : {&ds.subject_meta(), &ds.variant_meta()})
        for (const auto& t : *tables)
            std::cout << "meta " << t->name << " (" << hapview::to_string(t->kind) << "): " << t->columns.size()
                      << " columns, " << t->row_ids.size() << " rows, " << t->unknown_ids.size() << " unknown IDs\n";
    return 0;
}

struct RenderArgs {
    std::string pipeline;
    std::string output;
    std::string format = "png";
    std::string encoding = "nucleotide";
    std::string agg_style = "saturation";
    std::size_t cell_w = 1;
    std::size_t cell_h = 1;
    bool grid = false;
    std::string region = "full";
    std::string rows;
    std::string cols;
};

int run_render(const InputOptions& input, const RenderArgs& args) {
    std::vector<hapview::Step> steps;
    if (!args.pipeline.empty()) {
        std::ifstream in(args.pipeline);
        if (!in) {
            std::cerr << "error: cannot open pipeline " << args.pipeline << '\n';
            return exit_pipeline_error;
        }
        std::stringstream text;
        text << in.rdbuf();
        try {
            steps = hapview::parse_pipeline(text.str());
        } catch (const hapview::Error& e) {
            std::cerr << "error: " << e.detail() << '\n';
            return exit_pipeline_error;
        }
    }

    hapview::RenderOptions options;
    options.encoding = hapview::parse_encoding(args.encoding);
    options.agg_style = hapview::parse_agg_style(args.agg_style);
    options.cell_width = args.cell_w;
    options.cell_height = args.cell_h;
    options.show_grid = args.grid;
    const hapview::ImageFormat format = hapview::parse_image_format(args.format);
    hapview::ExportRegion region;
    if (CLI::detail::to_lower(args.region) == "visible")
        region = hapview::ExportRegion::visible(hapview::parse_index_range(args.rows),
                                                hapview::parse_index_range(args.cols));

    auto dataset = std::make_shared<const hapview::Dataset>(hapview::load_dataset(input.source()));
    hapview::ViewChain chain(dataset);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        try {
            chain.push(steps[i]);
        } catch (const hapview::Error& e) {
            std::cerr << "error: step " << i << " (" << hapview::step_name(steps[i]) << "): " << e.what() << '\n';
            return exit_pipeline_error;
        }
    }

    const std::string bytes = hapview::export_image(chain.view(), options, format, region);
    std::ofstream out(args.output, std::ios::binary);
    if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
        std::cerr << "error: cannot write " << args.output << '\n';
        return exit_input_error;
    }
    return 0;
}

struct ServeArgs {
    std::string bind = "127.0.0.1:8080";
    std::string data_root = ".";
    long session_ttl = 3600;
    std::size_t max_upload = std::size_t{256} << 20;
};

int run_serve(const ServeArgs& args) {
    const auto colon = args.bind.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "error: --bind expects host:port\n";
        return exit_input_error;
    }
    const std::string host = args.bind.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(args.bind.substr(colon + 1));
    } catch (const std::exception&) {
        std::cerr << "error: bad port in --bind " << args.bind << '\n';
        return exit_input_error;
    }
    if (!std::filesystem::is_directory(args.data_root)) {
        std::cerr << "error: data root " << args.data_root << " is not a directory\n";
        return exit_input_error;
    }

    hapview::ServiceConfig config;
    config.data_root = args.data_root;
    config.session_ttl = std::chrono::seconds(args.session_ttl);
    config.max_upload_bytes = args.max_upload;
    hapview::Service service(config);
    hapview::HttpServer server(service);
    if (!server.bind(host, port)) {
        std::cerr << "error: cannot bind " << args.bind << '\n';
        return exit_input_error;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.start();
    std::cout << "listening on " << host << ':' << server.port() << std::endl;
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    std::cout << "stopped" << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phased haplotype exploration: inspect, render and serve genotype matrices"};
    app.require_subcommand(1);

    InputOptions info_input;
    auto* info = app.add_subcommand("info", "Print a dataset summary and parse report");
    info_input.add_to(*info);

    InputOptions render_input;
    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "Run a step pipeline and export the view as PNG or SVG");
    render_input.add_to(*render);
    render->add_option("--pipeline", render_args.pipeline, "JSON step list (same schema as the service log)");
    render->add_option("-o,--output", render_args.output, "output image")->required();
    render->add_option("--format", render_args.format, "png or svg");
    render->add_option("--encoding", render_args.encoding, "nucleotide, reference or genotype");
    render->add_option("--agg-style", render_args.agg_style, "saturation or bar");
    render->add_option("--cell-w", render_args.cell_w, "cell width in pixels")->check(CLI::PositiveNumber);
    render->add_option("--cell-h", render_args.cell_h, "cell height in pixels")->check(CLI::PositiveNumber);
    render->add_flag("--grid", render_args.grid, "draw cell grid lines (cells >= 3 px)");
    render->add_option("--region", render_args.region, "full or visible");
    render->add_option("--rows", render_args.rows, "visible rows a..b");
    render->add_option("--cols", render_args.cols, "visible render columns c..d");

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("--bind", serve_args.bind, "host:port")->envname("HAPVIEW_BIND");
    serve->add_option("--data-root", serve_args.data_root, "directory datasets are loaded from")
        ->envname("HAPVIEW_DATA_ROOT");
    serve->add_option("--session-ttl", serve_args.session_ttl, "idle session lifetime in seconds")
        ->envname("HAPVIEW_SESSION_TTL");
    serve->add_option("--max-upload", serve_args.max_upload, "request body limit in bytes")
        ->envname("HAPVIEW_MAX_UPLOAD");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    }

    try {
        if (*info) return run_info(info_input);
        if (*render) return run_render(render_input, render_args);
        if (*serve) return run_serve(serve_args);
    } catch (const hapview::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_input_error;
}
