#include "hapview/render.hpp"

#include <algorithm>
#include <array>

#include "hapview/error.hpp"
#include "text_util.hpp"

namespace hapview {

Raster::Raster(std::size_t w, std::size_t h, Rgb fill) : width(w), height(h), pixels(3 * w * h) {
    for (std::size_t i = 0; i < w * h; ++i) {
        pixels[3 * i] = fill.r;
        pixels[3 * i + 1] = fill.g;
        pixels[3 * i + 2] = fill.b;
    }
}

void Raster::fill_rect(std::size_t x, std::size_t y, std::size_t w, std::size_t h, Rgb c) noexcept {
    for (std::size_t yy = y; yy < y + h; ++yy)
        for (std::size_t xx = x; xx < x + w; ++xx) set(xx, yy, c);
}

std::size_t render_columns(const View& view, Encoding encoding) {
    return encoding == Encoding::Genotype ? view.n_variants() : view.n_columns();
}

CellPainter::CellPainter(const View& view, const RenderOptions& options) : view_(view), options_(options) {
    if (options.cell_width == 0 || options.cell_height == 0)
        throw Error(ErrorKind::InvalidRange, "cell sizes must be at least 1 pixel");
    const auto& cols = view.columns();
    if (options.encoding == Encoding::Genotype) {
        std::vector<std::size_t> slot(view.dataset().n_variants(), SIZE_MAX);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const AlleleColumn c = cols[i];
            std::size_t& s = slot[c.variant];
            if (s == SIZE_MAX) {
                s = columns_.size();
                columns_.push_back(Column{AlleleColumn{c.variant, 0}, AlleleColumn{c.variant, 1}, false});
            }
            columns_[s].selected = columns_[s].selected || view.column_selected(i);
        }
    } else {
        columns_.reserve(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i)
            columns_.push_back(Column{cols[i], std::nullopt, view.column_selected(i)});
    }
    selected_rows_.resize(view.n_rows());
    for (std::size_t r = 0; r < view.n_rows(); ++r) selected_rows_[r] = view.row_selected(r);
}

bool CellPainter::grid() const noexcept {
    return options_.show_grid && options_.cell_width >= 3 && options_.cell_height >= 3;
}

EncodedCell CellPainter::encode(std::size_t row, std::size_t column) const {
    const ViewRow& r = view_.rows()[row];
    const Column& c = columns_[column];
    const auto& reference = view_.dataset().variants()[c.first.variant].reference;
    if (c.second) return encode_genotype(view_.cell(r, c.first), view_.cell(r, *c.second), reference);
    return encode_allele(options_.encoding, view_.cell(r, c.first), reference);
}

CellPaint CellPainter::paint(std::size_t row, std::size_t column) const {
    CellPaint p;
    p.encoded = encode(row, column);
    const Rgb color = options_.colors.color(p.encoded.role);
    if (!p.encoded.aggregated) {
        p.fill = color;
    } else if (options_.agg_style == AggStyle::Saturation) {
        p.fill = saturate(color, p.encoded.num, p.encoded.den);
    } else {
        p.fill = bar_background;
        p.bar = color;
        p.bar_height = static_cast<std::size_t>(
            scaled_round(std::min(p.encoded.num, p.encoded.den), p.encoded.den, options_.cell_height));
    }
    p.selected = selected_rows_[row] || columns_[column].selected;
    return p;
}

namespace {

void check_window(const CellPainter& painter, IndexRange rows, IndexRange columns) {
    if (rows.begin > rows.end || rows.end > painter.rows() || columns.begin > columns.end ||
        columns.end > painter.columns())
        throw Error(ErrorKind::OutOfBounds, "render window rows [" + std::to_string(rows.begin) + ", " +
                                                std::to_string(rows.end) + ") cols [" + std::to_string(columns.begin) +
                                                ", " + std::to_string(columns.end) + ") outside view " +
                                                std::to_string(painter.rows()) + " x " +
                                                std::to_string(painter.columns()));
    if (rows.empty() || columns.empty()) throw Error(ErrorKind::EmptyRender, "render window has no cells");
}

}  // namespace

Raster render_view(const View& view, const RenderOptions& options, IndexRange rows, IndexRange columns) {
    CellPainter painter(view, options);
    check_window(painter, rows, columns);
    const std::size_t cw = options.cell_width;
    const std::size_t ch = options.cell_height;
    Raster image(columns.size() * cw, rows.size() * ch);
    const bool grid = painter.grid();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const CellPaint p = painter.paint(rows.begin + r, columns.begin + c);
            const std::size_t x = c * cw;
            const std::size_t y = r * ch;
            image.fill_rect(x, y, cw, ch, p.fill);
            if (p.bar) image.fill_rect(x, y + ch - p.bar_height, cw, p.bar_height, *p.bar);
            if (grid) {
                image.fill_rect(x + cw - 1, y, 1, ch, grid_color);
                image.fill_rect(x, y + ch - 1, cw, 1, grid_color);
            }
            if (p.selected) {
                const Rgb s = options.colors.selection;
                image.fill_rect(x, y, cw, 1, s);
                image.fill_rect(x, y + ch - 1, cw, 1, s);
                image.fill_rect(x, y, 1, ch, s);
                image.fill_rect(x + cw - 1, y, 1, ch, s);
            }
        }
    }
    return image;
}

Raster render_overview(const View& view, const RenderOptions& options, std::size_t max_width,
                       std::size_t max_height) {
    if (max_width == 0 || max_height == 0) throw Error(ErrorKind::InvalidRange, "overview size must be positive");
    CellPainter painter(view, options);
    const std::size_t rows = painter.rows();
    const std::size_t cols = painter.columns();
    if (rows == 0 || cols == 0) throw Error(ErrorKind::EmptyRender, "view has no cells");

    const std::size_t bucket =
        std::max({std::size_t{1}, (rows + max_height - 1) / max_height, (cols + max_width - 1) / max_width});
    const std::size_t w = (cols + bucket - 1) / bucket;
    const std::size_t h = (rows + bucket - 1) / bucket;

    std::vector<std::array<std::uint32_t, color_role_count>> counts(w * h);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            ++counts[(r / bucket) * w + c / bucket][static_cast<std::size_t>(painter.encode(r, c).role)];

    Raster image(w, h);
    for (std::size_t i = 0; i < w * h; ++i) {
        const auto& k = counts[i];
        const auto best = static_cast<std::size_t>(std::max_element(k.begin(), k.end()) - k.begin());
        image.set(i % w, i / w, options.colors.color(static_cast<ColorRole>(best)));
    }
    return image;
}

ImageFormat parse_image_format(std::string_view token) {
    const std::string t = detail::upper(token);
    if (t == "PNG") return ImageFormat::Png;
    if (t == "SVG") return ImageFormat::Svg;
    throw Error(ErrorKind::InvalidFormat, "unsupported image format '" + std::string(token) + "'");
}

std::string export_image(const View& view, const RenderOptions& options, ImageFormat format,
                         const ExportRegion& region) {
    IndexRange rows = region.rows;
    IndexRange columns = region.columns;
    if (region.full) {
        rows = {0, view.n_rows()};
        columns = {0, render_columns(view, options.encoding)};
    }
    if (format == ImageFormat::Svg) return render_svg(view, options, rows, columns);
    return encode_png(render_view(view, options, rows, columns));
}

}  // namespace hapview
