#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hapview/color.hpp"
#include "hapview/view.hpp"

namespace hapview {

/// Packed 8-bit RGB image, row-major, no padding.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    Raster() = default;
    Raster(std::size_t w, std::size_t h, Rgb fill = {255, 255, 255});

    Rgb at(std::size_t x, std::size_t y) const noexcept {
        const std::uint8_t* p = &pixels[3 * (y * width + x)];
        return {p[0], p[1], p[2]};
    }
    void set(std::size_t x, std::size_t y, Rgb c) noexcept {
        std::uint8_t* p = &pixels[3 * (y * width + x)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }
    void fill_rect(std::size_t x, std::size_t y, std::size_t w, std::size_t h, Rgb c) noexcept;

    friend bool operator==(const Raster&, const Raster&) = default;
};

struct RenderOptions {
    Encoding encoding = Encoding::Nucleotide;
    AggStyle agg_style = AggStyle::Saturation;
    std::size_t cell_width = 1;
    std::size_t cell_height = 1;
    bool show_grid = false;
    ColorScheme colors;
};

/// Background behind aggregation bars.
inline constexpr Rgb bar_background{255, 255, 255};
inline constexpr Rgb grid_color{204, 204, 204};

/// Rendered columns of a view: allele columns, or variants under GENOTYPE.
std::size_t render_columns(const View& view, Encoding encoding);

/// How one rendered cell is painted; shared by the raster and SVG paths.
struct CellPaint {
    EncodedCell encoded;
    Rgb fill;                           ///< whole-cell fill
    std::optional<Rgb> bar;             ///< bar colour (BAR style, aggregated cells)
    std::size_t bar_height = 0;         ///< pixels, anchored at the cell bottom
    bool selected = false;
};

/// Paint plan for rendered cell (row, column); column indexes render_columns().
class CellPainter {
public:
    CellPainter(const View& view, const RenderOptions& options);

    std::size_t rows() const noexcept { return view_.n_rows(); }
    std::size_t columns() const noexcept { return columns_.size(); }
    CellPaint paint(std::size_t row, std::size_t column) const;
    EncodedCell encode(std::size_t row, std::size_t column) const;
    bool grid() const noexcept;

private:
    struct Column {
        AlleleColumn first;
        std::optional<AlleleColumn> second;  ///< maternal allele under GENOTYPE
        bool selected = false;
    };

    const View& view_;
    const RenderOptions& options_;
    std::vector<Column> columns_;
    std::vector<bool> selected_rows_;
};

/// Rasterizes rows x columns (render-column indices). Throws Error(OutOfBounds)
/// for ranges outside the view and Error(EmptyRender) for an empty window.
Raster render_view(const View& view, const RenderOptions& options, IndexRange rows, IndexRange columns);

/// Zoomed-out image no larger than max_width x max_height; each pixel takes the
/// modal colour role of the cells it covers (ties to the lower role).
Raster render_overview(const View& view, const RenderOptions& options, std::size_t max_width,
                       std::size_t max_height);

enum class ImageFormat { Png, Svg };
ImageFormat parse_image_format(std::string_view token);  ///< throws Error(InvalidFormat)

struct ExportRegion {
    bool full = true;
    IndexRange rows;
    IndexRange columns;

    static ExportRegion whole() { return {}; }
    static ExportRegion visible(IndexRange rows, IndexRange columns) { return {false, rows, columns}; }
};

std::string export_image(const View& view, const RenderOptions& options, ImageFormat format,
                         const ExportRegion& region);

/// 8-bit RGB PNG, filter type 0, zlib level 6.
std::string encode_png(const Raster& raster);

/// SVG 1.1 document: one <rect> per cell plus one per aggregation bar.
std::string render_svg(const View& view, const RenderOptions& options, IndexRange rows, IndexRange columns);

}  // namespace hapview
