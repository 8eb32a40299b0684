#include <sstream>

#include "hapview/error.hpp"
#include "hapview/render.hpp"

namespace hapview {

std::string render_svg(const View& view, const RenderOptions& options, IndexRange rows, IndexRange columns) {
    CellPainter painter(view, options);
    if (rows.begin > rows.end || rows.end > painter.rows() || columns.begin > columns.end ||
        columns.end > painter.columns())
        throw Error(ErrorKind::OutOfBounds, "export window outside view");
    if (rows.empty() || columns.empty()) throw Error(ErrorKind::EmptyRender, "export window has no cells");

    const std::size_t cw = options.cell_width;
    const std::size_t ch = options.cell_height;
    const std::size_t width = columns.size() * cw;
    const std::size_t height = rows.size() * ch;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n";

    std::ostringstream selection;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const CellPaint p = painter.paint(rows.begin + r, columns.begin + c);
            const std::size_t x = c * cw;
            const std::size_t y = r * ch;
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\""
                << p.fill.to_hex() << "\"/>\n";
            if (p.bar)
                svg << "<rect class=\"bar\" x=\"" << x << "\" y=\"" << y + ch - p.bar_height << "\" width=\"" << cw
                    << "\" height=\"" << p.bar_height << "\" fill=\"" << p.bar->to_hex() << "\"/>\n";
            if (p.selected)
                selection << "M" << x << ".5 " << y << ".5h" << cw - 1 << "v" << ch - 1 << "h-" << cw - 1 << "z";
        }
    }
    if (painter.grid()) {
        std::ostringstream grid;
        for (std::size_t c = 1; c <= columns.size(); ++c) grid << "M" << c * cw - 1 << ".5 0v" << height;
        for (std::size_t r = 1; r <= rows.size(); ++r) grid << "M0 " << r * ch - 1 << ".5h" << width;
        svg << "<path class=\"grid\" d=\"" << grid.str() << "\" fill=\"none\" stroke=\"" << grid_color.to_hex()
            << "\" stroke-width=\"1\"/>\n";
    }
    if (const std::string outline = selection.str(); !outline.empty())
        svg << "<path class=\"selection\" d=\"" << outline << "\" fill=\"none\" stroke=\""
            << options.colors.selection.to_hex() << "\" stroke-width=\"1\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hapview
