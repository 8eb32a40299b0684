#include "hapview/tile.hpp"

#include "hapview/color.hpp"
#include "hapview/error.hpp"

namespace hapview {

namespace {

void put_u32le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32le(std::span<const std::uint8_t> b, std::size_t at) {
    return std::uint32_t{b[at]} | std::uint32_t{b[at + 1]} << 8 | std::uint32_t{b[at + 2]} << 16 |
           std::uint32_t{b[at + 3]} << 24;
}

}  // namespace

std::uint8_t quantize_frequency(std::uint32_t count, std::uint32_t total) noexcept {
    if (total == 0) return 0;
    return static_cast<std::uint8_t>(scaled_round(std::min(count, total), total, 255));
}

std::string encode_tile(const Tile& tile) {
    const std::size_t cells = std::size_t{tile.n_rows} * tile.n_cols;
    if (tile.codes.size() != cells) throw Error(ErrorKind::InvalidFormat, "tile code count does not match shape");
    if (tile.has_frequencies() ? tile.frequencies.size() != cells : !tile.frequencies.empty())
        throw Error(ErrorKind::InvalidFormat, "tile frequency block does not match flags");
    if (tile.flags & ~(Tile::flag_frequencies | Tile::flag_phased))
        throw Error(ErrorKind::InvalidFormat, "reserved tile flag bits set");
    std::string out;
    out.reserve(tile.encoded_size());
    out += "IPHT";
    out.push_back(static_cast<char>(Tile::version));
    out.push_back(static_cast<char>(tile.flags));
    put_u32le(out, tile.row_start);
    put_u32le(out, tile.col_start);
    out.push_back(static_cast<char>(tile.n_rows));
    out.push_back(static_cast<char>(tile.n_cols));
    for (std::uint8_t code : tile.codes) {
        if (code > missing_code) throw Error(ErrorKind::InvalidFormat, "tile code above 4");
        out.push_back(static_cast<char>(code));
    }
    out.append(reinterpret_cast<const char*>(tile.frequencies.data()), tile.frequencies.size());
    return out;
}

Tile decode_tile(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < Tile::header_size) throw Error(ErrorKind::InvalidFormat, "tile shorter than its header");
    if (bytes[0] != 'I' || bytes[1] != 'P' || bytes[2] != 'H' || bytes[3] != 'T')
        throw Error(ErrorKind::InvalidFormat, "bad tile magic");
    if (bytes[4] != Tile::version)
        throw Error(ErrorKind::InvalidFormat, "unsupported tile version " + std::to_string(bytes[4]));
    Tile tile;
    tile.flags = bytes[5];
    if (tile.flags & ~(Tile::flag_frequencies | Tile::flag_phased))
        throw Error(ErrorKind::InvalidFormat, "reserved tile flag bits set");
    tile.row_start = get_u32le(bytes, 6);
    tile.col_start = get_u32le(bytes, 10);
    tile.n_rows = bytes[14];
    tile.n_cols = bytes[15];
    if (bytes.size() != tile.encoded_size())
        throw Error(ErrorKind::InvalidFormat, "tile is " + std::to_string(bytes.size()) + " bytes, header implies " +
                                                  std::to_string(tile.encoded_size()));
    const std::size_t cells = std::size_t{tile.n_rows} * tile.n_cols;
    tile.codes.assign(bytes.begin() + Tile::header_size, bytes.begin() + Tile::header_size + cells);
    for (std::uint8_t code : tile.codes)
        if (code > missing_code) throw Error(ErrorKind::InvalidFormat, "tile code " + std::to_string(code));
    if (tile.has_frequencies()) tile.frequencies.assign(bytes.begin() + Tile::header_size + cells, bytes.end());
    return tile;
}

Tile make_tile(const View& view, IndexRange rows, IndexRange columns) {
    if (rows.begin > rows.end || rows.end > view.n_rows() || columns.begin > columns.end ||
        columns.end > view.n_columns())
        throw Error(ErrorKind::OutOfBounds, "tile window outside view " + std::to_string(view.n_rows()) + " x " +
                                                std::to_string(view.n_columns()));
    if (rows.size() > Tile::max_extent || columns.size() > Tile::max_extent)
        throw Error(ErrorKind::OutOfBounds, "tile extent above " + std::to_string(Tile::max_extent));
    Tile tile;
    const bool aggregated = view.has_aggregates();
    tile.flags = static_cast<std::uint8_t>((aggregated ? Tile::flag_frequencies : 0) |
                                           (view.dataset().phased() ? Tile::flag_phased : 0));
    tile.row_start = static_cast<std::uint32_t>(rows.begin);
    tile.col_start = static_cast<std::uint32_t>(columns.begin);
    tile.n_rows = static_cast<std::uint8_t>(rows.size());
    tile.n_cols = static_cast<std::uint8_t>(columns.size());
    tile.codes.reserve(rows.size() * columns.size());
    if (aggregated) tile.frequencies.reserve(rows.size() * columns.size());
    for (std::size_t r = rows.begin; r < rows.end; ++r) {
        for (std::size_t c = columns.begin; c < columns.end; ++c) {
            const ViewCell cell = view.cell(r, c);
            tile.codes.push_back(code_of(cell.base));
            if (aggregated) tile.frequencies.push_back(quantize_frequency(cell.count, cell.total));
        }
    }
    return tile;
}

}  // namespace hapview
