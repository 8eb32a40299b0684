#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hapview/view.hpp"

namespace hapview {

/// Binary window of a derived view, all integers little-endian:
///
///   offset  size  field
///        0     4  magic "IPHT"
///        4     1  version (1)
///        5     1  flags: bit0 frequencies present, bit1 phased allele pairs
///        6     4  rowStart (u32)
///       10     4  colStart (u32, allele-column index)
///       14     1  nRows (u8)
///       15     1  nCols (u8)
///       16     n  codes, n = nRows * nCols, row-major: 0..3 = A,C,G,T, 4 = missing
///     16+n     n  frequencies round(f * 255), only when bit0 is set
struct Tile {
    static constexpr std::size_t header_size = 16;
    static constexpr std::uint8_t version = 1;
    static constexpr std::uint8_t flag_frequencies = 0x01;
    static constexpr std::uint8_t flag_phased = 0x02;
    static constexpr std::size_t max_extent = 255;

    std::uint8_t flags = 0;
    std::uint32_t row_start = 0;
    std::uint32_t col_start = 0;
    std::uint8_t n_rows = 0;
    std::uint8_t n_cols = 0;
    std::vector<std::uint8_t> codes;
    std::vector<std::uint8_t> frequencies;

    bool has_frequencies() const noexcept { return flags & flag_frequencies; }
    bool phased() const noexcept { return flags & flag_phased; }
    std::size_t encoded_size() const noexcept {
        return header_size + std::size_t{n_rows} * n_cols * (has_frequencies() ? 2 : 1);
    }

    friend bool operator==(const Tile&, const Tile&) = default;
};

/// Throws Error(InvalidFormat) when the fields are inconsistent.
std::string encode_tile(const Tile& tile);

/// Validates everything (size, magic, version, reserved flag bits, code
/// range); throws Error(InvalidFormat) on any violation.
Tile decode_tile(std::span<const std::uint8_t> bytes);

/// Extracts view rows x allele columns. Throws Error(OutOfBounds) for ranges
/// outside the view or larger than Tile::max_extent.
Tile make_tile(const View& view, IndexRange rows, IndexRange columns);

/// round(count / total * 255); zero when total is zero.
std::uint8_t quantize_frequency(std::uint32_t count, std::uint32_t total) noexcept;

}  // namespace hapview
