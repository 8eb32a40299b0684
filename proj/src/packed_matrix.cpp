#include "hapview/packed_matrix.hpp"

#include <algorithm>
#include <string>

#include "hapview/error.hpp"

namespace hapview {

namespace {

inline std::uint8_t nibble_at(const std::vector<std::uint8_t>& plane, std::size_t i) noexcept {
    return static_cast<std::uint8_t>((plane[i >> 1] >> ((i & 1) * 4)) & 0xF);
}

inline void set_nibble(std::vector<std::uint8_t>& plane, std::size_t i, std::uint8_t value) noexcept {
    plane[i >> 1] |= static_cast<std::uint8_t>((value & 0xF) << ((i & 1) * 4));
}

inline bool bit_at(const std::vector<std::uint8_t>& bits, std::size_t i) noexcept {
    return (bits[i >> 3] >> (i & 7)) & 1;
}

inline void set_bit(std::vector<std::uint8_t>& bits, std::size_t i) noexcept {
    bits[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
}

inline std::uint8_t pack_cell(const Genotype& g) noexcept {
    std::uint8_t p = g.paternal ? static_cast<std::uint8_t>(*g.paternal) : 0;
    std::uint8_t m = g.maternal ? static_cast<std::uint8_t>(*g.maternal) : 0;
    return static_cast<std::uint8_t>(p | (m << 2));
}

void check_range(IndexRange r, std::size_t limit, const char* axis) {
    if (r.begin > r.end || r.end > limit)
        throw Error(ErrorKind::OutOfBounds, std::string(axis) + " range [" + std::to_string(r.begin) + ", " +
                                                std::to_string(r.end) + ") outside [0, " + std::to_string(limit) + ")");
}

}  // namespace

Genotype PackedHaplotypeMatrix::decode_cell(std::size_t linear) const noexcept {
    const std::uint8_t nib = nibble_at(plane_, linear);
    Genotype g{static_cast<Base>(nib & 3), static_cast<Base>(nib >> 2)};
    if (!missing_.empty()) {
        if (bit_at(missing_, 2 * linear)) g.paternal.reset();
        if (bit_at(missing_, 2 * linear + 1)) g.maternal.reset();
    }
    return g;
}

Genotype PackedHaplotypeMatrix::get_genotype(std::size_t subject, std::size_t variant) const {
    if (subject >= n_subjects_ || variant >= n_variants_)
        throw Error(ErrorKind::OutOfBounds, "cell (" + std::to_string(subject) + ", " + std::to_string(variant) +
                                                ") outside " + std::to_string(n_subjects_) + " x " +
                                                std::to_string(n_variants_));
    return decode_cell(subject * n_variants_ + variant);
}

void PackedHaplotypeMatrix::decode_row(std::size_t subject, IndexRange cols, std::span<Genotype> out) const {
    if (subject >= n_subjects_) throw Error(ErrorKind::OutOfBounds, "subject " + std::to_string(subject));
    check_range(cols, n_variants_, "variant");
    if (out.size() < cols.size()) throw Error(ErrorKind::DimensionMismatch, "row buffer too small");
    const std::size_t base = subject * n_variants_;
    for (std::size_t v = cols.begin; v < cols.end; ++v) out[v - cols.begin] = decode_cell(base + v);
}

GenotypeGrid PackedHaplotypeMatrix::window(IndexRange rows, IndexRange cols) const {
    check_range(rows, n_subjects_, "subject");
    check_range(cols, n_variants_, "variant");
    GenotypeGrid grid(rows.size(), cols.size());
    if (grid.empty()) return grid;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t base = (rows.begin + r) * n_variants_;
        for (std::size_t c = 0; c < cols.size(); ++c) grid(r, c) = decode_cell(base + cols.begin + c);
    }
    return grid;
}

MatrixBuilder::MatrixBuilder(std::size_t n_subjects, std::size_t chunk_bytes)
    : n_subjects_(n_subjects),
      chunk_variants_(std::max<std::size_t>(1, (chunk_bytes * 2) / std::max<std::size_t>(1, n_subjects))) {}

void MatrixBuilder::append_variant(std::span<const Genotype> column) {
    if (column.size() != n_subjects_)
        throw Error(ErrorKind::DimensionMismatch, "variant column has " + std::to_string(column.size()) +
                                                      " genotypes, expected " + std::to_string(n_subjects_));
    if (chunks_.empty() || chunks_.back().n_variants == chunk_variants_) {
        Chunk chunk;
        chunk.plane.assign(PackedHaplotypeMatrix::plane_bytes_for(n_subjects_, chunk_variants_), 0);
        chunks_.push_back(std::move(chunk));
    }
    Chunk& chunk = chunks_.back();
    const std::size_t base = chunk.n_variants * n_subjects_;
    for (std::size_t s = 0; s < n_subjects_; ++s) {
        const Genotype& g = column[s];
        set_nibble(chunk.plane, base + s, pack_cell(g));
        if (!g.paternal || !g.maternal) {
            if (chunk.missing.empty()) chunk.missing.assign((2 * n_subjects_ * chunk_variants_ + 7) / 8, 0);
            if (!g.paternal) set_bit(chunk.missing, 2 * (base + s));
            if (!g.maternal) set_bit(chunk.missing, 2 * (base + s) + 1);
            any_missing_ = true;
        }
    }
    ++chunk.n_variants;
    ++n_variants_;
}

PackedHaplotypeMatrix MatrixBuilder::seal(bool phased) && {
    PackedHaplotypeMatrix m;
    m.n_subjects_ = n_subjects_;
    m.n_variants_ = n_variants_;
    m.phased_ = phased;
    m.plane_.assign(PackedHaplotypeMatrix::plane_bytes_for(n_subjects_, n_variants_), 0);
    if (any_missing_) m.missing_.assign((2 * n_subjects_ * n_variants_ + 7) / 8, 0);

    std::size_t first_variant = 0;
    for (Chunk& chunk : chunks_) {
        for (std::size_t s = 0; s < n_subjects_; ++s) {
            const std::size_t dest = s * n_variants_ + first_variant;
            for (std::size_t j = 0; j < chunk.n_variants; ++j) {
                const std::size_t src = j * n_subjects_ + s;
                set_nibble(m.plane_, dest + j, nibble_at(chunk.plane, src));
                if (!chunk.missing.empty()) {
                    if (bit_at(chunk.missing, 2 * src)) set_bit(m.missing_, 2 * (dest + j));
                    if (bit_at(chunk.missing, 2 * src + 1)) set_bit(m.missing_, 2 * (dest + j) + 1);
                }
            }
        }
        first_variant += chunk.n_variants;
        chunk = Chunk{};
    }
    chunks_.clear();
    n_variants_ = 0;
    return m;
}

}  // namespace hapview
