#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hapview/allele.hpp"

namespace hapview {

/// Half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool empty() const noexcept { return end <= begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Dense, row-major grid of decoded genotypes.
class GenotypeGrid {
public:
    GenotypeGrid() = default;
    GenotypeGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return cells_.empty(); }

    Genotype& operator()(std::size_t r, std::size_t c) noexcept { return cells_[r * cols_ + c]; }
    const Genotype& operator()(std::size_t r, std::size_t c) const noexcept { return cells_[r * cols_ + c]; }

    std::span<const Genotype> row(std::size_t r) const noexcept { return {cells_.data() + r * cols_, cols_}; }

    friend bool operator==(const GenotypeGrid&, const GenotypeGrid&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Genotype> cells_;
};

/// Immutable diploid genotype store, four bits per (subject, variant) cell.
///
/// Cells are laid out row-major by subject: cell (s, v) has linear index
/// s * n_variants + v and occupies bits [4i, 4i + 4) of the plane, paternal
/// code in the low two bits, maternal code in the high two. Absent alleles are
/// flagged in a separate bitset (bit 2i paternal, 2i + 1 maternal) that only
/// exists when at least one allele is absent; their plane bits stay zero.
class PackedHaplotypeMatrix {
public:
    PackedHaplotypeMatrix() = default;

    std::size_t n_subjects() const noexcept { return n_subjects_; }
    std::size_t n_variants() const noexcept { return n_variants_; }
    bool phased() const noexcept { return phased_; }
    bool has_missing() const noexcept { return !missing_.empty(); }

    /// Throws Error(OutOfBounds).
    Genotype get_genotype(std::size_t subject, std::size_t variant) const;

    /// Decodes the rectangle rows x cols. Throws Error(OutOfBounds) for
    /// inverted or out-of-range bounds; empty ranges give an empty grid.
    GenotypeGrid window(IndexRange rows, IndexRange cols) const;

    /// Decodes variants [cols.begin, cols.end) of one subject into `out`.
    void decode_row(std::size_t subject, IndexRange cols, std::span<Genotype> out) const;

    std::size_t plane_bytes() const noexcept { return plane_.size(); }
    std::size_t missing_bytes() const noexcept { return missing_.size(); }
    std::size_t memory_footprint() const noexcept { return plane_.size() + missing_.size(); }

    /// Plane size for a given shape: ceil(subjects * variants / 2).
    static constexpr std::size_t plane_bytes_for(std::size_t subjects, std::size_t variants) noexcept {
        return (subjects * variants + 1) / 2;
    }

private:
    friend class MatrixBuilder;

    Genotype decode_cell(std::size_t linear) const noexcept;

    std::size_t n_subjects_ = 0;
    std::size_t n_variants_ = 0;
    bool phased_ = false;
    std::vector<std::uint8_t> plane_;
    std::vector<std::uint8_t> missing_;
};

/// Accumulates variant columns (one genotype per subject) in arrival order and
/// seals them into a PackedHaplotypeMatrix. Columns are buffered in packed
/// variant-major chunks and transposed chunk by chunk at seal time, so peak
/// memory stays at one packed matrix plus one chunk.
class MatrixBuilder {
public:
    explicit MatrixBuilder(std::size_t n_subjects, std::size_t chunk_bytes = std::size_t{4} << 20);

    std::size_t n_subjects() const noexcept { return n_subjects_; }
    std::size_t n_variants() const noexcept { return n_variants_; }

    /// Throws Error(DimensionMismatch) if column.size() != n_subjects().
    void append_variant(std::span<const Genotype> column);

    PackedHaplotypeMatrix seal(bool phased) &&;

private:
    struct Chunk {
        std::size_t n_variants = 0;
        std::vector<std::uint8_t> plane;
        std::vector<std::uint8_t> missing;
    };

    std::size_t n_subjects_;
    std::size_t chunk_variants_;
    std::size_t n_variants_ = 0;
    bool any_missing_ = false;
    std::vector<Chunk> chunks_;
};

}  // namespace hapview
