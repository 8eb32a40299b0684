#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hapview/dataset.hpp"

namespace hapview {

/// One displayed allele column: a variant plus which of its two alleles.
struct AlleleColumn {
    std::uint32_t variant = 0;
    std::uint8_t allele = 0;  ///< 0 paternal, 1 maternal (storage order for unphased data)

    std::uint64_t uid() const noexcept { return std::uint64_t{variant} * 2 + allele; }
    friend bool operator==(const AlleleColumn&, const AlleleColumn&) = default;
};

/// Consensus of an aggregated group at one allele column. The frequency is
/// kept as an exact ratio count / total over non-missing member alleles.
struct AggregatedCell {
    std::optional<Base> consensus;
    std::uint32_t count = 0;
    std::uint32_t total = 0;

    double frequency() const noexcept { return total == 0 ? 0.0 : static_cast<double>(count) / total; }
    friend bool operator==(const AggregatedCell&, const AggregatedCell&) = default;
};

enum class AlleleMethod { Maximum, Minimum };

/// Picks the consensus from per-base counts (indexed by Base code). Ties go to
/// the alphabetically first base; MINIMUM only considers bases that occur.
AggregatedCell consensus_of(std::span<const std::uint32_t, 4> counts, AlleleMethod method) noexcept;

struct ViewRow {
    std::string label;                   ///< subject ID, or AGN<k>
    std::vector<std::uint32_t> members;  ///< subject indices
    std::uint64_t uid = 0;
    /// Indexed by dataset allele column (2 * variant + allele); null for plain rows.
    std::shared_ptr<const std::vector<AggregatedCell>> cells;
    /// Aggregated meta values, one per dataset subject column; empty for plain rows.
    std::vector<MetaValue> meta;

    bool aggregated() const noexcept { return cells != nullptr; }
};

/// What a view shows at one (row, allele column) position.
struct ViewCell {
    std::optional<Base> base;
    std::uint32_t count = 0;
    std::uint32_t total = 0;
    bool aggregated = false;

    double frequency() const noexcept { return total == 0 ? 0.0 : static_cast<double>(count) / total; }
    friend bool operator==(const ViewCell&, const ViewCell&) = default;
};

/// Derived state of a dataset after some transforms: row order (subjects or
/// aggregated groups), retained allele columns in display order, and the
/// current selection. Views are values; transforms build new ones.
class View {
public:
    explicit View(std::shared_ptr<const Dataset> dataset);

    const Dataset& dataset() const noexcept { return *dataset_; }
    const std::shared_ptr<const Dataset>& dataset_ptr() const noexcept { return dataset_; }

    const std::vector<ViewRow>& rows() const noexcept { return rows_; }
    const std::vector<AlleleColumn>& columns() const noexcept { return columns_; }
    std::size_t n_rows() const noexcept { return rows_.size(); }
    std::size_t n_columns() const noexcept { return columns_.size(); }

    /// Distinct variants in order of first appearance among the columns.
    std::vector<std::uint32_t> variants() const;
    std::size_t n_variants() const;

    bool has_aggregates() const noexcept;

    ViewCell cell(std::size_t row, std::size_t column) const;
    ViewCell cell(const ViewRow& row, AlleleColumn column) const;

    /// Meta value of `row` for a resolved subject column of the dataset.
    const MetaValue& row_meta(const ViewRow& row, const ResolvedColumn& column) const;

    /// Union of member subjects of all rows, in row order.
    std::vector<std::uint32_t> member_subjects() const;

    bool row_selected(std::size_t row) const { return selected_rows_.contains(rows_[row].uid); }
    bool column_selected(std::size_t column) const { return selected_columns_.contains(columns_[column].uid()); }
    std::vector<std::size_t> selected_row_indices() const;
    std::vector<std::size_t> selected_column_indices() const;

    // Mutators used by the transforms. Selections are pruned to what survives.
    void set_rows(std::vector<ViewRow> rows);
    void set_columns(std::vector<AlleleColumn> columns);
    void set_selection(std::set<std::uint64_t> rows, std::set<std::uint64_t> columns);
    std::uint64_t next_uid() noexcept { return next_uid_++; }

private:
    void prune_selection();

    std::shared_ptr<const Dataset> dataset_;
    std::vector<ViewRow> rows_;
    std::vector<AlleleColumn> columns_;
    std::set<std::uint64_t> selected_rows_;
    std::set<std::uint64_t> selected_columns_;
    std::uint64_t next_uid_ = 0;
};

}  // namespace hapview
