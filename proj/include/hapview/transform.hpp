#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hapview/view.hpp"

namespace hapview {

enum class FrequencyMode { Above, Below };
enum class MetaMethod { Min, Max, Mean, Mode };

/// Retains variants on `chrom` with start <= position <= end.
/// Throws Error(InvalidRange) when start > end.
View filter_by_region(const View& view, const std::string& chrom, std::int64_t start, std::int64_t end);

/// Retains variants whose ID is listed. IDs unknown to the dataset are
/// ignored and counted into `unknown` when given.
View filter_by_id_list(const View& view, const std::vector<std::string>& ids, std::size_t* unknown = nullptr);

/// Retains variants whose whole ID matches the ECMAScript pattern.
/// Throws Error(InvalidPattern).
View filter_by_id_regex(const View& view, const std::string& pattern);

/// Non-reference allele fraction over the view's member subjects; keeps
/// f > threshold (Above) or f < threshold (Below). Variants without any called
/// allele are dropped in both modes. Throws Error(InvalidThreshold) outside
/// [0, 1] and Error(UnknownReference) for variants without a reference base.
View filter_by_frequency(const View& view, double threshold, FrequencyMode mode);

/// Per-variant non-reference allele count and called allele count over
/// `subjects`. Exposed for reporting and tests.
struct AlleleTally {
    std::uint32_t non_reference = 0;
    std::uint32_t called = 0;
};
AlleleTally tally_variant(const Dataset& ds, std::uint32_t variant, std::span<const std::uint32_t> subjects);

/// Stable ascending sort of rows by a subject meta column (ABSENT last).
/// Throws Error(UnknownMeta).
View sort_rows_by_meta(const View& view, const std::string& column);

/// Stable ascending sort of allele columns by a variant meta row. Besides
/// attached variant columns, "P/M" (paternal block first, phased data only)
/// and "position" (chromosome order, then position) are available.
View sort_columns_by_meta(const View& view, const std::string& row);

/// Rows grouped by a categorical subject column, or the current selection.
struct Grouping {
    std::optional<std::string> column;  ///< nullopt: aggregate the selected rows

    static Grouping by_column(std::string name) { return Grouping{std::move(name)}; }
    static Grouping by_selection() { return Grouping{}; }
};

/// Collapses each group into one AGN<k> row carrying per-column consensus
/// cells and aggregated subject meta. Throws Error(InvalidGrouping) for a
/// non-categorical column or an empty selection, Error(UnknownMeta) for an
/// unknown column.
View aggregate_rows(const View& view, const Grouping& grouping, AlleleMethod allele_method, MetaMethod meta_method);

/// Replaces the selection with the given view row / column indices.
/// Throws Error(InvalidRange) for indices outside the view.
View select(const View& view, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& columns);
View clear_selection(const View& view);

namespace step {
struct FilterRegion {
    std::string chrom;
    std::int64_t start = 0;
    std::int64_t end = 0;
};
struct FilterIds {
    std::vector<std::string> ids;
};
struct FilterRegex {
    std::string pattern;
};
struct FilterFrequency {
    double threshold = 0;
    FrequencyMode mode = FrequencyMode::Above;
};
struct SortRows {
    std::string column;
};
struct SortColumns {
    std::string row;
};
struct AggregateRows {
    Grouping grouping;
    AlleleMethod allele_method = AlleleMethod::Maximum;
    MetaMethod meta_method = MetaMethod::Mean;
};
struct Select {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> columns;
};
struct ClearSelection {};
}  // namespace step

using Step = std::variant<step::FilterRegion, step::FilterIds, step::FilterRegex, step::FilterFrequency,
                          step::SortRows, step::SortColumns, step::AggregateRows, step::Select, step::ClearSelection>;

std::string step_name(const Step& s);

struct StepReport {
    std::string summary;
    std::size_t unknown_ids = 0;
};

/// Applies one step to a view, returning the derived view.
View apply_step(const View& view, const Step& s, StepReport* report = nullptr);

/// Ordered, replayable list of steps over an immutable dataset. The current
/// view is always the replay of the steps from the base.
class ViewChain {
public:
    explicit ViewChain(std::shared_ptr<const Dataset> dataset);

    const View& view() const noexcept { return current_; }
    const std::vector<Step>& steps() const noexcept { return steps_; }
    const std::vector<StepReport>& reports() const noexcept { return reports_; }
    const Dataset& dataset() const noexcept { return current_.dataset(); }
    /// Bumped by every successful push / undo / reset.
    std::uint64_t version() const noexcept { return version_; }

    /// Strong guarantee: on error the chain is unchanged.
    const StepReport& push(Step s);
    /// Drops the last step; returns false when there is none.
    bool undo();
    void reset();

    /// Replays `steps` from the base; throws on the first failing step.
    static ViewChain replay(std::shared_ptr<const Dataset> dataset, const std::vector<Step>& steps);

private:
    std::shared_ptr<const Dataset> dataset_;
    std::vector<Step> steps_;
    std::vector<StepReport> reports_;
    std::vector<View> history_;  ///< view before each step
    View current_;
    std::uint64_t version_ = 0;
};

}  // namespace hapview
