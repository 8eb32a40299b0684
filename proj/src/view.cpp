#include "hapview/view.hpp"

#include <algorithm>
#include <unordered_set>

#include "hapview/error.hpp"

namespace hapview {

AggregatedCell consensus_of(std::span<const std::uint32_t, 4> counts, AlleleMethod method) noexcept {
    AggregatedCell cell;
    for (std::uint32_t c : counts) cell.total += c;
    if (cell.total == 0) return cell;
    int best = -1;
    for (int b = 0; b < 4; ++b) {
        if (counts[b] == 0) continue;
        const bool better = best < 0 || (method == AlleleMethod::Maximum ? counts[b] > counts[best]
                                                                         : counts[b] < counts[best]);
        if (better) best = b;
    }
    cell.consensus = static_cast<Base>(best);
    cell.count = counts[best];
    return cell;
}

View::View(std::shared_ptr<const Dataset> dataset) : dataset_(std::move(dataset)) {
    const Dataset& ds = *dataset_;
    rows_.reserve(ds.n_subjects());
    for (std::size_t s = 0; s < ds.n_subjects(); ++s)
        rows_.push_back(ViewRow{ds.subjects()[s], {static_cast<std::uint32_t>(s)}, s, nullptr, {}});
    columns_.reserve(2 * ds.n_variants());
    for (std::size_t v = 0; v < ds.n_variants(); ++v) {
        columns_.push_back({static_cast<std::uint32_t>(v), 0});
        columns_.push_back({static_cast<std::uint32_t>(v), 1});
    }
    next_uid_ = ds.n_subjects();
}

std::vector<std::uint32_t> View::variants() const {
    std::vector<std::uint32_t> out;
    std::vector<bool> seen(dataset_->n_variants(), false);
    for (const auto& c : columns_) {
        if (seen[c.variant]) continue;
        seen[c.variant] = true;
        out.push_back(c.variant);
    }
    return out;
}

std::size_t View::n_variants() const { return variants().size(); }

bool View::has_aggregates() const noexcept {
    return std::any_of(rows_.begin(), rows_.end(), [](const ViewRow& r) { return r.aggregated(); });
}

ViewCell View::cell(const ViewRow& row, AlleleColumn column) const {
    if (row.aggregated()) {
        const AggregatedCell& a = (*row.cells)[column.uid()];
        return ViewCell{a.consensus, a.count, a.total, true};
    }
    const Genotype g = dataset_->matrix().get_genotype(row.members.front(), column.variant);
    const auto allele = g.allele(column.allele);
    return ViewCell{allele, allele ? 1u : 0u, allele ? 1u : 0u, false};
}

ViewCell View::cell(std::size_t row, std::size_t column) const {
    if (row >= rows_.size() || column >= columns_.size())
        throw Error(ErrorKind::OutOfBounds, "view cell (" + std::to_string(row) + ", " + std::to_string(column) + ")");
    return cell(rows_[row], columns_[column]);
}

const MetaValue& View::row_meta(const ViewRow& row, const ResolvedColumn& column) const {
    if (!row.aggregated()) return column.by_index[row.members.front()];
    const auto& all = dataset_->subject_columns();
    const auto index = static_cast<std::size_t>(&column - all.data());
    return row.meta[index];
}

std::vector<std::uint32_t> View::member_subjects() const {
    std::vector<std::uint32_t> out;
    for (const auto& r : rows_) out.insert(out.end(), r.members.begin(), r.members.end());
    return out;
}

std::vector<std::size_t> View::selected_row_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (selected_rows_.contains(rows_[i].uid)) out.push_back(i);
    return out;
}

std::vector<std::size_t> View::selected_column_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (selected_columns_.contains(columns_[i].uid())) out.push_back(i);
    return out;
}

void View::set_rows(std::vector<ViewRow> rows) {
    rows_ = std::move(rows);
    prune_selection();
}

void View::set_columns(std::vector<AlleleColumn> columns) {
    columns_ = std::move(columns);
    prune_selection();
}

void View::set_selection(std::set<std::uint64_t> rows, std::set<std::uint64_t> columns) {
    selected_rows_ = std::move(rows);
    selected_columns_ = std::move(columns);
    prune_selection();
}

void View::prune_selection() {
    if (!selected_rows_.empty()) {
        std::set<std::uint64_t> kept;
        for (const auto& r : rows_)
            if (selected_rows_.contains(r.uid)) kept.insert(r.uid);
        selected_rows_ = std::move(kept);
    }
    if (!selected_columns_.empty()) {
        std::set<std::uint64_t> kept;
        for (const auto& c : columns_)
            if (selected_columns_.contains(c.uid())) kept.insert(c.uid());
        selected_columns_ = std::move(kept);
    }
}

}  // namespace hapview
