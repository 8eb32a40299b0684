#include "hapview/transform.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <regex>
#include <unordered_set>

#include "hapview/error.hpp"

namespace hapview {

namespace {

template <class Keep>
View retain_variants(const View& view, Keep keep) {
    const std::size_t n = view.dataset().n_variants();
    std::vector<signed char> verdict(n, -1);
    std::vector<AlleleColumn> kept;
    kept.reserve(view.n_columns());
    for (const AlleleColumn& c : view.columns()) {
        signed char& v = verdict[c.variant];
        if (v < 0) v = keep(c.variant) ? 1 : 0;
        if (v) kept.push_back(c);
    }
    View out = view;
    out.set_columns(std::move(kept));
    return out;
}

/// Ascending, ABSENT last. Values of one column always share a type.
int compare_meta(const MetaValue& a, const MetaValue& b) {
    const bool absent_a = is_absent(a);
    const bool absent_b = is_absent(b);
    if (absent_a || absent_b) return absent_a == absent_b ? 0 : (absent_a ? 1 : -1);
    if (const auto* sa = std::get_if<std::string>(&a)) {
        const auto& sb = std::get<std::string>(b);
        return sa->compare(sb) < 0 ? -1 : (*sa == sb ? 0 : 1);
    }
    const double da = std::get<double>(a);
    const double db = std::get<double>(b);
    return da < db ? -1 : (da > db ? 1 : 0);
}

template <class T>
std::optional<T> mode_of(const std::vector<T>& values) {
    if (values.empty()) return std::nullopt;
    std::map<T, std::size_t> counts;
    for (const auto& v : values) ++counts[v];
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

MetaValue aggregate_meta(const ResolvedColumn& column, const std::vector<std::uint32_t>& members, MetaMethod method) {
    if (column.column->type == MetaType::Categorical) {
        std::vector<std::string> values;
        for (auto s : members)
            if (const auto* v = std::get_if<std::string>(&column.by_index[s])) values.push_back(*v);
        if (auto m = mode_of(values)) return *m;
        return {};
    }
    std::vector<double> values;
    for (auto s : members)
        if (const auto* v = std::get_if<double>(&column.by_index[s])) values.push_back(*v);
    if (values.empty()) return {};
    switch (method) {
        case MetaMethod::Min: return *std::min_element(values.begin(), values.end());
        case MetaMethod::Max: return *std::max_element(values.begin(), values.end());
        case MetaMethod::Mean: return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        case MetaMethod::Mode: return *mode_of(values);
    }
    return {};
}

ViewRow make_group_row(const View& view, const std::vector<const ViewRow*>& group,
                       const std::vector<std::uint32_t>& variants, AlleleMethod allele_method, MetaMethod meta_method,
                       std::uint64_t uid) {
    const Dataset& ds = view.dataset();
    ViewRow row;
    for (const ViewRow* r : group) row.members.insert(row.members.end(), r->members.begin(), r->members.end());
    row.label = "AGN" + std::to_string(row.members.size());
    row.uid = uid;

    auto cells = std::make_shared<std::vector<AggregatedCell>>(2 * ds.n_variants());
    for (std::uint32_t v : variants) {
        std::array<std::uint32_t, 4> paternal{};
        std::array<std::uint32_t, 4> maternal{};
        for (std::uint32_t s : row.members) {
            const Genotype g = ds.matrix().get_genotype(s, v);
            if (g.paternal) ++paternal[static_cast<int>(*g.paternal)];
            if (g.maternal) ++maternal[static_cast<int>(*g.maternal)];
        }
        (*cells)[2 * std::size_t{v}] = consensus_of(paternal, allele_method);
        (*cells)[2 * std::size_t{v} + 1] = consensus_of(maternal, allele_method);
    }
    row.cells = std::move(cells);

    for (const auto& column : ds.subject_columns()) row.meta.push_back(aggregate_meta(column, row.members, meta_method));
    return row;
}

}  // namespace

View filter_by_region(const View& view, const std::string& chrom, std::int64_t start, std::int64_t end) {
    if (start > end)
        throw Error(ErrorKind::InvalidRange, "region start " + std::to_string(start) + " > end " + std::to_string(end));
    const Dataset& ds = view.dataset();
    return retain_variants(view, [&](std::uint32_t v) {
        const auto& info = ds.variants()[v];
        return ds.chromosomes()[info.chromosome] == chrom && info.position >= start && info.position <= end;
    });
}

View filter_by_id_list(const View& view, const std::vector<std::string>& ids, std::size_t* unknown) {
    const Dataset& ds = view.dataset();
    std::vector<bool> listed(ds.n_variants(), false);
    std::size_t missing = 0;
    std::unordered_set<std::string> distinct(ids.begin(), ids.end());
    for (const auto& id : distinct) {
        if (auto index = ds.variant_index(id))
            listed[*index] = true;
        else
            ++missing;
    }
    if (unknown) *unknown = missing;
    return retain_variants(view, [&](std::uint32_t v) { return listed[v]; });
}

View filter_by_id_regex(const View& view, const std::string& pattern) {
    std::regex re;
    try {
        re = std::regex(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw Error(ErrorKind::InvalidPattern, "'" + pattern + "': " + e.what());
    }
    const Dataset& ds = view.dataset();
    return retain_variants(view, [&](std::uint32_t v) { return std::regex_match(ds.variants()[v].id, re); });
}

AlleleTally tally_variant(const Dataset& ds, std::uint32_t variant, std::span<const std::uint32_t> subjects) {
    const auto& info = ds.variants()[variant];
    if (!info.reference) throw Error(ErrorKind::UnknownReference, "variant " + info.id + " has no reference base");
    AlleleTally t;
    for (std::uint32_t s : subjects) {
        const Genotype g = ds.matrix().get_genotype(s, variant);
        for (const auto& allele : {g.paternal, g.maternal}) {
            if (!allele) continue;
            ++t.called;
            if (*allele != *info.reference) ++t.non_reference;
        }
    }
    return t;
}

View filter_by_frequency(const View& view, double threshold, FrequencyMode mode) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw Error(ErrorKind::InvalidThreshold, "threshold " + std::to_string(threshold) + " outside [0, 1]");
    const Dataset& ds = view.dataset();
    const std::vector<std::uint32_t> subjects = view.member_subjects();
    for (std::uint32_t v : view.variants())
        if (!ds.variants()[v].reference)
            throw Error(ErrorKind::UnknownReference, "variant " + ds.variants()[v].id + " has no reference base");
    return retain_variants(view, [&](std::uint32_t v) {
        const AlleleTally t = tally_variant(ds, v, subjects);
        if (t.called == 0) return false;
        const double f = static_cast<double>(t.non_reference) / t.called;
        return mode == FrequencyMode::Above ? f > threshold : f < threshold;
    });
}

View sort_rows_by_meta(const View& view, const std::string& column) {
    const ResolvedColumn* rc = view.dataset().subject_column(column);
    if (!rc) throw Error(ErrorKind::UnknownMeta, "no subject meta column '" + column + "'");
    std::vector<ViewRow> rows = view.rows();
    std::stable_sort(rows.begin(), rows.end(), [&](const ViewRow& a, const ViewRow& b) {
        return compare_meta(view.row_meta(a, *rc), view.row_meta(b, *rc)) < 0;
    });
    View out = view;
    out.set_rows(std::move(rows));
    return out;
}

View sort_columns_by_meta(const View& view, const std::string& row) {
    const Dataset& ds = view.dataset();
    std::vector<AlleleColumn> columns = view.columns();
    if (const ResolvedColumn* rc = ds.variant_column(row)) {
        std::stable_sort(columns.begin(), columns.end(), [&](const AlleleColumn& a, const AlleleColumn& b) {
            return compare_meta(rc->by_index[a.variant], rc->by_index[b.variant]) < 0;
        });
    } else if (row == paternal_maternal_row && ds.phased()) {
        std::stable_sort(columns.begin(), columns.end(),
                         [](const AlleleColumn& a, const AlleleColumn& b) { return a.allele < b.allele; });
    } else if (row == "position") {
        std::stable_sort(columns.begin(), columns.end(), [&](const AlleleColumn& a, const AlleleColumn& b) {
            const auto& va = ds.variants()[a.variant];
            const auto& vb = ds.variants()[b.variant];
            return std::pair(va.chromosome, va.position) < std::pair(vb.chromosome, vb.position);
        });
    } else {
        throw Error(ErrorKind::UnknownMeta, "no variant meta row '" + row + "'");
    }
    View out = view;
    out.set_columns(std::move(columns));
    return out;
}

View aggregate_rows(const View& view, const Grouping& grouping, AlleleMethod allele_method, MetaMethod meta_method) {
    View out = view;
    const std::vector<std::uint32_t> variants = view.variants();
    std::vector<ViewRow> rows;

    if (grouping.column) {
        const ResolvedColumn* rc = view.dataset().subject_column(*grouping.column);
        if (!rc) throw Error(ErrorKind::UnknownMeta, "no subject meta column '" + *grouping.column + "'");
        if (rc->column->type != MetaType::Categorical)
            throw Error(ErrorKind::InvalidGrouping, "column '" + *grouping.column + "' is not categorical");

        // Groups in order of first appearance; ABSENT rows form their own group.
        std::vector<std::vector<const ViewRow*>> groups;
        std::map<std::string, std::size_t> index;
        std::optional<std::size_t> absent_group;
        for (const ViewRow& r : view.rows()) {
            const MetaValue& value = view.row_meta(r, *rc);
            std::size_t g;
            if (const auto* category = std::get_if<std::string>(&value)) {
                auto [it, inserted] = index.try_emplace(*category, groups.size());
                if (inserted) groups.emplace_back();
                g = it->second;
            } else {
                if (!absent_group) {
                    absent_group = groups.size();
                    groups.emplace_back();
                }
                g = *absent_group;
            }
            groups[g].push_back(&r);
        }
        for (const auto& group : groups)
            rows.push_back(make_group_row(view, group, variants, allele_method, meta_method, out.next_uid()));
    } else {
        const std::vector<std::size_t> selected = view.selected_row_indices();
        if (selected.empty()) throw Error(ErrorKind::InvalidGrouping, "no rows selected");
        std::vector<const ViewRow*> group;
        for (std::size_t i : selected) group.push_back(&view.rows()[i]);
        for (std::size_t i = 0; i < view.n_rows(); ++i) {
            if (i == selected.front())
                rows.push_back(make_group_row(view, group, variants, allele_method, meta_method, out.next_uid()));
            else if (!view.row_selected(i))
                rows.push_back(view.rows()[i]);
        }
    }
    out.set_rows(std::move(rows));
    return out;
}

View select(const View& view, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& columns) {
    std::set<std::uint64_t> row_ids;
    std::set<std::uint64_t> column_ids;
    for (std::size_t r : rows) {
        if (r >= view.n_rows())
            throw Error(ErrorKind::InvalidRange, "row " + std::to_string(r) + " outside view of " +
                                                     std::to_string(view.n_rows()) + " rows");
        row_ids.insert(view.rows()[r].uid);
    }
    for (std::size_t c : columns) {
        if (c >= view.n_columns())
            throw Error(ErrorKind::InvalidRange, "column " + std::to_string(c) + " outside view of " +
                                                     std::to_string(view.n_columns()) + " columns");
        column_ids.insert(view.columns()[c].uid());
    }
    View out = view;
    out.set_selection(std::move(row_ids), std::move(column_ids));
    return out;
}

View clear_selection(const View& view) {
    View out = view;
    out.set_selection({}, {});
    return out;
}

std::string step_name(const Step& s) {
    static constexpr const char* names[] = {"filter_region", "filter_ids", "filter_regex",
                                            "filter_frequency", "sort_rows", "sort_cols",
                                            "aggregate_rows", "select", "clear_selection"};
    return names[s.index()];
}

View apply_step(const View& view, const Step& s, StepReport* report) {
    StepReport local;
    View out = std::visit(
        [&](const auto& p) -> View {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, step::FilterRegion>) {
                return filter_by_region(view, p.chrom, p.start, p.end);
            } else if constexpr (std::is_same_v<T, step::FilterIds>) {
                return filter_by_id_list(view, p.ids, &local.unknown_ids);
            } else if constexpr (std::is_same_v<T, step::FilterRegex>) {
                return filter_by_id_regex(view, p.pattern);
            } else if constexpr (std::is_same_v<T, step::FilterFrequency>) {
                return filter_by_frequency(view, p.threshold, p.mode);
            } else if constexpr (std::is_same_v<T, step::SortRows>) {
                return sort_rows_by_meta(view, p.column);
            } else if constexpr (std::is_same_v<T, step::SortColumns>) {
                return sort_columns_by_meta(view, p.row);
            } else if constexpr (std::is_same_v<T, step::AggregateRows>) {
                return aggregate_rows(view, p.grouping, p.allele_method, p.meta_method);
            } else if constexpr (std::is_same_v<T, step::Select>) {
                return select(view, p.rows, p.columns);
            } else {
                return clear_selection(view);
            }
        },
        s);
    local.summary = step_name(s) + ": " + std::to_string(view.n_rows()) + " x " + std::to_string(view.n_variants()) +
                    " -> " + std::to_string(out.n_rows()) + " rows x " + std::to_string(out.n_variants()) + " variants";
    if (local.unknown_ids) local.summary += " (" + std::to_string(local.unknown_ids) + " unknown IDs ignored)";
    if (report) *report = std::move(local);
    return out;
}

ViewChain::ViewChain(std::shared_ptr<const Dataset> dataset) : dataset_(dataset), current_(std::move(dataset)) {}

const StepReport& ViewChain::push(Step s) {
    StepReport report;
    View next = apply_step(current_, s, &report);
    history_.push_back(std::move(current_));
    current_ = std::move(next);
    steps_.push_back(std::move(s));
    reports_.push_back(std::move(report));
    ++version_;
    return reports_.back();
}

bool ViewChain::undo() {
    if (steps_.empty()) return false;
    current_ = std::move(history_.back());
    history_.pop_back();
    steps_.pop_back();
    reports_.pop_back();
    ++version_;
    return true;
}

void ViewChain::reset() {
    if (!history_.empty()) current_ = std::move(history_.front());
    history_.clear();
    steps_.clear();
    reports_.clear();
    ++version_;
}

ViewChain ViewChain::replay(std::shared_ptr<const Dataset> dataset, const std::vector<Step>& steps) {
    ViewChain chain(std::move(dataset));
    for (const Step& s : steps) chain.push(s);
    return chain;
}

}  // namespace hapview
