#include "hapview/dataset.hpp"

#include <algorithm>
#include <set>

#include "hapview/error.hpp"

namespace hapview {

std::string_view to_string(MetaKind kind) { return kind == MetaKind::Subject ? "SUBJECT" : "VARIANT"; }
std::string_view to_string(MetaType type) { return type == MetaType::Categorical ? "CATEGORICAL" : "NUMERICAL"; }

std::vector<std::string> MetaColumn::categories() const {
    if (type != MetaType::Categorical) return {};
    std::set<std::string> seen;
    for (const auto& [id, value] : values)
        if (const auto* s = std::get_if<std::string>(&value)) seen.insert(*s);
    return {seen.begin(), seen.end()};
}

Dataset::Dataset(PackedHaplotypeMatrix matrix, std::vector<std::string> subjects, std::vector<std::string> chromosomes,
                 std::vector<VariantInfo> variants, ParseReport report)
    : matrix_(std::move(matrix)),
      subjects_(std::move(subjects)),
      chromosomes_(std::move(chromosomes)),
      variants_(std::move(variants)),
      report_(report) {
    if (matrix_.n_subjects() != subjects_.size() || matrix_.n_variants() != variants_.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "matrix is " + std::to_string(matrix_.n_subjects()) + " x " + std::to_string(matrix_.n_variants()) +
                        " but tables list " + std::to_string(subjects_.size()) + " subjects and " +
                        std::to_string(variants_.size()) + " variants");
    subject_lookup_.reserve(subjects_.size());
    for (std::size_t i = 0; i < subjects_.size(); ++i)
        if (!subject_lookup_.emplace(subjects_[i], i).second)
            throw Error(ErrorKind::MalformedHeader, "duplicate subject ID " + subjects_[i]);
    variant_lookup_.reserve(variants_.size());
    for (std::size_t i = 0; i < variants_.size(); ++i)
        if (!variant_lookup_.emplace(variants_[i].id, i).second)
            throw Error(ErrorKind::MalformedRecord, "duplicate variant ID " + variants_[i].id);
}

std::optional<std::size_t> Dataset::subject_index(const std::string& id) const {
    auto it = subject_lookup_.find(id);
    if (it == subject_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Dataset::variant_index(const std::string& id) const {
    auto it = variant_lookup_.find(id);
    if (it == variant_lookup_.end()) return std::nullopt;
    return it->second;
}

const ResolvedColumn* Dataset::subject_column(const std::string& name) const {
    for (const auto& c : subject_columns_)
        if (c.column->name == name) return &c;
    return nullptr;
}

const ResolvedColumn* Dataset::variant_column(const std::string& name) const {
    for (const auto& c : variant_columns_)
        if (c.column->name == name) return &c;
    return nullptr;
}

std::vector<std::string> Dataset::variant_row_names() const {
    std::vector<std::string> names;
    if (phased()) names.emplace_back(paternal_maternal_row);
    for (const auto& c : variant_columns_) names.push_back(c.column->name);
    return names;
}

Dataset attach_meta(Dataset ds, MetaTable table, MetaKind axis) {
    if (table.kind != axis)
        throw Error(ErrorKind::KindMismatch, "table '" + table.name + "' is " + std::string(to_string(table.kind)) +
                                                 " meta, cannot attach to the " + std::string(to_string(axis)) + " axis");
    auto& tables = axis == MetaKind::Subject ? ds.subject_meta_ : ds.variant_meta_;
    if (std::any_of(tables.begin(), tables.end(), [&](const auto& t) { return t->name == table.name; }))
        throw Error(ErrorKind::DuplicateMeta, "meta table '" + table.name + "' is already attached");

    const auto& lookup = axis == MetaKind::Subject ? ds.subject_lookup_ : ds.variant_lookup_;
    const std::size_t n = axis == MetaKind::Subject ? ds.n_subjects() : ds.n_variants();

    table.unknown_ids.clear();
    for (const auto& id : table.row_ids)
        if (!lookup.contains(id)) table.unknown_ids.push_back(id);

    auto shared = std::make_shared<const MetaTable>(std::move(table));
    auto& resolved = axis == MetaKind::Subject ? ds.subject_columns_ : ds.variant_columns_;
    for (const auto& column : shared->columns) {
        ResolvedColumn rc{shared->name, &column, std::vector<MetaValue>(n)};
        for (const auto& [id, value] : column.values) {
            auto it = lookup.find(id);
            if (it != lookup.end()) rc.by_index[it->second] = value;
        }
        resolved.push_back(std::move(rc));
    }
    tables.push_back(std::move(shared));
    return ds;
}

}  // namespace hapview
