#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hapview/allele.hpp"
#include "hapview/packed_matrix.hpp"

namespace hapview {

struct VariantInfo {
    std::string id;
    std::uint32_t chromosome = 0;  ///< index into Dataset::chromosomes
    std::int64_t position = 0;     ///< 1-based
    std::optional<Base> reference;
    std::optional<Base> alternate;  ///< first ALT base
};

enum class MetaKind { Subject, Variant };
enum class MetaType { Categorical, Numerical };

std::string_view to_string(MetaKind kind);
std::string_view to_string(MetaType type);

/// ABSENT, a category name, or a finite number.
using MetaValue = std::variant<std::monostate, std::string, double>;

inline bool is_absent(const MetaValue& v) noexcept { return std::holds_alternative<std::monostate>(v); }

struct MetaColumn {
    std::string name;
    MetaType type = MetaType::Categorical;
    std::unordered_map<std::string, MetaValue> values;  ///< keyed by subject / variant ID

    /// Sorted distinct category names (empty for numerical columns).
    std::vector<std::string> categories() const;
};

struct MetaTable {
    std::string name;
    MetaKind kind = MetaKind::Subject;
    std::vector<std::string> row_ids;  ///< IDs in file order
    std::vector<MetaColumn> columns;
    std::vector<std::string> unknown_ids;  ///< filled on attach: IDs that resolve to nothing
};

/// Data-quality counters returned alongside every parsed dataset.
struct ParseReport {
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t retained = 0;
    std::size_t skipped_non_snv = 0;
    std::size_t renamed_duplicate_ids = 0;
    std::size_t phased_calls = 0;
    std::size_t unphased_calls = 0;
    bool mixed_phase = false;

    std::size_t skipped() const noexcept { return records - retained; }
};

/// A meta column resolved against one axis of a dataset.
struct ResolvedColumn {
    std::string table;
    const MetaColumn* column = nullptr;
    std::vector<MetaValue> by_index;  ///< one entry per subject / variant
};

/// Sealed genotype matrix plus its identifier tables and attached meta tables.
class Dataset {
public:
    Dataset(PackedHaplotypeMatrix matrix, std::vector<std::string> subjects, std::vector<std::string> chromosomes,
            std::vector<VariantInfo> variants, ParseReport report = {});

    const PackedHaplotypeMatrix& matrix() const noexcept { return matrix_; }
    std::size_t n_subjects() const noexcept { return subjects_.size(); }
    std::size_t n_variants() const noexcept { return variants_.size(); }
    bool phased() const noexcept { return matrix_.phased(); }

    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    const std::vector<std::string>& chromosomes() const noexcept { return chromosomes_; }
    const std::vector<VariantInfo>& variants() const noexcept { return variants_; }
    const ParseReport& report() const noexcept { return report_; }

    const std::string& chromosome_of(std::size_t variant) const { return chromosomes_[variants_[variant].chromosome]; }
    std::optional<std::size_t> subject_index(const std::string& id) const;
    std::optional<std::size_t> variant_index(const std::string& id) const;

    const std::vector<std::shared_ptr<const MetaTable>>& subject_meta() const noexcept { return subject_meta_; }
    const std::vector<std::shared_ptr<const MetaTable>>& variant_meta() const noexcept { return variant_meta_; }

    /// First subject/variant column with this name, resolved by index.
    const ResolvedColumn* subject_column(const std::string& name) const;
    const ResolvedColumn* variant_column(const std::string& name) const;
    const std::vector<ResolvedColumn>& subject_columns() const noexcept { return subject_columns_; }
    const std::vector<ResolvedColumn>& variant_columns() const noexcept { return variant_columns_; }

    /// Subject meta columns ("MI columns").
    std::size_t mi_columns() const noexcept { return subject_columns_.size(); }
    /// Variant meta rows ("MI rows"), including the synthetic P/M row of phased data.
    std::size_t mi_rows() const noexcept { return variant_columns_.size() + (phased() ? 1 : 0); }
    std::vector<std::string> variant_row_names() const;

    friend Dataset attach_meta(Dataset ds, MetaTable table, MetaKind axis);

private:
    PackedHaplotypeMatrix matrix_;
    std::vector<std::string> subjects_;
    std::vector<std::string> chromosomes_;
    std::vector<VariantInfo> variants_;
    ParseReport report_;
    std::unordered_map<std::string, std::size_t> subject_lookup_;
    std::unordered_map<std::string, std::size_t> variant_lookup_;
    std::vector<std::shared_ptr<const MetaTable>> subject_meta_;
    std::vector<std::shared_ptr<const MetaTable>> variant_meta_;
    std::vector<ResolvedColumn> subject_columns_;
    std::vector<ResolvedColumn> variant_columns_;
};

/// Name of the synthetic variant row labelling allele columns paternal/maternal.
inline constexpr const char* paternal_maternal_row = "P/M";

/// Appends `table` to the `axis` side of the dataset. Throws
/// Error(KindMismatch) when the table kind differs from the axis and
/// Error(DuplicateMeta) when a table of the same name is already attached.
/// IDs that resolve to no subject/variant are kept in table.unknown_ids.
Dataset attach_meta(Dataset ds, MetaTable table, MetaKind axis);

inline Dataset attach_meta(Dataset ds, MetaTable table) {
    const MetaKind axis = table.kind;
    return attach_meta(std::move(ds), std::move(table), axis);
}

}  // namespace hapview
