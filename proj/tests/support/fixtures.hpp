#pragma once

// Datasets built through the public parsers from synthetic cohorts.

#include <memory>
#include <sstream>

#include "hapview/ingest.hpp"
#include "hapview/view.hpp"
#include "support/cohort.hpp"

namespace hapview::testing {

inline std::shared_ptr<const Dataset> load_cohort(const Cohort& c, bool with_meta = true) {
    std::istringstream in(to_vcf(c));
    Dataset ds = parse_vcf(in);
    if (with_meta) {
        std::istringstream sm(subject_meta_tsv(c)), vm(variant_meta_tsv(c));
        ds = attach_meta(std::move(ds), parse_meta(sm, MetaKind::Subject, "subjects"));
        ds = attach_meta(std::move(ds), parse_meta(vm, MetaKind::Variant, "variants"));
    }
    return std::make_shared<const Dataset>(std::move(ds));
}

inline std::vector<std::string> row_labels(const View& v) {
    std::vector<std::string> out;
    for (const auto& r : v.rows()) out.push_back(r.label);
    return out;
}

inline std::vector<std::string> variant_ids(const View& v) {
    std::vector<std::string> out;
    for (auto idx : v.variants()) out.push_back(v.dataset().variants()[idx].id);
    return out;
}

}  // namespace hapview::testing
