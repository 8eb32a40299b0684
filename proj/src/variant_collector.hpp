#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hapview/dataset.hpp"
#include "hapview/error.hpp"

namespace hapview::detail {

/// Builds the variant table while streaming: interns chromosome names, keeps
/// IDs unique and enforces non-decreasing positions per chromosome.
class VariantCollector {
public:
    explicit VariantCollector(ParseReport& report) : report_(report) {}

    void add(std::string_view chrom, std::int64_t position, std::string_view id, std::optional<Base> ref,
             std::optional<Base> alt, std::size_t line) {
        auto [it, inserted] = chrom_index_.try_emplace(std::string(chrom), chromosomes_.size());
        if (inserted) {
            chromosomes_.emplace_back(chrom);
            last_position_.push_back(position);
        }
        const std::size_t ci = it->second;
        if (position < last_position_[ci])
            throw Error(ErrorKind::MalformedRecord,
                        "position " + std::to_string(position) + " on " + std::string(chrom) + " follows " +
                            std::to_string(last_position_[ci]),
                        line);
        last_position_[ci] = position;

        std::string unique = id.empty() || id == "." ? std::string(chrom) + ":" + std::to_string(position) : std::string(id);
        if (!ids_.insert(unique).second) {
            ++report_.renamed_duplicate_ids;
            for (int k = 2;; ++k) {
                std::string candidate = unique + "_" + std::to_string(k);
                if (ids_.insert(candidate).second) {
                    unique = std::move(candidate);
                    break;
                }
            }
        }
        variants_.push_back(VariantInfo{std::move(unique), static_cast<std::uint32_t>(ci), position, ref, alt});
    }

    std::vector<std::string> take_chromosomes() { return std::move(chromosomes_); }
    std::vector<VariantInfo> take_variants() {
        ids_.clear();
        return std::move(variants_);
    }

private:
    ParseReport& report_;
    std::unordered_map<std::string, std::size_t> chrom_index_;
    std::vector<std::string> chromosomes_;
    std::vector<std::int64_t> last_position_;
    std::unordered_set<std::string> ids_;
    std::vector<VariantInfo> variants_;
};

}  // namespace hapview::detail
