#include <fstream>
#include <string>
#include <vector>

#include "hapview/error.hpp"
#include "hapview/ingest.hpp"
#include "text_util.hpp"
#include "variant_collector.hpp"

namespace hapview {

std::vector<std::string> read_sample_ids(std::istream& samples) {
    std::vector<std::string> ids;
    std::string line;
    std::vector<std::string_view> tokens;
    bool oxford = false;
    std::size_t line_no = 0;
    while (detail::read_line(samples, line)) {
        ++line_no;
        detail::split_whitespace(line, tokens);
        if (tokens.empty()) continue;
        if (line_no == 1 && tokens[0] == "ID_1") {
            oxford = true;
            continue;
        }
        if (oxford && line_no == 2) continue;  // column type line
        if (oxford) {
            if (tokens.size() < 2) throw Error(ErrorKind::MalformedRecord, "sample line lacks ID_2", line_no);
            ids.emplace_back(tokens[1]);
        } else {
            ids.emplace_back(tokens[0]);
        }
    }
    return ids;
}

Dataset parse_impute2(std::istream& haps, std::istream& samples) {
    std::vector<std::string> subjects = read_sample_ids(samples);
    const std::size_t n = subjects.size();
    ParseReport report;
    detail::VariantCollector collector(report);
    MatrixBuilder builder(n);

    std::string line;
    std::vector<std::string_view> tokens;
    std::vector<Genotype> column(n);
    std::size_t line_no = 0;
    const std::size_t expected = 5 + 2 * n;

    while (detail::read_line(haps, line)) {
        ++line_no;
        detail::split_whitespace(line, tokens);
        if (tokens.empty()) continue;
        ++report.records;
        if (tokens.size() != expected) {
            if (tokens.size() > 5 && (tokens.size() - 5) % 2 == 0 && report.records == 1)
                throw Error(ErrorKind::DimensionMismatch,
                            "haplotype file has " + std::to_string((tokens.size() - 5) / 2) + " subjects, sample list " +
                                std::to_string(n));
            throw Error(ErrorKind::MalformedRecord,
                        std::to_string(tokens.size()) + " tokens, expected " + std::to_string(expected), line_no);
        }
        auto position = detail::parse_int<std::int64_t>(tokens[2]);
        if (!position || *position < 1)
            throw Error(ErrorKind::MalformedRecord, "bad position '" + std::string(tokens[2]) + "'", line_no);

        std::optional<Base> allele_a = tokens[3].size() == 1 ? try_pack_allele(tokens[3][0]) : std::nullopt;
        std::optional<Base> allele_b = tokens[4].size() == 1 ? try_pack_allele(tokens[4][0]) : std::nullopt;
        const bool snv = allele_a && allele_b;

        for (std::size_t h = 0; h < 2 * n; ++h) {
            const std::string_view t = tokens[5 + h];
            if (t != "0" && t != "1")
                throw Error(ErrorKind::MalformedRecord, "haplotype indicator '" + std::string(t) + "'", line_no);
            if (!snv) continue;
            const Base b = t == "0" ? *allele_a : *allele_b;
            if (h % 2 == 0)
                column[h / 2].paternal = b;
            else
                column[h / 2].maternal = b;
        }
        if (!snv) {
            ++report.skipped_non_snv;
            continue;
        }
        collector.add(tokens[0], *position, tokens[1], allele_a, allele_b, line_no);
        builder.append_variant(column);
        ++report.retained;
    }
    report.lines = line_no;
    report.phased_calls = report.retained * n;
    PackedHaplotypeMatrix matrix = std::move(builder).seal(true);
    return Dataset(std::move(matrix), std::move(subjects), collector.take_chromosomes(), collector.take_variants(),
                   report);
}

}  // namespace hapview
