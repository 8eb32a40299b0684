#include <string>
#include <vector>

#include "hapview/error.hpp"
#include "hapview/ingest.hpp"
#include "text_util.hpp"
#include "variant_collector.hpp"

namespace hapview {

namespace {

constexpr std::size_t fixed_columns = 9;  // CHROM..FORMAT

struct GtCall {
    Genotype genotype;
    char separator = 0;  // '|', '/' or 0 for haploid
};

std::optional<Base> allele_for(std::string_view token, Base ref, const std::vector<Base>& alts, std::size_t line) {
    if (token == ".") return std::nullopt;
    auto index = detail::parse_int<unsigned>(token);
    if (!index) throw Error(ErrorKind::MalformedRecord, "bad GT allele '" + std::string(token) + "'", line);
    if (*index == 0) return ref;
    if (*index > alts.size())
        throw Error(ErrorKind::MalformedRecord,
                    "GT allele " + std::to_string(*index) + " exceeds ALT count " + std::to_string(alts.size()), line);
    return alts[*index - 1];
}

GtCall parse_gt(std::string_view gt, Base ref, const std::vector<Base>& alts, std::size_t line) {
    GtCall call;
    const std::size_t sep = gt.find_first_of("|/");
    if (sep == std::string_view::npos) {
        // Haploid call: the second allele is absent.
        call.genotype.paternal = allele_for(gt, ref, alts, line);
        return call;
    }
    const std::string_view second = gt.substr(sep + 1);
    if (second.find_first_of("|/") != std::string_view::npos)
        throw Error(ErrorKind::MalformedRecord, "only haploid and diploid GT values are supported", line);
    call.separator = gt[sep];
    call.genotype.paternal = allele_for(gt.substr(0, sep), ref, alts, line);
    call.genotype.maternal = allele_for(second, ref, alts, line);
    return call;
}

}  // namespace

Dataset parse_vcf(std::istream& in) {
    ParseReport report;
    detail::VariantCollector collector(report);
    std::vector<std::string> subjects;
    std::optional<MatrixBuilder> builder;
    std::size_t header_columns = 0;

    std::string line;
    std::vector<std::string_view> fields;
    std::vector<std::string_view> parts;
    std::vector<Base> alts;
    std::vector<Genotype> column;
    std::size_t line_no = 0;

    while (detail::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.starts_with("##")) continue;
        if (line.starts_with("#")) {
            if (builder) throw Error(ErrorKind::MalformedHeader, "second header line", line_no);
            if (!line.starts_with("#CHROM")) throw Error(ErrorKind::MalformedHeader, "expected #CHROM header", line_no);
            detail::split(line, '\t', fields);
            if (fields.size() < fixed_columns - 1)
                throw Error(ErrorKind::MalformedHeader, "header has " + std::to_string(fields.size()) + " columns",
                            line_no);
            header_columns = fields.size();
            for (std::size_t i = fixed_columns; i < fields.size(); ++i) subjects.emplace_back(fields[i]);
            builder.emplace(subjects.size());
            column.resize(subjects.size());
            continue;
        }
        if (!builder) throw Error(ErrorKind::MalformedHeader, "record before #CHROM header", line_no);

        ++report.records;
        detail::split(line, '\t', fields);
        if (fields.size() != header_columns)
            throw Error(ErrorKind::MalformedRecord,
                        std::to_string(fields.size()) + " columns, header declares " + std::to_string(header_columns),
                        line_no);
        auto position = detail::parse_int<std::int64_t>(fields[1]);
        if (!position || *position < 1)
            throw Error(ErrorKind::MalformedRecord, "bad POS '" + std::string(fields[1]) + "'", line_no);

        const std::string_view ref_field = fields[3];
        std::optional<Base> ref = ref_field.size() == 1 ? try_pack_allele(ref_field[0]) : std::nullopt;
        bool snv = ref.has_value();
        alts.clear();
        if (snv && fields[4] != ".") {
            detail::split(fields[4], ',', parts);
            for (auto alt : parts) {
                std::optional<Base> b = alt.size() == 1 ? try_pack_allele(alt[0]) : std::nullopt;
                if (!b) {
                    snv = false;
                    break;
                }
                alts.push_back(*b);
            }
        }
        if (!snv) {
            ++report.skipped_non_snv;
            continue;
        }

        if (!subjects.empty()) {
            detail::split(fields[8], ':', parts);
            std::size_t gt_index = parts.size();
            for (std::size_t i = 0; i < parts.size(); ++i)
                if (parts[i] == "GT") gt_index = i;
            if (gt_index == parts.size()) throw Error(ErrorKind::MalformedRecord, "FORMAT lacks GT", line_no);

            for (std::size_t s = 0; s < subjects.size(); ++s) {
                std::string_view sample = fields[fixed_columns + s];
                std::string_view gt;
                std::size_t start = 0;
                for (std::size_t k = 0; k <= gt_index; ++k) {
                    const std::size_t colon = sample.find(':', start);
                    if (k == gt_index) {
                        gt = sample.substr(start, colon == std::string_view::npos ? sample.npos : colon - start);
                    } else if (colon == std::string_view::npos) {
                        gt = ".";
                        break;
                    }
                    start = colon + 1;
                }
                GtCall call = parse_gt(gt, *ref, alts, line_no);
                if (call.separator == '|') ++report.phased_calls;
                if (call.separator == '/') ++report.unphased_calls;
                column[s] = call.genotype;
            }
        }
        collector.add(fields[0], *position, fields[2], ref, alts.empty() ? std::nullopt : std::optional<Base>(alts[0]),
                      line_no);
        builder->append_variant(column);
        ++report.retained;
    }
    if (!builder) throw Error(ErrorKind::MalformedHeader, "missing #CHROM header line");

    report.lines = line_no;
    report.mixed_phase = report.phased_calls > 0 && report.unphased_calls > 0;
    const bool phased = report.phased_calls > 0 && report.unphased_calls == 0;
    PackedHaplotypeMatrix matrix = std::move(*builder).seal(phased);
    return Dataset(std::move(matrix), std::move(subjects), collector.take_chromosomes(), collector.take_variants(),
                   report);
}

}  // namespace hapview
