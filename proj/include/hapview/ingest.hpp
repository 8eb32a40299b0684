#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "hapview/dataset.hpp"

namespace hapview {

/// Streams a text VCF into a sealed dataset. Only single-base substitutions
/// are retained; other records are counted in the parse report.
Dataset parse_vcf(std::istream& in);

/// Reads an IMPUTE2 haplotype file. `samples` lists the subject IDs in column
/// order, either one per line or as an Oxford .sample file.
Dataset parse_impute2(std::istream& haps, std::istream& samples);

std::vector<std::string> read_sample_ids(std::istream& samples);

/// Two-header tab-delimited meta file: column names, then type tokens
/// (CATEGORICAL / NUMERICAL, any case), then one line per ID.
MetaTable parse_meta(std::istream& in, MetaKind kind, std::string name);

enum class InputFormat { Vcf, Impute2 };

struct MetaSource {
    std::filesystem::path path;
    MetaKind kind = MetaKind::Subject;
    std::string name;  ///< defaults to the file stem
};

struct DatasetSource {
    InputFormat format = InputFormat::Vcf;
    std::filesystem::path path;
    std::filesystem::path samples;  ///< IMPUTE2 only
    std::vector<MetaSource> meta;
};

/// Guesses the format from the file extension (.haps/.hap/.impute2 -> IMPUTE2).
InputFormat guess_format(const std::filesystem::path& path);

/// Parses the genotype file and attaches every meta table. Throws
/// Error(IoError) for files that cannot be opened.
Dataset load_dataset(const DatasetSource& source);

}  // namespace hapview
