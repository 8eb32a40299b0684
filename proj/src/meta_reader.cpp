#include <fstream>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "hapview/error.hpp"
#include "hapview/ingest.hpp"
#include "text_util.hpp"

namespace hapview {

namespace {

bool absent_token(std::string_view s) { return s.empty() || s == "NA" || s == "."; }

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    return in;
}

}  // namespace

MetaTable parse_meta(std::istream& in, MetaKind kind, std::string name) {
    MetaTable table;
    table.name = std::move(name);
    table.kind = kind;

    std::string names_line;
    std::string types_line;
    if (!detail::read_line(in, names_line) || !detail::read_line(in, types_line))
        throw Error(ErrorKind::MalformedHeader, "meta file needs a name line and a type line");

    std::vector<std::string_view> names;
    std::vector<std::string_view> types;
    detail::split(names_line, '\t', names);
    detail::split(types_line, '\t', types);
    if (names.size() != types.size())
        throw Error(ErrorKind::MalformedHeader,
                    std::to_string(names.size()) + " column names but " + std::to_string(types.size()) + " type tokens",
                    2);
    if (names.size() < 2) throw Error(ErrorKind::MalformedHeader, "meta file has no value columns", 1);

    std::set<std::string, std::less<>> seen_names;
    for (std::size_t i = 1; i < names.size(); ++i) {
        MetaColumn column;
        column.name = std::string(names[i]);
        if (column.name.empty() || !seen_names.insert(column.name).second)
            throw Error(ErrorKind::MalformedHeader, "empty or repeated column name '" + column.name + "'", 1);
        const std::string token = detail::upper(types[i]);
        if (token == "CATEGORICAL")
            column.type = MetaType::Categorical;
        else if (token == "NUMERICAL")
            column.type = MetaType::Numerical;
        else
            throw Error(ErrorKind::MalformedHeader, "unknown type token '" + std::string(types[i]) + "'", 2);
        table.columns.push_back(std::move(column));
    }

    std::string line;
    std::vector<std::string_view> fields;
    std::unordered_set<std::string> ids;
    std::size_t line_no = 2;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        detail::split(line, '\t', fields);
        if (fields.size() > names.size())
            throw Error(ErrorKind::MalformedRecord,
                        std::to_string(fields.size()) + " fields, header has " + std::to_string(names.size()), line_no);
        std::string id(fields[0]);
        if (id.empty() || !ids.insert(id).second)
            throw Error(ErrorKind::MalformedRecord, "empty or repeated ID '" + id + "'", line_no);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            MetaColumn& column = table.columns[c];
            const std::string_view cell = c + 1 < fields.size() ? fields[c + 1] : std::string_view{};
            MetaValue value;
            if (!absent_token(cell)) {
                if (column.type == MetaType::Numerical) {
                    auto number = detail::parse_finite(cell);
                    if (!number)
                        throw Error(ErrorKind::MalformedRecord,
                                    "'" + std::string(cell) + "' in numerical column " + column.name, line_no);
                    value = *number;
                } else {
                    value = std::string(cell);
                }
            }
            column.values.emplace(id, std::move(value));
        }
        table.row_ids.push_back(std::move(id));
    }
    return table;
}

InputFormat guess_format(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".haps" || ext == ".hap" || ext == ".impute2") return InputFormat::Impute2;
    return InputFormat::Vcf;
}

Dataset load_dataset(const DatasetSource& source) {
    auto in = open_or_throw(source.path);
    Dataset ds = [&] {
        if (source.format == InputFormat::Vcf) return parse_vcf(in);
        if (source.samples.empty())
            throw Error(ErrorKind::IoError, "IMPUTE2 input needs a sample file");
        auto samples = open_or_throw(source.samples);
        return parse_impute2(in, samples);
    }();
    for (const auto& meta : source.meta) {
        auto meta_in = open_or_throw(meta.path);
        std::string name = meta.name.empty() ? meta.path.stem().string() : meta.name;
        ds = attach_meta(std::move(ds), parse_meta(meta_in, meta.kind, std::move(name)), meta.kind);
    }
    return ds;
}

}  // namespace hapview
