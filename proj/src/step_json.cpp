#include "hapview/step_json.hpp"

#include "hapview/error.hpp"
#include "text_util.hpp"

namespace hapview {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::InvalidStep, std::string("missing field '") + key + "'");
    return *it;
}

std::string string_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw Error(ErrorKind::InvalidStep, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::int64_t int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) throw Error(ErrorKind::InvalidStep, std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::vector<std::size_t> index_list(const json& j, const char* key) {
    std::vector<std::size_t> out;
    auto it = j.find(key);
    if (it == j.end()) return out;
    if (!it->is_array()) throw Error(ErrorKind::InvalidStep, std::string("field '") + key + "' must be an array");
    for (const auto& v : *it) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw Error(ErrorKind::InvalidStep, std::string("field '") + key + "' must hold non-negative integers");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

template <class Enum, std::size_t N>
Enum enum_field(const json& j, const char* key, const std::pair<const char*, Enum> (&table)[N], Enum fallback,
                bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (required) throw Error(ErrorKind::InvalidStep, std::string("missing field '") + key + "'");
        return fallback;
    }
    if (it->is_string()) {
        const std::string token = detail::upper(it->get<std::string>());
        for (const auto& [name, value] : table)
            if (token == name) return value;
    }
    throw Error(ErrorKind::InvalidStep, std::string("bad value for '") + key + "': " + it->dump());
}

constexpr std::pair<const char*, FrequencyMode> frequency_modes[] = {{"ABOVE", FrequencyMode::Above},
                                                                     {"BELOW", FrequencyMode::Below}};
constexpr std::pair<const char*, AlleleMethod> allele_methods[] = {{"MAXIMUM", AlleleMethod::Maximum},
                                                                   {"MINIMUM", AlleleMethod::Minimum}};
constexpr std::pair<const char*, MetaMethod> meta_methods[] = {
    {"MIN", MetaMethod::Min}, {"MAX", MetaMethod::Max}, {"MEAN", MetaMethod::Mean}, {"MODE", MetaMethod::Mode}};

template <class Enum, std::size_t N>
const char* enum_name(Enum value, const std::pair<const char*, Enum> (&table)[N]) {
    for (const auto& [name, v] : table)
        if (v == value) return name;
    return "";
}

}  // namespace

json step_to_json(const Step& s) {
    json j = {{"op", step_name(s)}};
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, step::FilterRegion>) {
                j["chrom"] = p.chrom;
                j["start"] = p.start;
                j["end"] = p.end;
            } else if constexpr (std::is_same_v<T, step::FilterIds>) {
                j["ids"] = p.ids;
            } else if constexpr (std::is_same_v<T, step::FilterRegex>) {
                j["pattern"] = p.pattern;
            } else if constexpr (std::is_same_v<T, step::FilterFrequency>) {
                j["threshold"] = p.threshold;
                j["mode"] = enum_name(p.mode, frequency_modes);
            } else if constexpr (std::is_same_v<T, step::SortRows>) {
                j["column"] = p.column;
            } else if constexpr (std::is_same_v<T, step::SortColumns>) {
                j["row"] = p.row;
            } else if constexpr (std::is_same_v<T, step::AggregateRows>) {
                if (p.grouping.column)
                    j["column"] = *p.grouping.column;
                else
                    j["selection"] = true;
                j["allele_method"] = enum_name(p.allele_method, allele_methods);
                j["meta_method"] = enum_name(p.meta_method, meta_methods);
            } else if constexpr (std::is_same_v<T, step::Select>) {
                j["rows"] = p.rows;
                j["cols"] = p.columns;
            }
        },
        s);
    return j;
}

Step step_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidStep, "step must be a JSON object");
    const std::string op = string_field(j, "op");
    if (op == "filter_region") {
        return step::FilterRegion{string_field(j, "chrom"), int_field(j, "start"), int_field(j, "end")};
    }
    if (op == "filter_ids") {
        const json& ids = field(j, "ids");
        if (!ids.is_array()) throw Error(ErrorKind::InvalidStep, "field 'ids' must be an array");
        step::FilterIds f;
        for (const auto& id : ids) {
            if (!id.is_string()) throw Error(ErrorKind::InvalidStep, "field 'ids' must hold strings");
            f.ids.push_back(id.get<std::string>());
        }
        return f;
    }
    if (op == "filter_regex") return step::FilterRegex{string_field(j, "pattern")};
    if (op == "filter_frequency") {
        const json& t = field(j, "threshold");
        if (!t.is_number()) throw Error(ErrorKind::InvalidStep, "field 'threshold' must be a number");
        return step::FilterFrequency{t.get<double>(),
                                     enum_field(j, "mode", frequency_modes, FrequencyMode::Above, true)};
    }
    if (op == "sort_rows") return step::SortRows{string_field(j, "column")};
    if (op == "sort_cols") return step::SortColumns{string_field(j, "row")};
    if (op == "aggregate_rows") {
        step::AggregateRows a;
        if (j.contains("column")) {
            a.grouping = Grouping::by_column(string_field(j, "column"));
        } else if (j.value("selection", false)) {
            a.grouping = Grouping::by_selection();
        } else {
            throw Error(ErrorKind::InvalidStep, "aggregate_rows needs 'column' or \"selection\": true");
        }
        a.allele_method = enum_field(j, "allele_method", allele_methods, AlleleMethod::Maximum, false);
        a.meta_method = enum_field(j, "meta_method", meta_methods, MetaMethod::Mean, false);
        return a;
    }
    if (op == "select") return step::Select{index_list(j, "rows"), index_list(j, "cols")};
    if (op == "clear_selection") return step::ClearSelection{};
    throw Error(ErrorKind::InvalidStep, "unknown op '" + op + "'");
}

json steps_to_json(const std::vector<Step>& steps) {
    json out = json::array();
    for (const auto& s : steps) out.push_back(step_to_json(s));
    return out;
}

std::vector<Step> parse_pipeline(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidStep, std::string("pipeline is not valid JSON: ") + e.what());
    }
    const json* list = &doc;
    if (doc.is_object()) {
        auto it = doc.find("steps");
        if (it == doc.end()) throw Error(ErrorKind::InvalidStep, "pipeline object lacks 'steps'");
        list = &*it;
    }
    if (!list->is_array()) throw Error(ErrorKind::InvalidStep, "pipeline must be an array of steps");
    std::vector<Step> steps;
    for (std::size_t i = 0; i < list->size(); ++i) {
        try {
            steps.push_back(step_from_json((*list)[i]));
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidStep, "step " + std::to_string(i) + ": " + e.detail());
        }
    }
    return steps;
}

}  // namespace hapview
