#include "hapview/color.hpp"

#include <cstdio>

#include "hapview/error.hpp"
#include "text_util.hpp"

namespace hapview {

namespace {

constexpr std::string_view role_names[color_role_count] = {"A",         "C",          "G",       "T",
                                                           "missing",   "ref_match",  "ref_diff", "hom_alt",
                                                           "het",       "hom_ref",    "selection"};

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

EncodedCell with_intensity(ColorRole role, const ViewCell& cell) {
    if (!cell.aggregated) return EncodedCell{role, false, 1, 1};
    return EncodedCell{role, true, cell.count, cell.total == 0 ? 1u : cell.total};
}

}  // namespace

Rgb Rgb::from_hex(std::string_view hex) {
    if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
    if (hex.size() != 6) throw Error(ErrorKind::InvalidFormat, "colour '" + std::string(hex) + "' is not RRGGBB");
    std::uint8_t channel[3];
    for (int i = 0; i < 3; ++i) {
        const int hi = hex_digit(hex[2 * i]);
        const int lo = hex_digit(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorKind::InvalidFormat, "colour '" + std::string(hex) + "' is not hex");
        channel[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return {channel[0], channel[1], channel[2]};
}

std::string Rgb::to_hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
    return buf;
}

std::string_view to_string(ColorRole role) { return role_names[static_cast<std::size_t>(role)]; }

std::optional<ColorRole> color_role_from_string(std::string_view name) {
    for (std::size_t i = 0; i < color_role_count; ++i)
        if (role_names[i] == name) return static_cast<ColorRole>(i);
    return std::nullopt;
}

Rgb ColorScheme::color(ColorRole role) const noexcept {
    switch (role) {
        case ColorRole::BaseA:
        case ColorRole::BaseC:
        case ColorRole::BaseG:
        case ColorRole::BaseT: return bases[static_cast<std::size_t>(role)];
        case ColorRole::Missing: return missing;
        case ColorRole::RefMatch: return ref_match;
        case ColorRole::RefDiff: return ref_diff;
        case ColorRole::HomAlt: return hom_alt;
        case ColorRole::Het: return het;
        case ColorRole::HomRef: return hom_ref;
        case ColorRole::Selection: return selection;
    }
    return missing;
}

void ColorScheme::set(ColorRole role, Rgb value) noexcept {
    switch (role) {
        case ColorRole::BaseA:
        case ColorRole::BaseC:
        case ColorRole::BaseG:
        case ColorRole::BaseT: bases[static_cast<std::size_t>(role)] = value; break;
        case ColorRole::Missing: missing = value; break;
        case ColorRole::RefMatch: ref_match = value; break;
        case ColorRole::RefDiff: ref_diff = value; break;
        case ColorRole::HomAlt: hom_alt = value; break;
        case ColorRole::Het: het = value; break;
        case ColorRole::HomRef: hom_ref = value; break;
        case ColorRole::Selection: selection = value; break;
    }
}

std::string_view to_string(Encoding e) {
    switch (e) {
        case Encoding::Nucleotide: return "nucleotide";
        case Encoding::Reference: return "reference";
        case Encoding::Genotype: return "genotype";
    }
    return "";
}

std::string_view to_string(AggStyle s) { return s == AggStyle::Saturation ? "saturation" : "bar"; }

Encoding parse_encoding(std::string_view token) {
    const std::string t = detail::upper(token);
    if (t == "NUCLEOTIDE") return Encoding::Nucleotide;
    if (t == "REFERENCE") return Encoding::Reference;
    if (t == "GENOTYPE") return Encoding::Genotype;
    throw Error(ErrorKind::InvalidFormat, "unknown encoding '" + std::string(token) + "'");
}

AggStyle parse_agg_style(std::string_view token) {
    const std::string t = detail::upper(token);
    if (t == "SATURATION") return AggStyle::Saturation;
    if (t == "BAR") return AggStyle::Bar;
    throw Error(ErrorKind::InvalidFormat, "unknown aggregation style '" + std::string(token) + "'");
}

EncodedCell encode_allele(Encoding encoding, const ViewCell& cell, std::optional<Base> reference) {
    switch (encoding) {
        case Encoding::Nucleotide:
            return with_intensity(cell.base ? base_role(*cell.base) : ColorRole::Missing, cell);
        case Encoding::Reference:
            if (!reference) throw Error(ErrorKind::UnknownReference, "REFERENCE encoding needs a reference base");
            if (!cell.base) return with_intensity(ColorRole::Missing, cell);
            return with_intensity(*cell.base == *reference ? ColorRole::RefMatch : ColorRole::RefDiff, cell);
        case Encoding::Genotype: break;
    }
    throw Error(ErrorKind::InvalidFormat, "GENOTYPE encoding works on whole variants");
}

EncodedCell encode_genotype(const ViewCell& paternal, const ViewCell& maternal, std::optional<Base> reference) {
    if (!reference) throw Error(ErrorKind::UnknownReference, "GENOTYPE encoding needs a reference base");
    ColorRole role;
    if (!paternal.base && !maternal.base) {
        role = ColorRole::Missing;
    } else if (!paternal.base || !maternal.base) {
        const Base present = paternal.base ? *paternal.base : *maternal.base;
        role = present == *reference ? ColorRole::HomRef : ColorRole::HomAlt;
    } else {
        const int alt = (*paternal.base != *reference) + (*maternal.base != *reference);
        role = alt == 0 ? ColorRole::HomRef : (alt == 1 ? ColorRole::Het : ColorRole::HomAlt);
    }
    if (!paternal.aggregated && !maternal.aggregated) return EncodedCell{role, false, 1, 1};
    // Mean of the two consensus frequencies, kept exact.
    const std::uint64_t tp = paternal.total == 0 ? 1 : paternal.total;
    const std::uint64_t tm = maternal.total == 0 ? 1 : maternal.total;
    return EncodedCell{role, true, std::uint64_t{paternal.count} * tm + std::uint64_t{maternal.count} * tp, 2 * tp * tm};
}

Rgb saturate(Rgb color, std::uint64_t num, std::uint64_t den) noexcept {
    if (den == 0) return color;
    if (num > den) num = den;
    const std::uint8_t value = std::max({color.r, color.g, color.b});
    auto channel = [&](std::uint8_t c) {
        // For fixed hue and value every channel sits at V - (V - c) * S / S0.
        const std::uint64_t offset = scaled_round(num, den, static_cast<std::uint64_t>(value - c));
        return static_cast<std::uint8_t>(value - offset);
    };
    return {channel(color.r), channel(color.g), channel(color.b)};
}

}  // namespace hapview
