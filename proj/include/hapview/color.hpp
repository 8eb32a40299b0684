#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hapview/view.hpp"

namespace hapview {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    /// Accepts "#RRGGBB" or "RRGGBB"; throws Error(InvalidFormat).
    static Rgb from_hex(std::string_view hex);
    std::string to_hex() const;  ///< "#RRGGBB", upper case

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

enum class ColorRole : std::uint8_t {
    BaseA,
    BaseC,
    BaseG,
    BaseT,
    Missing,
    RefMatch,
    RefDiff,
    HomAlt,
    Het,
    HomRef,
    Selection,
};
inline constexpr std::size_t color_role_count = 11;

std::string_view to_string(ColorRole role);
std::optional<ColorRole> color_role_from_string(std::string_view name);

inline constexpr ColorRole base_role(Base b) noexcept { return static_cast<ColorRole>(static_cast<std::uint8_t>(b)); }

/// Palette for the three encodings plus the selection overlay. Defaults are
/// ColorBrewer Set1 hues.
struct ColorScheme {
    std::array<Rgb, 4> bases{Rgb::from_hex("#4DAF4A"), Rgb::from_hex("#377EB8"), Rgb::from_hex("#FFFF33"),
                             Rgb::from_hex("#E41A1C")};  // A C G T
    Rgb missing = Rgb::from_hex("#FFFFFF");
    Rgb ref_match = Rgb::from_hex("#377EB8");
    Rgb ref_diff = Rgb::from_hex("#FFFF33");
    Rgb hom_alt = Rgb::from_hex("#E41A1C");
    Rgb het = Rgb::from_hex("#FFFF33");
    Rgb hom_ref = Rgb::from_hex("#4DAF4A");
    Rgb selection = Rgb::from_hex("#000000");

    Rgb color(ColorRole role) const noexcept;
    void set(ColorRole role, Rgb value) noexcept;
};

enum class Encoding { Nucleotide, Reference, Genotype };
enum class AggStyle { Saturation, Bar };

std::string_view to_string(Encoding e);
std::string_view to_string(AggStyle s);
/// Case-insensitive; throw Error(InvalidFormat).
Encoding parse_encoding(std::string_view token);
AggStyle parse_agg_style(std::string_view token);

/// Role of a cell plus the intensity (exact ratio) used by aggregated styles.
struct EncodedCell {
    ColorRole role = ColorRole::Missing;
    bool aggregated = false;
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    friend bool operator==(const EncodedCell&, const EncodedCell&) = default;
};

/// NUCLEOTIDE or REFERENCE encoding of one allele column cell. REFERENCE
/// throws Error(UnknownReference) without a reference base; GENOTYPE is
/// rejected with Error(InvalidFormat) since it needs both alleles.
EncodedCell encode_allele(Encoding encoding, const ViewCell& cell, std::optional<Base> reference);

/// GENOTYPE encoding of a variant from its two allele cells. A single called
/// allele is classified on its own; throws Error(UnknownReference).
EncodedCell encode_genotype(const ViewCell& paternal, const ViewCell& maternal, std::optional<Base> reference);

/// Scales the HSV saturation of `color` by num/den, keeping hue and value.
Rgb saturate(Rgb color, std::uint64_t num, std::uint64_t den) noexcept;

/// round(num/den * extent), halves rounded up.
inline constexpr std::uint64_t scaled_round(std::uint64_t num, std::uint64_t den, std::uint64_t extent) noexcept {
    return den == 0 ? 0 : (2 * num * extent + den) / (2 * den);
}

}  // namespace hapview
