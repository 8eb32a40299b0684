#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace hapview {

/// Two-bit nucleotide code. The order is alphabetical and is also the
/// tie-break order used by consensus aggregation.
enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::array<Base, 4> all_bases{Base::A, Base::C, Base::G, Base::T};

/// Tile / wire code for an absent allele.
inline constexpr std::uint8_t missing_code = 4;

/// Throws Error(InvalidBase) for anything outside A/C/G/T (upper or lower case).
Base pack_allele(char base);
std::optional<Base> try_pack_allele(char base) noexcept;
char unpack_allele(Base code) noexcept;

inline constexpr std::uint8_t code_of(std::optional<Base> allele) noexcept {
    return allele ? static_cast<std::uint8_t>(*allele) : missing_code;
}

/// A diploid call. For unphased data the member order is storage order only.
struct Genotype {
    std::optional<Base> paternal;
    std::optional<Base> maternal;

    std::optional<Base> allele(int which) const noexcept { return which == 0 ? paternal : maternal; }

    friend bool operator==(const Genotype&, const Genotype&) = default;
};

}  // namespace hapview
