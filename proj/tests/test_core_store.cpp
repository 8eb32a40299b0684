#include "doctest.h"

#include "hapview/error.hpp"
#include "hapview/packed_matrix.hpp"
#include "support/cohort.hpp"

using namespace hapview;

namespace {

std::optional<Base> random_allele(testing::Rng& rng, std::uint32_t missing_per_mille) {
    if (rng.chance(missing_per_mille)) return std::nullopt;
    return static_cast<Base>(rng.below(4));
}

/// Builds a matrix and the dense truth it was built from.
std::pair<PackedHaplotypeMatrix, std::vector<std::vector<Genotype>>> random_matrix(std::uint32_t seed, std::size_t ns,
                                                                                   std::size_t nv,
                                                                                   std::uint32_t missing,
                                                                                   std::size_t chunk_bytes = 1 << 20) {
    testing::Rng rng(seed);
    std::vector<std::vector<Genotype>> truth(ns, std::vector<Genotype>(nv));
    MatrixBuilder builder(ns, chunk_bytes);
    std::vector<Genotype> column(ns);
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t s = 0; s < ns; ++s) {
            column[s] = Genotype{random_allele(rng, missing), random_allele(rng, missing)};
            truth[s][v] = column[s];
        }
        builder.append_variant(column);
    }
    return {std::move(builder).seal(true), std::move(truth)};
}

}  // namespace

TEST_CASE("pack_allele uses the alphabetical bijection") {
    CHECK(pack_allele('A') == Base::A);
    CHECK(static_cast<int>(pack_allele('A')) == 0);
    CHECK(static_cast<int>(pack_allele('C')) == 1);
    CHECK(static_cast<int>(pack_allele('G')) == 2);
    CHECK(static_cast<int>(pack_allele('T')) == 3);
    for (Base b : all_bases) CHECK(pack_allele(unpack_allele(b)) == b);
    for (char c : {'A', 'C', 'G', 'T'}) CHECK(unpack_allele(pack_allele(c)) == c);
}

TEST_CASE("pack_allele rejects characters outside the alphabet") {
    for (char c : {'N', '-', '.', 'U', '0'}) {
        try {
            pack_allele(c);
            FAIL("expected InvalidBase for " << c);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidBase);
        }
    }
}

TEST_CASE("get_genotype round-trips stored cells") {
    MatrixBuilder b(2);
    std::vector<Genotype> col{{Base::A, Base::C}, {Base::G, std::nullopt}};
    b.append_variant(col);
    const auto m = std::move(b).seal(true);
    CHECK(m.get_genotype(0, 0) == Genotype{Base::A, Base::C});
    // haploid call, e.g. a male X chromosome site
    CHECK(m.get_genotype(1, 0) == Genotype{Base::G, std::nullopt});
    CHECK(m.has_missing());
    CHECK_THROWS_AS(m.get_genotype(2, 0), Error);
    try {
        m.get_genotype(m.n_subjects(), 0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfBounds);
    }
    CHECK_THROWS_AS(m.get_genotype(0, 1), Error);
}

TEST_CASE("append_variant checks the column length") {
    MatrixBuilder b(3);
    std::vector<Genotype> col(2);
    try {
        b.append_variant(col);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
}

TEST_CASE("missing bitset is only allocated when needed") {
    auto [full, truth] = random_matrix(1, 7, 9, 0);
    CHECK_FALSE(full.has_missing());
    CHECK(full.missing_bytes() == 0);
    auto [sparse, truth2] = random_matrix(1, 7, 9, 100);
    CHECK(sparse.has_missing());
    CHECK(sparse.missing_bytes() == (2 * 7 * 9 + 7) / 8);
}

TEST_CASE("round-trip property over random grids") {
    // >= 10^4 cells across shapes, odd sizes and tiny chunks to cross chunk borders.
    std::size_t cells = 0;
    struct Shape {
        std::size_t ns, nv, chunk;
        std::uint32_t missing;
    };
    for (const Shape sh : {Shape{1, 1, 1, 0}, Shape{3, 5, 1, 200}, Shape{17, 301, 64, 50}, Shape{64, 129, 4096, 0},
                           Shape{5, 1000, 3, 10}}) {
        auto [m, truth] = random_matrix(static_cast<std::uint32_t>(sh.ns * 31 + sh.nv), sh.ns, sh.nv, sh.missing, sh.chunk);
        REQUIRE(m.n_subjects() == sh.ns);
        REQUIRE(m.n_variants() == sh.nv);
        for (std::size_t s = 0; s < sh.ns; ++s)
            for (std::size_t v = 0; v < sh.nv; ++v) {
                REQUIRE(m.get_genotype(s, v) == truth[s][v]);
                ++cells;
            }
    }
    CHECK(cells >= 10000);
}

TEST_CASE("window matches per-cell decoding") {
    auto [m, truth] = random_matrix(5, 13, 40, 80);
    SUBCASE("full range equals the dense truth") {
        const GenotypeGrid g = m.window({0, 13}, {0, 40});
        REQUIRE(g.rows() == 13);
        REQUIRE(g.cols() == 40);
        for (std::size_t s = 0; s < 13; ++s)
            for (std::size_t v = 0; v < 40; ++v) CHECK(g(s, v) == truth[s][v]);
    }
    SUBCASE("every sub-window agrees with get_genotype") {
        testing::Rng rng(9);
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t r0 = rng.below(14), r1 = rng.below(14), c0 = rng.below(41), c1 = rng.below(41);
            if (r0 > r1) std::swap(r0, r1);
            if (c0 > c1) std::swap(c0, c1);
            const GenotypeGrid g = m.window({r0, r1}, {c0, c1});
            REQUIRE(g.rows() == r1 - r0);
            REQUIRE(g.cols() == c1 - c0);
            for (std::size_t i = 0; i < g.rows(); ++i)
                for (std::size_t j = 0; j < g.cols(); ++j) REQUIRE(g(i, j) == m.get_genotype(r0 + i, c0 + j));
        }
    }
    SUBCASE("empty and degenerate windows") {
        const GenotypeGrid empty = m.window({2, 2}, {0, 5});
        CHECK(empty.rows() == 0);
        CHECK(empty.cols() == 5);
        CHECK(empty.empty());
        const GenotypeGrid one = m.window({3, 4}, {7, 8});
        CHECK(one(0, 0) == m.get_genotype(3, 7));
    }
    SUBCASE("inverted or out-of-range bounds") {
        for (auto [rows, cols] : {std::pair<IndexRange, IndexRange>{{3, 2}, {0, 1}},
                                  {{0, 14}, {0, 1}},
                                  {{0, 1}, {5, 4}},
                                  {{0, 1}, {0, 41}}}) {
            try {
                m.window(rows, cols);
                FAIL("expected OutOfBounds");
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::OutOfBounds);
            }
        }
    }
}

TEST_CASE("memory footprint is ceil(subjects * variants / 2)") {
    CHECK(PackedHaplotypeMatrix::plane_bytes_for(1000, 4'000'000) == 2'000'000'000ull);
    auto [m100, t100] = random_matrix(2, 100, 1000, 0);
    CHECK(m100.memory_footprint() == 50'000);
    auto [m1, t1] = random_matrix(2, 1, 1, 0);
    CHECK(m1.memory_footprint() == 1);
    for (std::size_t ns : {1u, 2u, 3u, 7u, 10u})
        for (std::size_t nv : {1u, 2u, 5u, 33u}) {
            auto [m, t] = random_matrix(3, ns, nv, 0);
            CHECK(m.plane_bytes() == (ns * nv + 1) / 2);
            // 8x below two bytes per allele character
            CHECK(8 * m.plane_bytes() <= 2 * 2 * ns * nv + 8);
        }
    auto [mm, tm] = random_matrix(4, 10, 10, 300);
    CHECK(mm.memory_footprint() == 50 + (200 + 7) / 8);
}

TEST_CASE("sealed matrices are immutable to readers") {
    auto [m, truth] = random_matrix(8, 6, 6, 100);
    const PackedHaplotypeMatrix copy = m;
    (void)m.window({0, 6}, {0, 6});
    std::vector<Genotype> row(6);
    m.decode_row(2, {0, 6}, row);
    for (std::size_t v = 0; v < 6; ++v) CHECK(row[v] == truth[2][v]);
    CHECK(m.window({0, 6}, {0, 6}) == copy.window({0, 6}, {0, 6}));
}
