#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "hapview/transform.hpp"
#include "support/check.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hapview;
using hapview::testing::check_error;
using hapview::testing::row_labels;
using hapview::testing::variant_ids;

namespace {

std::vector<std::string> ids_where(const testing::Cohort& c, auto pred) {
    std::vector<std::string> out;
    for (const auto& v : c.variants)
        if (pred(v)) out.push_back(v.id);
    return out;
}

/// Dataset with one variant per given column of allele characters.
std::shared_ptr<const Dataset> handmade(const std::vector<std::string>& paternal, const std::vector<std::string>& maternal,
                                        std::optional<Base> ref = Base::A) {
    const std::size_t ns = paternal.size(), nv = paternal[0].size();
    MatrixBuilder b(ns);
    std::vector<Genotype> col(ns);
    std::vector<VariantInfo> vars;
    std::vector<std::string> subjects;
    for (std::size_t s = 0; s < ns; ++s) subjects.push_back("s" + std::to_string(s));
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t s = 0; s < ns; ++s) {
            auto al = [](char c) { return c == '-' ? std::nullopt : std::optional<Base>(pack_allele(c)); };
            col[s] = {al(paternal[s][v]), al(maternal[s][v])};
        }
        b.append_variant(col);
        vars.push_back({"v" + std::to_string(v), 0, static_cast<std::int64_t>(v + 1), ref, Base::C});
    }
    return std::make_shared<const Dataset>(std::move(b).seal(true), subjects, std::vector<std::string>{"1"}, vars);
}

}  // namespace

TEST_CASE("filter_by_region") {
    auto c = testing::random_cohort(3, 5, 400, 0, "2");
    // put a second chromosome after chromosome 2
    for (std::size_t v = 300; v < 400; ++v) c.variants[v].chrom = "3";
    const auto ds = testing::load_cohort(c);
    const View base(ds);
    const long start = c.variants[40].position + 3, end = start + 100'000 / 20;

    const View w = filter_by_region(base, "2", start, end);
    CHECK(variant_ids(w) ==
          ids_where(c, [&](const auto& v) { return v.chrom == "2" && v.position >= start && v.position <= end; }));
    CHECK(w.n_columns() == 2 * w.n_variants());
    for (std::size_t i = 0; i < w.n_columns(); i += 2) {
        CHECK(w.columns()[i].variant == w.columns()[i + 1].variant);
        CHECK(w.columns()[i].allele == 0);
        CHECK(w.columns()[i + 1].allele == 1);
    }
    // inclusive ends
    const long p = c.variants[10].position;
    CHECK(filter_by_region(base, "2", p, p).n_variants() == 1);

    CHECK(filter_by_region(base, "2", 1, 10).n_variants() == 0);
    CHECK(filter_by_region(base, "9", 0, 1L << 40).n_variants() == 0);
    CHECK(filter_by_region(base, "2", 0, 1L << 40).n_variants() == 300);
    check_error(ErrorKind::InvalidRange, [&] { filter_by_region(base, "2", 10, 9); });
    // the base view is untouched
    CHECK(base.n_variants() == 400);
}

TEST_CASE("filter_by_id_list") {
    const auto c = testing::random_cohort(4, 3, 30);
    const View base(testing::load_cohort(c));
    std::vector<std::string> all = ids_where(c, [](auto&) { return true; });
    CHECK(variant_ids(filter_by_id_list(base, all)) == all);

    std::size_t unknown = 0;
    const View one = filter_by_id_list(base, {c.variants[7].id, "rs743616"}, &unknown);
    CHECK(variant_ids(one) == std::vector<std::string>{c.variants[7].id});
    CHECK(unknown == 1);

    const View none = filter_by_id_list(base, {"x1", "x2", "x3"}, &unknown);
    CHECK(none.n_variants() == 0);
    CHECK(unknown == 3);
    // list order does not matter, display order does
    CHECK(variant_ids(filter_by_id_list(base, {all[5], all[2]})) == std::vector<std::string>{all[2], all[5]});
}

TEST_CASE("filter_by_id_regex") {
    const auto c = testing::random_cohort(5, 3, 50);
    const View base(testing::load_cohort(c));
    CHECK(filter_by_id_regex(base, "rs.*").n_variants() == 50);
    CHECK(filter_by_id_regex(base, "^$").n_variants() == 0);
    CHECK(filter_by_id_regex(base, "rs10001[0-9]").n_variants() == 10);
    // whole-ID match, not search
    CHECK(filter_by_id_regex(base, "1000").n_variants() == 0);
    for (const auto& v : c.variants) {
        REQUIRE(variant_ids(filter_by_id_regex(base, v.id)) == variant_ids(filter_by_id_list(base, {v.id})));
    }
    check_error(ErrorKind::InvalidPattern, [&] { filter_by_id_regex(base, "(rs"); });
    check_error(ErrorKind::InvalidPattern, [&] { filter_by_id_regex(base, "[z-a]"); });
}

TEST_CASE("filter_by_frequency") {
    SUBCASE("one alt allele among 400") {
        auto c = testing::random_cohort(6, 200, 2);
        for (auto& row : c.alleles)
            for (auto& cell : row) cell = {c.variants[0].ref, c.variants[0].ref};
        for (auto& row : c.alleles) row[1] = {c.variants[1].ref, c.variants[1].ref};
        c.alleles[17][0][1] = c.variants[0].alt;
        for (std::size_t s = 0; s < 10; ++s) c.alleles[s][1][0] = c.variants[1].alt;  // 10 / 400 = 2.5%
        const View base(testing::load_cohort(c));
        // brute-force count of the fixture
        std::size_t alt = 0, called = 0;
        for (const auto& row : c.alleles)
            for (char a : row[0]) alt += a == c.variants[0].alt, called += a != '-';
        REQUIRE(alt == 1);
        REQUIRE(called == 400);
        CHECK(variant_ids(filter_by_frequency(base, 0.005, FrequencyMode::Above)) ==
              std::vector<std::string>{c.variants[1].id});
        CHECK(variant_ids(filter_by_frequency(base, 0.005, FrequencyMode::Below)) ==
              std::vector<std::string>{c.variants[0].id});
        CHECK(tally_variant(base.dataset(), 0, base.member_subjects()).non_reference == 1);
    }
    SUBCASE("strict boundary and degenerate thresholds") {
        // v0: 1/4 alt, v1: 0 alt, v2: all missing, v3: 4/4 alt
        const auto ds = handmade({"AA-C", "CA-C"}, {"AA-C", "AA-C"});
        const View base(ds);
        CHECK(filter_by_frequency(base, 0.25, FrequencyMode::Above).n_variants() == 1);
        CHECK(filter_by_frequency(base, 0.25, FrequencyMode::Below).n_variants() == 1);
        CHECK(variant_ids(filter_by_frequency(base, 0.0, FrequencyMode::Above)) == std::vector<std::string>{"v0", "v3"});
        CHECK(variant_ids(filter_by_frequency(base, 1.0, FrequencyMode::Below)) == std::vector<std::string>{"v0", "v1"});
        check_error(ErrorKind::InvalidThreshold, [&] { filter_by_frequency(base, -0.01, FrequencyMode::Above); });
        check_error(ErrorKind::InvalidThreshold, [&] { filter_by_frequency(base, 1.5, FrequencyMode::Below); });
        check_error(ErrorKind::InvalidThreshold, [&] { filter_by_frequency(base, std::nan(""), FrequencyMode::Below); });
    }
    SUBCASE("unknown reference") {
        const View base(handmade({"A"}, {"C"}, std::nullopt));
        check_error(ErrorKind::UnknownReference, [&] { filter_by_frequency(base, 0.1, FrequencyMode::Above); });
    }
}

TEST_CASE("filters commute when subjects are fixed") {
    const auto c = testing::random_cohort(8, 20, 200);
    const View base(testing::load_cohort(c));
    const long lo = c.variants[20].position, hi = c.variants[150].position;
    auto a = filter_by_frequency(filter_by_id_regex(filter_by_region(base, "22", lo, hi), "rs1000[0-9]+"), 0.1,
                                 FrequencyMode::Above);
    auto b = filter_by_region(filter_by_frequency(filter_by_id_regex(base, "rs1000[0-9]+"), 0.1, FrequencyMode::Above),
                              "22", lo, hi);
    CHECK(variant_ids(a) == variant_ids(b));
    CHECK(a.n_variants() > 0);
}

TEST_CASE("sort_rows_by_meta") {
    const auto c = testing::random_cohort(9, 40, 3);
    const View base(testing::load_cohort(c));
    SUBCASE("consecutive sorts equal one lexicographic sort") {
        const View v = sort_rows_by_meta(sort_rows_by_meta(base, "Population"), "Super Population");
        std::vector<std::size_t> want(c.subjects.size());
        std::iota(want.begin(), want.end(), 0);
        std::stable_sort(want.begin(), want.end(), [&](auto a, auto b) {
            return std::tie(c.super_population[a], c.population[a]) < std::tie(c.super_population[b], c.population[b]);
        });
        std::vector<std::string> want_labels;
        for (auto s : want) want_labels.push_back(c.subjects[s]);
        CHECK(row_labels(v) == want_labels);
    }
    SUBCASE("numerical keys sort numerically") {
        const View v = sort_rows_by_meta(base, "Age");
        const auto* age = base.dataset().subject_column("Age");
        for (std::size_t i = 1; i < v.n_rows(); ++i)
            CHECK(std::get<double>(age->by_index[v.rows()[i - 1].members[0]]) <=
                  std::get<double>(age->by_index[v.rows()[i].members[0]]));
    }
    SUBCASE("idempotent and trivial cases") {
        const View once = sort_rows_by_meta(base, "Population");
        CHECK(row_labels(sort_rows_by_meta(once, "Population")) == row_labels(once));
        const View single = select(base, {3}, {});
        (void)single;
        auto one = testing::random_cohort(1, 1, 2);
        const View v1(testing::load_cohort(one));
        CHECK(row_labels(sort_rows_by_meta(v1, "Age")) == row_labels(v1));
    }
    SUBCASE("ABSENT sorts last") {
        auto one = testing::random_cohort(1, 4, 2);
        std::istringstream vcf(testing::to_vcf(one));
        std::istringstream m("ID\tScore\nID\tNUMERICAL\nS0\tNA\nS1\t5\nS2\t\nS3\t-2\n");
        auto ds = std::make_shared<const Dataset>(
            attach_meta(parse_vcf(vcf), parse_meta(m, MetaKind::Subject, "m"), MetaKind::Subject));
        CHECK(row_labels(sort_rows_by_meta(View(ds), "Score")) == std::vector<std::string>{"S3", "S1", "S0", "S2"});
    }
    check_error(ErrorKind::UnknownMeta, [&] { sort_rows_by_meta(base, "Height"); });
}

TEST_CASE("sort_columns_by_meta") {
    const auto c = testing::random_cohort(10, 3, 25);
    const View base(testing::load_cohort(c));
    SUBCASE("P/M groups paternal columns first") {
        const View v = sort_columns_by_meta(base, "P/M");
        REQUIRE(v.n_columns() == 50);
        for (std::size_t i = 0; i < 25; ++i) {
            CHECK(v.columns()[i] == AlleleColumn{static_cast<std::uint32_t>(i), 0});
            CHECK(v.columns()[25 + i] == AlleleColumn{static_cast<std::uint32_t>(i), 1});
        }
    }
    SUBCASE("position restores genomic order") {
        const View shuffled = sort_columns_by_meta(sort_columns_by_meta(base, "Score"), "P/M");
        CHECK(shuffled.columns() != base.columns());
        CHECK(sort_columns_by_meta(shuffled, "position").columns() == base.columns());
    }
    SUBCASE("two consecutive sorts equal one composed comparator sort") {
        const View v = sort_columns_by_meta(sort_columns_by_meta(base, "Score"), "Gene");
        std::vector<std::size_t> order(25);
        std::iota(order.begin(), order.end(), 0);
        // oracle keys straight from the fixture writer: Gene = G(v*7%5), Score = v*13%17
        std::stable_sort(order.begin(), order.end(), [](std::size_t a, std::size_t b) {
            return std::pair(a * 7 % 5, a * 13 % 17) < std::pair(b * 7 % 5, b * 13 % 17);
        });
        std::vector<AlleleColumn> want;
        for (auto i : order)
            for (std::uint8_t al : {0, 1}) want.push_back({static_cast<std::uint32_t>(i), al});
        CHECK(v.columns() == want);
    }
    SUBCASE("unphased data has no P/M row") {
        auto u = c;
        u.phased = false;
        const View uv(testing::load_cohort(u));
        check_error(ErrorKind::UnknownMeta, [&] { sort_columns_by_meta(uv, "P/M"); });
    }
    check_error(ErrorKind::UnknownMeta, [&] { sort_columns_by_meta(base, "Age"); });
}

TEST_CASE("consensus_of follows the brute-force oracle") {
    auto check_group = [](const std::vector<char>& alleles) {
        std::array<std::uint32_t, 4> counts{};
        for (char a : alleles)
            if (a != '-') ++counts[static_cast<int>(pack_allele(a))];
        for (bool maximum : {true, false}) {
            const AggregatedCell got = consensus_of(counts, maximum ? AlleleMethod::Maximum : AlleleMethod::Minimum);
            const auto want = testing::naive_consensus(alleles, maximum);
            REQUIRE((got.consensus ? unpack_allele(*got.consensus) : '-') == want.base);
            REQUIRE(got.count == static_cast<std::uint32_t>(want.count));
            REQUIRE(got.total == static_cast<std::uint32_t>(want.total));
        }
    };
    check_group({'A', 'A', 'C'});
    check_group({'G', 'T', 'T', 'G'});
    check_group({'-', '-'});
    check_group({});
    testing::Rng rng(77);
    const char alphabet[5] = {'A', 'C', 'G', 'T', '-'};
    for (int i = 0; i < 1000; ++i) {
        std::vector<char> g(1 + rng.below(30));
        for (char& a : g) a = alphabet[rng.below(5)];
        check_group(g);
    }
    const std::array<std::uint32_t, 4> aac{2, 1, 0, 0};
    CHECK(consensus_of(aac, AlleleMethod::Maximum) == AggregatedCell{Base::A, 2, 3});
    CHECK(consensus_of(aac, AlleleMethod::Minimum) == AggregatedCell{Base::C, 1, 3});
}

TEST_CASE("aggregate_rows") {
    SUBCASE("paternal {A, A, C}") {
        const auto ds = handmade({"A", "A", "C"}, {"G", "G", "G"});
        View sel = select(View(ds), {0, 1, 2}, {});
        const View mx = aggregate_rows(sel, Grouping::by_selection(), AlleleMethod::Maximum, MetaMethod::Mean);
        REQUIRE(mx.n_rows() == 1);
        CHECK(mx.rows()[0].label == "AGN3");
        const ViewCell p = mx.cell(0, 0);
        CHECK(p.aggregated);
        CHECK(p.base == Base::A);
        CHECK(p.count == 2);
        CHECK(p.total == 3);
        const ViewCell mn = aggregate_rows(sel, Grouping::by_selection(), AlleleMethod::Minimum, MetaMethod::Mean).cell(0, 0);
        CHECK(mn.base == Base::C);
        CHECK(mn.frequency() == doctest::Approx(1.0 / 3));
        // unanimous maternal column
        for (auto m : {AlleleMethod::Maximum, AlleleMethod::Minimum}) {
            const ViewCell u = aggregate_rows(sel, Grouping::by_selection(), m, MetaMethod::Mean).cell(0, 1);
            CHECK(u.base == Base::G);
            CHECK(u.frequency() == 1.0);
        }
    }
    SUBCASE("selection groups only the selected rows") {
        const auto ds = handmade({"A", "C", "G", "T"}, {"A", "C", "G", "T"});
        const View v = aggregate_rows(select(View(ds), {1, 3}, {}), Grouping::by_selection(), AlleleMethod::Maximum,
                                      MetaMethod::Mean);
        CHECK(row_labels(v) == std::vector<std::string>{"s0", "AGN2", "s2"});
        CHECK(v.rows()[1].members == std::vector<std::uint32_t>{1, 3});
        check_error(ErrorKind::InvalidGrouping, [&] {
            aggregate_rows(View(ds), Grouping::by_selection(), AlleleMethod::Maximum, MetaMethod::Mean);
        });
    }
    SUBCASE("fourteen populations give fourteen AGN rows") {
        auto c = testing::random_cohort(12, 140, 10);
        testing::Rng rng(5);
        std::map<std::string, std::size_t> sizes;
        for (auto& p : c.population) {
            p = "POP" + std::to_string(rng.below(14));
            ++sizes[p];
        }
        REQUIRE(sizes.size() == 14);
        const View base(testing::load_cohort(c));
        const View v = aggregate_rows(base, Grouping::by_column("Population"), AlleleMethod::Minimum, MetaMethod::Mean);
        REQUIRE(v.n_rows() == 14);
        std::size_t members = 0;
        for (const auto& r : v.rows()) {
            const std::string pop = std::get<std::string>(v.row_meta(r, *base.dataset().subject_column("Population")));
            CHECK(r.members.size() == sizes[pop]);
            CHECK(r.label == "AGN" + std::to_string(sizes[pop]));
            members += r.members.size();
            // conservation and recount for every column
            for (std::size_t col = 0; col < v.n_columns(); ++col) {
                std::vector<char> alleles;
                for (auto s : r.members) {
                    const Genotype g = base.dataset().matrix().get_genotype(s, v.columns()[col].variant);
                    const auto a = g.allele(v.columns()[col].allele);
                    alleles.push_back(a ? unpack_allele(*a) : '-');
                }
                const auto want = testing::naive_consensus(alleles, false);
                const ViewCell got = v.cell(&r - v.rows().data(), col);
                REQUIRE(got.total == static_cast<std::uint32_t>(want.total));
                REQUIRE(got.count == static_cast<std::uint32_t>(want.count));
            }
        }
        CHECK(members == 140);
    }
    SUBCASE("meta aggregation methods") {
        auto c = testing::random_cohort(13, 6, 4);
        for (std::size_t s = 0; s < 6; ++s) c.population[s] = s < 3 ? "A" : "B";
        // Age = 20 + s
        const View base(testing::load_cohort(c));
        const auto* age = base.dataset().subject_column("Age");
        auto ages = [&](MetaMethod m) {
            const View v = aggregate_rows(base, Grouping::by_column("Population"), AlleleMethod::Maximum, m);
            return std::pair(std::get<double>(v.row_meta(v.rows()[0], *age)), std::get<double>(v.row_meta(v.rows()[1], *age)));
        };
        CHECK(ages(MetaMethod::Min) == std::pair(20.0, 23.0));
        CHECK(ages(MetaMethod::Max) == std::pair(22.0, 25.0));
        CHECK(ages(MetaMethod::Mean) == std::pair(21.0, 24.0));
        const View v = aggregate_rows(base, Grouping::by_column("Population"), AlleleMethod::Maximum, MetaMethod::Mean);
        CHECK(std::get<std::string>(v.row_meta(v.rows()[1], *base.dataset().subject_column("Population"))) == "B");
        // aggregated rows sort by their aggregated meta
        CHECK(row_labels(sort_rows_by_meta(v, "Age")) == row_labels(v));
    }
    SUBCASE("grouping errors") {
        const View base(testing::load_cohort(testing::random_cohort(14, 5, 3)));
        check_error(ErrorKind::InvalidGrouping, [&] {
            aggregate_rows(base, Grouping::by_column("Age"), AlleleMethod::Maximum, MetaMethod::Mean);
        });
        check_error(ErrorKind::UnknownMeta, [&] {
            aggregate_rows(base, Grouping::by_column("Nope"), AlleleMethod::Maximum, MetaMethod::Mean);
        });
    }
}

TEST_CASE("selection survives transforms by identity") {
    const auto c = testing::random_cohort(15, 6, 10);
    const View base(testing::load_cohort(c));
    const View s = select(base, {1, 4}, {0, 1, 6});
    CHECK(s.selected_row_indices() == std::vector<std::size_t>{1, 4});
    const View sorted = sort_rows_by_meta(s, "Age");
    std::vector<std::string> chosen;
    for (auto i : sorted.selected_row_indices()) chosen.push_back(sorted.rows()[i].label);
    std::sort(chosen.begin(), chosen.end());
    CHECK(chosen == std::vector<std::string>{"S1", "S4"});
    const View filtered = filter_by_id_list(s, {c.variants[3].id, c.variants[0].id});
    CHECK(filtered.selected_column_indices() == std::vector<std::size_t>{0, 1, 2});
    CHECK(clear_selection(s).selected_row_indices().empty());
    check_error(ErrorKind::InvalidRange, [&] { select(base, {6}, {}); });
    check_error(ErrorKind::InvalidRange, [&] { select(base, {}, {20}); });
}

TEST_CASE("ViewChain push, undo, reset and replay") {
    const auto c = testing::random_cohort(16, 12, 40);
    const auto ds = testing::load_cohort(c);
    ViewChain chain(ds);
    const std::vector<Step> steps{step::FilterRegex{"rs1000[0-2][0-9]"},
                                  step::SortRows{"Population"},
                                  step::FilterFrequency{0.05, FrequencyMode::Above},
                                  step::SortColumns{"P/M"},
                                  step::Select{{0, 1, 2}, {}},
                                  step::AggregateRows{Grouping::by_selection(), AlleleMethod::Minimum, MetaMethod::Max},
                                  step::SortRows{"Age"}};
    for (const auto& s : steps) chain.push(s);
    CHECK(chain.steps().size() == 7);
    CHECK(chain.version() == 7);
    const View final_view = chain.view();

    const ViewChain again = ViewChain::replay(ds, chain.steps());
    CHECK(row_labels(again.view()) == row_labels(final_view));
    CHECK(again.view().columns() == final_view.columns());
    for (std::size_t r = 0; r < final_view.n_rows(); ++r)
        for (std::size_t col = 0; col < final_view.n_columns(); ++col)
            REQUIRE(again.view().cell(r, col) == final_view.cell(r, col));

    // a failing push leaves the chain as it was
    CHECK_THROWS_AS(chain.push(step::SortRows{"missing"}), Error);
    CHECK(chain.steps().size() == 7);
    CHECK(chain.version() == 7);

    REQUIRE(chain.undo());
    CHECK(chain.steps().size() == 6);
    const ViewChain six = ViewChain::replay(ds, std::vector<Step>(steps.begin(), steps.begin() + 6));
    CHECK(row_labels(chain.view()) == row_labels(six.view()));

    chain.reset();
    CHECK(chain.steps().empty());
    CHECK(row_labels(chain.view()) == row_labels(View(ds)));
    CHECK_FALSE(chain.undo());
}
