#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "reflex/errors.hpp"
#include "reflex/groups.hpp"
#include "support.hpp"

using namespace reflex;

TEST_CASE("group construction") {
    const auto g = GroupProduct::uniform(5, 2);
    CHECK(g.order() == 32);
    CHECK(g.exponent() == 2);
    CHECK(g.elementary_two());
    CHECK(g.full_set() == 0b11111);

    const auto h = GroupProduct::build({{2, 2}, {3}});
    CHECK(h.coordinate_orders() == std::vector<std::uint64_t>{4, 3});
    CHECK(h.order() == 12);
    CHECK(h.exponent() == 6);
    CHECK(h.factor_count() == 3);
    CHECK(h.factor_coordinate(1) == 0);
    CHECK(h.factor_coordinate(2) == 1);

    CHECK_THROWS_AS(GroupProduct::build({{1}}), InvalidInput);
    CHECK_THROWS_AS(GroupProduct::build({{}}), InvalidInput);
    CHECK_THROWS_AS(GroupProduct::build({}), InvalidInput);
}

TEST_CASE("supports") {
    const auto g = GroupProduct::uniform(3, 2);
    CHECK(g.support(0) == 0);
    CHECK(g.support(g.index_of({1, 0, 1})) == 0b101);
    CHECK(g.support(g.index_of({1, 1, 1})) == g.full_set());

    // A coordinate with two factors is in the support when either residue is non-zero.
    const auto h = GroupProduct::build({{2, 3}, {2}});
    CHECK(h.support(h.index_of({0, 2, 0})) == 0b01);
    CHECK(h.support(h.index_of({0, 0, 1})) == 0b10);
    const auto all = h.all_supports();
    for (std::uint64_t i = 0; i < h.order(); ++i) CHECK(all[i] == h.support(i));
}

TEST_CASE("element enumeration order") {
    const auto z2 = GroupProduct::uniform(1, 2);
    std::vector<std::uint64_t> seen;
    for (const auto& e : z2.elements()) seen.push_back(e.index);
    CHECK(seen == std::vector<std::uint64_t>{0, 1});
    CHECK(z2.element(0).residues == std::vector<std::uint32_t>{0});

    CHECK(GroupProduct::uniform(5, 2).elements().size() == 32);

    const auto g = GroupProduct::build({{3}, {2}});
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 2; ++b) {
            CHECK(g.index_of({a, b}) == 2 * a + b);
            CHECK(g.element(2 * a + b).residues == std::vector<std::uint32_t>{a, b});
        }

    Budget tight;
    tight.max_elements = 16;
    CHECK_THROWS_AS(GroupProduct::uniform(5, 2).elements(tight), BudgetExceeded);
}

TEST_CASE("group law on random products") {
    std::mt19937 rng(21);
    for (int t = 0; t < 50; ++t) {
        const auto g = testing::random_group(rng, 300);
        for (int s = 0; s < 40; ++s) {
            const std::uint64_t a = rng() % g->order(), b = rng() % g->order(), c = rng() % g->order();
            CHECK(g->add(a, b) == g->add(b, a));
            CHECK(g->add(g->add(a, b), c) == g->add(a, g->add(b, c)));
            CHECK(g->add(a, 0) == a);
            CHECK(g->add(a, g->negate(a)) == 0);
            CHECK(g->scale(a, 3) == g->add(a, g->add(a, a)));
            CHECK(g->scale(a, g->exponent()) == 0);
            // Componentwise check against residues.
            const auto ea = g->element(a), eb = g->element(b), sum = g->element(g->add(a, b));
            for (std::size_t f = 0; f < g->factor_count(); ++f)
                CHECK(sum.residues[f] == (ea.residues[f] + eb.residues[f]) % g->factor_order(f));
        }
    }
}

TEST_CASE("standard pairing") {
    const auto g = GroupProduct::uniform(2, 2);
    const auto v = pairing(g, g.element(g.index_of({1, 1})), g, g.element(g.index_of({1, 0})));
    CHECK(v == CycInt::integer(2, -1));

    std::mt19937 rng(4);
    for (int t = 0; t < 40; ++t) {
        const auto h = testing::random_group(rng, 200);
        const auto m = h->exponent();
        for (int s = 0; s < 30; ++s) {
            const std::uint64_t a = rng() % h->order(), b = rng() % h->order(), c = rng() % h->order();
            CHECK(h->pairing_exponent(0, b) == 0);
            CHECK(h->pairing_exponent(a, b) == h->pairing_exponent(b, a));
            CHECK(h->pairing_exponent(h->add(a, c), b) == (h->pairing_exponent(a, b) + h->pairing_exponent(c, b)) % m);
            CHECK(h->pairing_exponent(a, b, 2) == (2 * h->pairing_exponent(a, b)) % m);
            const std::int64_t e[] = {h->pairing_exponent(a, b)};
            CHECK(pairing(*h, h->element(a), *h, h->element(b)) == root_of_unity_sum(m, e));
        }
    }
    CHECK_THROWS_AS(pairing(g, g.element(0), GroupProduct::uniform(2, 3), GroupProduct::uniform(2, 3).element(0)),
                    ShapeMismatch);
}

TEST_CASE("pairing is non-degenerate") {
    std::mt19937 rng(8);
    for (int t = 0; t < 25; ++t) {
        const auto h = testing::random_group(rng, 1u << 9);
        std::uint64_t trivial = 0;
        for (std::uint64_t a = 0; a < h->order(); ++a) {
            bool all_one = true;
            for (std::uint64_t b = 0; b < h->order() && all_one; ++b) all_one = h->pairing_exponent(a, b) == 0;
            trivial += all_one;
        }
        CHECK(trivial == 1);
    }
}

TEST_CASE("gcd and lcm") {
    CHECK(gcd_u64(12, 18) == 6);
    CHECK(gcd_u64(0, 5) == 5);
    CHECK(lcm_u64(4, 6) == 12);
    CHECK(lcm_u64(1, 7) == 7);
}
