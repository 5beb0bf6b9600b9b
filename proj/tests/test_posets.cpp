#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "reflex/errors.hpp"
#include "reflex/metrics.hpp"
#include "reflex/posets.hpp"

using namespace reflex;

namespace {

Poset v_poset() { return Poset::from_relations(3, {{0, 2}, {1, 2}}); }

Poset random_poset(std::mt19937& rng, std::size_t n) {
    // Relations only go upward in index order, so the closure is acyclic.
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (rng() % 3 == 0) rel.emplace_back(u, v);
    return Poset::from_relations(n, rel);
}

// Ideals by testing every subset against the down sets.
std::vector<Subset> ideals_oracle(const Poset& p) {
    std::vector<Subset> out;
    for (Subset s = 0; s < (Subset{1} << p.size()); ++s) {
        bool ok = true;
        for (std::size_t u = 0; u < p.size() && ok; ++u)
            if ((s >> u) & 1U) ok = subset_contains(s, p.down(u));
        if (ok) out.push_back(s);
    }
    return out;
}

std::uint64_t count_automorphisms_oracle(const Poset& p) {
    Permutation perm(p.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (std::size_t u = 0; u < p.size() && ok; ++u)
            for (std::size_t v = 0; v < p.size() && ok; ++v) ok = p.leq(u, v) == p.leq(perm[u], perm[v]);
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace

TEST_CASE("construction and closure of relations") {
    const auto a = Poset::from_relations(3, {});
    CHECK(a == Poset::antichain(3));
    const auto c = Poset::from_relations(3, {{0, 1}, {1, 2}});
    CHECK(c == Poset::chain(3));
    CHECK(c.leq(0, 2));
    CHECK(!c.leq(2, 0));
    CHECK(c.cover_relations() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
    CHECK_THROWS_AS(Poset::from_relations(2, {{0, 1}, {1, 0}}), InvalidInput);
    CHECK_THROWS_AS(Poset::from_relations(2, {{0, 5}}), InvalidInput);
}

TEST_CASE("ideals") {
    CHECK(ideals(Poset::antichain(3)).size() == 8);
    CHECK(ideals(Poset::chain(3)) == std::vector<Subset>{0b000, 0b001, 0b011, 0b111});
    CHECK(ideals(v_poset()) == std::vector<Subset>{0b000, 0b001, 0b010, 0b011, 0b111});
    std::mt19937 rng(2);
    for (int t = 0; t < 60; ++t) {
        const auto p = random_poset(rng, 1 + rng() % 8);
        const auto got = ideals(p);
        CHECK(got == ideals_oracle(p));
        for (auto s : got) CHECK(is_ideal(p, s));
    }
}

TEST_CASE("closure and extremes") {
    const auto c = Poset::chain(3);
    CHECK(closure(c, 0) == 0);
    CHECK(closure(c, 0b100) == 0b111);
    CHECK(closure(Poset::antichain(4), 0b1010) == 0b1010);
    CHECK(extremes(c, 0, Extreme::Max) == 0);
    CHECK(extremes(c, 0b111, Extreme::Max) == 0b100);
    CHECK(extremes(c, 0b111, Extreme::Min) == 0b001);
    CHECK(extremes(Poset::antichain(3), 0b101, Extreme::Min) == 0b101);
    CHECK(extremes(v_poset(), 0b111, Extreme::Min) == 0b011);

    std::mt19937 rng(6);
    for (int t = 0; t < 60; ++t) {
        const auto p = random_poset(rng, 1 + rng() % 7);
        const Subset b = rng() & p.full_set();
        const auto cl = closure(p, b);
        CHECK(is_ideal(p, cl));
        CHECK(subset_contains(cl, b));
        CHECK(closure(p, extremes(p, cl, Extreme::Max)) == cl);
    }
}

TEST_CASE("levels and sigma") {
    const auto a = levels(Poset::antichain(3));
    CHECK(a.len == std::vector<std::uint32_t>{1, 1, 1});
    CHECK(a.height == 1);
    CHECK(a.by_level == std::vector<Subset>{0b111});

    const auto c = levels(Poset::chain(3));
    CHECK(c.len == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(c.by_level == std::vector<Subset>{0b001, 0b010, 0b100});
    CHECK(c.lower_union(2) == 0b011);

    const auto v = levels(v_poset());
    CHECK(v.sigma(0b100) == 2);
    CHECK(v.sigma(0b101) == 1);
    CHECK(v.sigma(0) == v.height);
}

TEST_CASE("hierarchical posets") {
    CHECK(is_hierarchical(Poset::antichain(4)));
    CHECK(is_hierarchical(Poset::chain(4)));
    CHECK(is_hierarchical(v_poset()));
    CHECK(!is_hierarchical(Poset::from_relations(4, {{0, 2}, {1, 2}})));
}

TEST_CASE("dual poset") {
    CHECK(Poset::antichain(3).dual() == Poset::antichain(3));
    CHECK(Poset::chain(3).dual() == Poset::from_relations(3, {{2, 1}, {1, 0}}));
    std::mt19937 rng(10);
    for (int t = 0; t < 40; ++t) {
        const auto p = random_poset(rng, 1 + rng() % 8);
        CHECK(p.dual().dual() == p);
    }
}

TEST_CASE("automorphisms") {
    CHECK(automorphisms(Poset::antichain(3)).size() == 6);
    CHECK(automorphisms(Poset::chain(3)) == std::vector<Permutation>{{0, 1, 2}});
    const auto fixed = automorphisms(Poset::antichain(3), {2, 2, 3});
    CHECK(fixed.size() == 2);
    for (const auto& perm : fixed) CHECK(perm[2] == 2);
    CHECK_THROWS_AS(automorphisms(Poset::antichain(8), {}, 100), BudgetExceeded);

    std::mt19937 rng(13);
    for (int t = 0; t < 40; ++t) {
        const auto p = random_poset(rng, 1 + rng() % 6);
        CHECK(search_automorphisms(p, {}, {}, [](const Permutation&) { return true; }) ==
              count_automorphisms_oracle(p));
    }

    const auto m = find_automorphism_mapping(v_poset(), {}, 0b001, 0b010);
    REQUIRE(m.has_value());
    CHECK(apply_permutation(*m, 0b001) == 0b010);
    CHECK(!find_automorphism_mapping(v_poset(), {}, 0b001, 0b100).has_value());
}

TEST_CASE("unique decomposition property") {
    CHECK(udp_check(Poset::chain(3), WeightFunction::constant(3)).holds);
    CHECK(udp_check(Poset::antichain(4), WeightFunction::constant(4)).holds);
    const auto r = udp_check(Poset::antichain(3), WeightFunction({1, 1, 2}));
    CHECK(!r.holds);
    REQUIRE(r.witness.has_value());
    const std::set<Subset> pair{r.witness->first, r.witness->second};
    CHECK(pair == std::set<Subset>{0b011, 0b100});
}

TEST_CASE("weighted poset weight") {
    const auto g = GroupProduct::uniform(3, 2);
    const auto anti = Poset::antichain(3);
    const auto one = WeightFunction::constant(3);
    for (std::uint64_t i = 0; i < g.order(); ++i)
        CHECK(wpm_weight(anti, one, g, g.element(i)) == subset_size(g.support(i)));
    CHECK(wpm_weight(Poset::chain(3), one, 0b010) == 2);
    CHECK(wpm_weight(Poset::chain(3), one, 0) == 0);
    CHECK(wpm_weight(Poset::chain(3), WeightFunction({Rational(1, 2), 1, 3}), 0b100) == Rational(9, 2));
}
