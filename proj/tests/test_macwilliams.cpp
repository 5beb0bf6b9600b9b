#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <set>
#include <sstream>

#include "reflex/errors.hpp"
#include "reflex/macwilliams.hpp"
#include "support.hpp"

using namespace reflex;
using testing::pick;

namespace {

std::shared_ptr<const PrimeFieldSpace> ones(std::uint32_t p, std::uint32_t n) {
    return PrimeFieldSpace::make(p, std::vector<std::uint32_t>(n, 1));
}

std::shared_ptr<const PrimeFieldSpace> random_space(std::mt19937& rng, std::uint32_t p, std::uint32_t max_n) {
    const std::uint32_t n = pick(rng, 1, max_n);
    std::vector<std::uint32_t> blocks;
    for (std::uint32_t left = n; left > 0;) {
        const std::uint32_t k = pick(rng, 1, std::min(left, 3u));
        blocks.push_back(k);
        left -= k;
    }
    return PrimeFieldSpace::make(p, blocks);
}

int weight(const PrimeFieldSpace::Vector& v) {
    int w = 0;
    for (auto x : v) w += x != 0;
    return w;
}

// Every matrix over F_p, kept when invertible and class-preserving on all vectors.
std::set<LinearMap> brute_inv(const PrimeFieldSpace& space, const Partition& delta) {
    const auto p = space.characteristic();
    const auto n = space.dimension();
    std::set<LinearMap> out;
    std::vector<std::uint32_t> digits(n * n, 0);
    while (true) {
        std::vector<PrimeFieldSpace::Vector> cols(n, PrimeFieldSpace::Vector(n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) cols[j][i] = digits[j * n + i];
        const auto m = LinearMap::from_columns(p, cols);
        bool ok = m.invertible;
        for (std::uint64_t x = 0; ok && x < space.size(); ++x)
            ok = delta.class_of(space.index_of(m.apply(space.vector_of(x)))) == delta.class_of(x);
        if (ok) out.insert(m);
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
        if (i == digits.size()) break;
    }
    return out;
}

std::vector<LinearMap> permutation_matrices(std::uint32_t p, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<LinearMap> out;
    do {
        std::vector<PrimeFieldSpace::Vector> cols(n, PrimeFieldSpace::Vector(n, 0));
        for (std::size_t j = 0; j < n; ++j) cols[j][perm[j]] = 1;
        out.push_back(LinearMap::from_columns(p, cols));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

TEST_CASE("spaces and vectors") {
    auto s = PrimeFieldSpace::make(3, {2, 1});
    CHECK(s->dimension() == 3);
    CHECK(s->size() == 27);
    for (std::uint64_t x = 0; x < s->size(); ++x) {
        const auto v = s->vector_of(x);
        CHECK(s->index_of(v) == x);
        CHECK(s->host()->element(x).residues == v);
    }
    CHECK(s->block_support({0, 2, 0}) == 1);
    CHECK(s->block_support({0, 0, 1}) == 2);
    CHECK(s->inner({1, 2, 1}, {2, 2, 1}) == (2 + 4 + 1) % 3);
    CHECK(s->inverse(2) == 2);
    CHECK_THROWS_AS(PrimeFieldSpace::make(4, {1}), InvalidInput);
    CHECK_THROWS_AS(PrimeFieldSpace::make(2, {1, 0}), InvalidInput);
    CHECK_THROWS_AS(PrimeFieldSpace::from_host(std::make_shared<const GroupProduct>(GroupProduct::build({{2}, {3}}))),
                    InvalidInput);
    CHECK(PrimeFieldSpace::from_host(s->host())->blocks() == std::vector<std::uint32_t>{2, 1});
}

TEST_CASE("row reduction is canonical") {
    auto s = ones(3, 4);
    const auto a = LinearCode::from_generators(s, {{1, 2, 0, 1}, {2, 1, 1, 0}});
    const auto b = LinearCode::from_generators(s, {{0, 0, 1, 1}, {1, 2, 0, 1}, {2, 1, 2, 1}});
    CHECK(a == b);
    CHECK(a.dimension() == 2);
    CHECK(a.size() == 9);
    CHECK(a.contains({0, 0, 2, 2}));
    CHECK_FALSE(a.contains({1, 0, 0, 0}));
    for (auto x : a.elements()) CHECK(a.contains(s->vector_of(x)));
    CHECK_THROWS_AS(LinearCode::from_generators(s, {{1, 2, 3, 0}}), InvalidInput);
}

TEST_CASE("dual codes") {
    SUBCASE("zero code") {
        auto s = ones(2, 5);
        CHECK(dual_code(LinearCode::zero(s)) == LinearCode::whole(s));
        CHECK(dual_code(LinearCode::whole(s)) == LinearCode::zero(s));
    }
    SUBCASE("repetition code in F_2^5 gives the even-weight code") {
        auto s = ones(2, 5);
        const auto rep = LinearCode::from_generators(s, {{1, 1, 1, 1, 1}});
        const auto dual = dual_code(rep);
        CHECK(dual.dimension() == 4);
        std::uint32_t even = 0;
        for (std::uint64_t x = 0; x < 32; ++x) {
            const bool is_even = weight(s->vector_of(x)) % 2 == 0;
            even += is_even;
            CHECK(dual.contains(s->vector_of(x)) == is_even);
        }
        CHECK(even == dual.size());
    }
    SUBCASE("random codes: biduality, dimensions and the character form") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 60; ++trial) {
            const std::uint32_t p = trial % 3 == 0 ? 3 : 2;
            auto s = random_space(rng, p, p == 2 ? 8 : 5);
            const auto c = testing::random_code(s, rng, pick(rng, 0, static_cast<std::uint32_t>(s->dimension())));
            const auto d = dual_code(c);
            CHECK(c.dimension() + d.dimension() == s->dimension());
            CHECK(dual_code(d) == c);
            CHECK(d.elements() == annihilator_by_characters(c));
            for (const auto& a : c.rows())
                for (const auto& b : d.rows()) CHECK(s->inner(a, b) == 0);
        }
    }
}

TEST_CASE("generator files") {
    std::istringstream ok("2 5 1 1 1 1 1\n1 1 1 1 1\n\n");
    const auto c = read_generator_matrix(ok);
    CHECK(c.dimension() == 1);
    CHECK(c.space().dimension() == 5);
    std::istringstream blocks("3 3 2 1\n1 0 2\n0 1 1\n");
    const auto b = read_generator_matrix(blocks);
    CHECK(b.space().blocks() == std::vector<std::uint32_t>{2, 1});
    CHECK(b.dimension() == 2);
    std::istringstream defaults("2 3\n1 1 0\n");
    CHECK(read_generator_matrix(defaults).space().blocks().size() == 3);
    for (const char* bad : {"", "2 5 2 2\n", "4 2 1 1\n1 0\n", "2 3 1 1 1\n1 2 0\n", "2 3 1 1 1\n1 0\n",
                            "2 3 1 1 1\n1 x 0\n", "2 3 1 one 1\n"}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_generator_matrix(in), ParseError);
    }
}

TEST_CASE("distributions") {
    auto s = ones(2, 5);
    const auto ham = induce_hamming(s->host());
    const auto rep = LinearCode::from_generators(s, {{1, 1, 1, 1, 1}});
    CHECK(distribution(rep, ham) == std::vector<std::uint64_t>{1, 0, 0, 0, 0, 1});
    const auto zero = distribution(LinearCode::zero(s), ham);
    CHECK(zero[ham.class_of(0)] == 1);
    CHECK(std::accumulate(zero.begin(), zero.end(), std::uint64_t{0}) == 1);
    CHECK(distribution(LinearCode::whole(s), ham) == ham.class_sizes());
}

TEST_CASE("MacWilliams identity") {
    SUBCASE("zero code reduces to class sizes") {
        auto s = ones(3, 3);
        const auto gamma = induce_CO(s->host(), Covering::all_k_subsets(3, 2));
        const auto lambda = left_dual(gamma).partition;
        const auto rep = macwilliams_verify(LinearCode::zero(s), lambda, gamma);
        CHECK(rep.holds());
        const auto sizes = gamma.class_sizes();
        for (std::size_t b = 0; b < sizes.size(); ++b) CHECK(rep.lhs[b] == BigInt(static_cast<unsigned long>(sizes[b])));
    }
    SUBCASE("random binary codes, Hamming on both sides") {
        std::mt19937 rng(8);
        auto s = ones(2, 8);
        const auto ham = induce_hamming(s->host());
        for (int trial = 0; trial < 20; ++trial) {
            const auto rep = macwilliams_verify(testing::random_code(s, rng, pick(rng, 0, 8)), ham, ham);
            CHECK(rep.holds());
        }
    }
    SUBCASE("random ternary codes against pair coverings") {
        std::mt19937 rng(9);
        auto s = ones(3, 5);
        const auto gamma = induce_CO(s->host(), Covering::all_k_subsets(5, 2));
        const auto lambda = left_dual(gamma).partition;
        for (int trial = 0; trial < 20; ++trial)
            CHECK(macwilliams_verify(testing::random_code(s, rng, pick(rng, 0, 5)), lambda, gamma).holds());
    }
    SUBCASE("lambda not finer than the dual is rejected") {
        auto s = ones(2, 4);
        const auto ham = induce_hamming(s->host());
        CHECK_THROWS_AS(macwilliams_verify(LinearCode::zero(s), trivial_partition(s->host()), ham), PreconditionFailed);
    }
    SUBCASE("a tampered right side is caught") {
        auto s = ones(2, 4);
        const auto ham = induce_hamming(s->host());
        auto rep = macwilliams_verify(LinearCode::from_generators(s, {{1, 1, 0, 0}}), ham, ham);
        REQUIRE(rep.holds());
        rep.rhs[1] += CycInt::integer(rep.rhs[1].ring(), 1);
        CHECK_FALSE(rep.holds());
    }
    SUBCASE("additive codes of mixed groups") {
        std::mt19937 rng(10);
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testing::random_group(rng, 400);
            const auto gamma = testing::random_partition(g, rng, 4);
            const auto lambda = left_dual(gamma).partition;
            std::vector<std::uint64_t> gens;
            for (std::uint32_t i = 0, cnt = pick(rng, 0, 2); i < cnt; ++i)
                gens.push_back(pick(rng, 0, static_cast<std::uint32_t>(g->order() - 1)));
            CHECK(macwilliams_verify_additive(gens, lambda, gamma).holds());
        }
    }
}

TEST_CASE("subgroups and subspaces") {
    const auto g = GroupProduct::build({{4}, {6}});
    const auto h = generated_subgroup(g, {g.index_of({2, 3})});
    CHECK(h.size() == 2);
    CHECK(generated_subgroup(g, {}).size() == 1);
    CHECK(generated_subgroup(g, {g.index_of({1, 0}), g.index_of({0, 1})}).size() == 24);
    CHECK(subspace_count(2, 3) == 1 + 7 + 7 + 1);
    CHECK(subspace_count(3, 2) == 1 + 4 + 1);
    CHECK(subspace_count(2, 8) == 417199);
    for (auto [p, n] : {std::pair{2u, 4u}, {2u, 5u}, {3u, 3u}}) {
        auto s = ones(p, n);
        std::set<std::vector<std::uint64_t>> seen;
        std::uint64_t total = 0;
        for (std::size_t d = 0; d <= n; ++d)
            for_each_subspace(s, d, [&](const LinearCode& c) {
                CHECK(c.dimension() == d);
                seen.insert(c.elements());
                ++total;
            });
        CHECK(total == subspace_count(p, n));
        CHECK(seen.size() == total);
    }
}

TEST_CASE("F-invariance") {
    auto s = ones(3, 2);
    CHECK(is_f_invariant(induce_hamming(s->host())));
    std::vector<std::uint32_t> ids(9, 0);
    ids[s->index_of({1, 0})] = 1;
    CHECK_FALSE(is_f_invariant(Partition(s->host(), ids)));
    CHECK(projective_points(*s).size() == 4);
    CHECK(projective_points(*ones(2, 5)).size() == 31);
    std::mt19937 rng(2);
    for (int i = 0; i < 10; ++i) {
        CHECK(is_f_invariant(testing::random_f_invariant(ones(3, 3), rng, 5)));
        CHECK(is_f_invariant(left_dual(testing::random_f_invariant(ones(3, 3), rng, 5)).partition));
    }
}

TEST_CASE("one-dimensional code check") {
    SUBCASE("Hamming against Hamming") {
        auto s = ones(2, 5);
        const auto ham = induce_hamming(s->host());
        const auto rep = pami_onedim_check(ham, ham);
        CHECK(rep.holds);
        CHECK(rep.finer_than_dual);
        CHECK(rep.codes_checked == 31);
    }
    SUBCASE("triple coverings fail together with reflexivity") {
        auto s = ones(2, 5);
        const auto co = induce_CO(s->host(), Covering::all_k_subsets(5, 3));
        const auto rep = pami_onedim_check(co, co);
        CHECK_FALSE(rep.holds);
        CHECK_FALSE(rep.finer_than_dual);
        REQUIRE(rep.witness);
        const auto& [c1, c2] = *rep.witness;
        CHECK(distribution(c1, co) == distribution(c2, co));
        CHECK(distribution(dual_code(c1), co) != distribution(dual_code(c2), co));
        CHECK_FALSE(reflexivity_check(co).reflexive);
    }
    SUBCASE("singleton lambda") {
        // Over F_3 singletons are not F-invariant, so this lives over F_2.
        std::mt19937 rng(4);
        auto s = ones(2, 4);
        const auto gamma = testing::random_f_invariant(s, rng, 4);
        const auto rep = pami_onedim_check(singleton_partition(s->host()), gamma);
        CHECK(rep.holds);
        CHECK(rep.finer_than_dual);
    }
    SUBCASE("zero sharing a class") {
        auto s = ones(2, 3);
        const auto rep = pami_onedim_check(trivial_partition(s->host()), induce_hamming(s->host()));
        CHECK_FALSE(rep.zero_is_class);
        CHECK_FALSE(rep.holds);
        CHECK(rep.agrees());
    }
    SUBCASE("non-invariant input is rejected") {
        auto s = ones(3, 2);
        std::vector<std::uint32_t> ids(9, 0);
        ids[1] = 1;
        CHECK_THROWS_AS(pami_onedim_check(Partition(s->host(), ids), induce_hamming(s->host())), InvalidInput);
    }
}

TEST_CASE("three PAMI statements agree") {
    std::mt19937 rng(77);
    int holds = 0, fails = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint32_t p = trial % 4 == 3 ? 3 : 2;
        auto s = random_space(rng, p, p == 2 ? 6 : 3);
        const auto gamma = testing::random_f_invariant(s, rng, 5);
        Partition lambda;
        switch (trial % 4) {
            case 0: lambda = left_dual(gamma).partition; break;
            case 1: lambda = testing::perturb_f_invariant(left_dual(gamma).partition, rng, true); break;
            case 2: lambda = testing::perturb_f_invariant(left_dual(gamma).partition, rng, false); break;
            default: lambda = testing::random_f_invariant(s, rng, 5, pick(rng, 0, 3) != 0); break;
        }
        const auto one = pami_onedim_check(lambda, gamma);
        const auto all = pami_all_codes_check(lambda, gamma);
        CHECK(one.agrees());
        CHECK(all.agrees());
        CHECK(one.holds == all.holds);
        (all.holds ? holds : fails)++;
        if (lambda.class_count() <= gamma.class_count()) {
            const bool reflexive_and_equal =
                reflexivity_check(gamma).reflexive && lambda == left_dual(gamma).partition;
            CHECK(all.holds == reflexive_and_equal);
        }
    }
    CHECK(holds > 5);
    CHECK(fails > 5);
}

TEST_CASE("linear maps") {
    const auto id = LinearMap::identity(3, 3);
    const auto m = LinearMap::from_columns(3, {{1, 1, 0}, {0, 1, 2}, {2, 0, 1}});
    CHECK(m.invertible);
    CHECK(m * m.inverse() == id);
    CHECK(m.inverse() * m == id);
    CHECK(m.apply({1, 0, 0}) == PrimeFieldSpace::Vector{1, 1, 0});
    CHECK((m * m).apply({0, 1, 1}) == m.apply(m.apply({0, 1, 1})));
    const auto singular = LinearMap::from_columns(2, {{1, 1}, {1, 1}});
    CHECK_FALSE(singular.invertible);
    CHECK_THROWS_AS(singular.inverse(), PreconditionFailed);
    CHECK(general_linear_order(2, 5) == 9999360);
    CHECK(general_linear_order(3, 3) == 11232);
    CHECK(inv_enumeration_feasible(2, 5));
    CHECK_FALSE(inv_enumeration_feasible(2, 6));
    CHECK(inv_enumeration_feasible(3, 3));
    CHECK_FALSE(inv_enumeration_feasible(3, 4));
}

TEST_CASE("inv enumeration") {
    SUBCASE("singletons give the identity") {
        auto s = ones(2, 4);
        const auto maps = inv_enumerate(singleton_partition(s->host()));
        REQUIRE(maps.size() == 1);
        CHECK(maps[0] == LinearMap::identity(2, 4));
    }
    SUBCASE("Hamming classes keep the monomial maps") {
        auto s = ones(2, 4);
        const auto maps = inv_enumerate(induce_hamming(s->host()));
        CHECK(maps.size() == 24);
        const std::set<LinearMap> got(maps.begin(), maps.end());
        for (const auto& perm : permutation_matrices(2, 4)) CHECK(got.count(perm));
        CHECK(is_group(maps));
        CHECK(inv_enumerate(induce_hamming(ones(3, 3)->host())).size() == 48);
    }
    SUBCASE("the whole group") {
        auto s = ones(2, 3);
        std::vector<std::uint32_t> ids(8, 1);
        ids[0] = 0;
        CHECK(inv_enumerate(Partition(s->host(), ids)).size() == 168);
        CHECK_THROWS_AS(inv_enumerate(singleton_partition(ones(2, 6)->host())), BudgetExceeded);
        InvOptions tight;
        tight.max_maps = 100;
        CHECK_THROWS_AS(inv_enumerate(Partition(s->host(), ids), tight), BudgetExceeded);
    }
    SUBCASE("against every matrix") {
        std::mt19937 rng(12);
        for (int trial = 0; trial < 30; ++trial) {
            const bool binary = trial % 2 == 0;
            auto s = binary ? random_space(rng, 2, 3) : random_space(rng, 3, 2);
            const auto delta = trial % 3 == 0 ? testing::random_partition(s->host(), rng, 3)
                                              : testing::random_f_invariant(s, rng, 4, trial % 5 != 0);
            InvOptions opts;
            opts.jobs = 2;
            const auto maps = inv_enumerate(delta, opts);
            const std::set<LinearMap> got(maps.begin(), maps.end());
            CHECK(got.size() == maps.size());
            CHECK(got == brute_inv(*s, delta));
            CHECK(is_group(maps));
            CHECK(general_linear_order(s->characteristic(), s->dimension()) % maps.size() == 0);
            const auto orbits = inv_orbits(delta);
            CHECK(orbits.order == maps.size());
            CHECK(orbits.orbits == orbit_partition(s, maps));
            CHECK(is_finer(orbits.orbits, delta));
        }
    }
}

TEST_CASE("orbit partitions") {
    auto s = ones(2, 4);
    CHECK(orbit_partition(s, {LinearMap::identity(2, 4)}) == singleton_partition(s->host()));
    CHECK(orbit_partition(s, permutation_matrices(2, 4)) == induce_hamming(s->host()));
    // A single 4-cycle already generates the cyclic shifts.
    const auto shift = LinearMap::from_columns(2, {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}});
    const auto cyc = orbit_partition(s, {shift});
    CHECK(cyc.class_count() == 6);
    CHECK_FALSE(is_group({shift}));
    CHECK_THROWS_AS(orbit_partition(s, {LinearMap::identity(2, 3)}), ShapeMismatch);
}

TEST_CASE("witness search") {
    SUBCASE("Hamming on F_2^4") {
        const auto res = mep_witness_search(induce_hamming(ones(2, 4)->host()));
        CHECK_FALSE(res.witness);
        CHECK(res.delta_equals_orbits);
        CHECK(res.inv_order == 24);
    }
    SUBCASE("singletons") {
        const auto res = mep_witness_search(singleton_partition(ones(3, 2)->host()));
        CHECK_FALSE(res.witness);
        CHECK(res.inv_order == 1);
    }
    SUBCASE("triple coverings on F_2^5") {
        auto s = ones(2, 5);
        const auto co = induce_CO(s->host(), Covering::all_k_subsets(5, 3));
        const auto res = mep_witness_search(co);
        REQUIRE(res.witness);
        const auto& w = *res.witness;
        CHECK(co.class_of(w.alpha_index) == co.class_of(w.beta_index));
        CHECK(w.alpha_index != 0);
        CHECK(w.beta_index != 0);
        CHECK(s->index_of(w.alpha) == w.alpha_index);
        CHECK(w.class_label == "1");
        // No class-preserving map sends alpha to beta.
        const auto maps = inv_enumerate(co);
        CHECK(maps.size() == w.inv_order);
        for (const auto& m : maps) CHECK(m.apply(w.alpha) != w.beta);
        CHECK_FALSE(res.delta_equals_orbits);
    }
}

TEST_CASE("orbit equality, reflexivity and witnesses line up") {
    std::mt19937 rng(21);
    int reflexive_seen = 0, witness_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto s = random_space(rng, 2, trial < 50 ? 4 : 5);
        Partition delta;
        if (trial % 3 == 0) {
            std::vector<Subset> members;
            for (std::uint32_t i = 0, cnt = pick(rng, 1, 3); i < cnt; ++i)
                members.push_back(pick(rng, 1, (1u << s->blocks().size()) - 1));
            members.push_back(Subset{1} << pick(rng, 0, static_cast<std::uint32_t>(s->blocks().size()) - 1));
            Subset all = 0;
            for (auto m : members) all |= m;
            members.push_back(((Subset{1} << s->blocks().size()) - 1) & ~all);
            members.erase(std::remove(members.begin(), members.end(), Subset{0}), members.end());
            delta = induce_CO(s->host(), Covering::explicit_members(s->blocks().size(), members));
        } else {
            delta = testing::random_f_invariant(s, rng, 2 + trial % 6);
        }
        const auto res = mep_witness_search(delta);
        const bool reflexive = reflexivity_check(delta).reflexive;
        if (res.delta_equals_orbits) CHECK(reflexive);
        if (!reflexive) CHECK(res.witness.has_value());
        CHECK(res.witness.has_value() == !res.delta_equals_orbits);
        reflexive_seen += reflexive;
        witness_seen += res.witness.has_value();
    }
    CHECK(reflexive_seen > 0);
    CHECK(witness_seen > 0);
}

TEST_CASE("characters chi and chi^2 give the same dual") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto s = random_space(rng, 3, 3);
        const auto gamma = testing::random_f_invariant(s, rng, 5, trial % 4 != 0);
        DualOptions squared;
        squared.character_power = 2;
        CHECK(left_dual(gamma).partition == left_dual(gamma, squared).partition);
        DualOptions direct = squared;
        direct.engine = DualEngine::Direct;
        CHECK(left_dual(gamma).partition == left_dual(gamma, direct).partition);
    }
}

TEST_CASE("vector view matches the group view") {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        auto s = random_space(rng, trial % 2 ? 3 : 2, trial % 2 ? 4 : 7);
        const std::size_t n = s->blocks().size();
        const auto t = Covering::all_k_subsets(n, pick(rng, 1, static_cast<std::uint32_t>(n)));
        CHECK(co_partition_vector_view(s, t).class_vector() == induce_CO(s->host(), t).class_vector());
        const auto poset = testing::random_poset(rng, n);
        std::vector<Rational> w;
        for (std::size_t i = 0; i < n; ++i) w.emplace_back(pick(rng, 1, 3), pick(rng, 1, 2));
        const WeightFunction omega(w);
        CHECK(q_partition_vector_view(s, poset, omega).class_vector() ==
              induce_Q(s->host(), poset, omega).class_vector());
    }
}

TEST_CASE("anti-chain coverings: MacWilliams identity against the partition criterion") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::uint32_t subsets = (1u << n) - 1;
        for (std::uint32_t family = 1; family < (1u << subsets); ++family) {
            std::vector<Subset> members;
            for (std::uint32_t s = 0; s < subsets; ++s)
                if (family >> s & 1) members.push_back(s + 1);
            Subset all = 0;
            for (auto m : members) all |= m;
            if (all != (Subset{1} << n) - 1) continue;
            const auto t = Covering::explicit_members(n, members);
            if (!t.is_antichain()) continue;
            for (const auto& blocks : {std::vector<std::uint32_t>(n, 1), std::vector<std::uint32_t>(n, 2)}) {
                for (std::uint32_t p : {2u, 3u}) {
                    if (p == 3 && blocks[0] == 2 && n == 3) continue;
                    auto space = PrimeFieldSpace::make(p, blocks);
                    const auto co = induce_CO(space->host(), t);
                    const auto identity = pami_all_codes_check(co, co);
                    const auto thm = covering_duality_check(space->host(), t);
                    CHECK(identity.holds == thm.equal);
                    CHECK(identity.holds == thm.partition_equal_products);
                }
            }
            // Unequal block sizes break the balance even for partitions of Omega.
            if (n == 2 && members.size() == 2) {
                auto space = PrimeFieldSpace::make(2, {1, 2});
                const auto co = induce_CO(space->host(), t);
                CHECK_FALSE(pami_all_codes_check(co, co).holds);
                CHECK_FALSE(covering_duality_check(space->host(), t).partition_equal_products);
            }
        }
    }
}

TEST_CASE("extension-property instances") {
    SUBCASE("(2, 5, 3) is refuted by a witness") {
        const auto r = extension_property_report(2, 5, 3);
        CHECK(r.refuted);
        CHECK(r.status == "refuted");
        CHECK(r.strongest_tier == "witness");
        CHECK_FALSE(r.relies_on_cited_implication);
        REQUIRE(r.witness);
        CHECK(r.inv_order == std::uint64_t{120});
        CHECK(r.brute_force_reflexive == false);
        CHECK(r.conflicts.empty());
    }
    SUBCASE("(3, 3, 2) is refuted, criteria included") {
        const auto r = extension_property_report(3, 3, 2);
        CHECK(r.refuted);
        const auto it = std::find_if(r.evidence.begin(), r.evidence.end(),
                                     [](const auto& e) { return e.tier == "criteria-non-reflexive"; });
        REQUIRE(it != r.evidence.end());
        CHECK(it->detail.find("hamming-dual") != std::string::npos);
        CHECK(it->relies_on_cited_implication);
        CHECK(r.conflicts.empty());
    }
    SUBCASE("(3, 3, 2) without brute force leans on the cited step and says so") {
        ExtensionOptions opts;
        opts.max_brute_elements = 1;
        const auto r = extension_property_report(3, 3, 2, opts);
        CHECK(r.refuted);
        CHECK(r.strongest_tier == "criteria-non-reflexive");
        CHECK(r.relies_on_cited_implication);
        CHECK_FALSE(r.witness);
    }
    SUBCASE("(2, 4, 3) stays open") {
        const auto r = extension_property_report(2, 4, 3);
        CHECK_FALSE(r.refuted);
        CHECK(r.status == "open");
        CHECK(r.strongest_tier == "none");
        CHECK(r.brute_force_reflexive == true);
        CHECK(r.inv_order == std::uint64_t{1344});
        CHECK(r.conflicts.empty());
    }
    SUBCASE("bad parameters") {
        CHECK_THROWS_AS(extension_property_report(4, 5, 3), InvalidInput);
        CHECK_THROWS_AS(extension_property_report(2, 3, 4), InvalidInput);
    }
    SUBCASE("no conflicts across small instances") {
        for (std::uint32_t q : {2u, 3u})
            for (std::uint32_t n = 1; n <= (q == 2 ? 6u : 4u); ++n)
                for (std::uint32_t k = 1; k <= n; ++k) {
                    const auto r = extension_property_report(q, n, k);
                    CHECK(r.conflicts.empty());
                    if (r.brute_force_reflexive == false) CHECK(r.refuted);
                }
    }
}
