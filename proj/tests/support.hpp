#pragma once

// Shared generators and independent oracles for the test binaries.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "reflex/exactarith.hpp"
#include "reflex/groups.hpp"
#include "reflex/macwilliams.hpp"
#include "reflex/partitions.hpp"
#include "reflex/posets.hpp"

namespace testing {

using namespace reflex;

inline std::uint32_t pick(std::mt19937& rng, std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
}

/// Random product of cyclic groups with order at most `max_order`.
inline std::shared_ptr<const GroupProduct> random_group(std::mt19937& rng, std::uint64_t max_order,
                                                        std::uint32_t max_cyclic = 6) {
    for (;;) {
        const std::uint32_t n = pick(rng, 1, 4);
        std::vector<std::vector<std::uint32_t>> coords(n);
        std::uint64_t order = 1;
        for (auto& c : coords) {
            const std::uint32_t parts = pick(rng, 1, 2);
            for (std::uint32_t t = 0; t < parts; ++t) {
                const std::uint32_t d = pick(rng, 2, max_cyclic);
                c.push_back(d);
                order *= d;
            }
        }
        if (order <= max_order) return std::make_shared<const GroupProduct>(GroupProduct::build(coords));
    }
}

/// Random partition with at most `max_classes` raw labels.
inline Partition random_partition(std::shared_ptr<const GroupProduct> g, std::mt19937& rng, std::uint32_t max_classes) {
    const std::uint32_t classes = pick(rng, 1, max_classes);
    std::vector<std::uint32_t> ids(g->order());
    for (auto& id : ids) id = pick(rng, 0, classes - 1);
    return Partition(g, ids);
}

/// Random poset from a random DAG on a shuffled order.
inline Poset random_poset(std::mt19937& rng, std::size_t n, double density = 0.35) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution edge(density);
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng)) rel.emplace_back(perm[i], perm[j]);
    return Poset::from_relations(n, rel);
}

/// Random hierarchical poset: random level sizes, every lower level below every higher one.
inline Poset random_hierarchical(std::mt19937& rng, std::size_t n) {
    std::vector<std::size_t> level(n);
    std::uint32_t cur = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && pick(rng, 0, 1)) ++cur;
        level[i] = cur;
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (level[i] < level[j]) rel.emplace_back(perm[i], perm[j]);
    return Poset::from_relations(n, rel);
}

/// Signatures from per-class exponent histograms, with each pairing exponent
/// recomputed from residues rather than taken from the library.
inline std::vector<std::vector<CycInt>> oracle_signatures(const Partition& gamma) {
    const GroupProduct& g = gamma.group();
    const std::uint32_t m = g.exponent();
    const auto ring = CyclotomicReducer::make(m);
    std::vector<std::vector<std::uint32_t>> res(g.order());
    for (std::uint64_t a = 0; a < g.order(); ++a) res[a] = g.element(a).residues;
    std::vector<std::vector<CycInt>> out(g.order());
    for (std::uint64_t a = 0; a < g.order(); ++a) {
        std::vector<std::vector<std::int64_t>> hist(gamma.class_count(), std::vector<std::int64_t>(m, 0));
        for (std::uint64_t b = 0; b < g.order(); ++b) {
            std::uint64_t e = 0;
            for (std::size_t f = 0; f < g.factor_count(); ++f)
                e += std::uint64_t{res[a][f]} * res[b][f] * (m / g.factor_order(f));
            ++hist[gamma.class_of(b)][e % m];
        }
        for (const auto& h : hist) out[a].push_back(CycInt::from_histogram(ring, h));
    }
    return out;
}

/// l(gamma) by grouping oracle signatures.
inline Partition oracle_left_dual(const Partition& gamma) {
    const auto sigs = oracle_signatures(gamma);
    std::vector<std::uint32_t> ids(sigs.size());
    std::vector<std::size_t> firsts;
    for (std::size_t a = 0; a < sigs.size(); ++a) {
        std::uint32_t id = static_cast<std::uint32_t>(firsts.size());
        for (std::size_t k = 0; k < firsts.size(); ++k)
            if (sigs[firsts[k]] == sigs[a]) {
                id = static_cast<std::uint32_t>(k);
                break;
            }
        if (id == firsts.size()) firsts.push_back(a);
        ids[a] = id;
    }
    return Partition(gamma.host(), ids);
}

/// Random F-invariant partition of a prime-field space: each 1-dimensional
/// code minus zero lands in one random class; zero gets its own class unless
/// `zero_alone` is false.
inline Partition random_f_invariant(std::shared_ptr<const PrimeFieldSpace> space, std::mt19937& rng,
                                    std::uint32_t max_classes, bool zero_alone = true) {
    const auto& g = *space->host();
    const std::uint32_t classes = pick(rng, 1, max_classes);
    std::vector<std::uint32_t> ids(g.order(), 0);
    if (!zero_alone) ids[0] = pick(rng, 1, classes);
    for (auto x : projective_points(*space)) {
        const std::uint32_t c = pick(rng, 1, classes);
        for (std::uint32_t s = 1; s < space->characteristic(); ++s) ids[g.scale(x, s)] = c;
    }
    return Partition(space->host(), ids);
}

/// Splits classes of an F-invariant partition along 1-dimensional codes (refine)
/// or merges two classes (coarsen); either way the result stays F-invariant.
inline Partition perturb_f_invariant(const Partition& base, std::mt19937& rng, bool refine) {
    const auto space = PrimeFieldSpace::from_host(base.host());
    const auto& g = *space->host();
    std::vector<std::uint32_t> ids(base.class_vector());
    if (refine) {
        const std::uint32_t fresh = base.class_count();
        for (auto x : projective_points(*space))
            if (pick(rng, 0, 3) == 0)
                for (std::uint32_t s = 1; s < space->characteristic(); ++s) ids[g.scale(x, s)] += fresh;
    } else if (base.class_count() > 1) {
        const std::uint32_t a = pick(rng, 0, base.class_count() - 1);
        std::uint32_t b = pick(rng, 0, base.class_count() - 2);
        if (b >= a) ++b;
        for (auto& id : ids)
            if (id == b) id = a;
    }
    return Partition(base.host(), ids);
}

inline LinearCode random_code(std::shared_ptr<const PrimeFieldSpace> space, std::mt19937& rng, std::uint32_t rows) {
    std::vector<PrimeFieldSpace::Vector> gens(rows, PrimeFieldSpace::Vector(space->dimension()));
    for (auto& r : gens)
        for (auto& x : r) x = pick(rng, 0, space->characteristic() - 1);
    return LinearCode::from_generators(space, gens);
}

}  // namespace testing
