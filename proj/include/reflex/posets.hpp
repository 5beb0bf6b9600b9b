#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "reflex/groups.hpp"
#include "reflex/weights.hpp"

namespace reflex {

/// Finite poset on {0..n-1}, n <= 64, stored as reflexive-transitive down/up sets.
class Poset {
public:
    /// Closes the relation list (u <= v pairs) reflexively and transitively;
    /// throws InvalidInput when the closure has a cycle.
    static Poset from_relations(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& relations);
    static Poset antichain(std::size_t n);
    /// 0 <= 1 <= ... <= n-1.
    static Poset chain(std::size_t n);

    std::size_t size() const { return down_.size(); }
    bool leq(std::size_t u, std::size_t v) const { return (down_[v] >> u) & 1U; }
    /// Elements below or equal to u.
    Subset down(std::size_t u) const { return down_[u]; }
    /// Elements above or equal to u.
    Subset up(std::size_t u) const { return up_[u]; }
    Subset full_set() const;
    /// Order-reversed poset.
    Poset dual() const;
    /// Cover pairs (u, v): u < v with nothing strictly between.
    std::vector<std::pair<std::size_t, std::size_t>> cover_relations() const;

    friend bool operator==(const Poset& a, const Poset& b) { return a.down_ == b.down_; }

private:
    std::vector<Subset> down_;
    std::vector<Subset> up_;
};

/// All down-closed subsets, ascending by mask value; includes the empty set and Omega.
std::vector<Subset> ideals(const Poset& p);
bool is_ideal(const Poset& p, Subset s);

/// Smallest ideal containing b.
Subset closure(const Poset& p, Subset b);

enum class Extreme { Max, Min };
Subset extremes(const Poset& p, Subset b, Extreme mode);

struct Levels {
    /// len_P(u), starting at 1.
    std::vector<std::uint32_t> len;
    /// by_level[j-1] = W_j.
    std::vector<Subset> by_level;
    std::uint32_t height = 0;

    /// Largest r in [1, height] with d inside W_r u ... u W_height; height for the empty set.
    std::uint32_t sigma(Subset d) const;
    /// W_1 u ... u W_r.
    Subset lower_union(std::uint32_t r) const;
};
Levels levels(const Poset& p);

bool is_hierarchical(const Poset& p);

using Permutation = std::vector<std::uint32_t>;

/// Image of a subset under a permutation.
Subset apply_permutation(const Permutation& lambda, Subset s);

/// Enumerates order isomorphisms lambda of p onto itself with
/// src_labels[u] == dst_labels[lambda(u)] for every u. The visitor returns
/// false to stop. Labels may be empty (no constraint). Returns the number of
/// maps visited.
std::uint64_t search_automorphisms(const Poset& p, const std::vector<std::int64_t>& src_labels,
                                   const std::vector<std::int64_t>& dst_labels,
                                   const std::function<bool(const Permutation&)>& visit);

/// Aut(P), optionally restricted to label-preserving maps. Requires n <= 12
/// and throws BudgetExceeded when more than `cap` automorphisms exist.
std::vector<Permutation> automorphisms(const Poset& p, const std::vector<std::int64_t>& labels = {},
                                       std::uint64_t cap = 1'000'000);

/// Interns arbitrary comparable per-element keys into dense integer labels.
template <class Key>
std::vector<std::int64_t> dense_labels(const std::vector<Key>& keys) {
    std::vector<Key> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::int64_t> out;
    out.reserve(keys.size());
    for (const auto& k : keys)
        out.push_back(static_cast<std::int64_t>(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin()));
    return out;
}

/// A label-preserving automorphism carrying `from` onto `to`, if any.
std::optional<Permutation> find_automorphism_mapping(const Poset& p, const std::vector<std::int64_t>& labels,
                                                     Subset from, Subset to);

struct UdpResult {
    bool holds = true;
    /// Ideals with equal weight that no omega-preserving automorphism relates.
    std::optional<std::pair<Subset, Subset>> witness;
};
/// Unique decomposition property of (P, omega). Requires n <= 12.
UdpResult udp_check(const Poset& p, const WeightFunction& omega);

}  // namespace reflex
