#include "reflex/posets.hpp"

#include <map>
#include <numeric>

#include "reflex/errors.hpp"

namespace reflex {

namespace {

constexpr std::size_t kMaxIdealElements = 20;
constexpr std::size_t kMaxAutomorphismElements = 12;

Subset bit(std::size_t i) { return Subset{1} << i; }

/// Elements sorted so that every element follows everything below it.
std::vector<std::size_t> linear_extension(const Poset& p) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return subset_size(p.down(a)) < subset_size(p.down(b));
    });
    return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// Poset

Poset Poset::from_relations(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& relations) {
    if (n == 0) throw InvalidInput("poset needs at least one element");
    if (n > 64) throw InvalidInput("at most 64 poset elements are supported");
    Poset p;
    p.down_.assign(n, 0);
    for (std::size_t u = 0; u < n; ++u) p.down_[u] = bit(u);
    for (auto [u, v] : relations) {
        if (u >= n || v >= n)
            throw InvalidInput("relation (" + std::to_string(u) + "," + std::to_string(v) + ") outside 0.." +
                               std::to_string(n - 1));
        p.down_[v] |= bit(u);
    }
    // Warshall over bitsets: everything below k is below whatever is above k.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t v = 0; v < n; ++v)
            if ((p.down_[v] >> k) & 1U) p.down_[v] |= p.down_[k];
    p.up_.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = 0; u < n; ++u)
            if ((p.down_[v] >> u) & 1U) p.up_[u] |= bit(v);
    for (std::size_t u = 0; u < n; ++u) {
        Subset both = p.down_[u] & p.up_[u] & ~bit(u);
        if (both != 0) {
            std::size_t v = static_cast<std::size_t>(__builtin_ctzll(both));
            throw InvalidInput("relations contain a cycle through elements " + std::to_string(u) + " and " +
                               std::to_string(v));
        }
    }
    return p;
}

Poset Poset::antichain(std::size_t n) { return from_relations(n, {}); }

Poset Poset::chain(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i + 1 < n; ++i) rel.emplace_back(i, i + 1);
    return from_relations(n, rel);
}

Subset Poset::full_set() const { return size() == 64 ? ~Subset{0} : (bit(size()) - 1); }

Poset Poset::dual() const {
    Poset d;
    d.down_ = up_;
    d.up_ = down_;
    return d;
}

std::vector<std::pair<std::size_t, std::size_t>> Poset::cover_relations() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < size(); ++v) {
        Subset below = down_[v] & ~bit(v);
        for (std::size_t u = 0; u < size(); ++u) {
            if (!((below >> u) & 1U)) continue;
            // u is covered by v when no w strictly between them exists.
            Subset between = below & up_[u] & ~bit(u);
            if (between == 0) out.emplace_back(u, v);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ideals, closure, extremes

bool is_ideal(const Poset& p, Subset s) {
    for (std::size_t u = 0; u < p.size(); ++u)
        if (((s >> u) & 1U) && !subset_contains(s, p.down(u))) return false;
    return true;
}

std::vector<Subset> ideals(const Poset& p) {
    if (p.size() > kMaxIdealElements)
        throw BudgetExceeded("ideal enumeration limited to " + std::to_string(kMaxIdealElements) + " elements, got " +
                             std::to_string(p.size()));
    const auto order = linear_extension(p);
    std::vector<Subset> out;
    std::function<void(std::size_t, Subset)> rec = [&](std::size_t pos, Subset current) {
        if (pos == order.size()) {
            out.push_back(current);
            return;
        }
        const std::size_t u = order[pos];
        rec(pos + 1, current);
        if (subset_contains(current, p.down(u) & ~bit(u))) rec(pos + 1, current | bit(u));
    };
    rec(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

Subset closure(const Poset& p, Subset b) {
    Subset out = 0;
    for (std::size_t u = 0; u < p.size(); ++u)
        if ((b >> u) & 1U) out |= p.down(u);
    return out;
}

Subset extremes(const Poset& p, Subset b, Extreme mode) {
    Subset out = 0;
    for (std::size_t u = 0; u < p.size(); ++u) {
        if (!((b >> u) & 1U)) continue;
        Subset strict = (mode == Extreme::Max ? p.up(u) : p.down(u)) & ~bit(u);
        if ((strict & b) == 0) out |= bit(u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Levels

std::uint32_t Levels::sigma(Subset d) const {
    if (d == 0) return height;
    std::uint32_t r = height;
    for (std::size_t u = 0; u < len.size(); ++u)
        if ((d >> u) & 1U) r = std::min(r, len[u]);
    return r;
}

Subset Levels::lower_union(std::uint32_t r) const {
    Subset out = 0;
    for (std::uint32_t j = 1; j <= r && j <= height; ++j) out |= by_level[j - 1];
    return out;
}

Levels levels(const Poset& p) {
    Levels lv;
    lv.len.assign(p.size(), 1);
    for (std::size_t u : linear_extension(p)) {
        Subset below = p.down(u) & ~bit(u);
        for (std::size_t v = 0; v < p.size(); ++v)
            if ((below >> v) & 1U) lv.len[u] = std::max(lv.len[u], lv.len[v] + 1);
    }
    lv.height = *std::max_element(lv.len.begin(), lv.len.end());
    lv.by_level.assign(lv.height, 0);
    for (std::size_t u = 0; u < p.size(); ++u) lv.by_level[lv.len[u] - 1] |= bit(u);
    return lv;
}

bool is_hierarchical(const Poset& p) {
    const Levels lv = levels(p);
    for (std::size_t u = 0; u < p.size(); ++u)
        for (std::size_t v = 0; v < p.size(); ++v)
            if (lv.len[u] + 1 <= lv.len[v] && !p.leq(u, v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Automorphisms

Subset apply_permutation(const Permutation& lambda, Subset s) {
    Subset out = 0;
    for (std::size_t u = 0; u < lambda.size(); ++u)
        if ((s >> u) & 1U) out |= bit(lambda[u]);
    return out;
}

std::uint64_t search_automorphisms(const Poset& p, const std::vector<std::int64_t>& src_labels,
                                   const std::vector<std::int64_t>& dst_labels,
                                   const std::function<bool(const Permutation&)>& visit) {
    const std::size_t n = p.size();
    const bool labelled = !src_labels.empty() || !dst_labels.empty();
    if (labelled && (src_labels.size() != n || dst_labels.size() != n))
        throw InvalidInput("automorphism labels must have one entry per element");
    const Levels lv = levels(p);
    struct Invariant {
        std::uint32_t len;
        int ups;
        int downs;
        bool operator==(const Invariant&) const = default;
    };
    std::vector<Invariant> inv(n);
    for (std::size_t u = 0; u < n; ++u) inv[u] = {lv.len[u], subset_size(p.up(u)), subset_size(p.down(u))};

    // Candidates per source element, fixed up front.
    std::vector<std::vector<std::uint32_t>> candidates(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (inv[u] == inv[v] && (!labelled || src_labels[u] == dst_labels[v]))
                candidates[u].push_back(static_cast<std::uint32_t>(v));
    for (std::size_t u = 0; u < n; ++u)
        if (candidates[u].empty()) return 0;

    // Assign the most constrained elements first.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return candidates[a].size() < candidates[b].size(); });

    Permutation lambda(n, 0);
    Subset used = 0;
    std::uint64_t visited = 0;
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (stop) return;
        if (pos == n) {
            ++visited;
            if (!visit(lambda)) stop = true;
            return;
        }
        const std::size_t u = order[pos];
        for (std::uint32_t v : candidates[u]) {
            if ((used >> v) & 1U) continue;
            bool ok = true;
            for (std::size_t q = 0; q < pos && ok; ++q) {
                const std::size_t w = order[q];
                const std::size_t lw = lambda[w];
                ok = p.leq(w, u) == p.leq(lw, v) && p.leq(u, w) == p.leq(v, lw);
            }
            if (!ok) continue;
            lambda[u] = v;
            used |= bit(v);
            rec(pos + 1);
            used &= ~bit(v);
            if (stop) return;
        }
    };
    rec(0);
    return visited;
}

std::vector<Permutation> automorphisms(const Poset& p, const std::vector<std::int64_t>& labels, std::uint64_t cap) {
    if (p.size() > kMaxAutomorphismElements)
        throw BudgetExceeded("automorphism enumeration limited to " + std::to_string(kMaxAutomorphismElements) +
                             " elements, got " + std::to_string(p.size()));
    std::vector<Permutation> out;
    search_automorphisms(p, labels, labels, [&](const Permutation& lambda) {
        if (out.size() >= cap)
            throw BudgetExceeded("more than " + std::to_string(cap) + " automorphisms");
        out.push_back(lambda);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Permutation> find_automorphism_mapping(const Poset& p, const std::vector<std::int64_t>& labels,
                                                     Subset from, Subset to) {
    if (subset_size(from) != subset_size(to)) return std::nullopt;
    const std::size_t n = p.size();
    std::vector<std::int64_t> src(n), dst(n);
    for (std::size_t u = 0; u < n; ++u) {
        const std::int64_t base = labels.empty() ? 0 : labels.at(u) * 2;
        src[u] = base + static_cast<std::int64_t>((from >> u) & 1U);
        dst[u] = base + static_cast<std::int64_t>((to >> u) & 1U);
    }
    std::optional<Permutation> found;
    search_automorphisms(p, src, dst, [&](const Permutation& lambda) {
        found = lambda;
        return false;
    });
    return found;
}

UdpResult udp_check(const Poset& p, const WeightFunction& omega) {
    if (p.size() > kMaxAutomorphismElements)
        throw BudgetExceeded("UDP check limited to " + std::to_string(kMaxAutomorphismElements) + " elements, got " +
                             std::to_string(p.size()));
    if (omega.size() != p.size()) throw ShapeMismatch("weight function size differs from the poset");
    const auto labels = dense_labels(omega.values());
    std::map<Rational, std::vector<Subset>> buckets;
    for (Subset ideal : ideals(p)) buckets[omega.varpi(ideal)].push_back(ideal);
    UdpResult result;
    for (const auto& [weight, members] : buckets) {
        const Subset first = members.front();
        for (std::size_t i = 1; i < members.size(); ++i) {
            if (!find_automorphism_mapping(p, labels, first, members[i])) {
                result.holds = false;
                result.witness = std::make_pair(first, members[i]);
                return result;
            }
        }
    }
    return result;
}

}  // namespace reflex
