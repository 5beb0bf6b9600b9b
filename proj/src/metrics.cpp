#include "reflex/metrics.hpp"

#include <algorithm>
#include <unordered_map>
#include <deque>

#include "reflex/errors.hpp"

namespace reflex {

Rational wpm_weight(const Poset& p, const WeightFunction& omega, Subset support) {
    return omega.varpi(closure(p, support));
}

Rational wpm_weight(const Poset& p, const WeightFunction& omega, const GroupProduct& g, const GroupElement& beta) {
    if (g.coordinate_count() != p.size()) throw ShapeMismatch("group and poset have different coordinate counts");
    return wpm_weight(p, omega, g.support(beta));
}

Covering Covering::explicit_members(std::size_t n, std::vector<Subset> members) {
    if (n == 0 || n > 64) throw InvalidInput("covering universe size must be in 1..64");
    if (members.empty()) throw InvalidInput("covering needs at least one member");
    const Subset full = n == 64 ? ~Subset{0} : ((Subset{1} << n) - 1);
    Subset uni = 0;
    for (Subset m : members) {
        if (m == 0) throw InvalidInput("covering members must be nonempty");
        if ((m & ~full) != 0) throw InvalidInput("covering member outside the universe");
        uni |= m;
    }
    if (uni != full) throw InvalidInput("covering members do not cover every coordinate");
    Covering c;
    c.n_ = n;
    c.members_ = std::move(members);
    return c;
}

Covering Covering::all_k_subsets(std::size_t n, std::size_t k) {
    if (n == 0 || n > 64) throw InvalidInput("covering universe size must be in 1..64");
    if (k < 1 || k > n)
        throw InvalidInput("k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
    Covering c;
    c.n_ = n;
    c.k_ = k;
    return c;
}

Covering Covering::materialize() const {
    if (!is_logical()) return *this;
    if (n_ > 12) throw BudgetExceeded("materializing P(k, Omega) is limited to 12 coordinates");
    std::vector<Subset> members;
    for (Subset s = 1; s < (Subset{1} << n_); ++s)
        if (static_cast<std::size_t>(subset_size(s)) == k_) members.push_back(s);
    return explicit_members(n_, std::move(members));
}

bool Covering::is_antichain() const {
    if (is_logical()) return true;
    for (std::size_t i = 0; i < members_.size(); ++i)
        for (std::size_t j = 0; j < members_.size(); ++j)
            if (i != j && subset_contains(members_[j], members_[i])) return false;
    return true;
}

std::uint32_t Covering::weight(Subset a) const {
    if (is_logical()) return pk_weight(k_, a);
    return covering_weight(members_, a);
}

std::uint32_t pk_weight(std::size_t k, Subset a) {
    const auto size = static_cast<std::size_t>(subset_size(a));
    return static_cast<std::uint32_t>((size + k - 1) / k);
}

std::uint32_t covering_weight(const std::vector<Subset>& members, Subset a) {
    if (a == 0) return 0;
    std::vector<Subset> useful;
    for (Subset m : members)
        if (m & a) useful.push_back(m & a);
    Subset reachable = 0;
    for (Subset m : useful) reachable |= m;
    if (!subset_contains(reachable, a)) throw InvalidInput("subset is not covered by the covering");
    std::unordered_map<Subset, std::uint32_t> dist;
    std::deque<Subset> frontier{0};
    dist[0] = 0;
    while (!frontier.empty()) {
        const Subset cur = frontier.front();
        frontier.pop_front();
        const std::uint32_t d = dist[cur];
        // Extend by members that cover the lowest uncovered coordinate only;
        // every cover must contain one of those, so nothing is lost.
        const Subset missing = a & ~cur;
        const Subset low = missing & (~missing + 1);
        for (Subset m : useful) {
            if (!(m & low)) continue;
            const Subset next = cur | m;
            if (next == a) return d + 1;
            if (dist.emplace(next, d + 1).second) frontier.push_back(next);
        }
    }
    throw InvalidInput("subset is not covered by the covering");
}

Covering antichain_reduce(const Covering& t) {
    if (t.is_logical()) return t;
    std::vector<Subset> sorted = t.members();
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Subset> kept;
    for (Subset m : sorted) {
        bool dominated = false;
        for (Subset other : sorted)
            if (other != m && subset_contains(other, m)) dominated = true;
        if (!dominated) kept.push_back(m);
    }
    return Covering::explicit_members(t.universe_size(), std::move(kept));
}

}  // namespace reflex
