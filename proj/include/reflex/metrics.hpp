#pragma once

#include <cstdint>
#include <vector>

#include "reflex/groups.hpp"
#include "reflex/posets.hpp"
#include "reflex/weights.hpp"

namespace reflex {

/// (P, omega)-weight: varpi of the ideal generated by the support.
Rational wpm_weight(const Poset& p, const WeightFunction& omega, Subset support);
Rational wpm_weight(const Poset& p, const WeightFunction& omega, const GroupProduct& g, const GroupElement& beta);

/// A covering T of Omega = {0..n-1}: either an explicit member list or the
/// logical family P(k, Omega) of all k-subsets, which is never materialized
/// unless asked.
class Covering {
public:
    static Covering explicit_members(std::size_t n, std::vector<Subset> members);
    static Covering all_k_subsets(std::size_t n, std::size_t k);

    std::size_t universe_size() const { return n_; }
    bool is_logical() const { return k_ != 0; }
    /// k for a logical P(k, Omega), 0 otherwise.
    std::size_t k() const { return k_; }
    /// Explicit members; empty for a logical covering.
    const std::vector<Subset>& members() const { return members_; }
    /// Explicit copy of P(k, Omega); allowed for n <= 12.
    Covering materialize() const;
    bool is_antichain() const;
    /// omega_T(A): fewest members whose union contains A.
    std::uint32_t weight(Subset a) const;

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<Subset> members_;
};

/// Exact minimum cover size of `a` by members, via breadth-first search over
/// the already covered part of `a`.
std::uint32_t covering_weight(const std::vector<Subset>& members, Subset a);

/// Keeps only the inclusion-maximal members (duplicates collapse to one).
Covering antichain_reduce(const Covering& t);

/// ceil(|A| / k).
std::uint32_t pk_weight(std::size_t k, Subset a);

}  // namespace reflex
