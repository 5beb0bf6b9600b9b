#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reflex/budget.hpp"
#include "reflex/groups.hpp"
#include "reflex/krawtchouk.hpp"
#include "reflex/metrics.hpp"
#include "reflex/partitions.hpp"

namespace reflex {

/// H = F_p^N cut into blocks of sizes k_i; block i is coordinate i of the
/// underlying group, so supports are taken block-wise. Vector entries follow
/// the flattened factor order of the group and element indices agree with it.
class PrimeFieldSpace {
public:
    using Vector = std::vector<std::uint32_t>;

    static std::shared_ptr<const PrimeFieldSpace> make(std::uint32_t p, std::vector<std::uint32_t> blocks);
    /// Recovers the space from a group whose cyclic factors all have the same prime order.
    static std::shared_ptr<const PrimeFieldSpace> from_host(std::shared_ptr<const GroupProduct> host);

    std::uint32_t characteristic() const { return p_; }
    const std::vector<std::uint32_t>& blocks() const { return blocks_; }
    std::size_t dimension() const { return n_; }
    std::uint64_t size() const { return host_->order(); }
    const std::shared_ptr<const GroupProduct>& host() const { return host_; }

    Vector vector_of(std::uint64_t index) const;
    std::uint64_t index_of(const Vector& v) const;
    std::uint32_t inner(const Vector& a, const Vector& b) const;
    std::uint32_t inverse(std::uint32_t x) const;
    /// Blocks holding a nonzero entry of v.
    Subset block_support(const Vector& v) const;

private:
    std::uint32_t p_ = 2;
    std::vector<std::uint32_t> blocks_;
    std::size_t n_ = 0;
    std::shared_ptr<const GroupProduct> host_;
};

/// F-subspace of a PrimeFieldSpace, stored as its reduced row-echelon basis.
class LinearCode {
public:
    using Vector = PrimeFieldSpace::Vector;

    /// Row-reduces the generators; dependent rows vanish.
    static LinearCode from_generators(std::shared_ptr<const PrimeFieldSpace> space, std::vector<Vector> generators);
    static LinearCode zero(std::shared_ptr<const PrimeFieldSpace> space);
    static LinearCode whole(std::shared_ptr<const PrimeFieldSpace> space);

    const PrimeFieldSpace& space() const { return *space_; }
    const std::shared_ptr<const PrimeFieldSpace>& space_ptr() const { return space_; }
    const std::vector<Vector>& rows() const { return rows_; }
    std::size_t dimension() const { return rows_.size(); }
    std::uint64_t size() const;
    bool contains(const Vector& v) const;
    /// Element indices of all codewords, ascending.
    std::vector<std::uint64_t> elements(const Budget& budget = {}) const;

    friend bool operator==(const LinearCode& a, const LinearCode& b) { return a.rows_ == b.rows_; }

private:
    std::shared_ptr<const PrimeFieldSpace> space_;
    std::vector<Vector> rows_;
};

/// Generator matrix text: "p N dims..." on the first line, then one row of
/// space-separated digits per line. The dims must sum to N.
LinearCode read_generator_matrix(std::istream& in);

/// Null space of the generator matrix under the standard inner product.
LinearCode dual_code(const LinearCode& c);
/// {b : chi(<a, b>) = 1 for every a in C}, found by scanning H with the pairing.
std::vector<std::uint64_t> annihilator_by_characters(const LinearCode& c, const Budget& budget = {});

/// |C cap B| for each class B of delta, in class order.
std::vector<std::uint64_t> distribution(const LinearCode& c, const Partition& delta, const Budget& budget = {});
std::vector<std::uint64_t> distribution(const std::vector<std::uint64_t>& elements, const Partition& delta);

struct MacWilliamsReport {
    /// |C| * |C^perp cap B| from enumerating the dual code.
    std::vector<BigInt> lhs;
    /// sum_A |C cap A| rho(A, B) from the Krawtchouk matrix.
    std::vector<CycInt> rhs;
    bool holds() const;
};
/// Throws PreconditionFailed (with a witness pair) unless lambda is finer than l(gamma).
MacWilliamsReport macwilliams_verify(const LinearCode& c, const Partition& lambda, const Partition& gamma,
                                     const DualOptions& options = {});
/// Same identity for the subgroup generated by arbitrary elements of any finite
/// abelian group; the annihilator is found by scanning the pairing.
MacWilliamsReport macwilliams_verify_additive(const std::vector<std::uint64_t>& generators, const Partition& lambda,
                                              const Partition& gamma, const DualOptions& options = {});
/// Subgroup generated by `generators`, ascending.
std::vector<std::uint64_t> generated_subgroup(const GroupProduct& g, const std::vector<std::uint64_t>& generators,
                                              const Budget& budget = {});

/// B = c * B for every class B and nonzero scalar c.
bool is_f_invariant(const Partition& delta);
/// Nonzero vectors whose leading nonzero entry is 1, one per 1-dimensional code.
std::vector<std::uint64_t> projective_points(const PrimeFieldSpace& space);

struct PamiReport {
    bool zero_is_class = false;
    /// The code-level statement under test.
    bool holds = false;
    /// Two codes with equal lambda-distributions whose duals differ in gamma-distribution.
    std::optional<std::pair<LinearCode, LinearCode>> witness;
    /// lambda finer than l(gamma), computed separately through the dual partition.
    bool finer_than_dual = false;
    std::uint64_t codes_checked = 0;
    bool agrees() const { return holds == finer_than_dual; }
};
/// Equal lambda-distributions of 1-dimensional codes force equal
/// gamma-distributions of their duals (and {0} is a class of lambda).
/// Both partitions must be F-invariant.
PamiReport pami_onedim_check(const Partition& lambda, const Partition& gamma, const DualOptions& options = {});
/// The same statement over every linear code of H; the number of subspaces is
/// charged against the budget's element cap.
PamiReport pami_all_codes_check(const Partition& lambda, const Partition& gamma, const DualOptions& options = {});
/// Calls fn(code) for every subspace of H of the given dimension.
void for_each_subspace(std::shared_ptr<const PrimeFieldSpace> space, std::size_t dim,
                       const std::function<void(const LinearCode&)>& fn);
/// Number of subspaces of F_p^N of every dimension, saturating at 2^64 - 1.
std::uint64_t subspace_count(std::uint32_t p, std::size_t n);

// ---------------------------------------------------------------------------
// Linear maps, inv(Delta) and orbits

struct LinearMap {
    std::uint32_t p = 2;
    std::size_t n = 0;
    /// Row-major n x n entries.
    std::vector<std::uint32_t> entries;
    bool invertible = false;

    static LinearMap identity(std::uint32_t p, std::size_t n);
    /// columns[j] is the image of the j-th unit vector.
    static LinearMap from_columns(std::uint32_t p, const std::vector<PrimeFieldSpace::Vector>& columns);
    std::uint32_t at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    PrimeFieldSpace::Vector apply(const PrimeFieldSpace::Vector& v) const;
    /// Throws PreconditionFailed when singular.
    LinearMap inverse() const;

    friend LinearMap operator*(const LinearMap& a, const LinearMap& b);  // a after b
    friend bool operator==(const LinearMap& a, const LinearMap& b) { return a.p == b.p && a.entries == b.entries; }
    friend bool operator<(const LinearMap& a, const LinearMap& b) { return a.entries < b.entries; }
};

/// |GL(n, p)|, saturating.
std::uint64_t general_linear_order(std::uint32_t p, std::size_t n);
/// Full enumeration is allowed while |GL(N, p)| <= |GL(5, 2)|; that admits
/// p = 2 with N <= 5 and p = 3 with N <= 3.
bool inv_enumeration_feasible(std::uint32_t p, std::size_t n);

struct InvOptions {
    unsigned jobs = 1;
    /// Largest number of maps inv_enumerate may return.
    std::uint64_t max_maps = std::uint64_t{1} << 20;
};

/// Every invertible sigma with beta ~ sigma(beta) for all beta, built column by
/// column; a partial choice is dropped as soon as some vector in the span of the
/// fixed columns leaves its class. Ordered by first-column cell, then search order.
std::vector<LinearMap> inv_enumerate(const Partition& delta, const InvOptions& options = {});
/// |inv(delta)| and orb(inv(delta)) without storing the maps.
struct InvOrbits {
    std::uint64_t order = 0;
    Partition orbits;
};
InvOrbits inv_orbits(const Partition& delta, const InvOptions& options = {});

/// Composition and inverse stay inside K.
bool is_group(const std::vector<LinearMap>& k);
/// Orbits of the group generated by K acting on H.
Partition orbit_partition(std::shared_ptr<const PrimeFieldSpace> space, const std::vector<LinearMap>& k);

struct MepWitness {
    PrimeFieldSpace::Vector alpha;
    PrimeFieldSpace::Vector beta;
    std::uint64_t alpha_index = 0;
    std::uint64_t beta_index = 0;
    std::string class_label;
    std::uint64_t inv_order = 0;
};
struct MepSearchResult {
    std::optional<MepWitness> witness;
    std::uint64_t inv_order = 0;
    bool delta_equals_orbits = false;
};
/// A pair alpha ~ beta, both nonzero, with c*alpha ~ c*beta for every scalar c
/// (so alpha -> beta is a class-preserving injective map on F*alpha) and no
/// sigma in inv(delta) sending alpha to beta. Smallest such pair in index order.
MepSearchResult mep_witness_search(const Partition& delta, const InvOptions& options = {});

// ---------------------------------------------------------------------------
// Vector-view partitions

/// CO(H, T) recomputed from vectors: classes by the covering weight of the block support.
Partition co_partition_vector_view(std::shared_ptr<const PrimeFieldSpace> space, const Covering& t);
/// Q(H, P, omega) recomputed from vectors.
Partition q_partition_vector_view(std::shared_ptr<const PrimeFieldSpace> space, const Poset& p,
                                  const WeightFunction& omega);

// ---------------------------------------------------------------------------
// Extension property of combinatorial-metric partitions

struct ExtensionEvidence {
    /// "witness", "brute-force-non-reflexive", "criteria-non-reflexive",
    /// "brute-force-reflexive", "orbits-match" or "criteria-reflexive".
    std::string tier;
    std::string detail;
    bool refutes = false;
    /// The step from non-reflexive to failing the extension property uses the
    /// cited orbit/reflexivity implication instead of a constructed witness.
    bool relies_on_cited_implication = false;
};

struct ExtensionReport {
    std::uint32_t q = 2;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    bool refuted = false;
    /// "refuted" or "open".
    std::string status;
    /// Tier of the strongest refuting evidence, or "none".
    std::string strongest_tier;
    bool relies_on_cited_implication = false;
    std::vector<ExtensionEvidence> evidence;
    CoVerdictReport criteria;
    std::optional<bool> brute_force_reflexive;
    std::optional<MepWitness> witness;
    std::optional<std::uint64_t> inv_order;
    /// Evidence tiers contradicting each other; non-empty means a bug or a false claim.
    std::vector<std::string> conflicts;
};

struct ExtensionOptions {
    /// Brute-force reflexivity runs while q^n stays within this.
    std::uint64_t max_brute_elements = std::uint64_t{1} << 16;
    bool allow_witness_search = true;
    InvOptions inv{};
    DualOptions dual{};
};

/// Does CO(F_q^n, P(k)) fail the extension property? q must be prime.
ExtensionReport extension_property_report(std::uint32_t q, std::uint32_t n, std::uint32_t k,
                                     const ExtensionOptions& options = {});

}  // namespace reflex
