#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reflex/budget.hpp"
#include "reflex/exactarith.hpp"
#include "reflex/groups.hpp"
#include "reflex/metrics.hpp"
#include "reflex/posets.hpp"

namespace reflex {

enum class LabelKind { Weight, Signature, Ideal, Orbit, Opaque };
const char* to_string(LabelKind kind);

/// Partition of an enumerable group. Class ids are renumbered by first
/// occurrence in element-index order, so two partitions of the same host are
/// equal exactly when their class vectors are.
class Partition {
public:
    Partition() = default;
    /// `labels[c]` names raw class c (optional); raw ids may be any dense range.
    Partition(std::shared_ptr<const GroupProduct> host, std::vector<std::uint32_t> class_of,
              std::vector<std::string> labels = {}, LabelKind kind = LabelKind::Opaque);

    const std::shared_ptr<const GroupProduct>& host() const { return host_; }
    const GroupProduct& group() const { return *host_; }
    std::uint64_t element_count() const { return class_of_.size(); }
    std::uint32_t class_count() const { return class_count_; }
    std::uint32_t class_of(std::uint64_t element) const { return class_of_[element]; }
    const std::vector<std::uint32_t>& class_vector() const { return class_of_; }
    const std::string& label(std::uint32_t c) const { return labels_[c]; }
    const std::vector<std::string>& labels() const { return labels_; }
    LabelKind kind() const { return kind_; }

    std::vector<std::uint64_t> class_sizes() const;
    /// First element of each class.
    std::vector<std::uint64_t> representatives() const;
    /// Classes as sorted element lists.
    std::vector<std::vector<std::uint64_t>> classes() const;
    /// {identity} is a class on its own.
    bool identity_is_singleton() const;

    friend bool operator==(const Partition& a, const Partition& b);

private:
    std::shared_ptr<const GroupProduct> host_;
    std::vector<std::uint32_t> class_of_;
    std::vector<std::string> labels_;
    LabelKind kind_ = LabelKind::Opaque;
    std::uint32_t class_count_ = 0;
};

/// Every class of `a` lies inside a class of `b`. Throws ShapeMismatch on different hosts.
bool is_finer(const Partition& a, const Partition& b);
/// Two elements sharing an `a` class but not a `b` class, if any.
std::optional<std::pair<std::uint64_t, std::uint64_t>> finer_witness(const Partition& a, const Partition& b);

Partition singleton_partition(std::shared_ptr<const GroupProduct> host, const Budget& budget = {});
Partition trivial_partition(std::shared_ptr<const GroupProduct> host, const Budget& budget = {});

// ---------------------------------------------------------------------------
// Induced partitions

Partition induce_Q(std::shared_ptr<const GroupProduct> host, const Poset& p, const WeightFunction& omega,
                   const Budget& budget = {});
Partition induce_CO(std::shared_ptr<const GroupProduct> host, const Covering& t, const Budget& budget = {});
/// Hamming-weight partition, i.e. classes by |supp|.
Partition induce_hamming(std::shared_ptr<const GroupProduct> host, const Budget& budget = {});
/// Pulls an equivalence on ideals back through the support closure:
/// `ideal_class[I]` gives the class of ideal I; every ideal must be present.
Partition induce_from_ideal_classes(std::shared_ptr<const GroupProduct> host, const Poset& p,
                                    const std::map<Subset, std::int64_t>& ideal_class, const Budget& budget = {});

// ---------------------------------------------------------------------------
// Dual partitions

enum class DualEngine {
    /// Mixed-radix character transform of each class indicator (Walsh-Hadamard when m = 2).
    Transform,
    /// Direct double loop over both groups; slow, kept as an oracle.
    Direct,
};

struct DualOptions {
    DualEngine engine = DualEngine::Transform;
    /// Uses the character chi^c in place of chi; c must be coprime to the exponent.
    std::uint32_t character_power = 1;
    Budget budget{};
};

/// Per-class character sums sum_{b in B} f(a, b) for one representative a.
using DualSignature = std::vector<CycInt>;

/// Signatures are kept while (dual classes) x (input classes) stays within this.
inline constexpr std::uint64_t kSignatureCells = std::uint64_t{1} << 20;

struct DualPartition {
    Partition partition;
    /// signatures[c][j]: sum over class j of the input of f(rep_c, .). Empty
    /// (and the classes labelled by number) past kSignatureCells.
    std::vector<DualSignature> signatures;
};

/// l(gamma): elements of the (same-shaped) dual group grouped by equal signatures.
DualPartition left_dual(const Partition& gamma, const DualOptions& options = {});
/// r(lambda). The standard pairing is symmetric in its arguments, so this is
/// the same computation with the roles of the two groups exchanged.
DualPartition right_dual(const Partition& lambda, const DualOptions& options = {});

/// Signature of one element against every class of `gamma`, computed directly.
DualSignature element_signature(const Partition& gamma, std::uint64_t a, std::uint32_t character_power = 1);

struct ReflexivityReport {
    bool reflexive = false;
    std::uint32_t gamma_classes = 0;
    std::uint32_t dual_classes = 0;
    std::optional<Partition> bidual;
    /// r(l(gamma)) finer than gamma; only meaningful with a bidual.
    bool bidual_finer = true;
    bool bidual_equal = false;
};
ReflexivityReport reflexivity_check(const Partition& gamma, bool compute_bidual = false,
                                    const DualOptions& options = {});

// ---------------------------------------------------------------------------
// Closed forms over ideals

/// The ideal-sum coefficient for the dual-closure d and ideal i of `p`.
BigInt phi(Subset d, Subset i, const Poset& p, const std::vector<std::uint64_t>& h);
/// The mirrored coefficient using minimal elements of d.
BigInt psi(Subset d, Subset i, const Poset& p, const std::vector<std::uint64_t>& h);

/// sum over beta with wt_(P,omega)(beta) = b of f(alpha, beta), from ideals.
BigInt signature_via_ideals(Subset alpha_support, const Poset& p, const WeightFunction& omega,
                            const std::vector<std::uint64_t>& h, const Rational& b);
/// sum over gamma with wt_(dual P,omega)(gamma) = b of f(gamma, theta), from ideals of the dual.
BigInt signature_via_ideals_psi(Subset theta_support, const Poset& p, const WeightFunction& omega,
                                const std::vector<std::uint64_t>& h, const Rational& b);

enum class FEngine { BruteForce, IdealSum, Hierarchical };

/// sum_l (sum over beta of weight l of f(alpha, beta)) x^l.
SparsePoly F_poly(const GroupProduct& g, std::uint64_t alpha, const Poset& p, const WeightFunction& omega,
                  FEngine engine, const Budget& budget = {});

/// The exponent set X = (Omega - D) u min_P(D) with D the dual closure of the support.
Subset F_degree_set(Subset alpha_support, const Poset& p);

// ---------------------------------------------------------------------------
// Krawtchouk matrices and equivalence checkers

struct KrawtchoukMatrix {
    /// rho[A][B] for A in lambda, B in gamma.
    std::vector<std::vector<CycInt>> rho;
};

/// Left generalized Krawtchouk matrix; throws PreconditionFailed naming a
/// witness pair when lambda is not finer than l(gamma).
KrawtchoukMatrix krawtchouk_matrix(const Partition& lambda, const Partition& gamma, const DualOptions& options = {});

struct PosetDualityReport {
    bool udp_and_levels = false;   // (1)
    bool mutually_dual = false;    // (2)
    bool reflexive = false;        // (3)
    bool dual_equals_q = false;    // (4)
    bool dual_finer_than_q = false;
    std::uint32_t q_classes = 0;
    std::uint32_t dual_classes = 0;
    bool equivalent() const {
        return udp_and_levels == mutually_dual && mutually_dual == reflexive && reflexive == dual_equals_q;
    }
};
/// Requires P hierarchical and omega integer-valued; the group supplies h.
PosetDualityReport poset_duality_check(std::shared_ptr<const GroupProduct> g, const Poset& p, const WeightFunction& omega,
                                const DualOptions& options = {});

/// The level/weight/order condition: equal len and omega force equal h.
bool levels_force_orders(const Poset& p, const WeightFunction& omega, const std::vector<std::uint64_t>& h);

/// alpha ~ gamma in l(Q(H,P,omega)) decided by an automorphism search.
bool same_dual_class_by_automorphism(const GroupProduct& g, std::uint64_t alpha, std::uint64_t gamma, const Poset& p,
                      const WeightFunction& omega);
/// Builds the automorphism from binomial factor matching on the top level;
/// empty when the polynomials differ or no matching exists.
std::optional<Permutation> automorphism_from_factor_matching(const GroupProduct& g, std::uint64_t alpha, std::uint64_t gamma,
                                            const Poset& p, const WeightFunction& omega);

struct CoveringDualityReport {
    bool finer = false;          // (1)
    bool equal = false;          // (2)
    bool partition_equal_products = false;  // (3)
    bool equivalent() const { return finer == equal && equal == partition_equal_products; }
};
/// Requires an anti-chain covering.
CoveringDualityReport covering_duality_check(std::shared_ptr<const GroupProduct> g, const Covering& t,
                                const DualOptions& options = {});

}  // namespace reflex
