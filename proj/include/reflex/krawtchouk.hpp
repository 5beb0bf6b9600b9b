#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reflex/exactarith.hpp"

namespace reflex {

/// KU_(n,k) for alphabet size q, expanded to exact rational coefficients.
struct KrawtchoukPoly {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 2;
    SparsePoly poly;

    Rational operator()(const Rational& x) const { return poly.evaluate(x); }
    SparsePoly derivative() const;
};

KrawtchoukPoly ku_build(std::uint32_t n, std::uint32_t k, std::uint32_t q);

enum class KuEngine {
    /// sum_t (-1)^t (q-1)^(k-t) C(s,t) C(n-s,k-t); needs 0 <= s <= n.
    BinomialSum,
    /// Coefficient of x^k in (1-x)^s (1+(q-1)x)^(n-s); needs 0 <= s <= n.
    GeneratingFunction,
    /// Evaluation of the expanded polynomial; any s.
    Polynomial,
};

BigInt ku_eval(std::uint32_t n, std::uint32_t k, std::uint32_t q, std::int64_t s,
               KuEngine engine = KuEngine::BinomialSum);

/// Both sides of sum_{l<=k} KU_(n,l)(s) = KU_(n-1,k)(s-1), computed separately.
struct PartialSumCheck {
    BigInt lhs;
    BigInt rhs;
    bool holds() const { return lhs == rhs; }
};
PartialSumCheck ku_partial_sum(std::uint32_t n, std::uint32_t k, std::uint32_t q, std::int64_t s);

/// A real root known to lie in [lo, hi]; lo == hi for an exact rational root.
struct RootInterval {
    Rational lo;
    Rational hi;
    bool exact() const { return lo == hi; }
    double approx() const;
};

/// 10^-9.
Rational default_root_width();

/// Isolates `expected` simple real roots of p inside the open interval (lo, hi)
/// by scanning a grid for sign changes, halving the grid spacing until enough
/// are found, then bisecting each to the requested width. Every sign is exact.
/// Throws BudgetExceeded (naming the partial count) after `max_halvings`.
std::vector<RootInterval> isolate_real_roots(const SparsePoly& p, const Rational& lo, const Rational& hi,
                                             std::size_t expected, const Rational& width = default_root_width(),
                                             std::uint32_t max_halvings = 12);

/// The k roots of KU_(n,k), ascending; 1 <= k <= n.
std::vector<RootInterval> ku_roots(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                   const Rational& width = default_root_width());
/// The k-1 roots of the derivative, ascending; 2 <= k <= n.
std::vector<RootInterval> ku_derivative_roots(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                              const Rational& width = default_root_width());

/// floor of the smallest root of KU_(n,k), from exact values at integers.
std::int64_t smallest_root_floor(std::uint32_t n, std::uint32_t k, std::uint32_t q);
/// floor of the smallest root of KU_(n,k)'; needs k >= 2.
std::int64_t derivative_smallest_root_floor(std::uint32_t n, std::uint32_t k, std::uint32_t q);

/// r + c * sqrt(d) with d >= 0, compared exactly.
struct QuadraticSurd {
    Rational rational_part;
    Rational coefficient;
    Rational radicand;

    bool at_least(const Rational& x) const;
    bool at_most(const Rational& x) const;
    std::int64_t floor() const;
    double approx() const;
    std::string to_string() const;
};

/// Smallest root of KU_(n-1,3)' in closed form; n >= 4.
QuadraticSurd derivative_root_closed_form(std::uint32_t n, std::uint32_t q);

/// The two radical thresholds on n for P(3) coverings: one for n = 0 mod 3,
/// one for n = 2 mod 3.
enum class ThresholdClause { ZeroModThree, TwoModThree };
QuadraticSurd radical_threshold_value(std::uint32_t q, ThresholdClause clause);
/// n >= threshold, decided without floating point.
bool radical_threshold(std::uint32_t q, ThresholdClause clause, std::int64_t n);

// ---------------------------------------------------------------------------
// Reflexivity of CO(H, P(k)) with all h_i = q

/// Support sizes t in [1, n] grouped by the vectors (KU_(n-1,s)(t-1)) over
/// multiples s of k in [1, n-1]; class 0 is reserved for the identity (t = 0).
struct KrawtchoukClassification {
    std::vector<std::uint32_t> class_of_size;  // indexed by t in [0, n]
    std::uint32_t class_count = 0;             // including the identity class
};
KrawtchoukClassification krawtchouk_classification(std::uint32_t n, std::uint32_t k, std::uint32_t q);

enum class CoVerdict { Reflexive, NonReflexive, Undecided };
const char* to_string(CoVerdict v);

struct CoCriterionHit {
    std::string name;
    CoVerdict verdict;
};

struct CoVerdictReport {
    CoVerdict verdict = CoVerdict::Undecided;
    /// Every criterion that applies, closed-form parameter clauses first.
    std::vector<CoCriterionHit> hits;
    std::uint64_t co_classes = 0;
    /// Best lower bound on |l(CO)| the criteria give.
    std::uint64_t lambda_lower_bound = 0;
    /// Criteria disagreeing would mean a bug or a false statement.
    bool conflict = false;
    std::string criterion() const;
};

/// All parameter clauses and value/root criteria that fire for (n, k, q).
std::vector<CoCriterionHit> co_criteria_hits(std::uint32_t n, std::uint32_t k, std::uint32_t q);
CoVerdictReport co_nonreflexivity_verdict(std::uint32_t n, std::uint32_t k, std::uint32_t q);

struct ConvergenceRow {
    std::uint32_t n = 0;
    RootInterval root;
    double ratio = 0;
    double deviation = 0;
};
/// u_(n)/n against (q-1)/q for each n in the list.
std::vector<ConvergenceRow> smallest_root_convergence(std::uint32_t k, std::uint32_t q,
                                                 const std::vector<std::uint32_t>& n_list);

}  // namespace reflex
