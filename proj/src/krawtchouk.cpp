#include "reflex/krawtchouk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "reflex/errors.hpp"

namespace reflex {

namespace {

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

BigInt power(std::int64_t base, std::uint64_t e) {
    BigInt out;
    BigInt b(static_cast<long>(base));
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
    return out;
}

void require_q(std::uint32_t q) {
    if (q < 2) throw InvalidInput("alphabet size q must be at least 2, got " + std::to_string(q));
}

int sign_of(const Rational& v) { return sgn(v); }

}  // namespace

SparsePoly KrawtchoukPoly::derivative() const {
    SparsePoly d;
    for (const auto& [e, c] : poly.terms())
        if (e != 0) d.add_term(e - 1, c * e);
    return d;
}

KrawtchoukPoly ku_build(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    require_q(q);
    KrawtchoukPoly ku{n, k, q, {}};
    SparsePoly sum;
    for (std::uint32_t t = 0; t <= k; ++t) {
        SparsePoly term = SparsePoly::constant(Rational(binomial(k, t) * power(q - 1, k - t)));
        for (std::uint32_t i = 0; i < t; ++i) term *= SparsePoly::binomial(1, Rational(-static_cast<long>(i)));
        for (std::uint32_t i = 0; i + t < k; ++i)
            term *= SparsePoly::binomial(1, Rational(static_cast<long>(i) - static_cast<long>(n)));
        sum += term;
    }
    BigInt fact;
    mpz_fac_ui(fact.get_mpz_t(), k);
    Rational scale(k % 2 ? BigInt(-1) : BigInt(1), fact);
    ku.poly = sum * SparsePoly::constant(scale);
    return ku;
}

BigInt ku_eval(std::uint32_t n, std::uint32_t k, std::uint32_t q, std::int64_t s, KuEngine engine) {
    require_q(q);
    if (engine != KuEngine::Polynomial && (s < 0 || s > static_cast<std::int64_t>(n)))
        throw InvalidInput("s = " + std::to_string(s) + " outside [0, " + std::to_string(n) +
                           "] for the binomial engines");
    switch (engine) {
        case KuEngine::BinomialSum: {
            BigInt sum = 0;
            for (std::int64_t t = 0; t <= k; ++t) {
                BigInt term = power(q - 1, k - t) * binomial(s, t) * binomial(n - s, k - t);
                if (t % 2) sum -= term;
                else sum += term;
            }
            return sum;
        }
        case KuEngine::GeneratingFunction: {
            // Truncated product, coefficients up to x^k.
            std::vector<BigInt> coeffs(k + 1, 0);
            coeffs[0] = 1;
            auto multiply = [&](long c1) {  // by (1 + c1 x)
                for (std::size_t i = coeffs.size(); i-- > 1;) coeffs[i] += coeffs[i - 1] * c1;
            };
            for (std::int64_t i = 0; i < s; ++i) multiply(-1);
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(n) - s; ++i) multiply(static_cast<long>(q) - 1);
            return coeffs[k];
        }
        case KuEngine::Polynomial: {
            const Rational v = ku_build(n, k, q)(Rational(static_cast<long>(s)));
            if (v.get_den() != 1) throw InvalidInput("non-integer Krawtchouk value");
            return v.get_num();
        }
    }
    throw InvalidInput("unknown Krawtchouk engine");
}

PartialSumCheck ku_partial_sum(std::uint32_t n, std::uint32_t k, std::uint32_t q, std::int64_t s) {
    if (n < 1 || s < 1 || s > static_cast<std::int64_t>(n))
        throw InvalidInput("partial sums need n >= 1 and s in [1, n]");
    PartialSumCheck out;
    out.lhs = 0;
    for (std::uint32_t l = 0; l <= k; ++l) out.lhs += ku_eval(n, l, q, s, KuEngine::GeneratingFunction);
    out.rhs = ku_eval(n - 1, k, q, s - 1, KuEngine::BinomialSum);
    return out;
}

// ---------------------------------------------------------------------------
// Root isolation

double RootInterval::approx() const { return Rational((lo + hi) / 2).get_d(); }

Rational default_root_width() { return Rational(1, 1000000000); }

std::vector<RootInterval> isolate_real_roots(const SparsePoly& p, const Rational& lo, const Rational& hi,
                                             std::size_t expected, const Rational& width,
                                             std::uint32_t max_halvings) {
    if (expected == 0) return {};
    if (!(lo < hi)) throw InvalidInput("empty isolation range");
    if (width <= 0) throw InvalidInput("isolation width must be positive");
    std::vector<RootInterval> found;
    Rational step = 1;
    for (std::uint32_t round = 0; round <= max_halvings; ++round, step /= 2) {
        found.clear();
        Rational x = lo;
        int prev = sign_of(p.evaluate(x));
        Rational prev_x = x;
        while (x < hi) {
            x += step;
            if (x > hi) x = hi;
            const int cur = sign_of(p.evaluate(x));
            if (cur == 0 && x < hi) found.push_back({x, x});
            else if (cur != 0 && prev != 0 && cur != prev) found.push_back({prev_x, x});
            prev = cur;
            prev_x = x;
        }
        if (found.size() >= expected) break;
    }
    if (found.size() != expected)
        throw BudgetExceeded("isolated " + std::to_string(found.size()) + " of " + std::to_string(expected) +
                             " roots before the grid refinement limit");
    for (auto& r : found) {
        if (r.exact()) continue;
        const int left = sign_of(p.evaluate(r.lo));
        while (r.hi - r.lo > width) {
            const Rational mid = (r.lo + r.hi) / 2;
            const int s = sign_of(p.evaluate(mid));
            if (s == 0) {
                r.lo = r.hi = mid;
                break;
            }
            if (s == left) r.lo = mid;
            else r.hi = mid;
        }
    }
    return found;
}

std::vector<RootInterval> ku_roots(std::uint32_t n, std::uint32_t k, std::uint32_t q, const Rational& width) {
    if (k < 1 || k > n) throw InvalidInput("roots need 1 <= k <= n");
    return isolate_real_roots(ku_build(n, k, q).poly, 0, Rational(n), k, width);
}

std::vector<RootInterval> ku_derivative_roots(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                              const Rational& width) {
    if (k < 2 || k > n) throw InvalidInput("derivative roots need 2 <= k <= n");
    return isolate_real_roots(ku_build(n, k, q).derivative(), 0, Rational(n), k - 1, width);
}

std::int64_t smallest_root_floor(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    if (k < 1 || k > n) throw InvalidInput("roots need 1 <= k <= n");
    // KU(0) > 0 and nothing precedes the first root, so the first
    // non-positive integer value brackets it.
    for (std::int64_t s = 0; s <= static_cast<std::int64_t>(n); ++s) {
        const int sg = sgn(ku_eval(n, k, q, s));
        if (sg == 0) return s;
        if (sg < 0) return s - 1;
    }
    throw InvalidInput("no sign change of KU on [0, n]");
}

std::int64_t derivative_smallest_root_floor(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    if (k < 2 || k > n) throw InvalidInput("derivative roots need 2 <= k <= n");
    // The derivative is negative left of its first root.
    const SparsePoly d = ku_build(n, k, q).derivative();
    for (std::int64_t s = 0; s <= static_cast<std::int64_t>(n); ++s) {
        const int sg = sgn(d.evaluate(Rational(static_cast<long>(s))));
        if (sg == 0) return s;
        if (sg > 0) return s - 1;
    }
    throw InvalidInput("no sign change of KU' on [0, n]");
}

// ---------------------------------------------------------------------------
// Quadratic surds

bool QuadraticSurd::at_least(const Rational& x) const {
    // r + c sqrt(d) >= x  <=>  c sqrt(d) >= t with t = x - r.
    const Rational t = x - rational_part;
    const Rational cc = coefficient * coefficient * radicand;
    if (coefficient >= 0) return t <= 0 || cc >= t * t;
    return t <= 0 && t * t >= cc;
}

bool QuadraticSurd::at_most(const Rational& x) const {
    // r + c sqrt(d) <= x  <=>  c sqrt(d) <= t.
    const Rational t = x - rational_part;
    const Rational cc = coefficient * coefficient * radicand;
    if (coefficient <= 0) return t >= 0 || cc >= t * t;
    return t >= 0 && t * t >= cc;
}

double QuadraticSurd::approx() const {
    return rational_part.get_d() + coefficient.get_d() * std::sqrt(radicand.get_d());
}

std::int64_t QuadraticSurd::floor() const {
    auto f = static_cast<std::int64_t>(std::floor(approx()));
    while (!at_least(Rational(static_cast<long>(f)))) --f;
    while (at_least(Rational(static_cast<long>(f + 1)))) ++f;
    return f;
}

std::string QuadraticSurd::to_string() const {
    std::ostringstream os;
    os << rational_part.get_str() << (coefficient < 0 ? " - " : " + ") << Rational(abs(coefficient)).get_str() << "*sqrt("
       << radicand.get_str() << ")";
    return os.str();
}

QuadraticSurd derivative_root_closed_form(std::uint32_t n, std::uint32_t q) {
    require_q(q);
    if (n < 4) throw InvalidInput("closed-form derivative root needs n >= 4");
    const Rational qq(q), nn(n);
    QuadraticSurd w;
    w.rational_part = (qq - 1) / qq * nn - 2 + Rational(3) / qq;
    w.coefficient = Rational(-1) / qq;
    w.radicand = (qq - 1) * (nn - 3) + qq * qq / 3;
    return w;
}

QuadraticSurd radical_threshold_value(std::uint32_t q, ThresholdClause clause) {
    require_q(q);
    const BigInt Q(q);
    const BigInt denom = 2 * (2 * Q - 3) * (2 * Q - 3);
    BigInt a, r;
    if (clause == ThresholdClause::ZeroModThree) {
        a = 9 * (Q - 1);
        r = 48 * Q * Q * Q * Q - 144 * Q * Q * Q + 189 * Q * Q - 162 * Q + 81;
    } else {
        a = 4 * Q * Q + 3 * Q - 9;
        r = 48 * Q * Q * Q * Q - 72 * Q * Q * Q + 9 * Q * Q - 54 * Q + 81;
    }
    if (r < 0) throw InvalidInput("negative radicand in the threshold");
    QuadraticSurd t;
    t.rational_part = Rational(a, denom) + 3;
    t.coefficient = Rational(BigInt(1), denom);
    t.radicand = Rational(r);
    return t;
}

bool radical_threshold(std::uint32_t q, ThresholdClause clause, std::int64_t n) {
    return radical_threshold_value(q, clause).at_most(Rational(static_cast<long>(n)));
}

// ---------------------------------------------------------------------------
// Verdicts for CO(H, P(k))

const char* to_string(CoVerdict v) {
    switch (v) {
        case CoVerdict::Reflexive: return "reflexive";
        case CoVerdict::NonReflexive: return "non-reflexive";
        case CoVerdict::Undecided: return "undecided";
    }
    return "undecided";
}

KrawtchoukClassification krawtchouk_classification(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    require_q(q);
    if (n < 1 || k < 1 || k > n) throw InvalidInput("need 1 <= k <= n");
    KrawtchoukClassification out;
    out.class_of_size.assign(n + 1, 0);
    std::map<std::vector<BigInt>, std::uint32_t> ids;
    for (std::uint32_t t = 1; t <= n; ++t) {
        std::vector<BigInt> key;
        for (std::uint32_t s = k; s + 1 <= n; s += k) key.push_back(ku_eval(n - 1, s, q, t - 1));
        auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size() + 1));
        out.class_of_size[t] = it->second;
    }
    out.class_count = static_cast<std::uint32_t>(ids.size() + 1);
    return out;
}

namespace {

std::uint64_t distinct_values(std::uint32_t n, std::uint32_t s, std::uint32_t q) {
    std::vector<BigInt> values;
    for (std::uint32_t j = 0; j < n; ++j) values.push_back(ku_eval(n - 1, s, q, j));
    std::sort(values.begin(), values.end());
    return static_cast<std::uint64_t>(std::unique(values.begin(), values.end()) - values.begin());
}

}  // namespace

std::vector<CoCriterionHit> co_criteria_hits(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    require_q(q);
    if (n < 1 || k < 1 || k > n) throw InvalidInput("need 1 <= k <= n");
    std::vector<CoCriterionHit> hits;
    auto add = [&](const char* name, CoVerdict v) { hits.push_back({name, v}); };
    const auto R = CoVerdict::Reflexive;
    const auto N = CoVerdict::NonReflexive;
    const std::uint32_t ceil_half = (n + 1) / 2, ceil_fifth = (n + 4) / 5;

    if (k == 1 || k == n) add("block-partition", R);
    if (q == 2 && n >= 2 && k == n - 1) add("binary-parity-classes", R);
    if (q == 2 && n >= 2 && k == 2) add("binary-mirror-classes", R);
    if (q >= 3 && n >= 3 && k >= 2 && k <= n - 1 && n % k == 1) add("hamming-dual", N);
    if (q >= 3 && n >= 4 && k == n - 2) add("co-rank-two", N);
    if (q == 2 && n >= 5 && k >= ceil_half && k + 2 <= n) add("binary-upper-half", N);
    if (q == 2 && n >= 7 && k >= ceil_fifth && k + 2 <= n && k % 2 == 1) add("binary-odd-k", N);
    if (q >= 3 && k == 2 && n >= 3) add("pairs-large-alphabet", N);
    if (k == 3) {
        if (n % 3 == 0 && radical_threshold(q, ThresholdClause::ZeroModThree, n)) add("triples-radical-0mod3", N);
        if (n % 3 == 1 && n >= 4 && q >= 3) add("triples-1mod3", N);
        if (n % 3 == 2 && radical_threshold(q, ThresholdClause::TwoModThree, n)) add("triples-radical-2mod3", N);
        if (q == 2 && n >= 5) add("binary-triples", N);
    }

    // Value and root criteria, one per multiple s of k below n.
    for (std::uint32_t s = k; s + 1 <= n; s += k) {
        const std::string tag = "(s=" + std::to_string(s) + ")";
        if ((distinct_values(n, s, q) - 1) * k >= n) hits.push_back({"distinct-values" + tag, N});
        const std::int64_t u = smallest_root_floor(n - 1, s, q);
        if (u * static_cast<std::int64_t>(k) >= static_cast<std::int64_t>(n)) hits.push_back({"root-floor" + tag, N});
        if (n >= 3 && s >= 2) {
            const std::int64_t w = derivative_smallest_root_floor(n - 1, s, q);
            if (w * static_cast<std::int64_t>(k) >= static_cast<std::int64_t>(n))
                hits.push_back({"derivative-root-floor" + tag, N});
        }
    }
    return hits;
}

std::string CoVerdictReport::criterion() const {
    std::string out;
    for (const auto& h : hits) out += (out.empty() ? "" : ",") + h.name;
    return out.empty() ? "-" : out;
}

CoVerdictReport co_nonreflexivity_verdict(std::uint32_t n, std::uint32_t k, std::uint32_t q) {
    CoVerdictReport rep;
    rep.hits = co_criteria_hits(n, k, q);
    rep.co_classes = (n + k - 1) / k + 1;
    rep.lambda_lower_bound = rep.co_classes;
    bool reflexive = false, non_reflexive = false;
    for (const auto& h : rep.hits) {
        reflexive |= h.verdict == CoVerdict::Reflexive;
        non_reflexive |= h.verdict == CoVerdict::NonReflexive;
    }
    for (std::uint32_t s = k; s + 1 <= n; s += k)
        rep.lambda_lower_bound = std::max(rep.lambda_lower_bound, distinct_values(n, s, q) + 1);
    if (non_reflexive) {
        // A non-reflexive CO has at least n/k + 2 dual classes.
        rep.lambda_lower_bound = std::max<std::uint64_t>(rep.lambda_lower_bound, rep.co_classes + 1);
    }
    rep.conflict = reflexive && non_reflexive;
    if (rep.conflict) rep.verdict = CoVerdict::Undecided;
    else if (reflexive) rep.verdict = CoVerdict::Reflexive;
    else if (non_reflexive) rep.verdict = CoVerdict::NonReflexive;
    return rep;
}

std::vector<ConvergenceRow> smallest_root_convergence(std::uint32_t k, std::uint32_t q,
                                                 const std::vector<std::uint32_t>& n_list) {
    require_q(q);
    if (k < 1) throw InvalidInput("k must be positive");
    std::vector<ConvergenceRow> rows;
    const double limit = static_cast<double>(q - 1) / q;
    for (std::uint32_t n : n_list) {
        if (n < k) throw InvalidInput("every n must be at least k");
        ConvergenceRow row;
        row.n = n;
        row.root = ku_roots(n, k, q).front();
        row.ratio = row.root.approx() / n;
        row.deviation = std::abs(row.ratio - limit);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace reflex
