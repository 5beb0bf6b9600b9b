#include "reflex/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "reflex/errors.hpp"
#include "reflex/parallel.hpp"

namespace reflex {

const char* to_string(LabelKind kind) {
    switch (kind) {
        case LabelKind::Weight: return "weight";
        case LabelKind::Signature: return "signature";
        case LabelKind::Ideal: return "ideal";
        case LabelKind::Orbit: return "orbit";
        case LabelKind::Opaque: return "opaque";
    }
    return "opaque";
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::shared_ptr<const GroupProduct> host, std::vector<std::uint32_t> class_of,
                     std::vector<std::string> labels, LabelKind kind)
    : host_(std::move(host)), kind_(kind) {
    if (!host_) throw InvalidInput("partition needs a host group");
    if (class_of.size() != host_->order())
        throw ShapeMismatch("class vector has " + std::to_string(class_of.size()) + " entries for a group of order " +
                            std::to_string(host_->order()));
    std::unordered_map<std::uint32_t, std::uint32_t> renumber;
    class_of_.resize(class_of.size());
    for (std::size_t i = 0; i < class_of.size(); ++i) {
        auto [it, inserted] = renumber.try_emplace(class_of[i], static_cast<std::uint32_t>(renumber.size()));
        class_of_[i] = it->second;
    }
    class_count_ = static_cast<std::uint32_t>(renumber.size());
    labels_.assign(class_count_, "");
    for (const auto& [raw, id] : renumber) {
        if (!labels.empty()) {
            if (raw >= labels.size()) throw InvalidInput("missing label for class " + std::to_string(raw));
            labels_[id] = labels[raw];
        } else {
            labels_[id] = std::to_string(id);
        }
    }
}

std::vector<std::uint64_t> Partition::class_sizes() const {
    std::vector<std::uint64_t> sizes(class_count_, 0);
    for (auto c : class_of_) ++sizes[c];
    return sizes;
}

std::vector<std::uint64_t> Partition::representatives() const {
    std::vector<std::uint64_t> reps(class_count_, 0);
    std::vector<bool> seen(class_count_, false);
    for (std::uint64_t i = 0; i < class_of_.size(); ++i) {
        if (!seen[class_of_[i]]) {
            seen[class_of_[i]] = true;
            reps[class_of_[i]] = i;
        }
    }
    return reps;
}

std::vector<std::vector<std::uint64_t>> Partition::classes() const {
    std::vector<std::vector<std::uint64_t>> out(class_count_);
    for (std::uint64_t i = 0; i < class_of_.size(); ++i) out[class_of_[i]].push_back(i);
    return out;
}

bool Partition::identity_is_singleton() const {
    if (class_of_.empty()) return false;
    const std::uint32_t c = class_of_[0];
    for (std::uint64_t i = 1; i < class_of_.size(); ++i)
        if (class_of_[i] == c) return false;
    return true;
}

bool operator==(const Partition& a, const Partition& b) {
    if (!a.host_ || !b.host_ || !a.host_->same_shape(*b.host_)) return false;
    return a.class_of_ == b.class_of_;
}

namespace {

void require_same_host(const Partition& a, const Partition& b) {
    if (!a.host() || !b.host() || !a.host()->same_shape(*b.host()))
        throw ShapeMismatch("partitions live on groups of different shape");
}

}  // namespace

std::optional<std::pair<std::uint64_t, std::uint64_t>> finer_witness(const Partition& a, const Partition& b) {
    require_same_host(a, b);
    std::vector<std::int64_t> target(a.class_count(), -1);
    std::vector<std::uint64_t> first(a.class_count(), 0);
    for (std::uint64_t i = 0; i < a.element_count(); ++i) {
        const auto ca = a.class_of(i);
        const auto cb = static_cast<std::int64_t>(b.class_of(i));
        if (target[ca] < 0) {
            target[ca] = cb;
            first[ca] = i;
        } else if (target[ca] != cb) {
            return std::make_pair(first[ca], i);
        }
    }
    return std::nullopt;
}

bool is_finer(const Partition& a, const Partition& b) { return !finer_witness(a, b).has_value(); }

Partition singleton_partition(std::shared_ptr<const GroupProduct> host, const Budget& budget) {
    budget.require_elements(host->order(), "singleton partition");
    std::vector<std::uint32_t> ids(host->order());
    std::iota(ids.begin(), ids.end(), 0U);
    return Partition(std::move(host), std::move(ids));
}

Partition trivial_partition(std::shared_ptr<const GroupProduct> host, const Budget& budget) {
    budget.require_elements(host->order(), "trivial partition");
    std::vector<std::uint32_t> ids(host->order(), 0);
    return Partition(std::move(host), std::move(ids), {"all"});
}

// ---------------------------------------------------------------------------
// Induced partitions

namespace {

/// Builds a partition from a per-support key function, memoized by support mask.
template <class Key, class KeyFn, class LabelFn>
Partition partition_by_support(std::shared_ptr<const GroupProduct> host, const Budget& budget, LabelKind kind,
                               KeyFn&& key_of, LabelFn&& label_of) {
    const auto supports = host->all_supports(budget);
    std::unordered_map<Subset, std::uint32_t> memo;
    std::map<Key, std::uint32_t> ids;
    std::vector<std::string> labels;
    std::vector<std::uint32_t> class_of(supports.size());
    for (std::size_t i = 0; i < supports.size(); ++i) {
        auto it = memo.find(supports[i]);
        if (it == memo.end()) {
            Key key = key_of(supports[i]);
            auto [kit, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size()));
            if (inserted) labels.push_back(label_of(key));
            it = memo.emplace(supports[i], kit->second).first;
        }
        class_of[i] = it->second;
    }
    return Partition(std::move(host), std::move(class_of), std::move(labels), kind);
}

}  // namespace

Partition induce_Q(std::shared_ptr<const GroupProduct> host, const Poset& p, const WeightFunction& omega,
                   const Budget& budget) {
    if (host->coordinate_count() != p.size() || omega.size() != p.size())
        throw ShapeMismatch("group, poset and weights must share the coordinate count");
    return partition_by_support<Rational>(
        std::move(host), budget, LabelKind::Weight, [&](Subset s) { return wpm_weight(p, omega, s); },
        [](const Rational& w) { return w.get_str(); });
}

Partition induce_CO(std::shared_ptr<const GroupProduct> host, const Covering& t, const Budget& budget) {
    if (host->coordinate_count() != t.universe_size())
        throw ShapeMismatch("group and covering must share the coordinate count");
    return partition_by_support<std::uint32_t>(
        std::move(host), budget, LabelKind::Weight, [&](Subset s) { return t.weight(s); },
        [](std::uint32_t w) { return std::to_string(w); });
}

Partition induce_hamming(std::shared_ptr<const GroupProduct> host, const Budget& budget) {
    return partition_by_support<int>(
        std::move(host), budget, LabelKind::Weight, [](Subset s) { return subset_size(s); },
        [](int w) { return std::to_string(w); });
}

Partition induce_from_ideal_classes(std::shared_ptr<const GroupProduct> host, const Poset& p,
                                    const std::map<Subset, std::int64_t>& ideal_class, const Budget& budget) {
    if (host->coordinate_count() != p.size()) throw ShapeMismatch("group and poset must share the coordinate count");
    for (Subset ideal : ideals(p))
        if (!ideal_class.count(ideal))
            throw InvalidInput("ideal equivalence does not cover ideal mask " + std::to_string(ideal));
    return partition_by_support<std::int64_t>(
        std::move(host), budget, LabelKind::Ideal, [&](Subset s) { return ideal_class.at(closure(p, s)); },
        [](std::int64_t c) { return "E" + std::to_string(c); });
}

// ---------------------------------------------------------------------------
// Dual partitions

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (std::int64_t x : v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

std::uint32_t checked_power(const GroupProduct& g, std::uint32_t c) {
    const std::uint32_t m = g.exponent();
    if (c == 0 || std::gcd(c % m == 0 ? m : c % m, m) != 1)
        throw InvalidInput("character power " + std::to_string(c) + " is not coprime to the exponent " +
                           std::to_string(m));
    return c % m;
}

/// Canonical coordinates of z^e for every e < m, row-major.
std::vector<std::int64_t> root_table(const CyclotomicReducer& ring) {
    const std::uint32_t m = ring.modulus();
    const std::size_t deg = ring.degree();
    std::vector<std::int64_t> table(static_cast<std::size_t>(m) * deg), hist(m);
    for (std::uint32_t e = 0; e < m; ++e) {
        std::fill(hist.begin(), hist.end(), 0);
        hist[e] = 1;
        ring.reduce_in_place(hist);
        std::copy_n(hist.begin(), deg, &table[static_cast<std::size_t>(e) * deg]);
    }
    return table;
}

/// Character sums of one class indicator at every element, as canonical
/// coordinates (degree() values per element, element-major). Small classes
/// are summed directly from `roots`; larger ones go through the transform.
std::vector<std::int64_t> class_transform(const GroupProduct& g, const CyclotomicReducer& ring,
                                          const std::vector<std::int64_t>& roots,
                                          const std::vector<std::uint32_t>& class_of, std::uint32_t cls,
                                          std::uint32_t power) {
    const std::uint64_t n = g.order();
    const std::uint32_t m = g.exponent();
    const std::size_t deg = ring.degree();
    std::uint64_t sum_d = 0;
    for (std::size_t f = 0; f < g.factor_count(); ++f) sum_d += g.factor_order(f);
    std::vector<std::uint64_t> members;
    for (std::uint64_t i = 0; i < n; ++i)
        if (class_of[i] == cls) members.push_back(i);
    const std::uint64_t transform_cost = m == 2 ? g.factor_count() : std::uint64_t{m} * sum_d;
    if (members.size() * (deg + g.factor_count()) < transform_cost) {
        std::vector<std::int64_t> out(n * deg, 0);
        for (std::uint64_t a = 0; a < n; ++a) {
            std::int64_t* dst = &out[a * deg];
            for (auto b : members) {
                const std::int64_t* z = &roots[static_cast<std::size_t>(g.pairing_exponent(a, b, power)) * deg];
                for (std::size_t t = 0; t < deg; ++t) dst[t] += z[t];
            }
        }
        return out;
    }
    if (m == 2) {
        // Walsh-Hadamard butterflies; odd powers of -1 are -1.
        std::vector<std::int64_t> v(n);
        for (std::uint64_t i = 0; i < n; ++i) v[i] = class_of[i] == cls ? 1 : 0;
        for (std::size_t f = 0; f < g.factor_count(); ++f) {
            const std::uint64_t s = g.factor_stride(f);
            for (std::uint64_t base = 0; base < n; base += 2 * s)
                for (std::uint64_t i = base; i < base + s; ++i) {
                    const std::int64_t a = v[i], b = v[i + s];
                    v[i] = a + b;
                    v[i + s] = a - b;
                }
        }
        return v;  // degree 1: the coordinate is the value itself
    }
    std::vector<std::int64_t> hist(n * m, 0);
    for (std::uint64_t i = 0; i < n; ++i)
        if (class_of[i] == cls) hist[i * m] = 1;
    std::vector<std::int64_t> line;
    for (std::size_t f = 0; f < g.factor_count(); ++f) {
        const std::uint32_t d = g.factor_order(f);
        const std::uint64_t s = g.factor_stride(f);
        const std::uint32_t unit = static_cast<std::uint32_t>((std::uint64_t{m / d} * power) % m);
        line.assign(static_cast<std::size_t>(d) * m, 0);
        for (std::uint64_t block = 0; block < n; block += s * d) {
            for (std::uint64_t off = 0; off < s; ++off) {
                const std::uint64_t base = block + off;
                std::fill(line.begin(), line.end(), 0);
                for (std::uint32_t j = 0; j < d; ++j) {
                    const std::int64_t* src = &hist[(base + j * s) * m];
                    for (std::uint32_t a = 0; a < d; ++a) {
                        const std::uint32_t shift = static_cast<std::uint32_t>((std::uint64_t{a} * j * unit) % m);
                        std::int64_t* dst = &line[static_cast<std::size_t>(a) * m];
                        for (std::uint32_t e = 0; e < m; ++e) {
                            if (src[e] == 0) continue;
                            std::uint32_t t = e + shift;
                            if (t >= m) t -= m;
                            dst[t] += src[e];
                        }
                    }
                }
                for (std::uint32_t a = 0; a < d; ++a)
                    std::copy_n(&line[static_cast<std::size_t>(a) * m], m, &hist[(base + a * s) * m]);
            }
        }
    }
    std::vector<std::int64_t> out(n * deg);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::span<std::int64_t> h(&hist[i * m], m);
        ring.reduce_in_place(h);
        std::copy_n(h.begin(), deg, &out[i * deg]);
    }
    return out;
}

/// Direct signatures: out[a][j * deg + t].
std::vector<std::vector<std::int64_t>> direct_signatures(const GroupProduct& g, const CyclotomicReducer& ring,
                                                         const Partition& gamma, std::uint32_t power,
                                                         unsigned jobs) {
    const std::uint64_t n = g.order();
    const std::uint32_t m = g.exponent();
    const std::size_t deg = ring.degree();
    const std::uint32_t classes = gamma.class_count();
    std::vector<std::vector<std::int64_t>> out(n);
    parallel_for(n, jobs, [&](std::size_t a) {
        std::vector<std::int64_t> hist(static_cast<std::size_t>(classes) * m, 0);
        for (std::uint64_t b = 0; b < n; ++b) hist[gamma.class_of(b) * m + g.pairing_exponent(a, b, power)] += 1;
        std::vector<std::int64_t> sig(classes * deg);
        for (std::uint32_t j = 0; j < classes; ++j) {
            std::span<std::int64_t> h(&hist[static_cast<std::size_t>(j) * m], m);
            ring.reduce_in_place(h);
            std::copy_n(h.begin(), deg, &sig[j * deg]);
        }
        out[a] = std::move(sig);
    });
    return out;
}

DualPartition dual_partition(const Partition& gamma, const DualOptions& options) {
    const GroupProduct& g = gamma.group();
    const std::uint64_t n = g.order();
    const std::uint32_t m = g.exponent();
    const std::uint32_t power = checked_power(g, options.character_power);
    options.budget.require_elements(n, "dual partition");
    auto ring = CyclotomicReducer::make(m);
    const std::size_t deg = ring->degree();
    const std::uint32_t classes = gamma.class_count();

    std::vector<std::uint32_t> raw(n, 0);

    if (options.engine == DualEngine::Direct) {
        std::uint64_t factors = std::max<std::size_t>(1, g.factor_count());
        if (n != 0 && n > options.budget.max_work / n / factors)
            throw BudgetExceeded("direct dual: " + std::to_string(n) + "^2 pairings exceed the work budget " +
                                 std::to_string(options.budget.max_work));
        auto sigs = direct_signatures(g, *ring, gamma, power, options.budget.jobs);
        std::unordered_map<std::vector<std::int64_t>, std::uint32_t, VecHash> ids;
        std::vector<std::vector<std::int64_t>> by_id;
        for (std::uint64_t a = 0; a < n; ++a) {
            auto [it, inserted] = ids.try_emplace(sigs[a], static_cast<std::uint32_t>(ids.size()));
            if (inserted) by_id.push_back(sigs[a]);
            raw[a] = it->second;
        }
        Partition part(gamma.host(), raw);
        DualPartition out{part, {}};
        const auto reps = part.representatives();
        for (std::uint64_t rep : reps) {
            DualSignature sig;
            const auto& coords = by_id[raw[rep]];
            for (std::uint32_t j = 0; j < classes; ++j)
                sig.emplace_back(ring, std::vector<std::int64_t>(coords.begin() + j * deg,
                                                                  coords.begin() + (j + 1) * deg));
            out.signatures.push_back(std::move(sig));
        }
        std::vector<std::string> labels;
        for (const auto& sig : out.signatures) {
            std::string s = "(";
            for (std::size_t j = 0; j < sig.size(); ++j) s += (j ? "; " : "") + sig[j].to_string();
            labels.push_back(s + ")");
        }
        out.partition = Partition(gamma.host(), part.class_vector(), labels, LabelKind::Signature);
        return out;
    }

    std::uint64_t sum_d = 0;
    for (std::size_t f = 0; f < g.factor_count(); ++f) sum_d += g.factor_order(f);
    const std::uint64_t per_class = m == 2 ? n * g.factor_count() : n * m * sum_d;
    if (classes != 0 && per_class > options.budget.max_work / classes)
        throw BudgetExceeded("dual transform: " + std::to_string(classes) + " classes of " +
                             std::to_string(per_class) + " work units exceed the budget " +
                             std::to_string(options.budget.max_work));

    const auto roots = root_table(*ring);
    const unsigned batch = std::max(1u, options.budget.jobs);
    // Refinement by one class at a time; each refined id remembers a
    // representative element, and hash collisions are chained.
    std::vector<std::uint32_t> next(n);
    std::vector<std::uint64_t> rep_of;
    std::vector<std::uint32_t> chain;
    std::unordered_map<std::uint64_t, std::uint32_t> head;
    constexpr std::uint32_t kNone = UINT32_MAX;
    for (std::uint32_t start = 0; start < classes; start += batch) {
        const std::uint32_t stop = std::min<std::uint32_t>(classes, start + batch);
        std::vector<std::vector<std::int64_t>> values(stop - start);
        parallel_for(stop - start, options.budget.jobs, [&](std::size_t k) {
            values[k] = class_transform(g, *ring, roots, gamma.class_vector(), static_cast<std::uint32_t>(start + k),
                                        power);
        });
        for (std::uint32_t j = start; j < stop; ++j) {
            const auto& vals = values[j - start];
            head.clear();
            rep_of.clear();
            chain.clear();
            for (std::uint64_t a = 0; a < n; ++a) {
                const std::int64_t* va = &vals[a * deg];
                std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ raw[a];
                for (std::size_t t = 0; t < deg; ++t)
                    h ^= static_cast<std::uint64_t>(va[t]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
                auto [it, inserted] = head.try_emplace(h, kNone);
                std::uint32_t id = it->second;
                for (; id != kNone; id = chain[id]) {
                    const std::uint64_t r = rep_of[id];
                    if (raw[r] == raw[a] && std::equal(va, va + deg, &vals[r * deg])) break;
                }
                if (id == kNone) {
                    id = static_cast<std::uint32_t>(rep_of.size());
                    rep_of.push_back(a);
                    chain.push_back(it->second);
                    it->second = id;
                }
                next[a] = id;
            }
            raw.swap(next);
        }
    }

    Partition part(gamma.host(), raw);
    DualPartition out{part, {}};
    const auto reps = part.representatives();
    if (std::uint64_t{classes} * reps.size() > kSignatureCells) {
        out.partition = Partition(gamma.host(), part.class_vector(), {}, LabelKind::Opaque);
        return out;
    }
    out.signatures.resize(reps.size());
    parallel_for(reps.size(), options.budget.jobs, [&](std::size_t c) {
        std::vector<std::int64_t> acc(static_cast<std::size_t>(classes) * deg, 0);
        for (std::uint64_t b = 0; b < n; ++b) {
            const std::int64_t* z = &roots[static_cast<std::size_t>(g.pairing_exponent(reps[c], b, power)) * deg];
            std::int64_t* dst = &acc[static_cast<std::size_t>(gamma.class_of(b)) * deg];
            for (std::size_t t = 0; t < deg; ++t) dst[t] += z[t];
        }
        DualSignature sig(classes);
        for (std::uint32_t j = 0; j < classes; ++j)
            sig[j] = CycInt(ring, std::vector<std::int64_t>(acc.begin() + j * deg, acc.begin() + (j + 1) * deg));
        out.signatures[c] = std::move(sig);
    });
    std::vector<std::string> labels;
    for (const auto& sig : out.signatures) {
        std::string s = "(";
        for (std::size_t j = 0; j < sig.size(); ++j) s += (j ? "; " : "") + sig[j].to_string();
        labels.push_back(s + ")");
    }
    out.partition = Partition(gamma.host(), part.class_vector(), labels, LabelKind::Signature);
    return out;
}

}  // namespace

DualPartition left_dual(const Partition& gamma, const DualOptions& options) { return dual_partition(gamma, options); }

DualPartition right_dual(const Partition& lambda, const DualOptions& options) {
    return dual_partition(lambda, options);
}

DualSignature element_signature(const Partition& gamma, std::uint64_t a, std::uint32_t character_power) {
    const GroupProduct& g = gamma.group();
    const std::uint32_t power = checked_power(g, character_power);
    const std::uint32_t m = g.exponent();
    auto ring = CyclotomicReducer::make(m);
    std::vector<std::int64_t> hist(static_cast<std::size_t>(gamma.class_count()) * m, 0);
    for (std::uint64_t b = 0; b < g.order(); ++b) hist[gamma.class_of(b) * m + g.pairing_exponent(a, b, power)] += 1;
    DualSignature sig;
    for (std::uint32_t j = 0; j < gamma.class_count(); ++j)
        sig.push_back(CycInt::from_histogram(ring, std::span<const std::int64_t>(&hist[j * m], m)));
    return sig;
}

ReflexivityReport reflexivity_check(const Partition& gamma, bool compute_bidual, const DualOptions& options) {
    ReflexivityReport report;
    const auto l = left_dual(gamma, options);
    report.gamma_classes = gamma.class_count();
    report.dual_classes = l.partition.class_count();
    report.reflexive = report.gamma_classes == report.dual_classes;
    if (compute_bidual) {
        auto r = right_dual(l.partition, options).partition;
        report.bidual_finer = is_finer(r, gamma);
        report.bidual_equal = r == gamma;
        report.bidual = std::move(r);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

BigInt product_over(Subset s, const std::vector<std::uint64_t>& h, std::int64_t offset) {
    BigInt out = 1;
    for (std::size_t i = 0; i < h.size(); ++i)
        if ((s >> i) & 1U) out *= static_cast<unsigned long>(h[i] + offset);
    return out;
}

void require_orders(const Poset& p, const std::vector<std::uint64_t>& h) {
    if (h.size() != p.size()) throw ShapeMismatch("order vector and poset differ in size");
}

}  // namespace

BigInt phi(Subset d, Subset i, const Poset& p, const std::vector<std::uint64_t>& h) {
    require_orders(p, h);
    const Subset top = extremes(p, i, Extreme::Max);
    if (!subset_contains(top, i & d)) return 0;
    BigInt v = product_over(i & ~top, h, 0) * product_over(top & ~d, h, -1);
    return subset_size(i & d) % 2 ? BigInt(-v) : v;
}

BigInt psi(Subset d, Subset i, const Poset& p, const std::vector<std::uint64_t>& h) {
    require_orders(p, h);
    const Subset bottom = extremes(p, d, Extreme::Min);
    if (!subset_contains(bottom, i & d)) return 0;
    BigInt v = product_over(d & ~bottom, h, 0) * product_over(bottom & ~i, h, -1);
    return subset_size(i & d) % 2 ? BigInt(-v) : v;
}

BigInt signature_via_ideals(Subset alpha_support, const Poset& p, const WeightFunction& omega,
                            const std::vector<std::uint64_t>& h, const Rational& b) {
    const Subset d = closure(p.dual(), alpha_support);
    BigInt sum = 0;
    for (Subset i : ideals(p))
        if (omega.varpi(i) == b) sum += phi(d, i, p, h);
    return sum;
}

BigInt signature_via_ideals_psi(Subset theta_support, const Poset& p, const WeightFunction& omega,
                                const std::vector<std::uint64_t>& h, const Rational& b) {
    const Subset i = closure(p, theta_support);
    BigInt sum = 0;
    for (Subset d : ideals(p.dual()))
        if (omega.varpi(d) == b) sum += psi(d, i, p, h);
    return sum;
}

Subset F_degree_set(Subset alpha_support, const Poset& p) {
    const Subset d = closure(p.dual(), alpha_support);
    return (p.full_set() & ~d) | extremes(p, d, Extreme::Min);
}

namespace {

SparsePoly x_power(const Rational& e, const Rational& c = 1) { return SparsePoly::monomial(e, c); }

SparsePoly F_bruteforce(const GroupProduct& g, std::uint64_t alpha, const Poset& p, const WeightFunction& omega,
                        const Budget& budget) {
    budget.require_elements(g.order(), "brute-force F polynomial");
    const std::uint32_t m = g.exponent();
    auto ring = CyclotomicReducer::make(m);
    const auto supports = g.all_supports(budget);
    std::map<Rational, std::vector<std::int64_t>> hist;
    std::unordered_map<Subset, Rational> weight_of;
    for (std::uint64_t b = 0; b < g.order(); ++b) {
        auto it = weight_of.find(supports[b]);
        if (it == weight_of.end()) it = weight_of.emplace(supports[b], wpm_weight(p, omega, supports[b])).first;
        auto& hv = hist[it->second];
        if (hv.empty()) hv.assign(m, 0);
        hv[g.pairing_exponent(alpha, b)] += 1;
    }
    SparsePoly out;
    for (const auto& [w, hv] : hist) {
        CycInt v = CycInt::from_histogram(ring, hv);
        auto integer = cyc_is_rational_integer(v);
        if (!integer) throw InvalidInput("weight-class character sum is not an integer: " + v.to_string());
        out.add_term(w, Rational(static_cast<long>(*integer)));
    }
    return out;
}

SparsePoly F_ideal_sum(Subset alpha_support, const Poset& p, const WeightFunction& omega,
                       const std::vector<std::uint64_t>& h) {
    const Subset d = closure(p.dual(), alpha_support);
    const Subset x = F_degree_set(alpha_support, p);
    SparsePoly out;
    for (Subset i : ideals(p)) {
        if (!subset_contains(x, i)) continue;
        const Subset top = extremes(p, i, Extreme::Max);
        BigInt v = product_over(i & ~top, h, 0) * product_over(top & ~d, h, -1);
        if (subset_size(i & d) % 2) v = -v;
        out.add_term(omega.varpi(i), Rational(v));
    }
    return out;
}

SparsePoly F_hierarchical(Subset alpha_support, const Poset& p, const WeightFunction& omega,
                          const std::vector<std::uint64_t>& h) {
    if (!is_hierarchical(p)) throw PreconditionFailed("hierarchical F engine needs a hierarchical poset");
    const Subset d = closure(p.dual(), alpha_support);
    const Levels lv = levels(p);
    const std::uint32_t r = lv.sigma(d);
    auto lower_product = [&](std::uint32_t t) {
        // prod over W_1..W_{t-1} of h_i x^{omega(i)}
        const Subset s = lv.lower_union(t - 1);
        return x_power(omega.varpi(s), Rational(product_over(s, h, 0)));
    };
    auto level_factor = [&](Subset members) {
        SparsePoly out = SparsePoly::constant(1);
        for (std::size_t i = 0; i < p.size(); ++i)
            if ((members >> i) & 1U) {
                SparsePoly f = x_power(omega(i), Rational(static_cast<unsigned long>(h[i] - 1)));
                f += SparsePoly::constant(1);
                out *= f;
            }
        return out;
    };
    const Subset wr = lv.by_level[r - 1];
    SparsePoly first = lower_product(r) * level_factor(wr & ~d);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (((wr & d) >> i) & 1U) first *= SparsePoly::constant(1) - x_power(omega(i));
    SparsePoly out = first;
    for (std::uint32_t t = 1; t + 1 <= r; ++t) out += lower_product(t) * level_factor(lv.by_level[t - 1]);
    for (std::uint32_t t = 2; t <= r; ++t) out -= lower_product(t);
    return out;
}

}  // namespace

SparsePoly F_poly(const GroupProduct& g, std::uint64_t alpha, const Poset& p, const WeightFunction& omega,
                  FEngine engine, const Budget& budget) {
    if (g.coordinate_count() != p.size() || omega.size() != p.size())
        throw ShapeMismatch("group, poset and weights must share the coordinate count");
    if (alpha >= g.order()) throw InvalidInput("element index out of range");
    const auto& h = g.coordinate_orders();
    switch (engine) {
        case FEngine::BruteForce: return F_bruteforce(g, alpha, p, omega, budget);
        case FEngine::IdealSum: return F_ideal_sum(g.support(alpha), p, omega, h);
        case FEngine::Hierarchical: return F_hierarchical(g.support(alpha), p, omega, h);
    }
    throw InvalidInput("unknown F engine");
}

// ---------------------------------------------------------------------------
// Krawtchouk matrix and equivalence checkers

KrawtchoukMatrix krawtchouk_matrix(const Partition& lambda, const Partition& gamma, const DualOptions& options) {
    require_same_host(lambda, gamma);
    const auto l = left_dual(gamma, options);
    if (auto w = finer_witness(lambda, l.partition))
        throw PreconditionFailed("lambda is not finer than l(gamma): elements " + std::to_string(w->first) + " and " +
                                 std::to_string(w->second) + " share a lambda class but differ in l(gamma)");
    KrawtchoukMatrix km;
    for (std::uint64_t rep : lambda.representatives())
        km.rho.push_back(l.signatures.empty() ? element_signature(gamma, rep, options.character_power)
                                              : l.signatures[l.partition.class_of(rep)]);
    return km;
}

bool levels_force_orders(const Poset& p, const WeightFunction& omega, const std::vector<std::uint64_t>& h) {
    const Levels lv = levels(p);
    for (std::size_t u = 0; u < p.size(); ++u)
        for (std::size_t v = 0; v < p.size(); ++v)
            if (lv.len[u] == lv.len[v] && omega(u) == omega(v) && h[u] != h[v]) return false;
    return true;
}

namespace {

void require_hierarchical_integer(const Poset& p, const WeightFunction& omega) {
    if (!is_hierarchical(p)) throw PreconditionFailed("poset is not hierarchical");
    if (!omega.is_integer()) throw PreconditionFailed("weights must be integers");
}

std::vector<std::int64_t> order_weight_labels(const GroupProduct& g, const WeightFunction& omega) {
    std::vector<std::pair<std::uint64_t, Rational>> keys;
    for (std::size_t i = 0; i < g.coordinate_count(); ++i) keys.emplace_back(g.coordinate_orders()[i], omega(i));
    return dense_labels(keys);
}

}  // namespace

PosetDualityReport poset_duality_check(std::shared_ptr<const GroupProduct> g, const Poset& p, const WeightFunction& omega,
                                const DualOptions& options) {
    require_hierarchical_integer(p, omega);
    if (g->coordinate_count() != p.size() || omega.size() != p.size())
        throw ShapeMismatch("group, poset and weights must share the coordinate count");
    PosetDualityReport rep;
    rep.udp_and_levels = udp_check(p, omega).holds && levels_force_orders(p, omega, g->coordinate_orders());
    const Partition qh = induce_Q(g, p, omega, options.budget);
    const Partition qg = induce_Q(g, p.dual(), omega, options.budget);
    const auto lam = left_dual(qh, options);
    const auto theta = right_dual(qg, options);
    rep.q_classes = qh.class_count();
    rep.dual_classes = lam.partition.class_count();
    rep.mutually_dual = is_finer(qg, lam.partition) && is_finer(qh, theta.partition);
    rep.reflexive = rep.dual_classes == rep.q_classes;
    rep.dual_equals_q = lam.partition == qg;
    rep.dual_finer_than_q = is_finer(lam.partition, qg);
    return rep;
}

bool same_dual_class_by_automorphism(const GroupProduct& g, std::uint64_t alpha, std::uint64_t gamma, const Poset& p,
                      const WeightFunction& omega) {
    if (!is_hierarchical(p)) throw PreconditionFailed("poset is not hierarchical");
    const Poset dual = p.dual();
    const Subset d = closure(dual, g.support(alpha));
    const Subset b = closure(dual, g.support(gamma));
    return find_automorphism_mapping(p, order_weight_labels(g, omega), b, d).has_value();
}

std::optional<Permutation> automorphism_from_factor_matching(const GroupProduct& g, std::uint64_t alpha, std::uint64_t gamma,
                                            const Poset& p, const WeightFunction& omega) {
    require_hierarchical_integer(p, omega);
    const auto& h = g.coordinate_orders();
    if (F_poly(g, alpha, p, omega, FEngine::Hierarchical) != F_poly(g, gamma, p, omega, FEngine::Hierarchical))
        return std::nullopt;
    const Poset dual = p.dual();
    const Subset d = closure(dual, g.support(alpha));
    const Subset b = closure(dual, g.support(gamma));
    const Levels lv = levels(p);
    const std::uint32_t r = lv.sigma(d);
    if (lv.sigma(b) != r) return std::nullopt;
    const Subset wr = lv.by_level[r - 1];

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < p.size(); ++i)
        if ((wr >> i) & 1U) members.push_back(i);
    std::vector<UnitMinusMember> family;
    for (std::size_t i : members)
        family.push_back({static_cast<std::uint32_t>(omega(i).get_num().get_ui()),
                          Rational(1, static_cast<unsigned long>(h[i] - 1))});
    std::vector<std::size_t> c_pos, d_pos;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if ((b >> members[k]) & 1U) c_pos.push_back(k);
        if ((d >> members[k]) & 1U) d_pos.push_back(k);
    }
    auto matched = match_unit_minus_factors(family, c_pos, d_pos);
    if (!matched) return std::nullopt;

    Permutation lambda(p.size());
    std::iota(lambda.begin(), lambda.end(), 0U);
    std::vector<bool> taken(members.size(), false);
    for (std::size_t k = 0; k < c_pos.size(); ++k) {
        const std::size_t target = d_pos[(*matched)[k]];
        lambda[members[c_pos[k]]] = static_cast<std::uint32_t>(members[target]);
        taken[target] = true;
    }
    // Extend to the rest of W_r, pairing equal (h, omega) outside b and d.
    for (std::size_t k = 0; k < members.size(); ++k) {
        if ((b >> members[k]) & 1U) continue;
        bool placed = false;
        for (std::size_t t = 0; t < members.size() && !placed; ++t) {
            if (taken[t] || ((d >> members[t]) & 1U)) continue;
            if (h[members[t]] == h[members[k]] && omega(members[t]) == omega(members[k])) {
                lambda[members[k]] = static_cast<std::uint32_t>(members[t]);
                taken[t] = true;
                placed = true;
            }
        }
        if (!placed) return std::nullopt;
    }
    for (std::size_t u = 0; u < p.size(); ++u)
        for (std::size_t v = 0; v < p.size(); ++v)
            if (p.leq(u, v) != p.leq(lambda[u], lambda[v])) return std::nullopt;
    if (apply_permutation(lambda, b) != d) return std::nullopt;
    return lambda;
}

CoveringDualityReport covering_duality_check(std::shared_ptr<const GroupProduct> g, const Covering& t,
                                const DualOptions& options) {
    if (!t.is_antichain()) throw PreconditionFailed("covering is not an anti-chain");
    if (g->coordinate_count() != t.universe_size()) throw ShapeMismatch("group and covering differ in size");
    CoveringDualityReport rep;
    const Partition co = induce_CO(g, t, options.budget);
    const auto l = left_dual(co, options);
    rep.finer = is_finer(co, l.partition);
    rep.equal = co == l.partition;

    const auto& h = g->coordinate_orders();
    std::vector<Subset> blocks;
    const std::size_t n = t.universe_size();
    if (t.is_logical()) {
        if (t.k() == n) blocks.push_back(g->full_set());
        else if (t.k() == 1)
            for (std::size_t i = 0; i < n; ++i) blocks.push_back(Subset{1} << i);
    } else {
        blocks = t.members();
    }
    bool is_partition = !blocks.empty();
    Subset seen = 0;
    for (Subset blk : blocks) {
        if (seen & blk) is_partition = false;
        seen |= blk;
    }
    bool equal_products = true;
    if (is_partition) {
        const BigInt first = product_over(blocks.front(), h, 0);
        for (Subset blk : blocks)
            if (product_over(blk, h, 0) != first) equal_products = false;
    }
    rep.partition_equal_products = is_partition && equal_products;
    return rep;
}

}  // namespace reflex
