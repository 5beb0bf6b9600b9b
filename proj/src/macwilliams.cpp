#include "reflex/macwilliams.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "reflex/errors.hpp"
#include "reflex/parallel.hpp"

namespace reflex {

namespace {

bool prime(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint32_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

std::uint32_t mod_inverse(std::uint32_t x, std::uint32_t p) {
    std::uint64_t result = 1, base = x % p, e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

using Vector = PrimeFieldSpace::Vector;

// Reduced row-echelon form; zero rows dropped, pivots strictly increasing.
std::vector<Vector> rref(std::vector<Vector> rows, std::uint32_t p, std::size_t n) {
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        const std::uint64_t inv = mod_inverse(rows[r][col], p);
        for (auto& x : rows[r]) x = static_cast<std::uint32_t>(x * inv % p);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            const std::uint64_t f = rows[i][col];
            for (std::size_t j = 0; j < n; ++j)
                rows[i][j] = static_cast<std::uint32_t>((rows[i][j] + (p - f) * rows[r][j]) % p);
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

std::size_t pivot_of(const Vector& row) {
    std::size_t j = 0;
    while (row[j] == 0) ++j;
    return j;
}

void require_same_space(const Partition& a, const Partition& b) {
    if (!a.host() || !b.host() || !a.host()->same_shape(*b.host()))
        throw ShapeMismatch("partitions live on spaces of different shape");
}

void require_space_shape(const PrimeFieldSpace& space, const Partition& delta) {
    if (!delta.host() || !delta.host()->same_shape(*space.host()))
        throw ShapeMismatch("partition and code live on spaces of different shape");
}

class UnionFind {
public:
    explicit UnionFind(std::uint64_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::uint64_t find(std::uint64_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::uint64_t a, std::uint64_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }
    std::uint64_t size() const { return parent_.size(); }

private:
    std::vector<std::uint64_t> parent_;
};

Partition partition_from_roots(std::shared_ptr<const GroupProduct> host, UnionFind& uf) {
    std::vector<std::uint32_t> cls(uf.size());
    for (std::uint64_t x = 0; x < uf.size(); ++x) cls[x] = static_cast<std::uint32_t>(uf.find(x));
    return Partition(std::move(host), std::move(cls), {}, LabelKind::Orbit);
}

std::string vector_text(const Vector& v) {
    std::string s;
    for (auto x : v) s += std::to_string(x);
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// PrimeFieldSpace

std::shared_ptr<const PrimeFieldSpace> PrimeFieldSpace::make(std::uint32_t p, std::vector<std::uint32_t> blocks) {
    if (!prime(p)) throw InvalidInput("field size " + std::to_string(p) + " is not prime");
    if (blocks.empty()) throw InvalidInput("a space needs at least one block");
    std::vector<std::vector<std::uint32_t>> coords;
    auto s = std::make_shared<PrimeFieldSpace>();
    for (auto k : blocks) {
        if (k == 0) throw InvalidInput("block sizes must be positive");
        coords.emplace_back(k, p);
        s->n_ += k;
    }
    s->p_ = p;
    s->blocks_ = std::move(blocks);
    s->host_ = std::make_shared<const GroupProduct>(GroupProduct::build(std::move(coords)));
    return s;
}

std::shared_ptr<const PrimeFieldSpace> PrimeFieldSpace::from_host(std::shared_ptr<const GroupProduct> host) {
    if (!host || host->factor_count() == 0) throw InvalidInput("empty group is not a vector space");
    const std::uint32_t p = host->factor_order(0);
    std::vector<std::uint32_t> blocks;
    for (const auto& c : host->coordinates()) {
        for (auto d : c)
            if (d != p) throw InvalidInput("group is not a vector space over a single prime field");
        blocks.push_back(static_cast<std::uint32_t>(c.size()));
    }
    if (!prime(p)) throw InvalidInput("factor order " + std::to_string(p) + " is not prime");
    auto s = std::make_shared<PrimeFieldSpace>();
    s->p_ = p;
    s->blocks_ = std::move(blocks);
    s->n_ = host->factor_count();
    s->host_ = std::move(host);
    return s;
}

Vector PrimeFieldSpace::vector_of(std::uint64_t index) const {
    Vector v(n_);
    for (std::size_t f = n_; f-- > 0;) {
        v[f] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    return v;
}

std::uint64_t PrimeFieldSpace::index_of(const Vector& v) const {
    if (v.size() != n_) throw ShapeMismatch("vector length " + std::to_string(v.size()) + " != " + std::to_string(n_));
    std::uint64_t index = 0;
    for (auto x : v) {
        if (x >= p_) throw InvalidInput("vector entry " + std::to_string(x) + " outside F_" + std::to_string(p_));
        index = index * p_ + x;
    }
    return index;
}

std::uint32_t PrimeFieldSpace::inner(const Vector& a, const Vector& b) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) s = (s + std::uint64_t{a[i]} * b[i]) % p_;
    return static_cast<std::uint32_t>(s);
}

std::uint32_t PrimeFieldSpace::inverse(std::uint32_t x) const {
    if (x % p_ == 0) throw InvalidInput("zero has no inverse");
    return mod_inverse(x, p_);
}

Subset PrimeFieldSpace::block_support(const Vector& v) const {
    Subset s = 0;
    std::size_t f = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (std::uint32_t t = 0; t < blocks_[b]; ++t, ++f)
            if (v[f] != 0) s |= Subset{1} << b;
    return s;
}

// ---------------------------------------------------------------------------
// LinearCode

LinearCode LinearCode::from_generators(std::shared_ptr<const PrimeFieldSpace> space, std::vector<Vector> generators) {
    for (auto& g : generators) {
        if (g.size() != space->dimension()) throw ShapeMismatch("generator row has the wrong length");
        for (auto& x : g)
            if (x >= space->characteristic()) throw InvalidInput("generator entry outside the field");
    }
    LinearCode c;
    c.rows_ = rref(std::move(generators), space->characteristic(), space->dimension());
    c.space_ = std::move(space);
    return c;
}

LinearCode LinearCode::zero(std::shared_ptr<const PrimeFieldSpace> space) { return from_generators(std::move(space), {}); }

LinearCode LinearCode::whole(std::shared_ptr<const PrimeFieldSpace> space) {
    std::vector<Vector> id(space->dimension(), Vector(space->dimension(), 0));
    for (std::size_t i = 0; i < id.size(); ++i) id[i][i] = 1;
    return from_generators(std::move(space), std::move(id));
}

std::uint64_t LinearCode::size() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) s *= space_->characteristic();
    return s;
}

bool LinearCode::contains(const Vector& v) const {
    const auto p = space_->characteristic();
    Vector w = v;
    for (const auto& row : rows_) {
        const std::uint64_t f = w[pivot_of(row)];
        if (f == 0) continue;
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = static_cast<std::uint32_t>((w[j] + (p - f) * row[j]) % p);
    }
    return std::all_of(w.begin(), w.end(), [](auto x) { return x == 0; });
}

std::vector<std::uint64_t> LinearCode::elements(const Budget& budget) const {
    budget.require_elements(size(), "code enumeration");
    const auto& g = *space_->host();
    std::vector<std::uint64_t> row_index;
    for (const auto& r : rows_) row_index.push_back(space_->index_of(r));
    std::vector<std::uint64_t> out{0};
    out.reserve(size());
    for (auto r : row_index) {
        const std::size_t base = out.size();
        std::uint64_t step = r;
        for (std::uint32_t c = 1; c < space_->characteristic(); ++c, step = g.add(step, r))
            for (std::size_t i = 0; i < base; ++i) out.push_back(g.add(out[i], step));
    }
    std::sort(out.begin(), out.end());
    return out;
}

LinearCode read_generator_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError("generator file: missing header line");
    std::istringstream head(line);
    std::int64_t p = 0, n = 0;
    if (!(head >> p >> n) || p < 2 || n < 1) throw ParseError("generator file line 1: expected \"p N dims...\"");
    std::vector<std::uint32_t> dims;
    std::int64_t d = 0, total = 0;
    while (head >> d) {
        if (d < 1) throw ParseError("generator file line 1: block sizes must be positive");
        dims.push_back(static_cast<std::uint32_t>(d));
        total += d;
    }
    if (!head.eof()) throw ParseError("generator file line 1: non-numeric block size");
    if (dims.empty()) dims.assign(static_cast<std::size_t>(n), 1), total = n;
    if (total != n) throw ParseError("generator file line 1: block sizes sum to " + std::to_string(total) + ", not N");
    if (!prime(static_cast<std::uint32_t>(p))) throw ParseError("generator file line 1: p is not prime");
    auto space = PrimeFieldSpace::make(static_cast<std::uint32_t>(p), dims);
    std::vector<Vector> rows;
    while (next_line()) {
        std::istringstream row(line);
        Vector v;
        std::int64_t x = 0;
        while (row >> x) {
            if (x < 0 || x >= p)
                throw ParseError("generator file line " + std::to_string(line_no) + ": entry outside F_" +
                                 std::to_string(p));
            v.push_back(static_cast<std::uint32_t>(x));
        }
        if (!row.eof()) throw ParseError("generator file line " + std::to_string(line_no) + ": non-numeric entry");
        if (static_cast<std::int64_t>(v.size()) != n)
            throw ParseError("generator file line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                             " entries, got " + std::to_string(v.size()));
        rows.push_back(std::move(v));
    }
    return LinearCode::from_generators(space, std::move(rows));
}

LinearCode dual_code(const LinearCode& c) {
    const auto& space = c.space();
    const auto p = space.characteristic();
    const auto n = space.dimension();
    std::vector<bool> is_pivot(n, false);
    std::vector<std::size_t> pivots;
    for (const auto& row : c.rows()) {
        pivots.push_back(pivot_of(row));
        is_pivot[pivots.back()] = true;
    }
    std::vector<Vector> basis;
    for (std::size_t j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        Vector v(n, 0);
        v[j] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = (p - c.rows()[r][j]) % p;
        basis.push_back(std::move(v));
    }
    return LinearCode::from_generators(c.space_ptr(), std::move(basis));
}

std::vector<std::uint64_t> annihilator_by_characters(const LinearCode& c, const Budget& budget) {
    const auto& g = *c.space().host();
    budget.require_elements(g.order(), "annihilator scan");
    // Characters are multiplicative, so the generators decide membership.
    std::vector<std::uint64_t> gens;
    for (const auto& r : c.rows()) gens.push_back(c.space().index_of(r));
    std::vector<std::uint64_t> out;
    for (std::uint64_t b = 0; b < g.order(); ++b)
        if (std::all_of(gens.begin(), gens.end(), [&](auto a) { return g.pairing_exponent(a, b) == 0; }))
            out.push_back(b);
    return out;
}

std::vector<std::uint64_t> distribution(const std::vector<std::uint64_t>& elements, const Partition& delta) {
    std::vector<std::uint64_t> counts(delta.class_count(), 0);
    for (auto e : elements) ++counts[delta.class_of(e)];
    return counts;
}

std::vector<std::uint64_t> distribution(const LinearCode& c, const Partition& delta, const Budget& budget) {
    require_space_shape(c.space(), delta);
    return distribution(c.elements(budget), delta);
}

// ---------------------------------------------------------------------------
// MacWilliams identity

bool MacWilliamsReport::holds() const {
    if (lhs.size() != rhs.size()) return false;
    for (std::size_t b = 0; b < lhs.size(); ++b) {
        const auto v = cyc_is_rational_integer(rhs[b]);
        if (!v || BigInt(static_cast<long>(*v)) != lhs[b]) return false;
    }
    return true;
}

namespace {

MacWilliamsReport identity_sides(const std::vector<std::uint64_t>& code, const std::vector<std::uint64_t>& dual,
                                 const Partition& lambda, const Partition& gamma, const DualOptions& options) {
    const auto km = krawtchouk_matrix(lambda, gamma, options);
    const auto code_dist = distribution(code, lambda);
    const auto dual_dist = distribution(dual, gamma);
    MacWilliamsReport rep;
    const auto ring = CyclotomicReducer::make(gamma.group().exponent());
    for (std::uint32_t b = 0; b < gamma.class_count(); ++b) {
        rep.lhs.push_back(BigInt(static_cast<unsigned long>(code.size())) *
                          BigInt(static_cast<unsigned long>(dual_dist[b])));
        CycInt sum = CycInt::integer(ring, 0);
        for (std::uint32_t a = 0; a < lambda.class_count(); ++a)
            if (code_dist[a]) sum += km.rho[a][b].scaled(static_cast<std::int64_t>(code_dist[a]));
        rep.rhs.push_back(std::move(sum));
    }
    return rep;
}

}  // namespace

MacWilliamsReport macwilliams_verify(const LinearCode& c, const Partition& lambda, const Partition& gamma,
                                     const DualOptions& options) {
    require_space_shape(c.space(), lambda);
    require_space_shape(c.space(), gamma);
    return identity_sides(c.elements(options.budget), dual_code(c).elements(options.budget), lambda, gamma, options);
}

std::vector<std::uint64_t> generated_subgroup(const GroupProduct& g, const std::vector<std::uint64_t>& generators,
                                              const Budget& budget) {
    budget.require_elements(g.order(), "subgroup closure");
    std::vector<char> seen(g.order(), 0);
    std::vector<std::uint64_t> out{0}, stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        for (auto gen : generators) {
            if (gen >= g.order()) throw InvalidInput("generator index outside the group");
            const auto y = g.add(x, gen);
            if (!seen[y]) {
                seen[y] = 1;
                out.push_back(y);
                stack.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

MacWilliamsReport macwilliams_verify_additive(const std::vector<std::uint64_t>& generators, const Partition& lambda,
                                              const Partition& gamma, const DualOptions& options) {
    require_same_space(lambda, gamma);
    const auto& g = gamma.group();
    const auto code = generated_subgroup(g, generators, options.budget);
    std::vector<std::uint64_t> dual;
    for (std::uint64_t b = 0; b < g.order(); ++b)
        if (std::all_of(generators.begin(), generators.end(), [&](auto a) { return g.pairing_exponent(a, b) == 0; }))
            dual.push_back(b);
    return identity_sides(code, dual, lambda, gamma, options);
}

// ---------------------------------------------------------------------------
// One-dimensional and all-code checks

bool is_f_invariant(const Partition& delta) {
    const auto space = PrimeFieldSpace::from_host(delta.host());
    const auto& g = *space->host();
    for (std::uint64_t x = 0; x < g.order(); ++x)
        for (std::uint32_t c = 2; c < space->characteristic(); ++c)
            if (delta.class_of(g.scale(x, c)) != delta.class_of(x)) return false;
    return true;
}

std::vector<std::uint64_t> projective_points(const PrimeFieldSpace& space) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 1; x < space.size(); ++x) {
        const auto v = space.vector_of(x);
        if (v[pivot_of(v)] == 1) out.push_back(x);
    }
    return out;
}

namespace {

std::shared_ptr<const PrimeFieldSpace> validated_pair(const Partition& lambda, const Partition& gamma) {
    require_same_space(lambda, gamma);
    auto space = PrimeFieldSpace::from_host(gamma.host());
    if (!is_f_invariant(lambda)) throw InvalidInput("lambda is not F-invariant");
    if (!is_f_invariant(gamma)) throw InvalidInput("gamma is not F-invariant");
    return space;
}

// Groups codes by lambda-distribution and records the first disagreement in
// the gamma-distribution of their duals.
class DistributionTable {
public:
    void add(std::vector<std::uint64_t> key, std::vector<std::uint64_t> dual_key, const LinearCode& code,
             PamiReport& rep) {
        ++rep.codes_checked;
        auto [it, inserted] = table_.try_emplace(std::move(key), std::move(dual_key), code);
        if (!inserted && it->second.first != dual_key && !rep.witness) rep.witness.emplace(it->second.second, code);
    }

private:
    std::map<std::vector<std::uint64_t>, std::pair<std::vector<std::uint64_t>, LinearCode>> table_;
};

}  // namespace

PamiReport pami_onedim_check(const Partition& lambda, const Partition& gamma, const DualOptions& options) {
    const auto space = validated_pair(lambda, gamma);
    const auto& g = *space->host();
    options.budget.require_elements(g.order(), "one-dimensional code scan");
    PamiReport rep;
    rep.zero_is_class = lambda.identity_is_singleton();
    DistributionTable table;
    for (auto alpha : projective_points(*space)) {
        const auto code = LinearCode::from_generators(space, {space->vector_of(alpha)});
        std::vector<std::uint64_t> key(lambda.class_count(), 0), dual_key(gamma.class_count(), 0);
        for (std::uint64_t c = 0; c < space->characteristic(); ++c) ++key[lambda.class_of(g.scale(alpha, c))];
        for (std::uint64_t b = 0; b < g.order(); ++b)
            if (g.pairing_exponent(alpha, b) == 0) ++dual_key[gamma.class_of(b)];
        table.add(std::move(key), std::move(dual_key), code, rep);
    }
    rep.holds = rep.zero_is_class && !rep.witness;
    rep.finer_than_dual = is_finer(lambda, left_dual(gamma, options).partition);
    return rep;
}

std::uint64_t subspace_count(std::uint32_t p, std::size_t n) {
    // Gaussian binomials through the recurrence G(n, k) = G(n-1, k-1) + p^k G(n-1, k).
    std::vector<BigInt> row{1};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<BigInt> next(m + 1, 0);
        BigInt pk = 1;
        for (std::size_t k = 0; k <= m; ++k) {
            if (k > 0) next[k] += row[k - 1];
            if (k < m) next[k] += pk * row[k];
            pk *= p;
        }
        row = std::move(next);
    }
    BigInt total = 0;
    for (const auto& x : row) total += x;
    const BigInt cap = BigInt("18446744073709551615");
    return total > cap ? ~std::uint64_t{0} : std::stoull(total.get_str());
}

void for_each_subspace(std::shared_ptr<const PrimeFieldSpace> space, std::size_t dim,
                       const std::function<void(const LinearCode&)>& fn) {
    const auto n = space->dimension();
    const auto p = space->characteristic();
    if (dim > n) return;
    std::vector<std::size_t> pivots(dim);
    std::iota(pivots.begin(), pivots.end(), 0);
    while (true) {
        std::vector<bool> is_pivot(n, false);
        for (auto c : pivots) is_pivot[c] = true;
        std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, column)
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t j = pivots[r] + 1; j < n; ++j)
                if (!is_pivot[j]) free.emplace_back(r, j);
        std::vector<std::uint32_t> digits(free.size(), 0);
        while (true) {
            std::vector<Vector> rows(dim, Vector(n, 0));
            for (std::size_t r = 0; r < dim; ++r) rows[r][pivots[r]] = 1;
            for (std::size_t i = 0; i < free.size(); ++i) rows[free[i].first][free[i].second] = digits[i];
            fn(LinearCode::from_generators(space, std::move(rows)));
            std::size_t i = 0;
            while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
            if (i == digits.size()) break;
        }
        // Next pivot set in lexicographic order.
        std::size_t r = dim;
        while (r > 0 && pivots[r - 1] == n - dim + r - 1) --r;
        if (r == 0) break;
        ++pivots[r - 1];
        for (std::size_t t = r; t < dim; ++t) pivots[t] = pivots[t - 1] + 1;
    }
}

PamiReport pami_all_codes_check(const Partition& lambda, const Partition& gamma, const DualOptions& options) {
    const auto space = validated_pair(lambda, gamma);
    options.budget.require_elements(subspace_count(space->characteristic(), space->dimension()), "subspace scan");
    PamiReport rep;
    rep.zero_is_class = lambda.identity_is_singleton();
    DistributionTable table;
    for (std::size_t d = 0; d <= space->dimension(); ++d)
        for_each_subspace(space, d, [&](const LinearCode& c) {
            table.add(distribution(c.elements(), lambda), distribution(dual_code(c).elements(), gamma), c, rep);
        });
    rep.holds = rep.zero_is_class && !rep.witness;
    rep.finer_than_dual = is_finer(lambda, left_dual(gamma, options).partition);
    return rep;
}

// ---------------------------------------------------------------------------
// LinearMap

LinearMap LinearMap::identity(std::uint32_t p, std::size_t n) {
    LinearMap m;
    m.p = p;
    m.n = n;
    m.entries.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) m.entries[i * n + i] = 1;
    m.invertible = true;
    return m;
}

LinearMap LinearMap::from_columns(std::uint32_t p, const std::vector<Vector>& columns) {
    LinearMap m;
    m.p = p;
    m.n = columns.size();
    m.entries.assign(m.n * m.n, 0);
    for (std::size_t j = 0; j < m.n; ++j) {
        if (columns[j].size() != m.n) throw ShapeMismatch("column length differs from the column count");
        for (std::size_t i = 0; i < m.n; ++i) m.entries[i * m.n + j] = columns[j][i] % p;
    }
    std::vector<Vector> rows(m.n);
    for (std::size_t i = 0; i < m.n; ++i) rows[i] = Vector(m.entries.begin() + i * m.n, m.entries.begin() + (i + 1) * m.n);
    m.invertible = rref(std::move(rows), p, m.n).size() == m.n;
    return m;
}

Vector LinearMap::apply(const Vector& v) const {
    if (v.size() != n) throw ShapeMismatch("vector length does not match the map");
    Vector out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < n; ++j) s += std::uint64_t{entries[i * n + j]} * v[j];
        out[i] = static_cast<std::uint32_t>(s % p);
    }
    return out;
}

LinearMap operator*(const LinearMap& a, const LinearMap& b) {
    if (a.n != b.n || a.p != b.p) throw ShapeMismatch("composing maps of different shapes");
    LinearMap m;
    m.p = a.p;
    m.n = a.n;
    m.entries.assign(m.n * m.n, 0);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) {
            std::uint64_t s = 0;
            for (std::size_t t = 0; t < m.n; ++t) s += std::uint64_t{a.at(i, t)} * b.at(t, j);
            m.entries[i * m.n + j] = static_cast<std::uint32_t>(s % m.p);
        }
    m.invertible = a.invertible && b.invertible;
    return m;
}

LinearMap LinearMap::inverse() const {
    // Row-reduce [A | I].
    std::vector<Vector> rows(n, Vector(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = at(i, j);
        rows[i][n + i] = 1;
    }
    const auto reduced = rref(std::move(rows), p, 2 * n);
    if (reduced.size() < n || pivot_of(reduced[n - 1]) != n - 1) throw PreconditionFailed("map is singular");
    LinearMap m;
    m.p = p;
    m.n = n;
    m.entries.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.entries[i * n + j] = reduced[i][n + j];
    m.invertible = true;
    return m;
}

std::uint64_t general_linear_order(std::uint32_t p, std::size_t n) {
    BigInt order = 1, pn = 1, pi = 1;
    for (std::size_t i = 0; i < n; ++i) pn *= p;
    for (std::size_t i = 0; i < n; ++i, pi *= p) order *= pn - pi;
    const BigInt cap = BigInt("18446744073709551615");
    return order > cap ? ~std::uint64_t{0} : std::stoull(order.get_str());
}

bool inv_enumeration_feasible(std::uint32_t p, std::size_t n) {
    return general_linear_order(p, n) <= general_linear_order(2, 5);
}

// ---------------------------------------------------------------------------
// inv(Delta)

namespace {

// Column-by-column search. The image of e_{N-1} is fixed first, so after d
// columns the images of all vectors with index < p^d are known.
class InvSearch {
public:
    InvSearch(const Partition& delta, const InvOptions& options) : delta_(delta), options_(options) {
        space_ = PrimeFieldSpace::from_host(delta.host());
        p_ = space_->characteristic();
        n_ = space_->dimension();
        if (!inv_enumeration_feasible(p_, n_))
            throw BudgetExceeded("inv(Delta) enumeration over GL(" + std::to_string(n_) + ", " + std::to_string(p_) +
                                 ") exceeds the |GL(5, 2)| cap");
        size_ = space_->size();
        const auto classes = delta.classes();
        std::uint64_t u = 1;
        for (std::size_t d = 0; d < n_; ++d, u *= p_) {
            unit_.push_back(u);
            std::vector<std::uint64_t> cand;
            for (auto x : classes[delta.class_of(u)])
                if (x != 0) cand.push_back(x);
            candidates_.push_back(std::move(cand));
        }
    }

    const PrimeFieldSpace& space() const { return *space_; }
    std::shared_ptr<const PrimeFieldSpace> space_ptr() const { return space_; }
    std::size_t cell_count() const { return n_ == 0 ? 0 : candidates_[0].size(); }

    // Calls visit(image) for every map whose first column is candidates_[0][cell].
    template <class Visit>
    void run_cell(std::size_t cell, Visit&& visit) const {
        std::vector<std::uint64_t> image(size_, 0);
        if (extend(image, 0, candidates_[0][cell])) descend(image, 1, visit);
    }

    LinearMap to_map(const std::vector<std::uint64_t>& image) const {
        std::vector<Vector> columns(n_);
        for (std::size_t d = 0; d < n_; ++d) columns[n_ - 1 - d] = space_->vector_of(image[unit_[d]]);
        return LinearMap::from_columns(p_, columns);
    }

private:
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        return p_ == 2 ? (a ^ b) : space_->host()->add(a, b);
    }

    // Fills images of x + c * unit_[d] for x < unit_[d]; false on the first
    // vector leaving its class or hitting zero.
    bool extend(std::vector<std::uint64_t>& image, std::size_t d, std::uint64_t column) const {
        const std::uint64_t u = unit_[d];
        std::uint64_t scaled = column;
        for (std::uint32_t c = 1; c < p_; ++c, scaled = add(scaled, column))
            for (std::uint64_t x = 0; x < u; ++x) {
                const std::uint64_t y = x + c * u;
                const std::uint64_t img = add(image[x], scaled);
                if (img == 0 || delta_.class_of(img) != delta_.class_of(y)) return false;
                image[y] = img;
            }
        return true;
    }

    template <class Visit>
    void descend(std::vector<std::uint64_t>& image, std::size_t d, Visit& visit) const {
        if (d == n_) {
            visit(image);
            return;
        }
        for (auto column : candidates_[d])
            if (extend(image, d, column)) descend(image, d + 1, visit);
    }

    const Partition& delta_;
    InvOptions options_;
    std::shared_ptr<const PrimeFieldSpace> space_;
    std::uint32_t p_ = 2;
    std::size_t n_ = 0;
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> unit_;
    std::vector<std::vector<std::uint64_t>> candidates_;
};

}  // namespace

std::vector<LinearMap> inv_enumerate(const Partition& delta, const InvOptions& options) {
    InvSearch search(delta, options);
    std::vector<std::vector<LinearMap>> cells(search.cell_count());
    std::atomic<std::uint64_t> total{0};
    parallel_for(cells.size(), options.jobs, [&](std::size_t cell) {
        search.run_cell(cell, [&](const std::vector<std::uint64_t>& image) {
            if (++total > options.max_maps)
                throw BudgetExceeded("inv(Delta) has more than " + std::to_string(options.max_maps) + " maps");
            cells[cell].push_back(search.to_map(image));
        });
    });
    std::vector<LinearMap> out;
    for (auto& c : cells) out.insert(out.end(), c.begin(), c.end());
    return out;
}

InvOrbits inv_orbits(const Partition& delta, const InvOptions& options) {
    InvSearch search(delta, options);
    const auto size = search.space().size();
    std::vector<std::uint64_t> counts(search.cell_count(), 0);
    std::vector<UnionFind> forests(search.cell_count(), UnionFind(size));
    parallel_for(counts.size(), options.jobs, [&](std::size_t cell) {
        search.run_cell(cell, [&](const std::vector<std::uint64_t>& image) {
            ++counts[cell];
            for (std::uint64_t x = 1; x < size; ++x) forests[cell].unite(x, image[x]);
        });
    });
    UnionFind merged(size);
    for (auto& f : forests)
        for (std::uint64_t x = 0; x < size; ++x) merged.unite(x, f.find(x));
    InvOrbits out;
    out.order = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    out.orbits = partition_from_roots(search.space().host(), merged);
    return out;
}

bool is_group(const std::vector<LinearMap>& k) {
    if (k.empty()) return false;
    const std::set<LinearMap> members(k.begin(), k.end());
    for (const auto& a : k) {
        if (!a.invertible || !members.count(a.inverse())) return false;
        for (const auto& b : k)
            if (!members.count(a * b)) return false;
    }
    return true;
}

Partition orbit_partition(std::shared_ptr<const PrimeFieldSpace> space, const std::vector<LinearMap>& k) {
    UnionFind uf(space->size());
    for (const auto& m : k) {
        if (m.p != space->characteristic() || m.n != space->dimension())
            throw ShapeMismatch("map does not act on this space");
        if (!m.invertible) throw InvalidInput("orbit partition needs invertible maps");
        for (std::uint64_t x = 0; x < space->size(); ++x) uf.unite(x, space->index_of(m.apply(space->vector_of(x))));
    }
    return partition_from_roots(space->host(), uf);
}

MepSearchResult mep_witness_search(const Partition& delta, const InvOptions& options) {
    const auto inv = inv_orbits(delta, options);
    const auto space = PrimeFieldSpace::from_host(delta.host());
    const auto& g = *space->host();
    MepSearchResult res;
    res.inv_order = inv.order;
    res.delta_equals_orbits = inv.orbits == delta;
    if (res.delta_equals_orbits) return res;
    for (std::uint64_t a = 1; a < g.order() && !res.witness; ++a)
        for (std::uint64_t b = 1; b < g.order(); ++b) {
            if (a == b || delta.class_of(a) != delta.class_of(b) || inv.orbits.class_of(a) == inv.orbits.class_of(b))
                continue;
            bool scalars_ok = true;
            for (std::uint32_t c = 2; c < space->characteristic() && scalars_ok; ++c)
                scalars_ok = delta.class_of(g.scale(a, c)) == delta.class_of(g.scale(b, c));
            if (!scalars_ok) continue;
            res.witness = MepWitness{space->vector_of(a), space->vector_of(b), a, b, delta.label(delta.class_of(a)),
                                     inv.order};
            break;
        }
    return res;
}

// ---------------------------------------------------------------------------
// Vector-view partitions

Partition co_partition_vector_view(std::shared_ptr<const PrimeFieldSpace> space, const Covering& t) {
    if (t.universe_size() != space->blocks().size()) throw ShapeMismatch("covering and space disagree on blocks");
    std::vector<std::uint32_t> cls(space->size());
    std::uint32_t top = 0;
    for (std::uint64_t x = 0; x < space->size(); ++x) {
        cls[x] = t.weight(space->block_support(space->vector_of(x)));
        top = std::max(top, cls[x]);
    }
    std::vector<std::string> labels;
    for (std::uint32_t w = 0; w <= top; ++w) labels.push_back(std::to_string(w));
    return Partition(space->host(), std::move(cls), std::move(labels), LabelKind::Weight);
}

Partition q_partition_vector_view(std::shared_ptr<const PrimeFieldSpace> space, const Poset& p,
                                  const WeightFunction& omega) {
    if (p.size() != space->blocks().size()) throw ShapeMismatch("poset and space disagree on blocks");
    std::map<Rational, std::uint32_t> ids;
    std::vector<std::uint32_t> cls(space->size());
    for (std::uint64_t x = 0; x < space->size(); ++x) {
        const auto w = wpm_weight(p, omega, space->block_support(space->vector_of(x)));
        cls[x] = ids.try_emplace(w, static_cast<std::uint32_t>(ids.size())).first->second;
    }
    std::vector<std::string> labels(ids.size());
    for (const auto& [w, id] : ids) labels[id] = w.get_str();
    return Partition(space->host(), std::move(cls), std::move(labels), LabelKind::Weight);
}

// ---------------------------------------------------------------------------
// Extension-property instances

ExtensionReport extension_property_report(std::uint32_t q, std::uint32_t n, std::uint32_t k,
                                     const ExtensionOptions& options) {
    if (!prime(q)) throw InvalidInput("q = " + std::to_string(q) + " is not prime; only prime fields are supported");
    if (n < 1 || k < 1 || k > n) throw InvalidInput("need 1 <= k <= n");
    ExtensionReport rep;
    rep.q = q;
    rep.n = n;
    rep.k = k;
    rep.criteria = co_nonreflexivity_verdict(n, k, q);
    if (rep.criteria.verdict == CoVerdict::NonReflexive)
        rep.evidence.push_back({"criteria-non-reflexive", rep.criteria.criterion(), true, true});
    else if (rep.criteria.verdict == CoVerdict::Reflexive)
        rep.evidence.push_back({"criteria-reflexive", rep.criteria.criterion(), false, false});

    std::uint64_t elements = 1;
    for (std::uint32_t i = 0; i < n && elements <= options.max_brute_elements; ++i) elements *= q;
    std::optional<Partition> delta;
    if (elements <= options.max_brute_elements) {
        auto space = PrimeFieldSpace::make(q, std::vector<std::uint32_t>(n, 1));
        delta = induce_CO(space->host(), Covering::all_k_subsets(n, k), options.dual.budget);
        const auto rc = reflexivity_check(*delta, false, options.dual);
        rep.brute_force_reflexive = rc.reflexive;
        const std::string detail = "|CO| = " + std::to_string(rc.gamma_classes) +
                                   ", |l(CO)| = " + std::to_string(rc.dual_classes);
        if (rc.reflexive) rep.evidence.push_back({"brute-force-reflexive", detail, false, false});
        else rep.evidence.push_back({"brute-force-non-reflexive", detail, true, true});
        if (rep.criteria.verdict != CoVerdict::Undecided &&
            (rep.criteria.verdict == CoVerdict::Reflexive) != rc.reflexive)
            rep.conflicts.push_back("criteria verdict disagrees with the brute-force dual partition");
    }

    if (delta && options.allow_witness_search && inv_enumeration_feasible(q, n)) {
        const auto res = mep_witness_search(*delta, options.inv);
        rep.inv_order = res.inv_order;
        if (res.witness) {
            rep.witness = res.witness;
            rep.evidence.push_back({"witness",
                                    "alpha = " + vector_text(res.witness->alpha) + ", beta = " +
                                        vector_text(res.witness->beta) + " share class " + res.witness->class_label +
                                        " but no map in inv (order " + std::to_string(res.inv_order) +
                                        ") sends one to the other",
                                    true, false});
        } else {
            rep.evidence.push_back({"orbits-match",
                                    res.delta_equals_orbits ? "classes equal the orbits of inv (order " +
                                                                  std::to_string(res.inv_order) + ")"
                                                            : "no scalar-compatible pair across orbits",
                                    false, false});
            if (res.delta_equals_orbits && rep.brute_force_reflexive == false)
                rep.conflicts.push_back("classes equal inv orbits yet the partition is not reflexive");
        }
    }

    static const char* const order[] = {"witness", "brute-force-non-reflexive", "criteria-non-reflexive"};
    rep.strongest_tier = "none";
    for (const char* tier : order) {
        const bool found = std::any_of(rep.evidence.begin(), rep.evidence.end(),
                                       [&](const auto& e) { return e.refutes && e.tier == tier; });
        if (found) {
            rep.strongest_tier = tier;
            break;
        }
    }
    rep.refuted = rep.strongest_tier != "none";
    rep.relies_on_cited_implication = rep.refuted && rep.strongest_tier != "witness";
    rep.status = rep.refuted ? "refuted" : "open";
    return rep;
}

}  // namespace reflex
