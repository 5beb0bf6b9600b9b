#include "reflex/groups.hpp"

#include <numeric>

#include "reflex/errors.hpp"

namespace reflex {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

GroupProduct GroupProduct::build(std::vector<std::vector<std::uint32_t>> coordinates) {
    if (coordinates.empty()) throw InvalidInput("group product needs at least one coordinate");
    if (coordinates.size() > 64) throw InvalidInput("at most 64 coordinates are supported");
    GroupProduct g;
    g.coordinates_ = std::move(coordinates);
    std::uint64_t exponent = 1;
    for (std::size_t i = 0; i < g.coordinates_.size(); ++i) {
        const auto& factors = g.coordinates_[i];
        if (factors.empty()) throw InvalidInput("coordinate " + std::to_string(i) + " has no cyclic factors");
        std::uint64_t h = 1;
        for (std::uint32_t d : factors) {
            if (d < 2) throw InvalidInput("cyclic order " + std::to_string(d) + " at coordinate " + std::to_string(i) +
                                          " must be at least 2");
            h *= d;
            if (h > (std::uint64_t{1} << 40)) throw InvalidInput("coordinate order too large");
            exponent = lcm_u64(exponent, d);
            if (exponent > (std::uint64_t{1} << 20)) throw InvalidInput("group exponent too large");
            g.factor_order_.push_back(d);
            g.factor_coord_.push_back(i);
        }
        g.h_.push_back(h);
        if (g.order_ > (std::uint64_t{1} << 62) / h) throw InvalidInput("group order overflows 2^62");
        g.order_ *= h;
    }
    g.exponent_ = static_cast<std::uint32_t>(exponent);
    g.stride_.assign(g.factor_order_.size(), 1);
    for (std::size_t f = g.factor_order_.size(); f-- > 1;) g.stride_[f - 1] = g.stride_[f] * g.factor_order_[f];
    for (std::uint32_t d : g.factor_order_) g.factor_scale_.push_back(g.exponent_ / d);
    return g;
}

GroupProduct GroupProduct::uniform(std::size_t n, std::uint32_t order) {
    return build(std::vector<std::vector<std::uint32_t>>(n, std::vector<std::uint32_t>{order}));
}

Subset GroupProduct::full_set() const {
    const auto n = coordinates_.size();
    return n == 64 ? ~Subset{0} : ((Subset{1} << n) - 1);
}

GroupElement GroupProduct::element(std::uint64_t index) const {
    if (index >= order_) throw InvalidInput("element index " + std::to_string(index) + " out of range");
    GroupElement e;
    e.index = index;
    e.residues.resize(factor_order_.size());
    for (std::size_t f = 0; f < factor_order_.size(); ++f) e.residues[f] = residue(index, f);
    return e;
}

std::uint64_t GroupProduct::index_of(const std::vector<std::uint32_t>& residues) const {
    if (residues.size() != factor_order_.size()) throw ShapeMismatch("residue count does not match the group");
    std::uint64_t index = 0;
    for (std::size_t f = 0; f < residues.size(); ++f) {
        if (residues[f] >= factor_order_[f]) throw InvalidInput("residue out of range for its cyclic factor");
        index += residues[f] * stride_[f];
    }
    return index;
}

Subset GroupProduct::support(std::uint64_t index) const {
    Subset s = 0;
    for (std::size_t f = 0; f < factor_order_.size(); ++f)
        if (residue(index, f) != 0) s |= Subset{1} << factor_coord_[f];
    return s;
}

std::uint64_t GroupProduct::add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t out = 0;
    for (std::size_t f = 0; f < factor_order_.size(); ++f)
        out += ((residue(a, f) + residue(b, f)) % factor_order_[f]) * stride_[f];
    return out;
}

std::uint64_t GroupProduct::negate(std::uint64_t a) const {
    std::uint64_t out = 0;
    for (std::size_t f = 0; f < factor_order_.size(); ++f)
        out += ((factor_order_[f] - residue(a, f)) % factor_order_[f]) * stride_[f];
    return out;
}

std::uint64_t GroupProduct::scale(std::uint64_t a, std::uint64_t c) const {
    std::uint64_t out = 0;
    for (std::size_t f = 0; f < factor_order_.size(); ++f)
        out += ((residue(a, f) * (c % factor_order_[f])) % factor_order_[f]) * stride_[f];
    return out;
}

std::uint32_t GroupProduct::pairing_exponent(std::uint64_t a, std::uint64_t b, std::uint32_t char_power) const {
    std::uint64_t e = 0;
    for (std::size_t f = 0; f < factor_order_.size(); ++f) {
        const std::uint64_t d = factor_order_[f];
        e += ((std::uint64_t{residue(a, f)} * residue(b, f)) % d) * factor_scale_[f];
    }
    return static_cast<std::uint32_t>((e % exponent_) * char_power % exponent_);
}

std::vector<Subset> GroupProduct::all_supports(const Budget& budget) const {
    budget.require_elements(order_, "support table");
    std::vector<Subset> out(order_, 0);
    // Walk the mixed-radix counter instead of dividing per element.
    std::vector<std::uint32_t> digits(factor_order_.size(), 0);
    std::vector<std::uint32_t> nonzero_per_coord(coordinates_.size(), 0);
    Subset current = 0;
    for (std::uint64_t idx = 0; idx < order_; ++idx) {
        out[idx] = current;
        for (std::size_t f = factor_order_.size(); f-- > 0;) {
            const std::size_t c = factor_coord_[f];
            if (digits[f] == 0) {
                if (nonzero_per_coord[c]++ == 0) current |= Subset{1} << c;
            }
            if (++digits[f] < factor_order_[f]) break;
            digits[f] = 0;
            if (--nonzero_per_coord[c] == 0) current &= ~(Subset{1} << c);
        }
    }
    return out;
}

GroupProduct::Range GroupProduct::elements(const Budget& budget) const {
    budget.require_elements(order_, "element enumeration");
    return Range(this);
}

CycInt pairing(const GroupProduct& G, const GroupElement& a, const GroupProduct& H, const GroupElement& b) {
    if (!G.same_shape(H)) throw ShapeMismatch("pairing needs groups of identical shape");
    if (a.residues.size() != G.factor_count() || b.residues.size() != H.factor_count())
        throw ShapeMismatch("element residues do not match the group");
    const std::uint32_t m = G.exponent();
    std::int64_t e = 0;
    for (std::size_t f = 0; f < G.factor_count(); ++f)
        e = (e + std::int64_t{a.residues[f]} * b.residues[f] % G.factor_order(f) * (m / G.factor_order(f))) % m;
    return root_of_unity_sum(m, std::span<const std::int64_t>(&e, 1));
}

}  // namespace reflex
