#pragma once

#include <cstdint>
#include <iterator>
#include <memory>
#include <vector>

#include "reflex/budget.hpp"
#include "reflex/exactarith.hpp"

namespace reflex {

/// Bitmask over coordinates; bit i stands for coordinate i. Limits |Omega| to 64.
using Subset = std::uint64_t;

inline int subset_size(Subset s) { return __builtin_popcountll(s); }
inline bool subset_contains(Subset outer, Subset inner) { return (inner & ~outer) == 0; }

struct GroupElement {
    /// One residue per cyclic factor, in flattened factor order.
    std::vector<std::uint32_t> residues;
    std::uint64_t index = 0;
};

/// H = prod_i H_i with each H_i a product of cyclic groups. Elements are
/// numbered in mixed radix with the first flattened factor most significant.
class GroupProduct {
public:
    static GroupProduct build(std::vector<std::vector<std::uint32_t>> coordinates);
    /// Every coordinate cyclic of order `order`.
    static GroupProduct uniform(std::size_t n, std::uint32_t order);

    std::size_t coordinate_count() const { return coordinates_.size(); }
    const std::vector<std::vector<std::uint32_t>>& coordinates() const { return coordinates_; }
    /// h_i = |H_i|.
    const std::vector<std::uint64_t>& coordinate_orders() const { return h_; }
    std::uint32_t exponent() const { return exponent_; }
    std::uint64_t order() const { return order_; }

    std::size_t factor_count() const { return factor_order_.size(); }
    std::uint32_t factor_order(std::size_t f) const { return factor_order_[f]; }
    std::size_t factor_coordinate(std::size_t f) const { return factor_coord_[f]; }
    std::uint64_t factor_stride(std::size_t f) const { return stride_[f]; }
    Subset full_set() const;

    GroupElement element(std::uint64_t index) const;
    std::uint64_t index_of(const std::vector<std::uint32_t>& residues) const;
    std::uint32_t residue(std::uint64_t index, std::size_t f) const {
        return static_cast<std::uint32_t>((index / stride_[f]) % factor_order_[f]);
    }
    Subset support(std::uint64_t index) const;
    Subset support(const GroupElement& e) const { return support(e.index); }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t negate(std::uint64_t a) const;
    std::uint64_t scale(std::uint64_t a, std::uint64_t c) const;

    /// Exponent e of f(a,b)^c = z_m^e, reduced to [0, m).
    std::uint32_t pairing_exponent(std::uint64_t a, std::uint64_t b, std::uint32_t char_power = 1) const;

    bool same_shape(const GroupProduct& other) const { return coordinates_ == other.coordinates_; }
    /// True when every cyclic factor has order 2 (pairings are +-1).
    bool elementary_two() const { return exponent_ == 2; }

    /// Supports of all elements, indexed by element index.
    std::vector<Subset> all_supports(const Budget& budget = {}) const;

    class Range;
    Range elements(const Budget& budget = {}) const;

    friend bool operator==(const GroupProduct& a, const GroupProduct& b) { return a.same_shape(b); }

private:
    std::vector<std::vector<std::uint32_t>> coordinates_;
    std::vector<std::uint64_t> h_;
    std::vector<std::uint32_t> factor_order_;
    std::vector<std::size_t> factor_coord_;
    std::vector<std::uint64_t> stride_;
    std::vector<std::uint32_t> factor_scale_;  // m / d_f
    std::uint32_t exponent_ = 1;
    std::uint64_t order_ = 1;
};

/// Lazy enumeration of all elements in index order.
class GroupProduct::Range {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = GroupElement;
        using difference_type = std::ptrdiff_t;
        iterator(const GroupProduct* g, std::uint64_t i) : g_(g), i_(i) {}
        GroupElement operator*() const { return g_->element(i_); }
        iterator& operator++() {
            ++i_;
            return *this;
        }
        bool operator==(const iterator& o) const { return i_ == o.i_; }
        bool operator!=(const iterator& o) const { return i_ != o.i_; }

    private:
        const GroupProduct* g_;
        std::uint64_t i_;
    };
    explicit Range(const GroupProduct* g) : g_(g) {}
    iterator begin() const { return {g_, 0}; }
    iterator end() const { return {g_, g_->order()}; }
    std::uint64_t size() const { return g_->order(); }

private:
    const GroupProduct* g_;
};

/// f(a, b) as an exact element of Z[z_m]; G and H must have the same shape.
CycInt pairing(const GroupProduct& G, const GroupElement& a, const GroupProduct& H, const GroupElement& b);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

}  // namespace reflex
