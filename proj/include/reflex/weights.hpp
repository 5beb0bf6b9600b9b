#pragma once

#include <vector>

#include "reflex/exactarith.hpp"
#include "reflex/groups.hpp"

namespace reflex {

/// omega : Omega -> positive rationals, with varpi(I) = sum of omega over I.
class WeightFunction {
public:
    WeightFunction() = default;
    explicit WeightFunction(std::vector<Rational> values);
    static WeightFunction constant(std::size_t n, const Rational& value = 1);

    std::size_t size() const { return values_.size(); }
    const Rational& operator()(std::size_t i) const { return values_.at(i); }
    const std::vector<Rational>& values() const { return values_; }
    Rational varpi(Subset s) const;
    bool is_integer() const;

    friend bool operator==(const WeightFunction& a, const WeightFunction& b) { return a.values_ == b.values_; }

private:
    std::vector<Rational> values_;
};

}  // namespace reflex
