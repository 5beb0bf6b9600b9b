#include "reflex/weights.hpp"

#include <algorithm>

#include "reflex/errors.hpp"

namespace reflex {

WeightFunction::WeightFunction(std::vector<Rational> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] <= 0)
            throw InvalidInput("weight of coordinate " + std::to_string(i) + " must be positive, got " +
                               values_[i].get_str());
}

WeightFunction WeightFunction::constant(std::size_t n, const Rational& value) {
    return WeightFunction(std::vector<Rational>(n, value));
}

Rational WeightFunction::varpi(Subset s) const {
    Rational sum = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if ((s >> i) & 1U) sum += values_[i];
    if (values_.size() < 64 && (s >> values_.size()) != 0) throw InvalidInput("subset exceeds the weight domain");
    return sum;
}

bool WeightFunction::is_integer() const {
    return std::all_of(values_.begin(), values_.end(), [](const Rational& r) { return r.get_den() == 1; });
}

}  // namespace reflex
