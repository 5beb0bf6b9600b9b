#pragma once

#include <cstdint>
#include <string>

#include "reflex/errors.hpp"

namespace reflex {

/// Explicit resource limits for brute-force operations. Nothing is ever
/// truncated silently: exceeding a limit throws BudgetExceeded.
struct Budget {
    /// Largest group that may be fully enumerated.
    std::uint64_t max_elements = std::uint64_t{1} << 24;
    /// Upper bound on elementary steps of a single dual-partition computation.
    std::uint64_t max_work = std::uint64_t{1} << 34;
    /// Worker threads for parallel loops (results never depend on it).
    unsigned jobs = 1;

    void require_elements(std::uint64_t count, const std::string& what) const {
        if (count > max_elements)
            throw BudgetExceeded(what + ": " + std::to_string(count) + " elements exceed the enumeration cap " +
                                 std::to_string(max_elements));
    }

    void require_work(std::uint64_t units, const std::string& what) const {
        if (units > max_work)
            throw BudgetExceeded(what + ": " + std::to_string(units) + " work units exceed the budget " +
                                 std::to_string(max_work));
    }
};

}  // namespace reflex
