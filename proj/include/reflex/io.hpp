#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "reflex/budget.hpp"
#include "reflex/groups.hpp"
#include "reflex/krawtchouk.hpp"
#include "reflex/macwilliams.hpp"
#include "reflex/metrics.hpp"
#include "reflex/partitions.hpp"
#include "reflex/posets.hpp"
#include "reflex/weights.hpp"

namespace reflex::io {

using Json = nlohmann::ordered_json;

/// Parses text, reporting syntax errors as "<source>:<line>:<column>: ..." ParseErrors.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// {"coordinates": [[2], [3, 3]]}, {"orders": [2, 3]} or {"uniform": {"n": 5, "order": 2}}.
std::shared_ptr<const GroupProduct> parse_group(const Json& j);

struct PosetInput {
    Poset poset;
    WeightFunction omega;
    /// From "orders" or "coordinates"; every h_i = 2 when both are absent.
    std::shared_ptr<const GroupProduct> group;
};
/// {"n": 3, "relations": [[0, 1]], "weights": [1, "1/2", 2], "orders": [2, 3, 2]}.
/// Weights default to 1.
PosetInput parse_poset(const Json& j);

/// {"n": 5, "members": [[0, 1], [2, 3, 4]]} or the string "Pk:3" (needs n).
Covering parse_covering(const Json& j, std::size_t n = 0);
Covering parse_covering_token(const std::string& token, std::size_t n);

/// Partition specs over `host`:
///   hamming | singletons | trivial | Pk:K
///   co:FILE (covering JSON) | q:FILE (poset JSON) | classes:FILE ({"classes": [...]})
///   FILE (kind detected from its keys)
Partition parse_partition_spec(const std::string& spec, std::shared_ptr<const GroupProduct> host,
                               const Budget& budget = {});

/// Budget file keys, all optional: max_elements, max_work, jobs, max_maps, max_brute_elements.
struct BudgetFile {
    Budget budget{};
    std::uint64_t max_maps = std::uint64_t{1} << 20;
    std::uint64_t max_brute_elements = std::uint64_t{1} << 16;
};
BudgetFile parse_budget(const Json& j);

// ---------------------------------------------------------------------------
// Report serialization

Json to_json(const Rational& r);
Json to_json(const CycInt& v);
Json to_json(const PosetDualityReport& r);
Json to_json(const MepWitness& w);
Json to_json(const CoVerdictReport& r);
Json to_json(const ExtensionReport& r);
Json to_json(const MacWilliamsReport& r, const Partition& gamma);
Json to_json(const RootInterval& r);

}  // namespace reflex::io
