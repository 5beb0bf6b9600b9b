#include "reflex/io.hpp"

#include <fstream>
#include <sstream>

#include "reflex/errors.hpp"

namespace reflex::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ParseError("field '" + field + "': " + what);
}

const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) field_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) field_error(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

std::uint64_t as_uint(const Json& j, const std::string& field, std::uint64_t lo = 0,
                      std::uint64_t hi = ~std::uint64_t{0}) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        field_error(field, "expected a non-negative integer");
    const auto v = j.get<std::uint64_t>();
    if (v < lo || v > hi) field_error(field, "value " + std::to_string(v) + " out of range");
    return v;
}

std::vector<std::uint32_t> uint_list(const Json& j, const std::string& field, std::uint64_t lo, std::uint64_t hi) {
    if (!j.is_array()) field_error(field, "expected an array");
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(static_cast<std::uint32_t>(as_uint(j[i], field + "[" + std::to_string(i) + "]", lo, hi)));
    return out;
}

Rational as_rational(const Json& j, const std::string& field) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            field_error(field, e.what());
        }
    }
    field_error(field, "expected an integer or a rational string such as \"3/2\"");
}

Subset member_mask(const Json& j, const std::string& field, std::size_t n) {
    Subset m = 0;
    for (auto i : uint_list(j, field, 0, n - 1)) m |= Subset{1} << i;
    return m;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        const auto colon = msg.rfind(": ");
        if (colon != std::string::npos) msg = msg.substr(colon + 2);
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

std::shared_ptr<const GroupProduct> parse_group(const Json& j) {
    if (!j.is_object()) field_error("group", "expected an object");
    std::vector<std::vector<std::uint32_t>> coords;
    if (j.contains("coordinates")) {
        const auto& c = j["coordinates"];
        if (!c.is_array() || c.empty()) field_error("coordinates", "expected a non-empty array");
        for (std::size_t i = 0; i < c.size(); ++i)
            coords.push_back(uint_list(c[i], "coordinates[" + std::to_string(i) + "]", 2, 1u << 20));
    } else if (j.contains("orders")) {
        for (auto h : uint_list(j["orders"], "orders", 2, 1u << 20)) coords.push_back({h});
    } else if (j.contains("uniform")) {
        const auto& u = j["uniform"];
        const auto n = as_uint(require(u, "n", "uniform"), "uniform.n", 1, 64);
        const auto order = as_uint(require(u, "order", "uniform"), "uniform.order", 2, 1u << 20);
        coords.assign(n, {static_cast<std::uint32_t>(order)});
    } else {
        field_error("group", "expected one of coordinates, orders, uniform");
    }
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i].empty()) field_error("coordinates[" + std::to_string(i) + "]", "empty coordinate");
    return std::make_shared<const GroupProduct>(GroupProduct::build(std::move(coords)));
}

PosetInput parse_poset(const Json& j) {
    const auto n = as_uint(require(j, "n", ""), "n", 1, 64);
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    if (j.contains("relations")) {
        const auto& r = j["relations"];
        if (!r.is_array()) field_error("relations", "expected an array of [u, v] pairs");
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto pair = uint_list(r[i], "relations[" + std::to_string(i) + "]", 0, n - 1);
            if (pair.size() != 2) field_error("relations[" + std::to_string(i) + "]", "expected a pair");
            rel.emplace_back(pair[0], pair[1]);
        }
    }
    PosetInput in;
    try {
        in.poset = Poset::from_relations(n, rel);
    } catch (const InvalidInput& e) {
        field_error("relations", e.what());
    }
    std::vector<Rational> w(n, 1);
    if (j.contains("weights")) {
        const auto& wj = j["weights"];
        if (!wj.is_array() || wj.size() != n) field_error("weights", "expected " + std::to_string(n) + " entries");
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = as_rational(wj[i], "weights[" + std::to_string(i) + "]");
            if (w[i] <= 0) field_error("weights[" + std::to_string(i) + "]", "weights must be positive");
        }
    }
    in.omega = WeightFunction(w);
    Json group = Json::object();
    if (j.contains("coordinates")) group["coordinates"] = j["coordinates"];
    else if (j.contains("orders")) group["orders"] = j["orders"];
    else group["uniform"] = Json{{"n", n}, {"order", 2}};
    in.group = parse_group(group);
    if (in.group->coordinate_count() != n)
        field_error(j.contains("coordinates") ? "coordinates" : "orders", "expected " + std::to_string(n) + " entries");
    return in;
}

Covering parse_covering_token(const std::string& token, std::size_t n) {
    if (!starts_with(token, "Pk:")) throw ParseError("covering token '" + token + "': expected Pk:<k>");
    std::size_t k = 0;
    try {
        std::size_t used = 0;
        k = std::stoul(token.substr(3), &used);
        if (used != token.size() - 3) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ParseError("covering token '" + token + "': k is not a number");
    }
    if (n == 0) throw ParseError("covering token '" + token + "' needs the coordinate count");
    if (k < 1 || k > n) throw InvalidInput("covering token '" + token + "': need 1 <= k <= " + std::to_string(n));
    return Covering::all_k_subsets(n, k);
}

Covering parse_covering(const Json& j, std::size_t n) {
    if (j.is_string()) return parse_covering_token(j.get<std::string>(), n);
    const auto cn = as_uint(require(j, "n", ""), "n", 1, 64);
    if (n != 0 && cn != n) field_error("n", "covering has " + std::to_string(cn) + " coordinates, expected " + std::to_string(n));
    const auto& m = require(j, "members", "");
    if (!m.is_array() || m.empty()) field_error("members", "expected a non-empty array");
    std::vector<Subset> members;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto field = "members[" + std::to_string(i) + "]";
        const Subset s = member_mask(m[i], field, cn);
        if (s == 0) field_error(field, "empty member");
        members.push_back(s);
    }
    try {
        return Covering::explicit_members(cn, members);
    } catch (const InvalidInput& e) {
        field_error("members", e.what());
    }
}

Partition parse_partition_spec(const std::string& spec, std::shared_ptr<const GroupProduct> host,
                               const Budget& budget) {
    const std::size_t n = host->coordinate_count();
    if (spec == "hamming") return induce_hamming(host, budget);
    if (spec == "singletons") return singleton_partition(host, budget);
    if (spec == "trivial") return trivial_partition(host, budget);
    if (starts_with(spec, "Pk:")) return induce_CO(host, parse_covering_token(spec, n), budget);

    std::string kind, path = spec;
    for (const char* prefix : {"co:", "q:", "classes:"})
        if (starts_with(spec, prefix)) {
            kind = std::string(prefix, std::char_traits<char>::length(prefix) - 1);
            path = spec.substr(kind.size() + 1);
        }
    const Json j = read_json_file(path);
    if (kind.empty()) {
        if (j.is_object() && j.contains("members")) kind = "co";
        else if (j.is_object() && j.contains("classes")) kind = "classes";
        else if (j.is_object() && j.contains("n")) kind = "q";
        else throw ParseError(path + ": cannot tell whether this is a covering, a poset or a class list");
    }
    if (kind == "co") return induce_CO(host, parse_covering(j, n), budget);
    if (kind == "q") {
        const auto in = parse_poset(j);
        if (in.poset.size() != n) field_error("n", "poset size differs from the group's coordinate count");
        return induce_Q(host, in.poset, in.omega, budget);
    }
    const auto& cls = require(j, "classes", "");
    if (!cls.is_array() || cls.size() != host->order())
        field_error("classes", "expected " + std::to_string(host->order()) + " entries, one per element");
    std::vector<std::uint32_t> ids;
    for (std::size_t i = 0; i < cls.size(); ++i)
        ids.push_back(static_cast<std::uint32_t>(as_uint(cls[i], "classes[" + std::to_string(i) + "]", 0, 1u << 31)));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) field_error("labels", "expected strings");
            labels.push_back(l.get<std::string>());
        }
    }
    try {
        return Partition(host, ids, labels, LabelKind::Opaque);
    } catch (const InvalidInput& e) {
        field_error("labels", e.what());
    }
}

BudgetFile parse_budget(const Json& j) {
    if (!j.is_object()) field_error("budget", "expected an object");
    BudgetFile b;
    for (const auto& [key, value] : j.items()) {
        if (key == "max_elements") b.budget.max_elements = as_uint(value, key, 1);
        else if (key == "max_work") b.budget.max_work = as_uint(value, key, 1);
        else if (key == "jobs") b.budget.jobs = static_cast<unsigned>(as_uint(value, key, 1, 1024));
        else if (key == "max_maps") b.max_maps = as_uint(value, key, 1);
        else if (key == "max_brute_elements") b.max_brute_elements = as_uint(value, key, 1);
        else field_error(key, "unknown budget key");
    }
    return b;
}

// ---------------------------------------------------------------------------

Json to_json(const Rational& r) { return r.get_str(); }

Json to_json(const CycInt& v) {
    if (const auto i = cyc_is_rational_integer(v)) return *i;
    return v.to_string();
}

Json to_json(const PosetDualityReport& r) {
    return Json{{"udp_and_levels", r.udp_and_levels},
                {"mutually_dual", r.mutually_dual},
                {"reflexive", r.reflexive},
                {"dual_equals_q", r.dual_equals_q},
                {"dual_finer_than_q", r.dual_finer_than_q},
                {"equivalent", r.equivalent()},
                {"q_classes", r.q_classes},
                {"dual_classes", r.dual_classes}};
}

Json to_json(const MepWitness& w) {
    return Json{{"alpha", w.alpha}, {"beta", w.beta}, {"class_label", w.class_label}, {"inv_order", w.inv_order}};
}

Json to_json(const CoVerdictReport& r) {
    Json hits = Json::array();
    for (const auto& h : r.hits) hits.push_back(Json{{"criterion", h.name}, {"verdict", to_string(h.verdict)}});
    return Json{{"verdict", to_string(r.verdict)},
                {"criterion", r.criterion()},
                {"co_classes", r.co_classes},
                {"lambda_lower_bound", r.lambda_lower_bound},
                {"conflict", r.conflict},
                {"hits", hits}};
}

Json to_json(const ExtensionReport& r) {
    Json evidence = Json::array();
    for (const auto& e : r.evidence)
        evidence.push_back(Json{{"tier", e.tier},
                                {"detail", e.detail},
                                {"refutes", e.refutes},
                                {"relies_on_cited_implication", e.relies_on_cited_implication}});
    Json out{{"q", r.q},
             {"n", r.n},
             {"k", r.k},
             {"status", r.status},
             {"refuted", r.refuted},
             {"strongest_tier", r.strongest_tier},
             {"relies_on_cited_implication", r.relies_on_cited_implication},
             {"criteria", to_json(r.criteria)}};
    out["brute_force_reflexive"] = r.brute_force_reflexive ? Json(*r.brute_force_reflexive) : Json(nullptr);
    out["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    out["inv_order"] = r.inv_order ? Json(*r.inv_order) : Json(nullptr);
    out["evidence"] = evidence;
    out["conflicts"] = r.conflicts;
    return out;
}

Json to_json(const MacWilliamsReport& r, const Partition& gamma) {
    Json rows = Json::array();
    for (std::size_t b = 0; b < r.lhs.size(); ++b)
        rows.push_back(Json{{"class", gamma.label(static_cast<std::uint32_t>(b))},
                            {"lhs", r.lhs[b].get_str()},
                            {"rhs", to_json(r.rhs[b])}});
    return Json{{"holds", r.holds()}, {"rows", rows}};
}

Json to_json(const RootInterval& r) {
    return Json{{"lo", r.lo.get_str()}, {"hi", r.hi.get_str()}, {"exact", r.exact()}, {"approx", r.approx()}};
}

}  // namespace reflex::io
