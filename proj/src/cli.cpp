#include "reflex/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "reflex/errors.hpp"
#include "reflex/parallel.hpp"

namespace reflex::cli {

using io::Json;

namespace {

std::string one_line(std::string s) {
    for (auto& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

int exit_code_for(const Error& e) {
    if (e.code() == "budget_exceeded") return kBudget;
    return kInput;
}

std::string tsv_value(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void emit(const Json& j, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "tsv" && j.is_object()) {
        for (const auto& [key, value] : j.items()) out << key << '\t' << tsv_value(value) << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
}

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    auto number = [&](const std::string& s) -> std::uint32_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 4)
            throw InvalidInput("range '" + text + "': expected A..B with non-negative integers");
        return static_cast<std::uint32_t>(std::stoul(s));
    };
    if (dots == std::string::npos) {
        const auto v = number(text);
        return {v, v};
    }
    return {number(text.substr(0, dots)), number(text.substr(dots + 2))};
}

Json dual_classes_json(const DualPartition& d) {
    const auto& p = d.partition;
    const auto sizes = p.class_sizes();
    const auto reps = p.representatives();
    Json out = Json::array();
    for (std::uint32_t c = 0; c < p.class_count(); ++c)
        out.push_back(Json{{"label", p.label(c)},
                           {"size", sizes[c]},
                           {"representative", p.group().element(reps[c]).residues}});
    return out;
}

DualOptions dual_options(const RunConfig& cfg) {
    DualOptions o;
    o.budget = cfg.budget;
    return o;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

Json cmd_poset(const std::string& path, const RunConfig& cfg) {
    const auto in = io::parse_poset(io::read_json_file(path));
    const auto& p = in.poset;
    const auto udp = udp_check(p, in.omega);
    const bool hierarchical = is_hierarchical(p);
    Json out{{"n", p.size()}, {"hierarchical", hierarchical}, {"udp", udp.holds}};
    out["udp_witness"] = udp.witness ? Json{udp.witness->first, udp.witness->second} : Json(nullptr);
    out["automorphisms"] = search_automorphisms(p, {}, {}, [](const Permutation&) { return true; });
    out["ideals"] = ideals(p).size();
    out["group_order"] = in.group->order();
    if (!hierarchical) {
        out["equivalence"] = nullptr;
        out["equivalence_note"] = "skipped: the four-way equivalence needs a hierarchical poset";
    } else if (!in.omega.is_integer()) {
        out["equivalence"] = nullptr;
        out["equivalence_note"] = "skipped: the four-way equivalence needs integer weights";
    } else {
        out["equivalence"] = io::to_json(poset_duality_check(in.group, p, in.omega, dual_options(cfg)));
        out["equivalence_note"] = "computed";
    }
    return out;
}

Json cmd_dual(const std::string& group_path, const std::string& spec, const RunConfig& cfg) {
    const auto g = io::parse_group(io::read_json_file(group_path));
    const auto gamma = io::parse_partition_spec(spec, g, cfg.budget);
    const auto opts = dual_options(cfg);
    const auto lambda = left_dual(gamma, opts);
    const auto bidual = right_dual(lambda.partition, opts).partition;
    return Json{{"group_order", g->order()},
                {"gamma_classes", gamma.class_count()},
                {"dual_classes", lambda.partition.class_count()},
                {"reflexive", bidual == gamma},
                {"bidual_finer", is_finer(bidual, gamma)},
                {"dual", dual_classes_json(lambda)}};
}

std::vector<ScanRow> scan_co(std::uint32_t q, std::uint32_t n_lo, std::uint32_t n_hi, std::uint32_t k_only,
                             const RunConfig& cfg) {
    if (q < 2) throw InvalidInput("alphabet size q must be at least 2");
    std::vector<ScanRow> rows;
    for (std::uint32_t n = std::max(n_lo, 1u); n <= n_hi; ++n)
        for (std::uint32_t k = 1; k <= n; ++k)
            if (k_only == 0 || k == k_only) rows.push_back(ScanRow{q, n, k, {}, "skipped", "-"});
    auto inner = cfg.budget;
    inner.jobs = 1;
    parallel_for(rows.size(), cfg.budget.jobs, [&](std::size_t i) {
        auto& row = rows[i];
        row.report = co_nonreflexivity_verdict(row.n, row.k, row.q);
        std::uint64_t size = 1;
        for (std::uint32_t t = 0; t < row.n && size <= cfg.max_brute_elements; ++t) size *= row.q;
        if (size > cfg.max_brute_elements) return;
        const auto host = std::make_shared<const GroupProduct>(GroupProduct::uniform(row.n, row.q));
        DualOptions o;
        o.budget = inner;
        const auto gamma = induce_CO(host, Covering::all_k_subsets(row.n, row.k), inner);
        const bool reflexive = left_dual(gamma, o).partition.class_count() == gamma.class_count();
        row.brute_force = reflexive ? "reflexive" : "non-reflexive";
        if (row.report.verdict != CoVerdict::Undecided)
            row.confirmed = (row.report.verdict == CoVerdict::Reflexive) == reflexive ? "yes" : "no";
    });
    return rows;
}

std::string scan_tsv(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os << "q\tn\tk\tverdict\tcriterion\tco_classes\tlambda_lower_bound\tbrute_force_confirmed\tbrute_force\n";
    for (const auto& r : rows)
        os << r.q << '\t' << r.n << '\t' << r.k << '\t' << to_string(r.report.verdict) << '\t'
           << (r.report.hits.empty() ? "-" : r.report.criterion()) << '\t' << r.report.co_classes << '\t'
           << r.report.lambda_lower_bound << '\t' << r.confirmed << '\t' << r.brute_force << '\n';
    return os.str();
}

Json cmd_krawtchouk(std::uint32_t n, std::uint32_t k, std::uint32_t q, bool roots) {
    if (k > n) throw InvalidInput("need k <= n");
    const auto ku = ku_build(n, k, q);
    Json coeffs = Json::array(), values = Json::array();
    for (std::uint32_t e = 0; e <= k; ++e) coeffs.push_back(ku.poly.coefficient(e).get_str());
    for (std::uint32_t s = 0; s <= n; ++s) values.push_back(ku_eval(n, k, q, s).get_str());
    Json out{{"n", n}, {"k", k}, {"q", q}, {"coefficients", coeffs}, {"values", values}};
    if (k >= 1) out["smallest_root_floor"] = smallest_root_floor(n, k, q);
    if (roots && k >= 1) {
        Json r = Json::array();
        for (const auto& iv : ku_roots(n, k, q)) r.push_back(io::to_json(iv));
        out["roots"] = r;
        if (k >= 2) {
            Json d = Json::array();
            for (const auto& iv : ku_derivative_roots(n, k, q)) d.push_back(io::to_json(iv));
            out["derivative_roots"] = d;
        }
    }
    return out;
}

Json cmd_macwilliams(const std::string& code_path, const std::string& gamma_spec, const std::string& lambda_spec,
                     const RunConfig& cfg) {
    std::ifstream in(code_path);
    if (!in) throw InvalidInput("cannot open " + code_path);
    const auto code = read_generator_matrix(in);
    const auto host = code.space().host();
    const auto gamma = io::parse_partition_spec(gamma_spec, host, cfg.budget);
    const auto opts = dual_options(cfg);
    const auto lambda =
        lambda_spec == "dual" ? left_dual(gamma, opts).partition : io::parse_partition_spec(lambda_spec, host, cfg.budget);
    const auto rep = macwilliams_verify(code, lambda, gamma, opts);
    Json out{{"p", code.space().characteristic()},
             {"n", code.space().dimension()},
             {"code_dimension", code.dimension()},
             {"dual_dimension", code.space().dimension() - code.dimension()},
             {"gamma_classes", gamma.class_count()},
             {"lambda_classes", lambda.class_count()}};
    const auto identity = io::to_json(rep, gamma);
    for (const auto& [key, value] : identity.items()) out[key] = value;
    return out;
}

Json cmd_refute(std::uint32_t q, std::uint32_t n, std::uint32_t k, bool witness, const RunConfig& cfg) {
    ExtensionOptions opts;
    opts.max_brute_elements = cfg.max_brute_elements;
    opts.allow_witness_search = witness;
    opts.inv.jobs = cfg.budget.jobs;
    opts.inv.max_maps = cfg.max_maps;
    opts.dual = dual_options(cfg);
    return io::to_json(extension_property_report(q, n, k, opts));
}

Json cmd_selfcheck(std::uint32_t trials, const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
        return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
    };
    Json failures = Json::array();
    const auto opts = dual_options(cfg);
    for (std::uint32_t t = 0; t < trials; ++t) {
        std::vector<std::vector<std::uint32_t>> coords(pick(1, 3));
        for (auto& c : coords)
            for (std::uint32_t f = 0, cnt = pick(1, 2); f < cnt; ++f) c.push_back(pick(2, 5));
        const auto g = std::make_shared<const GroupProduct>(GroupProduct::build(coords));
        std::vector<std::uint32_t> ids(g->order());
        const std::uint32_t classes = pick(1, 5);
        for (auto& id : ids) id = pick(0, classes - 1);
        const Partition gamma(g, ids);
        const auto lambda = left_dual(gamma, opts).partition;
        const auto bidual = right_dual(lambda, opts).partition;
        std::vector<std::string> broken;
        if (!lambda.identity_is_singleton()) broken.push_back("identity-class");
        if (gamma.class_count() > lambda.class_count()) broken.push_back("class-count");
        if (!is_finer(bidual, gamma)) broken.push_back("bidual-finer");
        if ((bidual == gamma) != (gamma.class_count() == lambda.class_count())) broken.push_back("reflexive-count");
        const std::uint64_t gen = pick(0, static_cast<std::uint32_t>(g->order() - 1));
        if (!macwilliams_verify_additive({gen}, lambda, gamma, opts).holds()) broken.push_back("macwilliams");
        if (!broken.empty()) failures.push_back(Json{{"trial", t}, {"checks", broken}});
    }
    return Json{{"seed", cfg.seed}, {"trials", trials}, {"failed", failures.size()}, {"failures", failures}};
}

// ---------------------------------------------------------------------------
// Argument handling

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dual partitions, reflexivity and MacWilliams identities over finite abelian groups"};
    app.set_help_all_flag("--help-all");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string budget_file;
    std::uint64_t max_elements = 0, max_work = 0;
    unsigned jobs = 0;
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
    app.add_option("--jobs", jobs, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", cfg.seed, "Seed for randomized suites");
    app.add_option("--budget-file", budget_file, std::string("JSON budget file (default: $") + kBudgetEnv + ")");
    app.add_option("--max-elements", max_elements, "Largest group that may be enumerated");
    app.add_option("--max-work", max_work, "Work units allowed per dual computation");

    std::string path, group_path, spec, code_path, gamma_spec = "hamming", lambda_spec = "dual", range;
    std::string k_mode = "all";
    std::uint32_t q = 0, n = 0, k = 0, trials = 20;
    bool roots = false, no_witness = false;
    std::uint64_t brute_max = 0;

    auto* poset = app.add_subcommand("poset", "Hierarchy, UDP, automorphisms, ideals and the four-way report");
    poset->add_option("file", path, "Poset JSON")->required();

    auto* dual = app.add_subcommand("dual", "Left dual of a partition");
    dual->add_option("group", group_path, "Group JSON")->required();
    dual->add_option("partition", spec, "Partition spec")->required();

    auto* scan = app.add_subcommand("scan-co", "Reflexivity verdicts for CO(H, P(k)) as TSV");
    scan->add_option("--q", q, "Alphabet size")->required();
    scan->add_option("--n", range, "Range A..B")->required();
    scan->add_option("--k", k_mode, "all or a single k");
    scan->add_option("--brute-max", brute_max, "Brute-force confirmation up to q^n elements");

    auto* kraw = app.add_subcommand("krawtchouk", "Krawtchouk polynomial, values and roots");
    kraw->add_option("--n", n)->required();
    kraw->add_option("--k", k)->required();
    kraw->add_option("--q", q)->required();
    kraw->add_flag("--roots", roots, "Isolate the roots");

    auto* mac = app.add_subcommand("macwilliams", "Check the MacWilliams identity for a linear code");
    mac->add_option("code", code_path, "Generator matrix file")->required();
    mac->add_option("--gamma", gamma_spec, "Partition of the dual side");
    mac->add_option("--lambda", lambda_spec, "Partition of the code side, or 'dual' for l(gamma)");

    auto* refute = app.add_subcommand("refute", "Evidence on the extension property of CO(F_q^n, P(k))");
    refute->add_option("q", q)->required();
    refute->add_option("n", n)->required();
    refute->add_option("k", k)->required();
    refute->add_flag("--no-witness", no_witness, "Skip the inv(Delta) witness search");
    refute->add_option("--brute-max", brute_max, "Brute-force reflexivity up to q^n elements");

    auto* self = app.add_subcommand("selfcheck", "Randomized duality axioms and MacWilliams identities");
    self->add_option("--trials", trials)->check(CLI::Range(0u, 100000u));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        return kUsage;
    }

    try {
        if (budget_file.empty())
            if (const char* env = std::getenv(kBudgetEnv)) budget_file = env;
        if (!budget_file.empty()) {
            const auto b = io::parse_budget(io::read_json_file(budget_file));
            cfg.budget = b.budget;
            cfg.max_maps = b.max_maps;
            cfg.max_brute_elements = b.max_brute_elements;
        }
        if (max_elements) cfg.budget.max_elements = max_elements;
        if (max_work) cfg.budget.max_work = max_work;
        if (jobs) cfg.budget.jobs = jobs;
        if (brute_max) cfg.max_brute_elements = brute_max;

        if (*poset) emit(cmd_poset(path, cfg), cfg, out);
        else if (*dual) emit(cmd_dual(group_path, spec, cfg), cfg, out);
        else if (*scan) {
            const auto [lo, hi] = parse_range(range);
            std::uint32_t k_only = 0;
            if (k_mode != "all") {
                if (k_mode.empty() || k_mode.find_first_not_of("0123456789") != std::string::npos || k_mode.size() > 4)
                    throw InvalidInput("--k expects 'all' or a positive integer");
                k_only = static_cast<std::uint32_t>(std::stoul(k_mode));
                if (k_only == 0) throw InvalidInput("--k expects 'all' or a positive integer");
            }
            const auto rows = scan_co(q, lo, hi, k_only, cfg);
            if (cfg.format == "json") {
                Json arr = Json::array();
                for (const auto& r : rows)
                    arr.push_back(Json{{"q", r.q},
                                       {"n", r.n},
                                       {"k", r.k},
                                       {"verdict", to_string(r.report.verdict)},
                                       {"criterion", r.report.criterion()},
                                       {"co_classes", r.report.co_classes},
                                       {"lambda_lower_bound", r.report.lambda_lower_bound},
                                       {"brute_force_confirmed", r.confirmed},
                                       {"brute_force", r.brute_force}});
                out << arr.dump(2) << '\n';
            } else {
                out << scan_tsv(rows);
            }
        } else if (*kraw) emit(cmd_krawtchouk(n, k, q, roots), cfg, out);
        else if (*mac) emit(cmd_macwilliams(code_path, gamma_spec, lambda_spec, cfg), cfg, out);
        else if (*refute) emit(cmd_refute(q, n, k, !no_witness, cfg), cfg, out);
        else if (*self) {
            const auto rep = cmd_selfcheck(trials, cfg);
            emit(rep, cfg, out);
            if (rep["failed"].get<std::size_t>() != 0) {
                err << "error: selfcheck_failed: " << rep["failed"].get<std::size_t>() << " of " << trials
                    << " trials broke an identity\n";
                return kInternal;
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << one_line(e.what()) << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << '\n';
        return kInternal;
    }
    return kOk;
}

}  // namespace reflex::cli
