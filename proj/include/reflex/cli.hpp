#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "reflex/budget.hpp"
#include "reflex/io.hpp"

namespace reflex::cli {

/// Environment variable naming a JSON budget file (see io::parse_budget).
inline constexpr const char* kBudgetEnv = "REFLEX_BUDGET_FILE";

struct RunConfig {
    Budget budget{};
    std::uint64_t max_maps = std::uint64_t{1} << 20;
    /// scan-co and refute brute-force q^n up to this many elements.
    std::uint64_t max_brute_elements = std::uint64_t{1} << 16;
    /// "json" or "tsv".
    std::string format = "json";
    std::uint64_t seed = 1;
};

/// Exit codes.
enum Exit : int { kOk = 0, kInternal = 1, kUsage = 2, kInput = 3, kBudget = 4 };

io::Json cmd_poset(const std::string& path, const RunConfig& cfg);
io::Json cmd_dual(const std::string& group_path, const std::string& spec, const RunConfig& cfg);

struct ScanRow {
    std::uint32_t q = 0, n = 0, k = 0;
    CoVerdictReport report;
    /// "yes", "no" or "skipped".
    std::string confirmed;
    /// "reflexive", "non-reflexive" or "-" when brute force did not run.
    std::string brute_force;
};
/// Rows for every n in [n_lo, n_hi] and k in [1, n] (k_only = 0) or k = k_only.
std::vector<ScanRow> scan_co(std::uint32_t q, std::uint32_t n_lo, std::uint32_t n_hi, std::uint32_t k_only,
                             const RunConfig& cfg);
std::string scan_tsv(const std::vector<ScanRow>& rows);

io::Json cmd_krawtchouk(std::uint32_t n, std::uint32_t k, std::uint32_t q, bool roots);
io::Json cmd_macwilliams(const std::string& code_path, const std::string& gamma_spec, const std::string& lambda_spec,
                         const RunConfig& cfg);
io::Json cmd_refute(std::uint32_t q, std::uint32_t n, std::uint32_t k, bool witness, const RunConfig& cfg);
/// Randomized duality axioms and MacWilliams identity over small groups.
io::Json cmd_selfcheck(std::uint32_t trials, const RunConfig& cfg);

/// Parses and runs one command line (args[0] is the program name). Every
/// failure prints one line "error: <code>: <message>" to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reflex::cli
