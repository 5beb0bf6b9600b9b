#include "reflex/exactarith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "reflex/errors.hpp"

namespace reflex {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    auto slash = text.find('/');
    auto digits_ok = [&](std::size_t from, std::size_t to) {
        if (from >= to) return false;
        for (std::size_t i = from; i < to; ++i)
            if (text[i] < '0' || text[i] > '9') return false;
        return true;
    };
    bool ok = slash == std::string::npos ? digits_ok(start, text.size())
                                         : digits_ok(start, slash) && digits_ok(slash + 1, text.size());
    if (!ok) throw ParseError("malformed rational '" + text + "'");
    std::string body = text[0] == '+' ? text.substr(1) : text;
    Rational r;
    if (r.set_str(body, 10) != 0) throw ParseError("malformed rational '" + text + "'");
    if (slash != std::string::npos) {
        mpz_class den(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    }
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

// ---------------------------------------------------------------------------
// SparsePoly

SparsePoly SparsePoly::constant(const Rational& c) { return monomial(0, c); }

SparsePoly SparsePoly::monomial(const Rational& exponent, const Rational& coeff) {
    SparsePoly p;
    p.add_term(exponent, coeff);
    return p;
}

SparsePoly SparsePoly::binomial(const Rational& exponent, const Rational& c) {
    SparsePoly p = monomial(exponent, 1);
    p.add_term(0, c);
    return p;
}

SparsePoly SparsePoly::from_dense(std::span<const std::int64_t> ascending) {
    SparsePoly p;
    for (std::size_t e = 0; e < ascending.size(); ++e)
        if (ascending[e] != 0) p.add_term(Rational(static_cast<long>(e)), Rational(static_cast<long>(ascending[e])));
    return p;
}

std::optional<Rational> SparsePoly::degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
}

Rational SparsePoly::coefficient(const Rational& exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

bool SparsePoly::has_integer_exponents() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.get_den() == 1 && t.first >= 0; });
}

void SparsePoly::add_term(const Rational& exponent, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

SparsePoly& SparsePoly::operator*=(const SparsePoly& other) {
    *this = *this * other;
    return *this;
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
}

std::pair<SparsePoly, SparsePoly> SparsePoly::divmod(const SparsePoly& divisor) const {
    if (divisor.is_zero()) throw InvalidInput("polynomial division by zero");
    if (!has_integer_exponents() || !divisor.has_integer_exponents())
        throw InvalidInput("polynomial division needs non-negative integer exponents");
    SparsePoly quotient;
    SparsePoly rem = *this;
    const Rational dd = *divisor.degree();
    const Rational lead = divisor.terms_.rbegin()->second;
    while (!rem.is_zero() && *rem.degree() >= dd) {
        Rational shift = *rem.degree() - dd;
        Rational factor = rem.terms_.rbegin()->second / lead;
        SparsePoly step = monomial(shift, factor);
        quotient += step;
        rem -= step * divisor;
    }
    return {quotient, rem};
}

Rational SparsePoly::evaluate(const Rational& x) const {
    if (!has_integer_exponents()) throw InvalidInput("evaluation needs non-negative integer exponents");
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational power = 1;
        mpz_pow_ui(power.get_num_mpz_t(), x.get_num_mpz_t(), e.get_num().get_ui());
        mpz_pow_ui(power.get_den_mpz_t(), x.get_den_mpz_t(), e.get_num().get_ui());
        power.canonicalize();
        sum += c * power;
    }
    return sum;
}

std::string SparsePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = mag == 1;
        if (e == 0) {
            os << mag.get_str();
            continue;
        }
        if (!unit) os << mag.get_str() << "*";
        os << "x";
        if (e != 1) {
            if (e.get_den() == 1 && e > 0)
                os << "^" << e.get_str();
            else
                os << "^(" << e.get_str() << ")";
        }
    }
    return os.str();
}

namespace {

const SparsePoly& cyclotomic_memo(std::uint32_t m, std::map<std::uint32_t, SparsePoly>& memo) {
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    SparsePoly value = SparsePoly::binomial(Rational(static_cast<unsigned long>(m)), -1);
    for (std::uint32_t d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        auto [q, r] = value.divmod(cyclotomic_memo(d, memo));
        if (!r.is_zero()) throw InvalidInput("inexact cyclotomic division");
        value = std::move(q);
    }
    return memo.emplace(m, std::move(value)).first->second;
}

}  // namespace

SparsePoly cyclotomic_polynomial(std::uint32_t m) {
    if (m == 0) throw InvalidInput("cyclotomic index must be positive");
    std::map<std::uint32_t, SparsePoly> memo;
    return cyclotomic_memo(m, memo);
}

std::uint32_t euler_phi(std::uint32_t m) {
    if (m == 0) throw InvalidInput("euler_phi of zero");
    std::uint32_t result = m;
    std::uint32_t rest = m;
    for (std::uint32_t p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        result -= result / p;
    }
    if (rest > 1) result -= result / rest;
    return result;
}

// ---------------------------------------------------------------------------
// CyclotomicReducer / CycInt

CyclotomicReducer::CyclotomicReducer(std::uint32_t m) : m_(m) {
    if (m == 0) throw InvalidInput("cyclotomic modulus must be positive");
    SparsePoly phi = cyclotomic_polynomial(m);
    std::size_t deg = phi.degree()->get_num().get_ui();
    phi_.assign(deg + 1, 0);
    for (const auto& [e, c] : phi.terms()) phi_[e.get_num().get_ui()] = c.get_num().get_si();
}

std::shared_ptr<const CyclotomicReducer> CyclotomicReducer::make(std::uint32_t m) {
    return std::make_shared<const CyclotomicReducer>(m);
}

void CyclotomicReducer::reduce_in_place(std::span<std::int64_t> hist) const {
    const std::size_t deg = degree();
    for (std::size_t e = hist.size(); e-- > deg;) {
        const std::int64_t c = hist[e];
        if (c == 0) continue;
        const std::size_t base = e - deg;
        for (std::size_t j = 0; j <= deg; ++j) hist[base + j] -= c * phi_[j];
    }
}

std::vector<std::int64_t> CyclotomicReducer::reduce(std::span<const std::int64_t> hist) const {
    std::vector<std::int64_t> work(hist.begin(), hist.end());
    if (work.size() < degree()) work.resize(degree(), 0);
    reduce_in_place(work);
    work.resize(degree());
    return work;
}

namespace {

const std::shared_ptr<const CyclotomicReducer>& unit_ring() {
    static const auto ring = CyclotomicReducer::make(1);
    return ring;
}

void require_same(const CycInt& a, const CycInt& b) {
    if (a.modulus() != b.modulus())
        throw ModulusMismatch("cyclotomic moduli " + std::to_string(a.modulus()) + " and " +
                              std::to_string(b.modulus()) + " differ; embed into a common modulus first");
}

}  // namespace

CycInt::CycInt() : ring_(unit_ring()), coords_(1, 0) {}

CycInt::CycInt(std::shared_ptr<const CyclotomicReducer> ring, std::vector<std::int64_t> canonical_coords)
    : ring_(std::move(ring)), coords_(std::move(canonical_coords)) {
    if (!ring_) throw InvalidInput("null cyclotomic ring");
    if (coords_.size() != ring_->degree())
        throw InvalidInput("coordinate count " + std::to_string(coords_.size()) + " differs from phi(m) = " +
                           std::to_string(ring_->degree()));
}

CycInt CycInt::integer(std::uint32_t m, std::int64_t value) { return integer(CyclotomicReducer::make(m), value); }

CycInt CycInt::integer(std::shared_ptr<const CyclotomicReducer> ring, std::int64_t value) {
    std::vector<std::int64_t> c(ring->degree(), 0);
    c[0] = value;
    return CycInt(std::move(ring), std::move(c));
}

CycInt CycInt::from_histogram(std::shared_ptr<const CyclotomicReducer> ring, std::span<const std::int64_t> hist) {
    auto coords = ring->reduce(hist);
    return CycInt(std::move(ring), std::move(coords));
}

bool CycInt::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

CycInt CycInt::embed(std::uint32_t target_modulus) const {
    if (target_modulus == 0 || target_modulus % modulus() != 0)
        throw ModulusMismatch("cannot embed modulus " + std::to_string(modulus()) + " into " +
                              std::to_string(target_modulus));
    if (target_modulus == modulus()) return *this;
    const std::uint32_t stride = target_modulus / modulus();
    std::vector<std::int64_t> hist(target_modulus, 0);
    for (std::size_t j = 0; j < coords_.size(); ++j) hist[(j * stride) % target_modulus] += coords_[j];
    return from_histogram(CyclotomicReducer::make(target_modulus), hist);
}

CycInt CycInt::operator-() const {
    CycInt r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
}

CycInt& CycInt::operator+=(const CycInt& other) {
    require_same(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

CycInt& CycInt::operator-=(const CycInt& other) {
    require_same(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

CycInt operator*(const CycInt& a, const CycInt& b) {
    require_same(a, b);
    const std::uint32_t m = a.modulus();
    std::vector<std::int64_t> hist(m, 0);
    for (std::size_t i = 0; i < a.coords_.size(); ++i) {
        if (a.coords_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coords_.size(); ++j) hist[(i + j) % m] += a.coords_[i] * b.coords_[j];
    }
    return CycInt::from_histogram(a.ring_, hist);
}

CycInt CycInt::scaled(std::int64_t factor) const {
    CycInt r = *this;
    for (auto& c : r.coords_) c *= factor;
    return r;
}

bool operator==(const CycInt& a, const CycInt& b) {
    require_same(a, b);
    return a.coords_ == b.coords_;
}

std::string CycInt::to_string() const {
    if (auto v = cyc_is_rational_integer(*this)) return std::to_string(*v);
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = coords_.size(); j-- > 0;) {
        std::int64_t c = coords_[j];
        if (c == 0) continue;
        std::int64_t mag = c < 0 ? -c : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (j == 0) {
            os << mag;
            continue;
        }
        if (mag != 1) os << mag << "*";
        os << "z" << modulus();
        if (j > 1) os << "^" << j;
    }
    return os.str();
}

CycInt root_of_unity_sum(std::uint32_t m, std::span<const std::int64_t> exponents) {
    auto ring = CyclotomicReducer::make(m);
    std::vector<std::int64_t> hist(m, 0);
    const auto mod = static_cast<std::int64_t>(m);
    for (std::int64_t e : exponents) hist[((e % mod) + mod) % mod] += 1;
    return CycInt::from_histogram(std::move(ring), hist);
}

std::optional<std::int64_t> cyc_is_rational_integer(const CycInt& v) {
    const auto& c = v.coords();
    for (std::size_t j = 1; j < c.size(); ++j)
        if (c[j] != 0) return std::nullopt;
    return c[0];
}

// ---------------------------------------------------------------------------
// Binomial matching

SparsePoly expand_binomial_product(std::span<const BinomialFactor> factors) {
    SparsePoly product = SparsePoly::constant(1);
    for (const auto& f : factors)
        product *= SparsePoly::binomial(Rational(static_cast<unsigned long>(f.degree)), f.sign * f.constant);
    return product;
}

namespace {

void validate(std::span<const BinomialFactor> side) {
    for (const auto& f : side) {
        if (f.degree == 0) throw InvalidInput("binomial factor degree must be positive");
        if (f.constant <= 0) throw InvalidInput("binomial factor constant must be positive");
        if (f.sign != 1 && f.sign != -1) throw InvalidInput("binomial factor sign must be +1 or -1");
    }
}

}  // namespace

std::optional<std::vector<std::size_t>> match_binomial_factors(std::span<const BinomialFactor> left,
                                                               std::span<const BinomialFactor> right) {
    validate(left);
    validate(right);
    if (left.size() != right.size()) return std::nullopt;
    std::vector<std::size_t> order(left.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return left[a].degree > left[b].degree; });
    std::vector<bool> used(right.size(), false);
    std::vector<std::size_t> result(left.size());
    for (std::size_t i : order) {
        bool found = false;
        for (std::size_t j = 0; j < right.size(); ++j) {
            if (used[j]) continue;
            if (right[j].degree == left[i].degree && right[j].constant == left[i].constant &&
                right[j].sign == left[i].sign) {
                used[j] = true;
                result[i] = j;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return result;
}

std::optional<std::vector<std::size_t>> match_unit_minus_factors(std::span<const UnitMinusMember> family,
                                                                 std::span<const std::size_t> c_members,
                                                                 std::span<const std::size_t> d_members) {
    std::vector<BinomialFactor> left, right;
    for (std::size_t i : c_members) {
        if (i >= family.size()) throw InvalidInput("member index out of range");
        left.push_back({family[i].degree, family[i].constant, 1});
    }
    for (std::size_t i : d_members) {
        if (i >= family.size()) throw InvalidInput("member index out of range");
        right.push_back({family[i].degree, family[i].constant, 1});
    }
    return match_binomial_factors(left, right);
}

}  // namespace reflex
