#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reflex {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational; throws ParseError.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);

// ---------------------------------------------------------------------------
// SparsePoly
// ---------------------------------------------------------------------------

/// Generalized polynomial sum c_e x^e with exact rational exponents and
/// coefficients. Zero coefficients are never stored.
class SparsePoly {
public:
    using Terms = std::map<Rational, Rational>;

    SparsePoly() = default;

    static SparsePoly constant(const Rational& c);
    static SparsePoly monomial(const Rational& exponent, const Rational& coeff);
    /// x^exponent + c
    static SparsePoly binomial(const Rational& exponent, const Rational& c);
    /// Dense ascending integer coefficients.
    static SparsePoly from_dense(std::span<const std::int64_t> ascending);

    bool is_zero() const { return terms_.empty(); }
    /// Largest exponent; empty for the zero polynomial (the -infinity sentinel).
    std::optional<Rational> degree() const;
    Rational coefficient(const Rational& exponent) const;
    const Terms& terms() const { return terms_; }
    bool has_integer_exponents() const;

    void add_term(const Rational& exponent, const Rational& coeff);

    SparsePoly& operator+=(const SparsePoly& other);
    SparsePoly& operator-=(const SparsePoly& other);
    SparsePoly& operator*=(const SparsePoly& other);
    SparsePoly operator-() const;
    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
    friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }

    /// Long division; both operands must have non-negative integer exponents.
    /// Returns (quotient, remainder).
    std::pair<SparsePoly, SparsePoly> divmod(const SparsePoly& divisor) const;

    /// Value at an integer point; requires non-negative integer exponents.
    Rational evaluate(const Rational& x) const;

    std::string to_string() const;

private:
    Terms terms_;
};

/// Phi_m, built by exact division of x^m - 1 by Phi_d over proper divisors d | m.
SparsePoly cyclotomic_polynomial(std::uint32_t m);

std::uint32_t euler_phi(std::uint32_t m);

// ---------------------------------------------------------------------------
// CycInt
// ---------------------------------------------------------------------------

/// Reduction modulo Phi_m in the power basis {z^j : j < phi(m)}, z = exp(2 pi i / m).
class CyclotomicReducer {
public:
    static std::shared_ptr<const CyclotomicReducer> make(std::uint32_t m);

    std::uint32_t modulus() const { return m_; }
    std::size_t degree() const { return phi_.size() - 1; }
    /// Ascending monic coefficients of Phi_m.
    const std::vector<std::int64_t>& phi_coeffs() const { return phi_; }

    /// `hist[e]` is the coefficient of z^e, e < m. Reduces in place; the first
    /// degree() entries then hold the canonical coordinates.
    void reduce_in_place(std::span<std::int64_t> hist) const;
    std::vector<std::int64_t> reduce(std::span<const std::int64_t> hist) const;

    explicit CyclotomicReducer(std::uint32_t m);

private:
    std::uint32_t m_;
    std::vector<std::int64_t> phi_;
};

/// Exact element of Z[z_m]. Two values with the same modulus are equal iff
/// their coordinate vectors are equal.
class CycInt {
public:
    /// The zero of Z (modulus 1).
    CycInt();
    CycInt(std::shared_ptr<const CyclotomicReducer> ring, std::vector<std::int64_t> canonical_coords);

    static CycInt integer(std::uint32_t m, std::int64_t value);
    static CycInt integer(std::shared_ptr<const CyclotomicReducer> ring, std::int64_t value);
    static CycInt from_histogram(std::shared_ptr<const CyclotomicReducer> ring, std::span<const std::int64_t> hist);

    std::uint32_t modulus() const { return ring_->modulus(); }
    const std::vector<std::int64_t>& coords() const { return coords_; }
    const std::shared_ptr<const CyclotomicReducer>& ring() const { return ring_; }
    bool is_zero() const;

    /// Re-expresses the value in Z[z_M]; M must be a multiple of modulus().
    CycInt embed(std::uint32_t target_modulus) const;

    CycInt operator-() const;
    CycInt& operator+=(const CycInt& other);
    CycInt& operator-=(const CycInt& other);
    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
    friend CycInt operator*(const CycInt& a, const CycInt& b);
    CycInt scaled(std::int64_t factor) const;
    friend bool operator==(const CycInt& a, const CycInt& b);

    std::string to_string() const;

private:
    std::shared_ptr<const CyclotomicReducer> ring_;
    std::vector<std::int64_t> coords_;
};

/// Sum of z_m^e over a multiset of exponents (taken mod m), canonical form.
CycInt root_of_unity_sum(std::uint32_t m, std::span<const std::int64_t> exponents);

/// The integer when every non-constant coordinate vanishes.
std::optional<std::int64_t> cyc_is_rational_integer(const CycInt& v);

// ---------------------------------------------------------------------------
// Binomial factor matching
// ---------------------------------------------------------------------------

/// The factor x^degree + sign * constant, with constant > 0 and sign = +-1.
struct BinomialFactor {
    std::uint32_t degree = 1;
    Rational constant = 1;
    int sign = 1;
};

SparsePoly expand_binomial_product(std::span<const BinomialFactor> factors);

/// Pairs every left factor with a right factor of identical degree, constant
/// and sign, taking left factors by decreasing degree (ties by input order)
/// and the first unused right candidate. `result[i]` is the right index paired
/// with left factor i; empty when the two multisets differ.
std::optional<std::vector<std::size_t>> match_binomial_factors(std::span<const BinomialFactor> left,
                                                               std::span<const BinomialFactor> right);

/// Family member i contributes x^{degree_i} - 1 when inside the chosen subset
/// and x^{degree_i} + a_i otherwise. Given subsets C, D for which the two
/// products agree, returns a bijection C -> D (as positions into `d_members`)
/// preserving (degree, a); empty when none exists.
struct UnitMinusMember {
    std::uint32_t degree = 1;
    Rational constant = 1;
};
std::optional<std::vector<std::size_t>> match_unit_minus_factors(std::span<const UnitMinusMember> family,
                                                                 std::span<const std::size_t> c_members,
                                                                 std::span<const std::size_t> d_members);

}  // namespace reflex
