#pragma once

/**
 * @file residue.hpp
 * @brief Exact arithmetic in the residue ring Z/qZ for arbitrary q >= 2.
 *
 * Composite moduli have zero divisors, so invertibility is a property to
 * query, not an assumption: unit_inverse reports failure as a value, and
 * annihilator exposes the generator of { x : a*x = 0 (mod q) }.
 *
 * All values are canonical representatives in [0, q). Arithmetic is a
 * product plus a sum reduced immediately, so the modulus is capped at
 * kMaxModulus to keep every intermediate inside int64.
 */

#include <cstdint>
#include <optional>

namespace kq {

// Largest q with q*q + q <= INT64_MAX: one product of canonical
// representatives plus one more representative never overflows.
inline constexpr std::int64_t kMaxModulus = 3037000499;

class Modulus {
public:
    explicit Modulus(std::int64_t q);

    std::int64_t value() const noexcept { return q_; }

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    std::int64_t q_;
};

class Residue {
public:
    // Reduces any integer into the canonical range [0, q).
    Residue(std::int64_t value, Modulus modulus);

    std::int64_t value() const noexcept { return value_; }
    Modulus modulus() const noexcept { return modulus_; }

    friend Residue operator+(Residue a, Residue b);
    friend Residue operator-(Residue a, Residue b);
    friend Residue operator*(Residue a, Residue b);
    Residue operator-() const;

    friend bool operator==(const Residue&, const Residue&) = default;

private:
    std::int64_t value_;
    Modulus modulus_;
};

/// Bezout data: s*a + t*b = g with g = gcd(a, b) >= 0.
struct ExtendedGcd {
    std::int64_t g;
    std::int64_t s;
    std::int64_t t;
};

ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b);

/// True iff gcd(a, q) = 1.
bool is_unit(Residue a);

/// The b with a*b = 1 (mod q), or nullopt when a is zero or a zero divisor.
std::optional<Residue> unit_inverse(Residue a);

/// Generator q/gcd(a, q) of the annihilator ideal { x : a*x = 0 (mod q) }.
/// For a unit this is q = 0 (mod q), the zero ideal.
Residue annihilator(Residue a);

}  // namespace kq
