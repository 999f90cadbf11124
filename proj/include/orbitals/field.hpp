#pragma once

/**
 * @file field.hpp
 * @brief Residue arithmetic in GF(p) for odd primes 3 <= p < 2^31.
 *
 * Values are always stored as canonical residues in [0, p). Signed integers
 * enter only through fp_normalize(). Products of two residues fit in 64 bits,
 * so no reduction tricks are needed.
 */

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>

namespace orbitals {

class PrimeModulus {
public:
    /// Throws Error(NotPrime) unless p is an odd prime below 2^31.
    explicit PrimeModulus(std::int64_t p);

    [[nodiscard]] std::uint32_t value() const noexcept { return p_; }

    [[nodiscard]] std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept
    {
        const std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    [[nodiscard]] std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept
    {
        return a >= b ? a - b : a + p_ - b;
    }
    [[nodiscard]] std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept
    {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
    }
    /// Extended Euclid; throws Error(ZeroInverse) for a == 0.
    [[nodiscard]] std::uint32_t inv(std::uint32_t a) const;
    [[nodiscard]] std::uint32_t reduce(std::int64_t n) const noexcept;

    friend bool operator==(PrimeModulus, PrimeModulus) = default;

private:
    std::uint32_t p_;
};

bool is_prime(std::int64_t n);

class FpElement {
public:
    FpElement(std::uint32_t residue, PrimeModulus mod);

    [[nodiscard]] std::uint32_t value() const noexcept { return v_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] bool is_zero() const noexcept { return v_ == 0; }

    FpElement operator+(FpElement rhs) const;
    FpElement operator-(FpElement rhs) const;
    FpElement operator*(FpElement rhs) const;
    FpElement operator/(FpElement rhs) const;
    FpElement operator-() const { return {mod_.neg(v_), mod_}; }

    friend bool operator==(FpElement a, FpElement b) = default;

private:
    std::uint32_t v_;
    PrimeModulus mod_;
};

std::ostream& operator<<(std::ostream& os, FpElement a);

FpElement fp_inv(FpElement a);
FpElement fp_pow(FpElement a, std::uint64_t n);
/// Smallest i with i^2 = -1 when p = 1 (mod 4); nullopt otherwise.
std::optional<FpElement> fp_sqrt_minus_one(PrimeModulus p);
FpElement fp_normalize(std::int64_t n, PrimeModulus p);

}  // namespace orbitals
