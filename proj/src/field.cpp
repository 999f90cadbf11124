#include "orbitals/field.hpp"

#include "orbitals/error.hpp"

#include <string>

namespace orbitals {

bool is_prime(std::int64_t n)
{
    if (n < 2) {
        return false;
    }
    if (n % 2 == 0) {
        return n == 2;
    }
    for (std::int64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

PrimeModulus::PrimeModulus(std::int64_t p) : p_(0)
{
    if (p < 3 || p >= (std::int64_t{1} << 31) || !is_prime(p)) {
        throw Error(ErrorCode::NotPrime, "modulus must be an odd prime below 2^31, got " + std::to_string(p));
    }
    p_ = static_cast<std::uint32_t>(p);
}

std::uint32_t PrimeModulus::inv(std::uint32_t a) const
{
    if (a % p_ == 0) {
        throw Error(ErrorCode::ZeroInverse, "0 has no inverse mod " + std::to_string(p_));
    }
    std::int64_t r0 = p_, r1 = a % p_;
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    return reduce(t0);
}

std::uint32_t PrimeModulus::reduce(std::int64_t n) const noexcept
{
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) {
        r += p_;
    }
    return static_cast<std::uint32_t>(r);
}

FpElement::FpElement(std::uint32_t residue, PrimeModulus mod) : v_(residue % mod.value()), mod_(mod) {}

namespace {

void require_same(PrimeModulus a, PrimeModulus b)
{
    if (!(a == b)) {
        throw Error(ErrorCode::DimensionMismatch, "operands live in different fields");
    }
}

}  // namespace

FpElement FpElement::operator+(FpElement rhs) const
{
    require_same(mod_, rhs.mod_);
    return {mod_.add(v_, rhs.v_), mod_};
}

FpElement FpElement::operator-(FpElement rhs) const
{
    require_same(mod_, rhs.mod_);
    return {mod_.sub(v_, rhs.v_), mod_};
}

FpElement FpElement::operator*(FpElement rhs) const
{
    require_same(mod_, rhs.mod_);
    return {mod_.mul(v_, rhs.v_), mod_};
}

FpElement FpElement::operator/(FpElement rhs) const
{
    return *this * fp_inv(rhs);
}

std::ostream& operator<<(std::ostream& os, FpElement a)
{
    return os << a.value();
}

FpElement fp_inv(FpElement a)
{
    return {a.modulus().inv(a.value()), a.modulus()};
}

FpElement fp_pow(FpElement a, std::uint64_t n)
{
    const PrimeModulus mod = a.modulus();
    std::uint32_t result = 1;
    std::uint32_t base = a.value();
    while (n > 0) {
        if (n & 1U) {
            result = mod.mul(result, base);
        }
        base = mod.mul(base, base);
        n >>= 1U;
    }
    return {result, mod};
}

std::optional<FpElement> fp_sqrt_minus_one(PrimeModulus p)
{
    const std::uint32_t q = p.value();
    if (q % 4 != 1) {
        return std::nullopt;
    }
    // Any quadratic non-residue c gives c^((p-1)/4) as a root of -1; pick the
    // smaller of the two roots afterwards.
    for (std::uint32_t c = 2; c < q; ++c) {
        if (fp_pow(FpElement(c, p), (q - 1) / 2).value() == q - 1) {
            const std::uint32_t root = fp_pow(FpElement(c, p), (q - 1) / 4).value();
            const std::uint32_t other = p.neg(root);
            return FpElement(root < other ? root : other, p);
        }
    }
    return std::nullopt;
}

FpElement fp_normalize(std::int64_t n, PrimeModulus p)
{
    return {p.reduce(n), p};
}

}  // namespace orbitals
