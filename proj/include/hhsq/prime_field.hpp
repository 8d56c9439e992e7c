#pragma once

#include <cstdint>
#include <stdexcept>

namespace hhsq {

// Arithmetic in the prime field F_p. The modulus is a runtime value so the
// same binary can run p = 2 pipelines and odd-p data-structure tests.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p = 2) : p_(p) {
        if (p < 2 || !is_prime(p))
            throw std::invalid_argument("PrimeField: modulus must be prime");
    }

    std::uint32_t p() const { return p_; }

    std::uint32_t reduce(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + p_ - b;
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(a) * b) % p_);
    }

    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0)
            throw std::domain_error("PrimeField: inverse of zero");
        // Fermat: a^(p-2); p is small.
        std::uint32_t r = 1, base = a % p_, e = p_ - 2;
        while (e) {
            if (e & 1)
                r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    // (-1)^k as a field element.
    std::uint32_t sign(long k) const {
        return (k % 2 == 0) ? 1u : neg(1u);
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    static bool is_prime(std::uint32_t n) {
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

    std::uint32_t p_;
};

}  // namespace hhsq
