#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gpnorm {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m);

// Deterministic Miller-Rabin over the full 64-bit range (first twelve prime bases).
bool is_prime(u64 n);

std::vector<u64> primes_up_to(u64 limit);

// Primes p <= limit with p = 1 (mod modulus).
std::vector<u64> primes_congruent_one(u64 modulus, u64 limit);

u64 euler_phi(u64 n);
std::vector<u64> divisors(u64 n);
std::vector<u64> prime_factors(u64 n);

// Multiplicative order of x modulo prime p (x not divisible by p).
u64 multiplicative_order(u64 x, u64 p);

// Smallest u in [1, p) of exact multiplicative order f modulo prime p; 0 if f does not divide p - 1.
u64 smallest_element_of_order(u64 f, u64 p);

// Representative of a (mod m) in (-m/2, m/2].
i64 symmetric_mod(i64 a, i64 m);
// Representative of a (mod m) in [0, m).
i64 floor_mod(i64 a, i64 m);

// Recursive pairwise summation; the result depends only on the order of v.
double pairwise_sum(std::span<const double> v);

i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

// Montgomery form arithmetic modulo an odd q < 2^63.
class Montgomery {
public:
    explicit Montgomery(u64 q);

    u64 modulus() const noexcept { return q_; }
    u64 to_mont(u64 x) const noexcept { return mul(x % q_, r2_); }
    u64 from_mont(u64 x) const noexcept { return reduce(x); }
    u64 one() const noexcept { return one_; }

    u64 mul(u64 a, u64 b) const noexcept { return reduce(static_cast<u128>(a) * b); }
    u64 add(u64 a, u64 b) const noexcept {
        u64 s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + q_ - b; }
    u64 pow(u64 base_mont, u64 exp) const noexcept;

private:
    u64 reduce(u128 t) const noexcept {
        u64 m = static_cast<u64>(t) * qinv_neg_;
        u128 s = t + static_cast<u128>(m) * q_;
        u64 r = static_cast<u64>(s >> 64);
        return r >= q_ ? r - q_ : r;
    }

    u64 q_;
    u64 qinv_neg_;  // -q^{-1} mod 2^64
    u64 r2_;        // 2^128 mod q
    u64 one_;       // 2^64 mod q
};

}  // namespace gpnorm
