#include "gpnorm/arith.hpp"

#include <stdexcept>

#include "gpnorm/errors.hpp"

namespace gpnorm {

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 b : kBases) {
        if (n % b == 0) return n == b;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 b : kBases) {
        u64 x = pow_mod(b, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

std::vector<u64> primes_congruent_one(u64 modulus, u64 limit) {
    std::vector<u64> out;
    for (u64 p : primes_up_to(limit)) {
        if (p % modulus == 1 % modulus) out.push_back(p);
    }
    return out;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

u64 euler_phi(u64 n) {
    if (n == 0) return 0;
    u64 result = n;
    for (u64 q : prime_factors(n)) result = result / q * (q - 1);
    return result;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> small, large;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

u64 multiplicative_order(u64 x, u64 p) {
    x %= p;
    if (x == 0) throw InputError("multiplicative_order: element is zero");
    u64 order = p - 1;
    for (u64 q : prime_factors(p - 1)) {
        while (order % q == 0 && pow_mod(x, order / q, p) == 1) order /= q;
    }
    return order;
}

u64 smallest_element_of_order(u64 f, u64 p) {
    if (f == 0 || (p - 1) % f != 0) return 0;
    for (u64 u = 1; u < p; ++u) {
        if (pow_mod(u, f, p) == 1 && multiplicative_order(u, p) == f) return u;
    }
    return 0;
}

i64 floor_mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 symmetric_mod(i64 a, i64 m) {
    i64 r = floor_mod(a, m);
    // (-m/2, m/2]: keep r when 2r <= m
    return (r > m - r) ? r - m : r;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
    return r;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
    return r;
}

Montgomery::Montgomery(u64 q) : q_(q) {
    if (q % 2 == 0 || q >= (u64{1} << 63)) throw std::invalid_argument("Montgomery: modulus must be odd and < 2^63");
    // Newton iteration for q^{-1} mod 2^64.
    u64 inv = q;
    for (int i = 0; i < 6; ++i) inv *= 2 - q * inv;
    qinv_neg_ = ~inv + 1;
    u128 r = (static_cast<u128>(1) << 64) % q;
    one_ = static_cast<u64>(r);
    r2_ = static_cast<u64>(r * r % q);
}

u64 Montgomery::pow(u64 base_mont, u64 exp) const noexcept {
    u64 result = one_;
    while (exp) {
        if (exp & 1) result = mul(result, base_mont);
        base_mont = mul(base_mont, base_mont);
        exp >>= 1;
    }
    return result;
}

}  // namespace gpnorm
