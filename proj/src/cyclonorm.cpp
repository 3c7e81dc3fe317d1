#include "gpnorm/cyclonorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "gpnorm/arith.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/parallel.hpp"

namespace gpnorm {

namespace {

void require_prime(u64 p) {
    if (p < 2 || !is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
}

// Pool of CRT primes per p, grown on demand. Entries are only appended.
struct PoolKey {
    u64 p;
    u64 word_bound;
    auto operator<=>(const PoolKey&) const = default;
};

struct Pool {
    std::vector<CrtPrime> primes;
    u64 next_k = 0;  // next k to try, scanning downward
    bool exhausted = false;
};

std::mutex g_pool_mutex;
std::map<PoolKey, Pool> g_pools;

u64 order_p_element(u64 q, u64 p) {
    const Montgomery mont(q);
    const u64 e = (q - 1) / p;
    for (u64 g = 2; g < q; ++g) {
        u64 w = mont.from_mont(mont.pow(mont.to_mont(g), e));
        if (w != 1) return w;
    }
    throw std::logic_error("no element of order p modulo q");
}


}  // namespace

std::vector<CrtPrime> crt_primes(u64 p, const mpz_class& magnitude_bound, u64 word_bound) {
    require_prime(p);
    const mpz_class target = 2 * magnitude_bound;
    std::lock_guard lock(g_pool_mutex);
    Pool& pool = g_pools[PoolKey{p, word_bound}];
    if (pool.primes.empty() && !pool.exhausted && pool.next_k == 0) pool.next_k = (word_bound - 1) / (2 * p);
    std::vector<CrtPrime> out;
    mpz_class product = 1;
    std::size_t i = 0;
    while (product <= target) {
        if (i == pool.primes.size()) {
            bool found = false;
            while (pool.next_k > 0) {
                const u64 q = 2 * pool.next_k * p + 1;
                --pool.next_k;
                if (is_prime(q)) {
                    pool.primes.push_back({q, order_p_element(q, p)});
                    found = true;
                    break;
                }
            }
            if (!found) {
                pool.exhausted = true;
                throw PrimePoolExhausted("CRT prime pool exhausted for p = " + std::to_string(p) +
                                         " below word bound " + std::to_string(word_bound) +
                                         "; raise the prime search bound");
            }
        }
        out.push_back(pool.primes[i]);
        product *= static_cast<unsigned long>(pool.primes[i].q);
        ++i;
    }
    return out;
}

mpz_class crt_reconstruct(std::span<const u64> residues, std::span<const CrtPrime> primes) {
    mpz_class x = 0, modulus = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const u64 q = primes[i].q;
        static_assert(sizeof(unsigned long) == sizeof(u64));
        const u64 x_mod = mpz_fdiv_ui(x.get_mpz_t(), q);
        const u64 m_mod = mpz_fdiv_ui(modulus.get_mpz_t(), q);
        const u64 diff = residues[i] >= x_mod ? residues[i] - x_mod : residues[i] + q - x_mod;
        const u64 inv = pow_mod(m_mod, q - 2, q);
        const u64 t = mul_mod(diff, inv, q);
        x += modulus * mpz_class(static_cast<unsigned long>(t));
        modulus *= static_cast<unsigned long>(q);
    }
    mpz_class half = modulus / 2;
    if (x > half) x -= modulus;
    return x;
}

mpz_class norm_product_signed(const ExponentVector& a, u64 p) {
    require_prime(p);
    std::vector<i64> exps;
    for (i64 v : a.entries()) exps.push_back(floor_mod(v, static_cast<i64>(p)));
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), a.size() + 1, p - 1);
    const auto primes = crt_primes(p, bound);
    std::vector<u64> residues(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        const Montgomery mont(primes[i].q);
        const u64 omega = mont.to_mont(primes[i].omega);
        std::vector<u64> step(exps.size()), cur(exps.size(), mont.one());
        for (std::size_t j = 0; j < exps.size(); ++j) step[j] = mont.pow(omega, static_cast<u64>(exps[j]));
        u64 prod = mont.one();
        for (u64 t = 1; t < p; ++t) {
            u64 factor = mont.one();
            for (std::size_t j = 0; j < cur.size(); ++j) {
                cur[j] = mont.mul(cur[j], step[j]);
                factor = mont.add(factor, cur[j]);
            }
            prod = mont.mul(prod, factor);
        }
        residues[i] = mont.from_mont(prod);
    });
    return crt_reconstruct(residues, primes);
}

mpz_class delta_abs_exact(const ExponentVector& a, u64 p) {
    mpz_class d = norm_product_signed(a, p);
    return abs(d);
}

double log_mpz(const mpz_class& x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

double log_mean(const ExponentVector& a, u64 p) {
    require_prime(p);
    const auto pi = static_cast<i64>(p);
    std::vector<double> cos_table(p), sin_table(p);
    for (i64 e = 0; e < pi; ++e) {
        const auto z = unit_root(e, pi);
        cos_table[static_cast<std::size_t>(e)] = z.real();
        sin_table[static_cast<std::size_t>(e)] = z.imag();
    }
    std::vector<i64> step, cur;
    for (i64 v : a.entries()) step.push_back(floor_mod(v, pi));
    cur.assign(step.size(), 0);
    std::vector<double> terms(p - 1);
    bool checked_exact = false;
    for (u64 t = 1; t < p; ++t) {
        double re = 1.0, im = 0.0;
        for (std::size_t j = 0; j < step.size(); ++j) {
            cur[j] += step[j];
            if (cur[j] >= pi) cur[j] -= pi;
            re += cos_table[static_cast<std::size_t>(cur[j])];
            im += sin_table[static_cast<std::size_t>(cur[j])];
        }
        const double mod = std::hypot(re, im);
        if (mod < 1e-12 && !checked_exact) {
            if (delta_abs_exact(a, p) == 0) {
                throw DeltaZero("Delta_p(a) = 0 for a = (" + a.to_string() + "), p = " + std::to_string(p));
            }
            checked_exact = true;
        }
        terms[t - 1] = std::log(mod);
    }
    return pairwise_sum(terms) / static_cast<double>(p - 1);
}

NormResult compute_norm(const ExponentVector& a, u64 p) {
    NormResult r{delta_abs_exact(a, p), 0.0, p, a};
    if (r.delta_abs == 0) {
        r.log_mean = -std::numeric_limits<double>::infinity();
    } else {
        r.log_mean = log_mean(a, p);
    }
    return r;
}

std::vector<u64> subgroup_elements(u64 p, u64 f) {
    require_prime(p);
    if (f == 0 || (p - 1) % f != 0) throw InputError("f = " + std::to_string(f) + " does not divide p - 1");
    std::vector<u64> g;
    if (f == 1) return {1};
    const u64 u = smallest_element_of_order(f, p);
    u64 x = 1;
    for (u64 i = 0; i < f; ++i) {
        g.push_back(x);
        x = mul_mod(x, u, p);
    }
    std::sort(g.begin(), g.end());
    return g;
}

std::vector<u64> coset_representatives(u64 p, u64 f) {
    const auto g = subgroup_elements(p, f);
    std::vector<bool> covered(p, false);
    std::vector<u64> reps;
    for (u64 t = 1; t < p; ++t) {
        if (covered[t]) continue;
        reps.push_back(t);
        for (u64 h : g) covered[mul_mod(t, h, p)] = true;
    }
    return reps;
}

CosetProduct delta_signed_cosets(u64 p, u64 f) {
    const auto g = subgroup_elements(p, f);
    const auto reps = coset_representatives(p, f);
    const u64 k = reps.size();
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), f, k);
    const auto primes = crt_primes(p, bound);
    std::vector<u64> residues(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) {
        const Montgomery mont(primes[i].q);
        std::vector<u64> powers(p);
        const u64 omega = mont.to_mont(primes[i].omega);
        powers[0] = mont.one();
        for (u64 e = 1; e < p; ++e) powers[e] = mont.mul(powers[e - 1], omega);
        u64 prod = mont.one();
        for (u64 t : reps) {
            u64 sum = 0;
            for (u64 h : g) sum = mont.add(sum, powers[mul_mod(t, h, p)]);
            prod = mont.mul(prod, sum);
        }
        residues[i] = mont.from_mont(prod);
    });
    return {crt_reconstruct(residues, primes), p, f, k};
}

mpz_class myerson_partition_count(u64 p, u64 f, std::span<const u64> reps) {
    const auto g = subgroup_elements(p, f);
    const u64 k = (p - 1) / f;
    if (reps.size() != k) {
        throw InputError("expected " + std::to_string(k) + " coset representatives, got " + std::to_string(reps.size()));
    }
    std::vector<bool> covered(p, false);
    for (u64 r : reps) {
        if (r % p == 0) throw InputError("coset representative divisible by p");
        if (covered[r % p]) throw InputError("representatives are not in distinct cosets");
        for (u64 h : g) covered[mul_mod(r % p, h, p)] = true;
    }
    std::vector<mpz_class> dist(p, 0), next(p);
    dist[0] = 1;
    for (u64 r : reps) {
        std::fill(next.begin(), next.end(), 0);
        for (u64 s = 0; s < p; ++s) {
            if (dist[s] == 0) continue;
            for (u64 h : g) next[(s + mul_mod(r % p, h, p)) % p] += dist[s];
        }
        dist.swap(next);
    }
    return dist[0];
}

bool is_unit(const ExponentVector& a, u64 p) { return delta_abs_exact(a, p) == 1; }

ExponentVector canonical_reduce(const ExponentVector& a, u64 p) {
    require_prime(p);
    std::vector<i64> out;
    for (i64 v : a.entries()) out.push_back(symmetric_mod(v, static_cast<i64>(p)));
    return ExponentVector(std::move(out));
}

}  // namespace gpnorm
