#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "gpnorm/lacunary.hpp"

namespace gpnorm {

using u64 = std::uint64_t;

/// Exact norm Delta_p(a) together with the floating-point log-mean.
struct NormResult {
    mpz_class delta_abs;
    double log_mean;  // (1/(p-1)) log Delta_p(a); -inf when delta_abs == 0
    u64 p;
    ExponentVector a;
};

/// Signed product of Gaussian-period sums over the cosets of the order-f subgroup G of F_p^x.
struct CosetProduct {
    mpz_class delta_signed;
    u64 p;
    u64 f;
    u64 k;  // (p - 1) / f
};

/// CRT moduli q = 1 (mod p) with an element omega of multiplicative order p.
struct CrtPrime {
    u64 q;
    u64 omega;
};

/// Primes q = 2kp + 1 < word_bound, scanned downward in k, whose product exceeds 2 * magnitude_bound.
/// Throws PrimePoolExhausted when the scan runs out of candidates.
std::vector<CrtPrime> crt_primes(u64 p, const mpz_class& magnitude_bound, u64 word_bound = u64{1} << 62);

/// Symmetric-lift reconstruction of x from residues x mod q_i.
mpz_class crt_reconstruct(std::span<const u64> residues, std::span<const CrtPrime> primes);

/// The rational integer prod_{t=1}^{p-1} P_a(zeta^t).
mpz_class norm_product_signed(const ExponentVector& a, u64 p);

/// Delta_p(a) = |prod_{t=1}^{p-1} (1 + zeta^{t a_1} + ... + zeta^{t a_n})|.
mpz_class delta_abs_exact(const ExponentVector& a, u64 p);

/// (1/(p-1)) sum_t log|1 + sum_j zeta^{t a_j}| with pairwise summation. Throws DeltaZero when a
/// factor vanishes.
double log_mean(const ExponentVector& a, u64 p);

NormResult compute_norm(const ExponentVector& a, u64 p);

/// Smallest representative of each coset of the order-f subgroup, in increasing order.
std::vector<u64> coset_representatives(u64 p, u64 f);
/// Elements of the order-f subgroup of F_p^x, increasing.
std::vector<u64> subgroup_elements(u64 p, u64 f);

CosetProduct delta_signed_cosets(u64 p, u64 f);

/// #{(x_1..x_k) in G^k : A_1 x_1 + ... + A_k x_k = 0 in F_p}, counted exactly by accumulating the
/// distribution of partial sums over F_p one coordinate at a time.
mpz_class myerson_partition_count(u64 p, u64 f, std::span<const u64> reps);

bool is_unit(const ExponentVector& a, u64 p);

/// Entrywise reduction into (-p/2, p/2]; Delta_p is unchanged.
ExponentVector canonical_reduce(const ExponentVector& a, u64 p);

/// log of a positive big integer.
double log_mpz(const mpz_class& x);

}  // namespace gpnorm
