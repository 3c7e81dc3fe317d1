#include "gpnorm/lattice.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gpnorm/arith.hpp"
#include "gpnorm/errors.hpp"
#include "gpnorm/intpoly.hpp"
#include "gpnorm/parallel.hpp"

namespace gpnorm {

namespace {

using ZRow = std::vector<mpz_class>;

std::vector<ZRow> to_mpz(const std::vector<std::vector<i64>>& rows, std::size_t n) {
    std::vector<ZRow> out;
    for (const auto& r : rows) {
        if (r.size() != n) throw DimensionMismatch("row of length " + std::to_string(r.size()) + ", expected " + std::to_string(n));
        ZRow z(n);
        for (std::size_t j = 0; j < n; ++j) z[j] = static_cast<long>(r[j]);
        out.push_back(std::move(z));
    }
    return out;
}

i64 to_i64(const mpz_class& x) {
    if (!x.fits_slong_p()) throw OverflowError("lattice entry exceeds 64 bits");
    return x.get_si();
}

void axpy(ZRow& dst, const mpz_class& q, const ZRow& src) {
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] -= q * src[j];
}

// Unimodular row reduction to echelon form on columns [0, cols). Returns the number of pivots;
// rows past that index are zero on those columns. With full_reduce, entries above each pivot are
// reduced into [0, pivot).
std::size_t echelonize(std::vector<ZRow>& rows, std::size_t cols, bool full_reduce) {
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows.size(); ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = pr; r < rows.size(); ++r) {
                if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
            }
            if (best == rows.size()) break;
            std::swap(rows[pr], rows[best]);
            bool others = false;
            for (std::size_t r = pr + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pr][c].get_mpz_t());
                axpy(rows[r], q, rows[pr]);
                if (rows[r][c] != 0) others = true;
            }
            if (!others) break;
        }
        if (rows[pr][c] == 0) continue;
        if (rows[pr][c] < 0) {
            for (auto& x : rows[pr]) x = -x;
        }
        if (full_reduce) {
            for (std::size_t r = 0; r < pr; ++r) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pr][c].get_mpz_t());
                if (q != 0) axpy(rows[r], q, rows[pr]);
            }
        }
        ++pr;
    }
    return pr;
}

i64 sup_norm(std::span<const i64> v) {
    i64 m = 0;
    for (i64 x : v) m = std::max(m, x < 0 ? -x : x);
    return m;
}

std::vector<std::vector<i64>> times_basis(const std::vector<std::vector<i64>>& coeff_rows, const Subgroup& omega) {
    const auto& b = omega.rows();
    std::vector<std::vector<i64>> out;
    for (const auto& c : coeff_rows) {
        std::vector<i64> v(omega.ambient(), 0);
        for (std::size_t r = 0; r < c.size(); ++r) {
            if (c[r] == 0) continue;
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = checked_add(v[j], checked_mul(c[r], b[r][j]));
        }
        out.push_back(std::move(v));
    }
    return out;
}

// Pairings <w, a> for each basis row, reduced mod p when p > 0.
std::vector<i64> row_pairings(const ExponentVector& a, const Subgroup& omega, u64 p) {
    if (a.size() != omega.ambient()) {
        throw DimensionMismatch("vector of length " + std::to_string(a.size()) + " against subgroup of Z^" +
                                std::to_string(omega.ambient()));
    }
    std::vector<i64> w;
    for (const auto& row : omega.rows()) {
        mpz_class s = 0;
        for (std::size_t j = 0; j < row.size(); ++j) s += mpz_class(static_cast<long>(row[j])) * static_cast<long>(a[j]);
        if (p > 0) {
            mpz_class r;
            mpz_fdiv_r_ui(r.get_mpz_t(), s.get_mpz_t(), p);
            s = r;
        }
        w.push_back(to_i64(s));
    }
    return w;
}

// LLL (delta = 0.99) on integer rows, Gram-Schmidt recomputed in long double.
void lll_reduce(std::vector<std::vector<i64>>& b) {
    const std::size_t k = b.size();
    if (k < 2) return;
    const std::size_t n = b[0].size();
    auto dot = [&](const std::vector<long double>& x, const std::vector<long double>& y) {
        long double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += x[j] * y[j];
        return s;
    };
    std::vector<std::vector<long double>> bs(k, std::vector<long double>(n));
    std::vector<std::vector<long double>> mu(k, std::vector<long double>(k, 0));
    std::vector<long double> norms(k);
    auto gso = [&] {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < n; ++j) bs[i][j] = static_cast<long double>(b[i][j]);
            for (std::size_t l = 0; l < i; ++l) {
                std::vector<long double> bi(n);
                for (std::size_t j = 0; j < n; ++j) bi[j] = static_cast<long double>(b[i][j]);
                mu[i][l] = dot(bi, bs[l]) / norms[l];
                for (std::size_t j = 0; j < n; ++j) bs[i][j] -= mu[i][l] * bs[l][j];
            }
            norms[i] = dot(bs[i], bs[i]);
        }
    };
    gso();
    std::size_t i = 1;
    int guard = 0;
    while (i < k && guard++ < 100000) {
        for (std::size_t l = i; l-- > 0;) {
            const long double q = std::round(mu[i][l]);
            if (q != 0) {
                const auto qi = static_cast<i64>(q);
                for (std::size_t j = 0; j < n; ++j) b[i][j] = checked_add(b[i][j], -checked_mul(qi, b[l][j]));
                gso();
            }
        }
        if (norms[i] >= (0.99L - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1]) {
            ++i;
        } else {
            std::swap(b[i], b[i - 1]);
            gso();
            i = std::max<std::size_t>(i - 1, 1);
        }
    }
}

}  // namespace

std::vector<std::vector<i64>> hermite_normal_form(const std::vector<std::vector<i64>>& rows, std::size_t n) {
    auto z = to_mpz(rows, n);
    const std::size_t r = echelonize(z, n, true);
    std::vector<std::vector<i64>> out;
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<i64> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = to_i64(z[i][j]);
        out.push_back(std::move(row));
    }
    return out;
}

Subgroup Subgroup::from_generators(std::size_t n, const std::vector<std::vector<i64>>& generators) {
    if (n == 0) throw InputError("ambient dimension must be >= 1");
    return Subgroup(n, hermite_normal_form(generators, n));
}

Subgroup Subgroup::full(std::size_t n) {
    std::vector<std::vector<i64>> rows(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
    return from_generators(n, rows);
}

Subgroup Subgroup::zero(std::size_t n) { return from_generators(n, {}); }

ExponentMatrix Subgroup::basis() const {
    if (rows_.empty()) throw InputError("subgroup of rank 0 has no basis matrix");
    return ExponentMatrix::from_rows(rows_);
}

std::optional<std::vector<i64>> Subgroup::coordinates(std::span<const i64> v) const {
    if (v.size() != n_) throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " in Z^" + std::to_string(n_));
    std::vector<mpz_class> residual(n_);
    for (std::size_t j = 0; j < n_; ++j) residual[j] = static_cast<long>(v[j]);
    std::vector<i64> nu;
    for (const auto& row : rows_) {
        std::size_t c = 0;
        while (row[c] == 0) ++c;
        for (std::size_t j = 0; j < c; ++j) {
            if (residual[j] != 0) return std::nullopt;
        }
        if (!mpz_divisible_p(residual[c].get_mpz_t(), mpz_class(static_cast<long>(row[c])).get_mpz_t())) return std::nullopt;
        const mpz_class q = residual[c] / static_cast<long>(row[c]);
        for (std::size_t j = 0; j < n_; ++j) residual[j] -= q * static_cast<long>(row[j]);
        nu.push_back(to_i64(q));
    }
    for (const auto& x : residual) {
        if (x != 0) return std::nullopt;
    }
    return nu;
}

Subgroup integer_kernel(const std::vector<std::vector<i64>>& rows, std::size_t n) {
    const std::size_t r = rows.size();
    for (const auto& row : rows) {
        if (row.size() != n) throw DimensionMismatch("relation of length " + std::to_string(row.size()) + " in Z^" + std::to_string(n));
    }
    // Row i of the augmented matrix is (M e_i | e_i); reducing the left block leaves a kernel
    // basis in the right block of the rows that become zero on the left.
    std::vector<ZRow> aug(n, ZRow(r + n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < r; ++s) aug[i][s] = static_cast<long>(rows[s][i]);
        aug[i][r + i] = 1;
    }
    const std::size_t pivots = echelonize(aug, r, false);
    std::vector<std::vector<i64>> gens;
    for (std::size_t i = pivots; i < n; ++i) {
        std::vector<i64> g(n);
        for (std::size_t j = 0; j < n; ++j) g[j] = to_i64(aug[i][r + j]);
        gens.push_back(std::move(g));
    }
    return Subgroup::from_generators(n, gens);
}

Subgroup perp(const Subgroup& lambda) { return integer_kernel(lambda.rows(), lambda.ambient()); }

ShortVector shortest_sup_vector(const std::vector<std::vector<i64>>& rows, std::size_t n, u64 node_limit) {
    if (rows.empty()) throw InputError("shortest_sup_vector: empty lattice");
    std::vector<std::vector<i64>> b = rows;
    lll_reduce(b);
    const std::size_t k = b.size();

    ShortVector best{std::numeric_limits<i64>::max(), {}};
    for (const auto& row : b) {
        const i64 s = sup_norm(row);
        if (s > 0 && (s < best.norm || (s == best.norm && row < best.vector))) best = {s, row};
    }

    // Gram-Schmidt of the reduced basis.
    std::vector<std::vector<long double>> bs(k, std::vector<long double>(n));
    std::vector<std::vector<long double>> mu(k, std::vector<long double>(k, 0));
    std::vector<long double> norms(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < n; ++j) bs[i][j] = static_cast<long double>(b[i][j]);
        for (std::size_t l = 0; l < i; ++l) {
            long double d = 0;
            for (std::size_t j = 0; j < n; ++j) d += static_cast<long double>(b[i][j]) * bs[l][j];
            mu[i][l] = d / norms[l];
            for (std::size_t j = 0; j < n; ++j) bs[i][j] -= mu[i][l] * bs[l][j];
        }
        norms[i] = 0;
        for (std::size_t j = 0; j < n; ++j) norms[i] += bs[i][j] * bs[i][j];
    }

    // Every vector with sup-norm s has euclidean norm at most sqrt(n) s; enumerate that ball and
    // check the sup-norm exactly on the integer vectors.
    long double radius2 = static_cast<long double>(n) * best.norm * best.norm * (1 + 1e-12L);
    std::vector<i64> x(k, 0);
    std::vector<long double> partial(k + 1, 0);
    u64 nodes = 0;
    auto visit = [&](auto&& self, std::size_t level) -> void {
        // level counts down from k; coordinates x[level..k-1] are fixed
        if (level == 0) {
            std::vector<i64> v(n, 0);
            bool nonzero = false;
            for (std::size_t i = 0; i < k; ++i) {
                if (x[i] == 0) continue;
                nonzero = true;
                for (std::size_t j = 0; j < n; ++j) v[j] = checked_add(v[j], checked_mul(x[i], b[i][j]));
            }
            if (!nonzero) return;
            const i64 s = sup_norm(v);
            if (s < best.norm || (s == best.norm && v < best.vector)) {
                best = {s, v};
                radius2 = static_cast<long double>(n) * s * s * (1 + 1e-12L);
            }
            return;
        }
        const std::size_t i = level - 1;
        long double c = 0;
        for (std::size_t j = i + 1; j < k; ++j) c -= static_cast<long double>(x[j]) * mu[j][i];
        const long double room = radius2 - partial[level];
        if (room < 0) return;
        const long double w = std::sqrt(room / norms[i]);
        const auto lo = static_cast<i64>(std::ceil(c - w));
        const auto hi = static_cast<i64>(std::floor(c + w));
        for (i64 xi = lo; xi <= hi; ++xi) {
            if (++nodes > node_limit) {
                long double min_norm = norms[0];
                for (auto v : norms) min_norm = std::min(min_norm, v);
                const auto lb = static_cast<long long>(std::ceil(std::sqrt(min_norm / n) - 1e-9L));
                throw EnumerationLimit("sup-norm enumeration exceeded " + std::to_string(node_limit) + " nodes",
                                       std::max<long long>(1, lb));
            }
            const long double d = static_cast<long double>(xi) - c;
            const long double add = d * d * norms[i];
            if (partial[level] + add > radius2) continue;
            x[i] = xi;
            partial[i] = partial[level] + add;
            self(self, i);
        }
        x[i] = 0;
    };
    visit(visit, k);
    return best;
}

std::optional<i64> rho(const ExponentVector& a, const Subgroup& omega) {
    if (omega.rank() == 0) throw InputError("rho: subgroup of rank 0");
    const auto w = row_pairings(a, omega, 0);
    // coefficient vectors c with c . w = 0
    const Subgroup coeffs = integer_kernel({w}, omega.rank());
    if (coeffs.rank() == 0) return std::nullopt;
    return shortest_sup_vector(times_basis(coeffs.rows(), omega), omega.ambient()).norm;
}

i64 rho_p(const ExponentVector& a, const Subgroup& omega, u64 p) {
    if (omega.rank() == 0) throw InputError("rho_p: subgroup of rank 0");
    if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
    const auto w = row_pairings(a, omega, p);
    const std::size_t m = omega.rank();
    const auto pi = static_cast<i64>(p);
    std::vector<std::vector<i64>> gens;
    std::size_t pivot = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (w[i] != 0) {
            pivot = i;
            break;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<i64> g(m, 0);
        g[i] = pivot == m ? 1 : pi;
        gens.push_back(g);
    }
    if (pivot < m) {
        const u64 inv = pow_mod(static_cast<u64>(w[pivot]), p - 2, p);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == pivot) continue;
            std::vector<i64> g(m, 0);
            g[i] = 1;
            g[pivot] = floor_mod(-static_cast<i64>(mul_mod(static_cast<u64>(w[i]), inv, p)), pi);
            gens.push_back(g);
        }
    }
    const auto coeffs = hermite_normal_form(gens, m);
    return shortest_sup_vector(times_basis(coeffs, omega), omega.ambient()).norm;
}

std::vector<i64> HypothesisWitness::v(std::size_t n) const {
    std::vector<i64> out(n, 0);
    auto add = [&](std::size_t idx, i64 c) {
        if (idx > 0) out[idx - 1] += c;
    };
    add(i, alpha);
    add(j, -alpha);
    add(k, beta);
    add(l, -beta);
    return out;
}

HypothesisResult hypothesis_check(const Subgroup& omega) {
    if (omega.rank() < 2) throw InputError("hypothesis_check: rank must be >= 2");
    const std::size_t n = omega.ambient();
    const auto& rows = omega.rows();
    auto pair = [&](const std::vector<i64>& w, std::size_t s, std::size_t t) {
        const i64 ws = s == 0 ? 0 : w[s - 1];
        const i64 wt = t == 0 ? 0 : w[t - 1];
        return checked_add(ws, -wt);
    };
    for (std::size_t q0 = 0; q0 <= n; ++q0) {
        for (std::size_t q1 = q0 + 1; q1 <= n; ++q1) {
            for (std::size_t q2 = q1 + 1; q2 <= n; ++q2) {
                for (std::size_t q3 = q2 + 1; q3 <= n; ++q3) {
                    const std::size_t pairings[3][4] = {{q0, q1, q2, q3}, {q0, q2, q1, q3}, {q0, q3, q1, q2}};
                    for (const auto& pr : pairings) {
                        // m x 2 matrix of pairings; rank <= 1 iff every 2x2 minor vanishes
                        std::vector<std::pair<i64, i64>> m;
                        for (const auto& w : rows) m.emplace_back(pair(w, pr[0], pr[1]), pair(w, pr[2], pr[3]));
                        bool rank_le_one = true;
                        for (std::size_t r = 0; r < m.size() && rank_le_one; ++r) {
                            for (std::size_t s = r + 1; s < m.size(); ++s) {
                                const __int128 det = static_cast<__int128>(m[r].first) * m[s].second -
                                                     static_cast<__int128>(m[r].second) * m[s].first;
                                if (det != 0) {
                                    rank_le_one = false;
                                    break;
                                }
                            }
                        }
                        if (!rank_le_one) continue;
                        i64 alpha = 1, beta = 0;
                        for (const auto& [u, v] : m) {
                            if (u != 0 || v != 0) {
                                const i64 g = std::gcd(u, v);
                                alpha = v / g;
                                beta = -u / g;
                                break;
                            }
                        }
                        return {false, HypothesisWitness{pr[0], pr[1], pr[2], pr[3], alpha, beta}};
                    }
                }
            }
        }
    }
    return {true, std::nullopt};
}

ReductionResult dirichlet_reduce(const ExponentVector& a, const Subgroup& omega, u64 p) {
    if (a.is_zero()) throw InputError("dirichlet_reduce: a = 0");
    if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
    const auto nu_opt = omega.coordinates(a.entries());
    if (!nu_opt) throw InputError("dirichlet_reduce: a = (" + a.to_string() + ") is not in the subgroup");
    const auto& nu = *nu_opt;
    const std::size_t m = nu.size();
    const auto pi = static_cast<i64>(p);
    std::vector<i64> nu_mod(m);
    for (std::size_t i = 0; i < m; ++i) nu_mod[i] = floor_mod(nu[i], pi);

    // max_i |t nu_i mod p| (symmetric) for each t; the minimum over t, ties to the smallest t.
    const std::size_t blocks = std::max<std::size_t>(1, thread_count());
    std::vector<std::pair<i64, u64>> best_per_block(blocks, {std::numeric_limits<i64>::max(), 0});
    parallel_for(blocks, [&](std::size_t blk) {
        const u64 lo = 1 + (p - 1) * blk / blocks;
        const u64 hi = 1 + (p - 1) * (blk + 1) / blocks;
        auto& best = best_per_block[blk];
        for (u64 t = lo; t < hi; ++t) {
            i64 worst = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const auto r = static_cast<i64>(mul_mod(t, static_cast<u64>(nu_mod[i]), p));
                worst = std::max(worst, std::min(r, pi - r));
            }
            if (worst < best.first) best = {worst, t};
        }
    });
    std::pair<i64, u64> best{std::numeric_limits<i64>::max(), 0};
    for (const auto& b : best_per_block) {
        if (b.first < best.first || (b.first == best.first && b.second < best.second)) best = b;
    }

    const auto& rows = omega.rows();
    ReductionResult out{best.second, {}, ExponentVector(std::vector<i64>(omega.ambient(), 0)), 0.0, false};
    std::vector<i64> omega_coeff(m), reduced(m);
    if (best.first == 0) {
        // p divides every nu_i: a = p * nu / p. Take a' = p * (shortest basis row).
        std::size_t s = 0;
        for (std::size_t i = 1; i < m; ++i) {
            if (sup_norm(rows[i]) < sup_norm(rows[s])) s = i;
        }
        out.t = 1;
        out.outside_regime = true;
        for (std::size_t i = 0; i < m; ++i) {
            omega_coeff[i] = nu[i] / pi - (i == s ? 1 : 0);
            reduced[i] = i == s ? pi : 0;
        }
    } else {
        const auto t = static_cast<i64>(out.t);
        for (std::size_t i = 0; i < m; ++i) {
            const i64 r = symmetric_mod(static_cast<i64>(mul_mod(out.t, static_cast<u64>(nu_mod[i]), p)), pi);
            reduced[i] = r;
            // omega_i = (t nu_i - r_i) / p, computed exactly
            const __int128 num = static_cast<__int128>(t) * nu[i] - r;
            const __int128 q = num / pi;
            if (q > std::numeric_limits<i64>::max() || q < std::numeric_limits<i64>::min()) {
                throw OverflowError("dirichlet_reduce: coefficient overflow");
            }
            omega_coeff[i] = static_cast<i64>(q);
        }
        out.quality = static_cast<double>(best.first) / static_cast<double>(p);
    }
    out.omega = times_basis({omega_coeff}, omega)[0];
    out.a_prime = ExponentVector(times_basis({reduced}, omega)[0]);
    if (out.outside_regime) out.quality = 0.0;
    return out;
}

Subgroup gaussian_omega_any(u64 f) {
    if (f < 2) throw InputError("gaussian_omega: f must be >= 2");
    const IntPoly phi = cyclotomic(f);
    const auto deg = static_cast<std::size_t>(phi.degree());
    const std::size_t n = f - 1;
    // rows of M: power-basis coordinates; column i is (X^i - 1) mod Phi_f
    std::vector<std::vector<i64>> m(deg, std::vector<i64>(n, 0));
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<mpz_class> c(i + 1, 0);
        c[0] = -1;
        c[i] += 1;
        const IntPoly r = remainder_monic(IntPoly(c), phi);
        for (std::size_t j = 0; j < r.coeffs().size(); ++j) m[j][i - 1] = to_i64(r[j]);
    }
    const Subgroup lambda = integer_kernel(m, n);
    return perp(lambda);
}

Subgroup gaussian_omega(u64 f) {
    if (f < 3 || f % 2 == 0) throw InputError("gaussian_omega: f must be odd and >= 3, got " + std::to_string(f));
    return gaussian_omega_any(f);
}

PeriodExponents period_exponents(u64 p, u64 f) {
    if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
    if (f < 2 || (p - 1) % f != 0) throw InputError("f = " + std::to_string(f) + " does not divide p - 1 = " + std::to_string(p - 1));
    const u64 u = smallest_element_of_order(f, p);
    std::vector<i64> a;
    u64 x = 1;
    for (u64 i = 1; i < f; ++i) {
        x = mul_mod(x, u, p);
        a.push_back(static_cast<i64>((x + p - 1) % p));
    }
    return {u, ExponentVector(std::move(a))};
}

}  // namespace gpnorm
