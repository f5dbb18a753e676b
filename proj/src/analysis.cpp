#include "ssgk/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include "ssgk/errors.hpp"

namespace ssgk {

namespace {

constexpr unsigned kRetryBound = 1000;

// Exhaustive enumeration is exact only at desk scale; above this the
// candidate lists are left empty (the dlogs themselves still run).
const Exponent kEnumerationCap = 97;

bool order_divides(const BitMatrix& a, const Exponent& e) {
    return pow(a, e).is_identity();
}

bool exact_order_2p(const BitMatrix& a, const Exponent& p) {
    return order_divides(a, 2 * p) && !order_divides(a, p) && !(a * a).is_identity();
}

bool exact_order_3p(const BitMatrix& b, const Exponent& p) {
    return order_divides(b, 3 * p) && !order_divides(b, p) &&
           !(b * (b * b)).is_identity();
}

// Rank of the linearized rows: elimination with unit pivots, rows grouped
// by modulus (rows over different moduli constrain independently).
std::size_t unit_pivot_rank(std::vector<CongruenceRow> rows) {
    std::size_t rank = 0;
    std::vector<bool> used(rows.size(), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (used[r])
            continue;
        const Exponent& n = rows[r].modulus;
        std::size_t pivot_col = rows[r].coeffs.size();
        for (std::size_t col = 0; col < rows[r].coeffs.size(); ++col) {
            if (gcd(mod_floor(rows[r].coeffs[col], n), n) == 1) {
                pivot_col = col;
                break;
            }
        }
        if (pivot_col == rows[r].coeffs.size())
            continue;  // no unit pivot; conservatively not counted
        ++rank;
        used[r] = true;
        const Exponent inv = mod_inverse(rows[r].coeffs[pivot_col], n);
        for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
            if (used[r2] || rows[r2].modulus != n)
                continue;
            const Exponent f = mod_floor(rows[r2].coeffs[pivot_col] * inv, n);
            if (f == 0)
                continue;
            for (std::size_t col = 0; col < rows[r2].coeffs.size(); ++col)
                rows[r2].coeffs[col] =
                    mod_floor(rows[r2].coeffs[col] - f * rows[r].coeffs[col], n);
            rows[r2].rhs = mod_floor(rows[r2].rhs - f * rows[r].rhs, n);
        }
    }
    return rank;
}

// Consistency of one (alpha', zeta_1') guess with the observed dlogs:
// for every j there must be an in-range zeta_j' making the same dlog
// relation hold with a unit combined exponent. `stride` is 2 for the
// A side and 3 for the B side.
bool guess_consistent(const Exponent& scalar, const Exponent& zeta1,
                      const std::vector<Exponent>& dlogs,
                      const std::vector<Exponent>& offsets,
                      const Exponent& p, unsigned stride) {
    const Exponent modulus = stride * p;
    const Exponent base = stride * scalar * zeta1 + offsets[0];
    if (gcd(mod_floor(base, modulus), modulus) != 1)
        return false;
    const Exponent scalar_inv = mod_inverse(scalar, p);
    for (std::size_t j = 0; j < dlogs.size(); ++j) {
        const Exponent rhs = mod_floor(dlogs[j] * base - offsets[j + 1], modulus);
        if (rhs % stride != 0)
            return false;
        Exponent zeta_j = mod_floor((rhs / stride) * scalar_inv, p);
        if (zeta_j == 0)
            zeta_j = p;  // representative in [1, p]
        const Exponent combined = mod_floor(stride * scalar * zeta_j + offsets[j + 1], modulus);
        if (combined != mod_floor(dlogs[j] * base, modulus))
            return false;
        if (gcd(combined, modulus) != 1)
            return false;
    }
    return true;
}

// Deterministic search for solutions of the two weighted-sum congruences
// with all entries in [1, p] and the last entry a unit mod 6p. Iterates
// prefixes theta_1..theta_{t-2} lexicographically.
std::vector<std::vector<Exponent>> solve_theta_system(const Msg1& msg1,
                                                      const Exponent& p,
                                                      std::size_t max_out) {
    const unsigned t = static_cast<unsigned>(msg1.mu.size());
    const Exponent p2 = 2 * p, p3 = 3 * p, p6 = 6 * p;
    std::vector<std::vector<Exponent>> out;
    if (t < 2)
        return out;
    const Exponent mu_t_inv = mod_inverse(msg1.mu[t - 1], p2);
    const Exponent sigma_t_inv = mod_inverse(msg1.sigma[t - 1], p3);

    std::vector<Exponent> prefix(t - 2, 1);
    const std::size_t kPrefixCap = 20000;
    for (std::size_t tries = 0; tries < kPrefixCap && out.size() < max_out; ++tries) {
        Exponent acc_mu = 0, acc_sigma = 0;
        for (unsigned i = 0; i + 2 < t; ++i) {
            acc_mu += msg1.mu[i] * prefix[i];
            acc_sigma += msg1.sigma[i] * prefix[i];
        }
        const Exponent r2 = mod_floor(-acc_mu, p2);
        const Exponent r3 = mod_floor(-acc_sigma, p3);
        // theta_t expressed from each congruence must agree mod p; that
        // pins theta_{t-1} (mod p) unless the linear coefficient vanishes.
        const Exponent a = mod_floor(sigma_t_inv * msg1.sigma[t - 2] - mu_t_inv * msg1.mu[t - 2], p);
        const Exponent b = mod_floor(sigma_t_inv * r3 - mu_t_inv * r2, p);
        std::vector<Exponent> u_candidates;
        if (a == 0) {
            if (b == 0)
                for (Exponent u = 1; u <= p && u_candidates.size() < 8; ++u)
                    u_candidates.push_back(u);
        } else {
            Exponent u = mod_floor(mod_inverse(a, p) * b, p);
            if (u == 0)
                u = p;
            u_candidates.push_back(u);
        }
        for (const Exponent& u : u_candidates) {
            const Exponent v2 = mod_floor(mu_t_inv * (r2 - msg1.mu[t - 2] * u), p2);
            const Exponent v3 = mod_floor(sigma_t_inv * (r3 - msg1.sigma[t - 2] * u), p3);
            Exponent v = v2;
            bool found = false;
            for (int k = 0; k < 3; ++k, v += p2) {
                if (mod_floor(v, p3) == v3) {
                    found = true;
                    break;
                }
            }
            if (!found || v < 1 || v > p)
                continue;
            if (gcd(mod_floor(v, p6), p6) != 1)
                continue;
            std::vector<Exponent> theta(prefix.begin(), prefix.end());
            theta.push_back(u);
            theta.push_back(v);
            out.push_back(std::move(theta));
            if (out.size() >= max_out)
                break;
        }
        // next prefix (odometer over [1, p]^(t-2))
        bool rolled = true;
        for (unsigned i = 0; i < prefix.size(); ++i) {
            if (prefix[i] < p) {
                ++prefix[i];
                rolled = false;
                break;
            }
            prefix[i] = 1;
        }
        if (rolled && !prefix.empty())
            break;  // exhausted the whole prefix space
        if (prefix.empty())
            break;
    }
    return out;
}

bool secrets_satisfy_systems(const AttackReport& rep, const Transcript& tr,
                             const AliceSecret& alice, const BobSecret& bob) {
    const Exponent& p = alice.master.field.p;
    const Exponent p2 = 2 * p, p3 = 3 * p;
    const Msg1& msg1 = tr.msg1;
    const unsigned t = static_cast<unsigned>(msg1.mu.size());

    const Exponent base_a = mod_floor(2 * alice.alpha * alice.zeta[0] + msg1.mu[0], p2);
    const Exponent beta = mod_inverse(base_a, p2);
    const Exponent base_b = mod_floor(3 * alice.gamma * alice.zeta[0] + msg1.sigma[0], p3);
    const Exponent delta = mod_inverse(base_b, p3);

    for (unsigned j = 1; j < t; ++j) {
        // Direct dlog relation and its split parametrization must both hold.
        const Exponent expect_c =
            mod_floor(beta * (2 * alice.alpha * alice.zeta[j] + msg1.mu[j]), p2);
        if (rep.c[j - 1] != expect_c)
            return false;
        const Exponent eta_j = mod_floor(2 * beta * alice.zeta[j], p2);
        if (mod_floor(alice.alpha * eta_j + beta * msg1.mu[j], p2) != rep.c[j - 1])
            return false;

        const Exponent expect_d =
            mod_floor(delta * (3 * alice.gamma * alice.zeta[j] + msg1.sigma[j]), p3);
        if (rep.d[j - 1] != expect_d)
            return false;
        const Exponent xi_j = mod_floor(3 * delta * alice.zeta[j], p3);
        if (mod_floor(alice.gamma * xi_j + delta * msg1.sigma[j], p3) != rep.d[j - 1])
            return false;
    }

    Exponent sum_mu = 0, sum_sigma = 0;
    for (unsigned i = 0; i < t; ++i) {
        sum_mu += msg1.mu[i] * bob.theta[i];
        sum_sigma += msg1.sigma[i] * bob.theta[i];
    }
    return mod_floor(sum_mu, p2) == 0 && mod_floor(sum_sigma, p3) == 0;
}

}  // namespace

std::optional<Exponent> brute_dlog(const BitMatrix& base, const BitMatrix& target,
                                   const Exponent& max_exp) {
    if (base.dim() != target.dim())
        throw std::invalid_argument("brute_dlog: dimension mismatch");
    BitMatrix acc = BitMatrix::identity(base.dim());
    for (Exponent e = 0; e <= max_exp; ++e) {
        if (acc == target)
            return e;
        acc = acc * base;
    }
    return std::nullopt;
}

bool cross_power_scan(const BitMatrix& a, const BitMatrix& b, const Exponent& p) {
    const Exponent limit = 6 * p;
    BitMatrix acc = a;
    for (Exponent x = 1; x <= limit; ++x) {
        if (acc == b)
            return false;
        acc = acc * a;
    }
    return true;
}

std::set<std::uint64_t> gl_order_census(unsigned n) {
    if (n < 1 || n > 4)
        throw std::invalid_argument("gl_order_census: n must be in [1, 4]");
    const std::uint64_t total = std::uint64_t{1} << (n * n);
    const BitMatrix ident = BitMatrix::identity(n);
    std::set<std::uint64_t> orders;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        BitMatrix m(n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                if ((mask >> (i * n + j)) & 1u)
                    m.set(i, j, true);
        if (!is_nonsingular(m))
            continue;
        BitMatrix acc = m;
        std::uint64_t ord = 1;
        while (!(acc == ident)) {
            acc = acc * m;
            ++ord;
        }
        orders.insert(ord);
    }
    return orders;
}

AttackReport mount_dlog_attack(const Transcript& transcript,
                               const PublicParams& params,
                               const AliceSecret* alice, const BobSecret* bob) {
    const Exponent& p = params.field.p;
    const Exponent p2 = 2 * p, p3 = 3 * p;
    const unsigned t = params.t;
    const auto& a_tuple = transcript.msg2.a_tuple;
    const auto& b_tuple = transcript.msg2.b_tuple;

    AttackReport rep;
    for (unsigned j = 1; j < t; ++j) {
        auto cj = brute_dlog(a_tuple[0], a_tuple[j], p2);
        if (!cj)
            throw DlogFailedError("no dlog for a_tuple entry " + std::to_string(j));
        rep.c.push_back(*cj);
        auto dj = brute_dlog(b_tuple[0], b_tuple[j], p3);
        if (!dj)
            throw DlogFailedError("no dlog for b_tuple entry " + std::to_string(j));
        rep.d.push_back(*dj);
    }

    // Linearized rows: one column per folded product unknown, plus the
    // shared inverse-base unknown carrying the mu (resp. sigma) weight.
    // The underlying unknown count also includes the scalar factored out
    // of each product, hence t + 1.
    auto build_pair_system = [&](const std::vector<Exponent>& dlogs,
                                 const std::vector<Exponent>& offsets,
                                 const Exponent& modulus) {
        AssembledSystem sys;
        for (unsigned j = 1; j < t; ++j) {
            CongruenceRow row;
            row.coeffs.assign(t, 0);
            row.coeffs[j - 1] = 1;                 // the folded product unknown
            row.coeffs[t - 1] = offsets[j];        // weight on the inverse-base unknown
            row.rhs = dlogs[j - 1];
            row.modulus = modulus;
            sys.rows.push_back(std::move(row));
        }
        sys.equation_count = t - 1;
        sys.unknown_count = t + 1;
        sys.rank = unit_pivot_rank(sys.rows);
        return sys;
    };
    rep.system_a = build_pair_system(rep.c, transcript.msg1.mu, p2);
    rep.system_b = build_pair_system(rep.d, transcript.msg1.sigma, p3);

    rep.system_theta.rows.push_back(CongruenceRow{transcript.msg1.mu, 0, p2});
    rep.system_theta.rows.push_back(CongruenceRow{transcript.msg1.sigma, 0, p3});
    rep.system_theta.equation_count = 2;
    rep.system_theta.unknown_count = t;
    rep.system_theta.rank = unit_pivot_rank(rep.system_theta.rows);

    if (p <= kEnumerationCap) {
        std::set<Exponent> ratios;
        for (Exponent zeta1 = 1; zeta1 <= p; ++zeta1) {
            std::vector<Exponent> alphas, gammas;
            for (Exponent x = 1; x < p; ++x) {
                if (guess_consistent(x, zeta1, rep.c, transcript.msg1.mu, p, 2))
                    alphas.push_back(x);
                if (guess_consistent(x, zeta1, rep.d, transcript.msg1.sigma, p, 3))
                    gammas.push_back(x);
            }
            for (const Exponent& a : alphas) {
                const Exponent a_inv = mod_inverse(a, p);
                for (const Exponent& g : gammas)
                    ratios.insert(mod_floor(g * a_inv, p));
            }
        }
        rep.candidate_ratios.assign(ratios.begin(), ratios.end());
        for (const Exponent& r : rep.candidate_ratios) {
            BitMatrix k = pow(transcript.msg3.share, r);
            if (std::find(rep.implied_keys.begin(), rep.implied_keys.end(), k) ==
                rep.implied_keys.end())
                rep.implied_keys.push_back(std::move(k));
        }
        rep.theta_candidates = solve_theta_system(transcript.msg1, p, 4);
    }

    if (alice && bob) {
        rep.secrets_checked = true;
        rep.secrets_consistent = secrets_satisfy_systems(rep, transcript, *alice, *bob);
    }
    return rep;
}

DdhQuadruple proper_quadruple(const LocalRun& run) {
    const AliceSecret& alice = run.alice;
    const Exponent& p = alice.master.field.p;
    const BitMatrix key_base = pow(alice.master.matrix, 6);
    const BitMatrix a_inv = inverse(alice.a_conj);
    const BitMatrix b_inv = inverse(alice.b_conj);
    return DdhQuadruple{
        pow(key_base, mod_floor(alice.alpha * alice.zeta[0], p)),
        a_inv * run.transcript.msg3.share * alice.a_conj,
        pow(key_base, mod_floor(alice.gamma * alice.zeta[0], p)),
        b_inv * run.transcript.key.key * alice.b_conj};
}

DdhQuadruple random_quadruple(const LocalRun& run, Rng& rng) {
    DdhQuadruple quad = proper_quadruple(run);
    const AliceSecret& alice = run.alice;
    const Exponent& p = alice.master.field.p;
    Exponent weighted = 0;
    for (std::size_t i = 0; i < alice.zeta.size(); ++i)
        weighted += alice.zeta[i] * run.bob.theta[i];
    const Exponent proper_exp = mod_floor(alice.gamma * weighted, p);
    Exponent c;
    do {
        c = rng.below(p);
    } while (c == proper_exp);
    quad.g4 = pow(pow(alice.master.matrix, 6), c);
    return quad;
}

Transcript simulate_ddh_transcript(const DdhQuadruple& quad,
                                   const MasterMatrix& master,
                                   const BitMatrix& a_conj, const BitMatrix& b_conj,
                                   const PublicParams& params, Rng& rng) {
    const Exponent& p = params.field.p;
    const Exponent p2 = 2 * p, p3 = 3 * p;
    const unsigned t = params.t;
    const BitMatrix mask_a = pow(master.matrix, 3);
    const BitMatrix mask_b = pow(master.matrix, 2);
    const BitMatrix a_inv = inverse(a_conj);
    const BitMatrix b_inv = inverse(b_conj);

    // mu: all odd, plain sum divisible by 2p. The last entry is solved
    // for, then the anchor tuple element formed from the quadruple's base
    // slot must pass the order tests; otherwise redraw the whole tuple.
    std::vector<Exponent> mu(t), sigma(t);
    BitMatrix a1 = BitMatrix::identity(master.field.n);
    bool ok = false;
    for (unsigned attempt = 0; attempt < kRetryBound && !ok; ++attempt) {
        Exponent sum = 0;
        for (unsigned i = 0; i + 1 < t; ++i) {
            do {
                mu[i] = rng.in_range(1, p);
            } while (mu[i] % 2 == 0);
            sum += mu[i];
        }
        mu[t - 1] = mod_floor(-sum, p2);
        if (mu[t - 1] == 0 || mu[t - 1] % 2 == 0)
            continue;
        a1 = quad.g1 * pow(mask_a, mu[0]);
        ok = exact_order_2p(a1, p);
    }
    if (!ok)
        throw RetryExhaustedError("simulate_ddh_transcript: no valid mu tuple");

    BitMatrix b1 = BitMatrix::identity(master.field.n);
    ok = false;
    for (unsigned attempt = 0; attempt < kRetryBound && !ok; ++attempt) {
        Exponent sum = 0;
        for (unsigned i = 0; i + 1 < t; ++i) {
            do {
                sigma[i] = rng.in_range(1, p);
            } while (sigma[i] % 3 == 0);
            sum += sigma[i];
        }
        sigma[t - 1] = mod_floor(-sum, p3);
        if (sigma[t - 1] == 0 || sigma[t - 1] % 3 == 0)
            continue;
        b1 = quad.g3 * pow(mask_b, sigma[0]);
        ok = exact_order_3p(b1, p);
    }
    if (!ok)
        throw RetryExhaustedError("simulate_ddh_transcript: no valid sigma tuple");

    Msg2 msg2;
    msg2.a_tuple.push_back(a_conj * a1 * a_inv);
    msg2.b_tuple.push_back(b_conj * b1 * b_inv);
    for (unsigned i = 1; i < t; ++i) {
        BitMatrix a_raw = a1, b_raw = b1;
        unsigned attempt = 0;
        for (;; ++attempt) {
            if (attempt >= kRetryBound)
                throw RetryExhaustedError("simulate_ddh_transcript: zeta retry bound");
            const Exponent zeta = rng.in_range(1, p);
            a_raw = pow(quad.g1, zeta) * pow(mask_a, mu[i]);
            if (!exact_order_2p(a_raw, p))
                continue;
            b_raw = pow(quad.g3, zeta) * pow(mask_b, sigma[i]);
            if (!exact_order_3p(b_raw, p))
                continue;
            break;
        }
        msg2.a_tuple.push_back(a_conj * a_raw * a_inv);
        msg2.b_tuple.push_back(b_conj * b_raw * b_inv);
    }

    Transcript out{params,
                   Msg1{std::move(mu), std::move(sigma)},
                   std::move(msg2),
                   Msg3{a_conj * quad.g2 * a_inv},
                   SharedKey{b_conj * quad.g4 * b_inv}};
    return out;
}

bool verify_transcript_orders(const Transcript& transcript, const Exponent& p) {
    for (const BitMatrix& a : transcript.msg2.a_tuple)
        if (!exact_order_2p(a, p))
            return false;
    for (const BitMatrix& b : transcript.msg2.b_tuple)
        if (!exact_order_3p(b, p))
            return false;
    return order_divides(transcript.msg3.share, p) &&
           order_divides(transcript.key.key, p);
}

}  // namespace ssgk
