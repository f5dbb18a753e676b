#include "ssgk/handshake.hpp"

#include <stdexcept>

#include "ssgk/errors.hpp"

namespace ssgk {

namespace {

constexpr unsigned kRetryBound = 1000;

}  // namespace

PublicParams make_public_params(unsigned m, unsigned t, Rng& rng) {
    return public_params_with_field(make_field_params(m, rng), t);
}

PublicParams public_params_with_field(FieldParams field, unsigned t) {
    if (t < 4)
        throw std::invalid_argument("public params: t must be >= 4");
    if (field.p <= t)
        throw std::invalid_argument("public params: need p > t");
    return PublicParams{std::move(field), t};
}

Exponent mod_inverse(const Exponent& a, const Exponent& n) {
    if (n < 2)
        throw std::invalid_argument("mod_inverse: modulus must be >= 2");
    Exponent r0 = n, r1 = mod_floor(a, n);
    Exponent s0 = 0, s1 = 1;
    while (r1 != 0) {
        Exponent q = r0 / r1;
        Exponent r2 = r0 - q * r1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        Exponent s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0 != 1)
        throw NotCoprimeError();
    return mod_floor(s0, n);
}

std::pair<Msg1, BobSecret> gen_exponent_tuples(const PublicParams& params, Rng& rng) {
    const Exponent& p = params.field.p;
    const unsigned t = params.t;
    const Exponent p2 = 2 * p, p3 = 3 * p, phi = 6 * p;

    for (unsigned attempt = 0; attempt < kRetryBound; ++attempt) {
        std::vector<Exponent> mu(t), sigma(t), theta(t);
        for (unsigned i = 0; i + 1 < t; ++i) {
            do {
                sigma[i] = rng.in_range(1, p);
            } while (sigma[i] % 3 == 0);
            do {
                mu[i] = rng.in_range(1, p);
            } while (mu[i] % 2 == 0);
            theta[i] = rng.in_range(1, p);
        }
        do {
            theta[t - 1] = rng.in_range(1, p);
        } while (gcd(theta[t - 1], phi) != 1);

        Exponent sum_sigma = 0, sum_mu = 0;
        for (unsigned i = 0; i + 1 < t; ++i) {
            sum_sigma += sigma[i] * theta[i];
            sum_mu += mu[i] * theta[i];
        }
        // Both balancing targets must be units mod 6p for the final
        // entries to come out as units as well.
        if (gcd(mod_floor(p3 - sum_sigma, phi), phi) != 1)
            continue;
        if (gcd(mod_floor(p2 - sum_mu, phi), phi) != 1)
            continue;

        const Exponent inv3p = mod_inverse(theta[t - 1], p3);
        const Exponent inv2p = mod_inverse(theta[t - 1], p2);
        sigma[t - 1] = mod_floor(inv3p * (p3 - sum_sigma), p3);
        mu[t - 1] = mod_floor(inv2p * (p2 - sum_mu), p2);
        if (sigma[t - 1] == 0 || mu[t - 1] == 0)
            continue;
        // Guaranteed by the gcd screens above; re-verified rather than assumed.
        if (mu[t - 1] % 2 == 0 || sigma[t - 1] % 3 == 0)
            continue;

        return {Msg1{std::move(mu), std::move(sigma)}, BobSecret{std::move(theta)}};
    }
    throw RetryExhaustedError("gen_exponent_tuples: retry bound exceeded");
}

std::pair<Msg2, std::vector<Exponent>> gen_blinded_tuples(
    const MasterMatrix& master, const Msg1& msg1,
    const Exponent& alpha, const Exponent& gamma,
    const BitMatrix& a_conj, const BitMatrix& b_conj, Rng& rng) {
    const Exponent& p = master.field.p;
    const unsigned t = static_cast<unsigned>(msg1.mu.size());

    const BitMatrix key_base = pow(master.matrix, 6);  // order p
    const BitMatrix mask_a = pow(master.matrix, 3);    // order 2p
    const BitMatrix mask_b = pow(master.matrix, 2);    // order 3p
    const BitMatrix a_conj_inv = inverse(a_conj);
    const BitMatrix b_conj_inv = inverse(b_conj);

    std::vector<Exponent> zeta(t);
    Msg2 msg2;
    msg2.a_tuple.reserve(t);
    msg2.b_tuple.reserve(t);
    for (unsigned i = 0; i < t; ++i) {
        unsigned attempt = 0;
        for (;; ++attempt) {
            if (attempt >= kRetryBound)
                throw RetryExhaustedError("gen_blinded_tuples: zeta retry bound exceeded");
            zeta[i] = rng.in_range(1, p);
            if ((2 * alpha * zeta[i] + msg1.mu[i]) % p == 0)
                continue;
            if ((3 * gamma * zeta[i] + msg1.sigma[i]) % p == 0)
                continue;
            break;
        }
        // Exponents are reduced by the base's subgroup order before the
        // square-and-multiply; the values are unchanged.
        const BitMatrix a_raw =
            pow(key_base, mod_floor(alpha * zeta[i], p)) * pow(mask_a, msg1.mu[i]);
        const BitMatrix b_raw =
            pow(key_base, mod_floor(gamma * zeta[i], p)) * pow(mask_b, msg1.sigma[i]);
        msg2.a_tuple.push_back(a_conj * a_raw * a_conj_inv);
        msg2.b_tuple.push_back(b_conj * b_raw * b_conj_inv);
    }
    return {std::move(msg2), std::move(zeta)};
}

std::pair<Msg1, BobSecret> bob_init(const PublicParams& params, Rng& rng) {
    return gen_exponent_tuples(params, rng);
}

std::pair<Msg2, AliceSecret> alice_respond(const PublicParams& params,
                                           const Msg1& msg1, Rng& rng) {
    validate_msg1(msg1, params.t);
    MasterMatrix master = generate_master_matrix(params.field, rng);
    const Exponent& p = params.field.p;
    const Exponent alpha = rng.in_range(1, p - 1);
    const Exponent gamma = rng.in_range(1, p - 1);
    auto [a_conj, b_conj] = random_noncommuting_pair(params.field.n, rng);
    auto [msg2, zeta] =
        gen_blinded_tuples(master, msg1, alpha, gamma, a_conj, b_conj, rng);
    AliceSecret secret{std::move(master), std::move(a_conj), std::move(b_conj),
                       alpha, gamma, std::move(zeta)};
    return {std::move(msg2), std::move(secret)};
}

std::pair<Msg3, SharedKey> bob_complete(const Msg2& msg2, const BobSecret& secret) {
    const unsigned t = static_cast<unsigned>(secret.theta.size());
    validate_msg2(msg2, t);
    const std::size_t n = msg2.a_tuple.front().dim();
    // Left-to-right, ascending index; the factors commute, so the order
    // only matters for regression determinism.
    BitMatrix key = BitMatrix::identity(n);
    BitMatrix share = BitMatrix::identity(n);
    for (unsigned i = 0; i < t; ++i) {
        key = key * pow(msg2.b_tuple[i], secret.theta[i]);
        share = share * pow(msg2.a_tuple[i], secret.theta[i]);
    }
    return {Msg3{std::move(share)}, SharedKey{std::move(key)}};
}

SharedKey alice_finalize(const Msg3& msg3, const AliceSecret& secret) {
    validate_msg3(msg3, secret.master.field.n);
    const Exponent& p = secret.master.field.p;
    const Exponent e = mod_floor(secret.gamma * mod_inverse(secret.alpha, p), p);
    const BitMatrix y_pow = pow(msg3.share, e);
    return SharedKey{secret.b_conj * inverse(secret.a_conj) * y_pow *
                     secret.a_conj * inverse(secret.b_conj)};
}

void validate_msg1(const Msg1& msg1, unsigned t) {
    if (msg1.mu.size() != t || msg1.sigma.size() != t)
        throw MalformedMessageError("msg1: tuple length != t");
    for (unsigned i = 0; i < t; ++i)
        if (msg1.mu[i] <= 0 || msg1.sigma[i] <= 0)
            throw MalformedMessageError("msg1: entries must be positive");
    for (unsigned i = 0; i + 1 < t; ++i) {
        if (msg1.mu[i] % 2 == 0)
            throw MalformedMessageError("msg1: mu entry divisible by 2");
        if (msg1.sigma[i] % 3 == 0)
            throw MalformedMessageError("msg1: sigma entry divisible by 3");
    }
}

void validate_msg2(const Msg2& msg2, unsigned t) {
    if (msg2.a_tuple.size() != t || msg2.b_tuple.size() != t)
        throw MalformedMessageError("msg2: tuple length != t");
    if (t == 0)
        throw MalformedMessageError("msg2: empty tuples");
    const std::size_t n = msg2.a_tuple.front().dim();
    for (const auto* tuple : {&msg2.a_tuple, &msg2.b_tuple}) {
        for (const BitMatrix& m : *tuple) {
            if (m.dim() != n)
                throw MalformedMessageError("msg2: inconsistent matrix dimensions");
            if (!is_nonsingular(m))
                throw MalformedMessageError("msg2: singular matrix");
        }
    }
}

void validate_msg3(const Msg3& msg3, unsigned n) {
    if (msg3.share.dim() != n)
        throw MalformedMessageError("msg3: wrong dimension");
    if (!is_nonsingular(msg3.share))
        throw MalformedMessageError("msg3: singular matrix");
}

bool strict_order_check(const Msg2& msg2, const PublicParams& params) {
    const Exponent& p = params.field.p;
    const FactoredOrder f2p = FactoredOrder::from_factors({{2, 1}, {p, 1}});
    const FactoredOrder f3p = FactoredOrder::from_factors({{3, 1}, {p, 1}});
    try {
        for (const BitMatrix& a : msg2.a_tuple)
            if (order(a, f2p) != f2p.value)
                return false;
        for (const BitMatrix& b : msg2.b_tuple)
            if (order(b, f3p) != f3p.value)
                return false;
    } catch (const NotAnnihilatedError&) {
        return false;
    }
    return true;
}

LocalRun run_handshake(const PublicParams& params, Rng& bob_rng, Rng& alice_rng) {
    auto [msg1, bob] = bob_init(params, bob_rng);
    auto [msg2, alice] = alice_respond(params, msg1, alice_rng);
    auto [msg3, bob_key] = bob_complete(msg2, bob);
    SharedKey alice_key = alice_finalize(msg3, alice);
    if (!(alice_key.key == bob_key.key))
        throw KeyMismatchError();
    Transcript transcript{params, std::move(msg1), std::move(msg2),
                          std::move(msg3), std::move(bob_key)};
    return LocalRun{std::move(transcript), std::move(alice), std::move(bob)};
}

Transcript run_local_handshake(const PublicParams& params, Rng& rng) {
    return run_handshake(params, rng, rng).transcript;
}

}  // namespace ssgk
