#pragma once

#include <utility>
#include <vector>

#include "ssgk/bitmatrix.hpp"
#include "ssgk/exponent.hpp"
#include "ssgk/field_params.hpp"
#include "ssgk/rng.hpp"

namespace ssgk {

// Everything both parties (and the adversary) see before a run:
// the degree parameters and the tuple length t.
struct PublicParams {
    FieldParams field;
    unsigned t = 0;
};

// Validates t >= 4 and p > t, finds a primitive polynomial with rng.
PublicParams make_public_params(unsigned m, unsigned t, Rng& rng);
PublicParams public_params_with_field(FieldParams field, unsigned t);

// Bob -> Alice: the exponent tuples mu, sigma (theta stays with Bob).
struct Msg1 {
    std::vector<Exponent> mu;
    std::vector<Exponent> sigma;
};

struct BobSecret {
    std::vector<Exponent> theta;
};

// Alice -> Bob: the blinded matrix tuples.
struct Msg2 {
    std::vector<BitMatrix> a_tuple;
    std::vector<BitMatrix> b_tuple;
};

struct AliceSecret {
    MasterMatrix master;
    BitMatrix a_conj;  // conjugates the A-side tuple
    BitMatrix b_conj;  // conjugates the B-side tuple
    Exponent alpha;
    Exponent gamma;
    std::vector<Exponent> zeta;
};

// Bob -> Alice: his public share, the theta-weighted product of the A tuple.
struct Msg3 {
    BitMatrix share;
};

struct SharedKey {
    BitMatrix key;
};

// One full run: the adversary's view plus the (secret) agreed key.
struct Transcript {
    PublicParams params;
    Msg1 msg1;
    Msg2 msg2;
    Msg3 msg3;
    SharedKey key;

    // K = I happens with probability ~1/p and is still agreed by both
    // sides; flagged rather than retried so the distribution is preserved.
    bool key_is_identity() const { return key.key.is_identity(); }
};

// b with a*b = 1 mod n, by extended Euclid. Throws NotCoprimeError.
Exponent mod_inverse(const Exponent& a, const Exponent& n);

// Exponent-tuple generation: draws sigma_i, mu_i, theta_i for i < t
// (sigma_i not divisible by 3, mu_i odd), theta_t coprime to 6p, then
// solves for sigma_t, mu_t so that sum(mu_i theta_i) = 0 mod 2p and
// sum(sigma_i theta_i) = 0 mod 3p.
std::pair<Msg1, BobSecret> gen_exponent_tuples(const PublicParams& params, Rng& rng);

// Blinded-tuple generation from the master matrix: with T = M^6, U = M^3,
// V = M^2, picks zeta_i so the combined exponents stay units, then emits
// A_i = R T^(alpha zeta_i) U^(mu_i) R^-1 and B_i = S T^(gamma zeta_i)
// V^(sigma_i) S^-1.
std::pair<Msg2, std::vector<Exponent>> gen_blinded_tuples(
    const MasterMatrix& master, const Msg1& msg1,
    const Exponent& alpha, const Exponent& gamma,
    const BitMatrix& a_conj, const BitMatrix& b_conj, Rng& rng);

std::pair<Msg1, BobSecret> bob_init(const PublicParams& params, Rng& rng);
std::pair<Msg2, AliceSecret> alice_respond(const PublicParams& params,
                                           const Msg1& msg1, Rng& rng);
std::pair<Msg3, SharedKey> bob_complete(const Msg2& msg2, const BobSecret& secret);
SharedKey alice_finalize(const Msg3& msg3, const AliceSecret& secret);

// Structural message validation (lengths, parity/residue of the first t-1
// entries, matrix dimensions and nonsingularity). Throws MalformedMessageError.
void validate_msg1(const Msg1& msg1, unsigned t);
void validate_msg2(const Msg2& msg2, unsigned t);
void validate_msg3(const Msg3& msg3, unsigned n);

// Optional strict check: every A_i has exact order 2p and every B_i exact
// order 3p. Costs 2t order computations, so it is not part of the handshake.
bool strict_order_check(const Msg2& msg2, const PublicParams& params);

struct LocalRun {
    Transcript transcript;
    AliceSecret alice;
    BobSecret bob;
};

// Drives the four steps in process and asserts key equality
// (KeyMismatchError would mean a protocol bug). Separate role streams keep
// peer-mode runs byte-for-byte reproducible.
LocalRun run_handshake(const PublicParams& params, Rng& bob_rng, Rng& alice_rng);
Transcript run_local_handshake(const PublicParams& params, Rng& rng);

}  // namespace ssgk
