// Command-line surface: parameter display, in-process and networked
// handshakes, and the analysis harness.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssgk/analysis.hpp"
#include "ssgk/errors.hpp"
#include "ssgk/handshake.hpp"
#include "ssgk/peer.hpp"
#include "ssgk/wire.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitProtocol = 1;
constexpr int kExitUsage = 2;

// Stream split: one user seed feeds the parameter search and the two
// role streams, so `handshake` and a two-process `peer` run with the
// same seed produce identical transcripts byte for byte.
constexpr std::uint64_t kParamsSalt = 0;
constexpr std::uint64_t kBobSalt = 1;
constexpr std::uint64_t kAliceSalt = 2;
constexpr std::uint64_t kAnalysisSalt = 3;

ssgk::PublicParams params_for(unsigned m, unsigned t, std::uint64_t seed) {
    ssgk::Rng rng(ssgk::derive_seed(seed, kParamsSalt));
    return ssgk::make_public_params(m, t, rng);
}

struct PeerOptions {
    std::string listen_addr;
    std::string connect_addr;
    unsigned timeout_ms = 30000;
};

std::pair<std::string, std::uint16_t> split_host_port(const std::string& addr) {
    const auto pos = addr.rfind(':');
    if (pos == std::string::npos)
        throw CLI::ValidationError("address must be host:port");
    const std::string host = addr.substr(0, pos);
    const int port = std::stoi(addr.substr(pos + 1));
    if (port < 1 || port > 65535)
        throw CLI::ValidationError("port out of range");
    return {host, static_cast<std::uint16_t>(port)};
}

int cmd_params(unsigned m, unsigned t, std::uint64_t seed) {
    const ssgk::PublicParams params = params_for(m, t, seed);
    std::cout << "m=" << params.field.m << "\n"
              << "poly=" << params.field.poly.to_string() << "\n"
              << "p=" << params.field.p << "\n"
              << "cofactor=" << params.field.cofactor << "\n"
              << "group_order=" << params.field.group_order() << "\n"
              << "n=" << params.field.n << "\n"
              << "t=" << params.t << "\n";
    return kExitOk;
}

int cmd_handshake(unsigned m, unsigned t, std::uint64_t seed, bool strict, bool as_json) {
    const ssgk::PublicParams params = params_for(m, t, seed);
    ssgk::Rng bob_rng(ssgk::derive_seed(seed, kBobSalt));
    ssgk::Rng alice_rng(ssgk::derive_seed(seed, kAliceSalt));

    auto [msg1, bob] = ssgk::bob_init(params, bob_rng);
    auto [msg2, alice] = ssgk::alice_respond(params, msg1, alice_rng);
    auto [msg3, bob_key] = ssgk::bob_complete(msg2, bob);
    const ssgk::SharedKey alice_key = ssgk::alice_finalize(msg3, alice);

    const std::string fp_alice = ssgk::key_fingerprint(alice_key);
    const std::string fp_bob = ssgk::key_fingerprint(bob_key);
    const bool match = alice_key.key == bob_key.key;

    bool strict_ok = true;
    if (strict) {
        ssgk::Transcript tr{params, msg1, msg2, msg3, bob_key};
        strict_ok = ssgk::strict_order_check(msg2, params) &&
                    ssgk::verify_transcript_orders(tr, params.field.p);
    }

    if (as_json) {
        json out{{"alice_fingerprint", fp_alice},
                 {"bob_fingerprint", fp_bob},
                 {"match", match},
                 {"degenerate_key", bob_key.key.is_identity()}};
        if (strict)
            out["strict_orders_ok"] = strict_ok;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "alice_fingerprint=" << fp_alice << "\n"
                  << "bob_fingerprint=" << fp_bob << "\n";
        if (bob_key.key.is_identity())
            std::cout << "note: degenerate identity key\n";
        if (strict)
            std::cout << "strict_orders_ok=" << (strict_ok ? "true" : "false") << "\n";
        std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
    }
    return match && strict_ok ? kExitOk : kExitProtocol;
}

int cmd_peer(const PeerOptions& opt, unsigned m, unsigned t, std::uint64_t seed) {
    const ssgk::PublicParams params = params_for(m, t, seed);
    const auto timeout = std::chrono::milliseconds(opt.timeout_ms);
    if (!opt.listen_addr.empty()) {
        auto [host, port] = split_host_port(opt.listen_addr);
        ssgk::TcpListener listener(host, port);
        std::cout << "listening on port " << listener.local_port() << "\n";
        ssgk::TcpStream stream = listener.accept(timeout);
        stream.set_timeout(timeout);
        ssgk::Rng rng(ssgk::derive_seed(seed, kBobSalt));
        const ssgk::SharedKey key =
            ssgk::peer_handshake(ssgk::Role::responder, stream, params, rng);
        std::cout << "role=responder\nfingerprint=" << ssgk::key_fingerprint(key) << "\n";
    } else {
        auto [host, port] = split_host_port(opt.connect_addr);
        ssgk::TcpStream stream = ssgk::tcp_connect(host, port, timeout);
        ssgk::Rng rng(ssgk::derive_seed(seed, kAliceSalt));
        const ssgk::SharedKey key =
            ssgk::peer_handshake(ssgk::Role::initiator, stream, params, rng);
        std::cout << "role=initiator\nfingerprint=" << ssgk::key_fingerprint(key) << "\n";
    }
    return kExitOk;
}

json system_to_json(const ssgk::AssembledSystem& sys) {
    json rows = json::array();
    for (const auto& row : sys.rows) {
        json coeffs = json::array();
        for (const auto& c : row.coeffs)
            coeffs.push_back(c.str());
        rows.push_back({{"coeffs", coeffs}, {"rhs", row.rhs.str()}, {"modulus", row.modulus.str()}});
    }
    return {{"equations", sys.equation_count},
            {"unknowns", sys.unknown_count},
            {"rank", sys.rank},
            {"rows", rows}};
}

int cmd_analyze(const std::string& attack, unsigned m, unsigned t, std::uint64_t seed,
                unsigned census_n, bool as_json) {
    if (attack == "census") {
        const auto orders = ssgk::gl_order_census(census_n);
        if (as_json) {
            std::cout << json{{"n", census_n}, {"orders", orders}}.dump(2) << "\n";
        } else {
            std::cout << "n=" << census_n << "\norders=";
            bool first = true;
            for (auto o : orders) {
                std::cout << (first ? "" : ",") << o;
                first = false;
            }
            std::cout << "\n";
        }
        return kExitOk;
    }

    const ssgk::PublicParams params = params_for(m, t, seed);
    ssgk::Rng bob_rng(ssgk::derive_seed(seed, kBobSalt));
    ssgk::Rng alice_rng(ssgk::derive_seed(seed, kAliceSalt));
    const ssgk::LocalRun run = ssgk::run_handshake(params, bob_rng, alice_rng);
    const ssgk::Exponent& p = params.field.p;

    if (attack == "dlog") {
        const ssgk::AttackReport rep =
            ssgk::mount_dlog_attack(run.transcript, params, &run.alice, &run.bob);
        if (as_json) {
            json c = json::array(), d = json::array(), ratios = json::array();
            for (const auto& v : rep.c)
                c.push_back(v.str());
            for (const auto& v : rep.d)
                d.push_back(v.str());
            for (const auto& v : rep.candidate_ratios)
                ratios.push_back(v.str());
            std::cout << json{{"c", c},
                              {"d", d},
                              {"system_a", system_to_json(rep.system_a)},
                              {"system_b", system_to_json(rep.system_b)},
                              {"system_theta", system_to_json(rep.system_theta)},
                              {"candidate_ratios", ratios},
                              {"distinct_implied_keys", rep.implied_keys.size()},
                              {"theta_candidates", rep.theta_candidates.size()},
                              {"secrets_consistent", rep.secrets_consistent}}
                             .dump(2)
                      << "\n";
        } else {
            std::cout << "dlogs_c=";
            for (std::size_t i = 0; i < rep.c.size(); ++i)
                std::cout << (i ? "," : "") << rep.c[i];
            std::cout << "\ndlogs_d=";
            for (std::size_t i = 0; i < rep.d.size(); ++i)
                std::cout << (i ? "," : "") << rep.d[i];
            std::cout << "\nsystem_a=" << rep.system_a.equation_count << " equations, "
                      << rep.system_a.unknown_count << " unknowns, rank "
                      << rep.system_a.rank;
            std::cout << "\nsystem_b=" << rep.system_b.equation_count << " equations, "
                      << rep.system_b.unknown_count << " unknowns, rank "
                      << rep.system_b.rank;
            std::cout << "\nsystem_theta=" << rep.system_theta.equation_count
                      << " equations, " << rep.system_theta.unknown_count
                      << " unknowns, rank " << rep.system_theta.rank;
            std::cout << "\ncandidate_ratios=" << rep.candidate_ratios.size()
                      << "\ndistinct_implied_keys=" << rep.implied_keys.size()
                      << "\ntheta_candidates=" << rep.theta_candidates.size()
                      << "\nsecrets_consistent="
                      << (rep.secrets_consistent ? "true" : "false") << "\n";
        }
        const bool undetermined = rep.candidate_ratios.size() >= 2 &&
                                  rep.implied_keys.size() >= 2 && rep.secrets_consistent;
        return undetermined ? kExitOk : kExitProtocol;
    }

    if (attack == "theorem2") {
        // Scan over the pre-conjugation tuple heads, both directions.
        const ssgk::BitMatrix key_base = ssgk::pow(run.alice.master.matrix, 6);
        const ssgk::BitMatrix mask_a = ssgk::pow(run.alice.master.matrix, 3);
        const ssgk::BitMatrix mask_b = ssgk::pow(run.alice.master.matrix, 2);
        const ssgk::BitMatrix a_raw =
            ssgk::pow(key_base, ssgk::mod_floor(run.alice.alpha * run.alice.zeta[0], p)) *
            ssgk::pow(mask_a, run.transcript.msg1.mu[0]);
        const ssgk::BitMatrix b_raw =
            ssgk::pow(key_base, ssgk::mod_floor(run.alice.gamma * run.alice.zeta[0], p)) *
            ssgk::pow(mask_b, run.transcript.msg1.sigma[0]);
        const bool ab = ssgk::cross_power_scan(a_raw, b_raw, p);
        const bool ba = ssgk::cross_power_scan(b_raw, a_raw, p);
        if (as_json)
            std::cout << json{{"a_to_b_excluded", ab}, {"b_to_a_excluded", ba}}.dump(2)
                      << "\n";
        else
            std::cout << "a_to_b_excluded=" << (ab ? "true" : "false")
                      << "\nb_to_a_excluded=" << (ba ? "true" : "false") << "\n";
        return ab && ba ? kExitOk : kExitProtocol;
    }

    if (attack == "ddh") {
        ssgk::Rng sim_rng(ssgk::derive_seed(seed, kAnalysisSalt));
        const ssgk::DdhQuadruple proper = ssgk::proper_quadruple(run);
        const ssgk::Transcript sim = ssgk::simulate_ddh_transcript(
            proper, run.alice.master, run.alice.a_conj, run.alice.b_conj, params, sim_rng);
        const bool orders_ok = ssgk::verify_transcript_orders(sim, p);
        const bool key_matches = sim.key.key == run.transcript.key.key;

        const ssgk::DdhQuadruple improper = ssgk::random_quadruple(run, sim_rng);
        const ssgk::Transcript sim_star = ssgk::simulate_ddh_transcript(
            improper, run.alice.master, run.alice.a_conj, run.alice.b_conj, params, sim_rng);
        const bool star_orders_ok = ssgk::verify_transcript_orders(sim_star, p);
        const bool star_differs = !(sim_star.key.key == run.transcript.key.key);

        if (as_json)
            std::cout << json{{"proper_orders_ok", orders_ok},
                              {"proper_key_matches", key_matches},
                              {"random_orders_ok", star_orders_ok},
                              {"random_key_differs", star_differs}}
                             .dump(2)
                      << "\n";
        else
            std::cout << "proper_orders_ok=" << (orders_ok ? "true" : "false")
                      << "\nproper_key_matches=" << (key_matches ? "true" : "false")
                      << "\nrandom_orders_ok=" << (star_orders_ok ? "true" : "false")
                      << "\nrandom_key_differs=" << (star_differs ? "true" : "false")
                      << "\n";
        return orders_ok && key_matches && star_orders_ok && star_differs ? kExitOk
                                                                          : kExitProtocol;
    }

    std::cerr << "unknown attack '" << attack << "'\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Key agreement over hidden-generator matrix subgroups"};
    app.require_subcommand(1);

    unsigned m = 5, t = 4, census_n = 3;
    std::uint64_t seed = 1;
    bool strict = false, as_json = false;
    std::string attack = "dlog";
    PeerOptions peer_opt;

    auto add_common = [&](CLI::App* cmd, bool need_seed) {
        cmd->add_option("--m", m, "polynomial degree (table entry)")->required();
        cmd->add_option("--t", t, "tuple length (>= 4)")->required();
        if (need_seed)
            cmd->add_option("--seed", seed, "deterministic seed");
    };

    CLI::App* params_cmd = app.add_subcommand("params", "print public parameters");
    add_common(params_cmd, true);

    CLI::App* hs_cmd = app.add_subcommand("handshake", "run an in-process handshake");
    add_common(hs_cmd, false);
    hs_cmd->add_option("--seed", seed, "deterministic seed")->required();
    hs_cmd->add_flag("--strict", strict, "verify tuple element orders");
    hs_cmd->add_flag("--json", as_json, "JSON output");

    CLI::App* peer_cmd = app.add_subcommand("peer", "run a networked handshake");
    add_common(peer_cmd, false);
    peer_cmd->add_option("--seed", seed, "deterministic seed")->required();
    auto* listen_opt = peer_cmd->add_option("--listen", peer_opt.listen_addr,
                                            "listen address host:port (plays responder)");
    auto* connect_opt = peer_cmd->add_option("--connect", peer_opt.connect_addr,
                                             "connect address host:port (plays initiator)");
    listen_opt->excludes(connect_opt);
    peer_cmd->add_option("--timeout", peer_opt.timeout_ms, "per-message timeout (ms)");

    CLI::App* an_cmd = app.add_subcommand("analyze", "run the analysis harness");
    an_cmd->add_option("--attack", attack, "dlog|theorem2|census|ddh")->required();
    an_cmd->add_option("--m", m, "polynomial degree");
    an_cmd->add_option("--t", t, "tuple length");
    an_cmd->add_option("--seed", seed, "deterministic seed");
    an_cmd->add_option("--n", census_n, "census dimension (census only)");
    an_cmd->add_flag("--json", as_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (params_cmd->parsed())
            return cmd_params(m, t, seed);
        if (hs_cmd->parsed())
            return cmd_handshake(m, t, seed, strict, as_json);
        if (peer_cmd->parsed()) {
            if (peer_opt.listen_addr.empty() && peer_opt.connect_addr.empty()) {
                std::cerr << "peer: one of --listen or --connect is required\n";
                return kExitUsage;
            }
            return cmd_peer(peer_opt, m, t, seed);
        }
        if (an_cmd->parsed())
            return cmd_analyze(attack, m, t, seed, census_n, as_json);
    } catch (const ssgk::UnsupportedDegreeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ssgk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProtocol;
    }
    return kExitUsage;
}
