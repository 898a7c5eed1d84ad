#include "qkdlab/protocols/protocol.hpp"

#include <cmath>

namespace qkdlab {

namespace {

const std::string kRotateNotice = "rotate";
const std::string kNoOpNotice = "no-op";

std::string carrier_label(std::size_t round) { return "g." + std::to_string(round); }

void expect_family(const ProtocolConfig& cfg, std::initializer_list<Family> allowed, const char* what) {
    for (auto f : allowed) {
        if (cfg.family == f) {
            return;
        }
    }
    throw ConfigError("protocol", std::string(what) + " cannot run a " + to_string(cfg.family) + " session");
}

void apply_key_gates(Session& s, const ProtocolConfig& cfg, std::size_t round) {
    const auto labels = key_labels(cfg);
    const auto holders = key_holders(cfg);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (auto g = round_key_gate(cfg, holders[i].second, round)) {
            s.apply(holders[i].second, *g, labels[i]);
        }
    }
}

// Shared body of every two-party round. The check variants and the
// non-orthogonal carrier differ only in a few steps.
RoundOutcome pair_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    s.begin_round(plan.round);
    apply_key_gates(s, cfg, plan.round);

    const bool mode_ii = plan.mode == RoundMode::CheckII;
    const bool bare = cfg.family == Family::ZlgCheckB && mode_ii;
    const bool rotate = cfg.family == Family::ZlgCheckA && mode_ii;
    const auto rot = rotation_gate(std::numbers::pi / 4);

    const auto g = carrier_label(plan.round);
    if (rotate) {
        s.apply(PartyId::Alice, rot, "A");
    }
    s.prepare(PartyId::Alice, carrier_state(cfg, g, plan.symbol));
    if (!bare) {
        s.controlled(PartyId::Alice, encode_spec(cfg), "A", g);
    }
    const auto got = s.send({g}, PartyId::Alice, PartyId::Bob).front();

    if (rotate) {
        s.announce(PartyId::Alice, plan.round, OperationNotice{kRotateNotice});
        s.apply(PartyId::Bob, rot, "B");
    }
    if (bare) {
        s.announce(PartyId::Alice, plan.round, OperationNotice{kNoOpNotice});
    } else {
        s.controlled(PartyId::Bob, decode_spec(cfg), "B", got);
    }
    if (cfg.family == Family::ZlgNonorth) {
        s.apply(PartyId::Bob, carrier_basis_gate(cfg.alpha, cfg.beta), got);
    }
    RoundOutcome out;
    out.round = plan.round;
    out.kind = plan.kind;
    out.mode = plan.mode;
    out.alice_symbol = plan.symbol;
    out.bob_symbol = s.measure(PartyId::Bob, got);
    out.recovered = out.bob_symbol;
    return out;
}

RoundOutcome bk_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    s.begin_round(plan.round);
    apply_key_gates(s, cfg, plan.round);
    const bool odd = plan.round % 2 == 1;
    const auto x1 = "x1." + std::to_string(plan.round);
    const auto x2 = "x2." + std::to_string(plan.round);
    const auto enc = encode_spec(cfg);
    const auto dec = decode_spec(cfg);

    if (odd) {
        s.prepare(PartyId::Alice, tensor(single_basis(x1, 2, plan.symbol), single_basis(x2, 2, plan.symbol)));
        s.controlled(PartyId::Alice, enc, "a", x1);
        s.controlled(PartyId::Alice, enc, "a", x2);
    } else {
        s.prepare(PartyId::Alice, bk_codeword(plan.symbol, x1, x2));
        s.controlled(PartyId::Alice, enc, "a", x1);
    }
    const auto got = s.send({{x1, PartyId::Alice, PartyId::Bob}, {x2, PartyId::Alice, PartyId::Charlie}});
    s.controlled(PartyId::Bob, dec, "b", got[0]);
    s.controlled(PartyId::Charlie, dec, "c", got[1]);

    RoundOutcome out;
    out.round = plan.round;
    out.kind = plan.kind;
    out.mode = plan.mode;
    out.alice_symbol = plan.symbol;
    out.bob_symbol = s.measure(PartyId::Bob, got[0]);
    out.charlie_symbol = s.measure(PartyId::Charlie, got[1]);
    if (odd) {
        out.recovered = out.bob_symbol;
        out.charlie_recovered = out.charlie_symbol;
    } else {
        out.recovered = out.bob_symbol ^ *out.charlie_symbol;
    }
    return out;
}

} // namespace

std::string to_string(RoundKind kind) { return kind == RoundKind::Message ? "message" : "check"; }

std::string to_string(RoundMode mode) {
    switch (mode) {
    case RoundMode::Message: return "message";
    case RoundMode::CheckI: return "check-i";
    case RoundMode::CheckII: return "check-ii";
    }
    return "?";
}

StateVector bk_codeword(std::size_t q, const std::string& first, const std::string& second) {
    SubsystemLayout layout({2, 2}, {first, second});
    const double h = std::sqrt(0.5);
    if (q == 0) {
        return {layout, {h, 0.0, 0.0, h}};
    }
    if (q == 1) {
        return {layout, {0.0, h, h, 0.0}};
    }
    throw DimensionError("bk_codeword: q must be 0 or 1");
}

StateVector initial_key(const ProtocolConfig& cfg) {
    if (is_bk_family(cfg.family)) {
        return ghz_state(cfg.key_dim, "a", "b", "c");
    }
    return bell_state(cfg.key_dim, "A", "B");
}

std::vector<std::pair<std::string, PartyId>> key_holders(const ProtocolConfig& cfg) {
    if (is_bk_family(cfg.family)) {
        return {{"a", PartyId::Alice}, {"b", PartyId::Bob}, {"c", PartyId::Charlie}};
    }
    return {{"A", PartyId::Alice}, {"B", PartyId::Bob}};
}

std::vector<std::string> key_labels(const ProtocolConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& [label, party] : key_holders(cfg)) {
        out.push_back(label);
    }
    return out;
}

std::optional<Gate> round_key_gate(const ProtocolConfig& cfg, PartyId party, std::size_t round) {
    const bool odd = round % 2 == 1;
    const auto d = cfg.key_dim;
    switch (cfg.family) {
    case Family::Zlg:
    case Family::ZlgNonorth:
    case Family::ZlgCheckA:
    case Family::ZlgCheckB:
        return rotation_gate(cfg.theta);
    case Family::Kbb:
        return hadamard_gate(d, party != PartyId::Alice);
    case Family::ZlgHd:
    case Family::KbbHd:
        // H squared is not the identity for D > 2, so the roles swap every round.
        return hadamard_gate(d, (party == PartyId::Alice) != odd);
    case Family::Bk:
        if (round < 2) {
            return std::nullopt;
        }
        return hadamard_gate(d);
    case Family::BkHd:
        if (round < 2) {
            return std::nullopt;
        }
        return hadamard_gate(d, odd);
    }
    return std::nullopt;
}

StateVector advance_key(const ProtocolConfig& cfg, const StateVector& key, std::size_t round) {
    StateVector out = key;
    for (const auto& [label, party] : key_holders(cfg)) {
        if (auto g = round_key_gate(cfg, party, round)) {
            out = apply_single(out, *g, label);
        }
    }
    return out;
}

ControlledGateSpec encode_spec(const ProtocolConfig& cfg) {
    switch (cfg.family) {
    case Family::ZlgHd:
    case Family::BkHd: return ControlledGateSpec::power_of(pauli_x());
    case Family::KbbHd: return ControlledGateSpec::power_of(shift_gate(cfg.carrier_dim, 1));
    default: return ControlledGateSpec::right_shift();
    }
}

ControlledGateSpec decode_spec(const ProtocolConfig& cfg) {
    switch (cfg.family) {
    case Family::ZlgHd:
    case Family::BkHd: return ControlledGateSpec::power_of(pauli_x());
    case Family::KbbHd: return ControlledGateSpec::power_of(shift_gate(cfg.carrier_dim, -1));
    case Family::Kbb: return ControlledGateSpec::left_shift();
    default: return ControlledGateSpec::right_shift();
    }
}

StateVector carrier_state(const ProtocolConfig& cfg, const std::string& label, std::size_t q) {
    if (q >= alphabet_size(cfg)) {
        throw DimensionError("symbol " + std::to_string(q) + " out of range for " + to_string(cfg.family));
    }
    if (cfg.family == Family::ZlgNonorth) {
        if (q == 0) {
            return single(label, {cfg.alpha, cfg.beta});
        }
        return single(label, {cfg.beta, -cfg.alpha});
    }
    return single_basis(label, cfg.carrier_dim, q);
}

RoundOutcome zlg_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::Zlg}, "zlg_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome zlg_nonorth_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::ZlgNonorth}, "zlg_nonorth_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome zlg_check_a_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::ZlgCheckA}, "zlg_check_a_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome zlg_check_b_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::ZlgCheckB}, "zlg_check_b_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome zlg_hd_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::ZlgHd}, "zlg_hd_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome kbb_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::Kbb}, "kbb_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome kbb_hd_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::KbbHd}, "kbb_hd_round");
    return pair_round(s, cfg, plan);
}

RoundOutcome bk_round_odd(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::Bk}, "bk_round_odd");
    if (plan.round % 2 != 1) {
        throw ConfigError("round", "bk_round_odd needs an odd round index");
    }
    return bk_round(s, cfg, plan);
}

RoundOutcome bk_round_even(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::Bk}, "bk_round_even");
    if (plan.round % 2 != 0) {
        throw ConfigError("round", "bk_round_even needs an even round index");
    }
    return bk_round(s, cfg, plan);
}

RoundOutcome bk_hd_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    expect_family(cfg, {Family::BkHd}, "bk_hd_round");
    return bk_round(s, cfg, plan);
}

RoundOutcome play_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan) {
    if (is_bk_family(cfg.family)) {
        return bk_round(s, cfg, plan);
    }
    return pair_round(s, cfg, plan);
}

std::optional<std::size_t> announce_checks(Session& s, std::vector<RoundOutcome>& outcomes) {
    std::optional<std::size_t> first;
    for (auto& o : outcomes) {
        if (o.kind != RoundKind::Check) {
            continue;
        }
        s.announce(PartyId::Alice, o.round, SymbolValue{o.alice_symbol});
        s.announce(PartyId::Bob, o.round, SymbolValue{o.recovered});
        if (o.charlie_recovered) {
            s.announce(PartyId::Charlie, o.round, SymbolValue{*o.charlie_recovered});
        }
        o.detected = o.error();
        if (o.detected && !first) {
            first = o.round;
        }
    }
    return first;
}

ProtocolSession::ProtocolSession(ProtocolConfig cfg, Rng nature, Interceptor* interceptor)
    : cfg_((cfg.validate(), cfg)), session_(initial_key(cfg_), key_holders(cfg_), nature, interceptor) {}

RoundOutcome ProtocolSession::play(const RoundPlan& plan) { return play_round(session_, cfg_, plan); }

} // namespace qkdlab
