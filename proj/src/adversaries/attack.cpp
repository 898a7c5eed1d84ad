#include "qkdlab/adversaries/attack.hpp"

#include <algorithm>

namespace qkdlab {

namespace {

constexpr double kImpossible = 1e-9;

std::size_t argmax(const std::vector<double>& p) {
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

class Passive final : public Attack {
  public:
    using Attack::Attack;
    std::string name() const override { return "passive"; }
    void on_transit(TransitContext&) override {}

  protected:
    bool may_claim_success() const override { return false; }
};

// Copies the carrier's z value onto a fresh ancilla and reads it out.
class CnotAncilla final : public Attack {
  public:
    using Attack::Attack;
    std::string name() const override { return "cnot-ancilla"; }

    void on_transit(TransitContext& ctx) override {
        auto& s = ctx.session();
        const auto& g = ctx.transfers().front().label;
        const auto anc = s.fresh_label("eve");
        s.prepare(PartyId::Eve, single_basis(anc, 2, 0));
        s.controlled(PartyId::Eve, ControlledGateSpec::right_shift(), g, anc);
        state_.raw[ctx.round()] = s.measure(PartyId::Eve, anc);
    }
};

// Shared machinery of the two relay attacks: hypothesis models and lazy correction.
class Relay : public Attack {
  public:
    explicit Relay(ProtocolConfig cfg) : Attack(std::move(cfg)) {
        analog_ = cfg_;
        analog_.key_dim = cfg_.carrier_dim;
    }

  protected:
    std::size_t modulus() const { return is_bk_family(cfg_.family) ? 2 : cfg_.carrier_dim; }

    /// Eve's counterpart of `party`'s key operator on a carrier-sized particle.
    std::optional<Gate> sync_gate(PartyId party, std::size_t round) const {
        if (auto g = round_key_gate(analog_, party, round)) {
            return g->conjugate();
        }
        return std::nullopt;
    }

    virtual StateVector model_after_capture(std::size_t j, std::size_t q2) const = 0;
    virtual StateVector evolve_model(const StateVector& model, std::size_t round) const = 0;
    virtual std::vector<double> predict(const StateVector& model, std::size_t round) const = 0;

    void build_hypotheses() {
        const auto c = modulus();
        for (std::size_t j = 0; j < c; ++j) {
            for (std::size_t q2 = 0; q2 < c; ++q2) {
                state_.hypotheses.push_back({"j=" + std::to_string(j) + ",q2=" + std::to_string(q2), j, q2, {}});
                models_.push_back(model_after_capture(j, q2));
            }
        }
    }

    void advance_hypotheses(std::size_t round) {
        for (std::size_t h = 0; h < models_.size(); ++h) {
            models_[h] = evolve_model(models_[h], round);
            state_.hypotheses[h].offsets[round] = predict(models_[h], round);
            if (cfg_.family == Family::Zlg) {
                if (auto label = zlg_case_label(state_.hypotheses[h])) {
                    state_.hypotheses[h].name = *label;
                }
            }
        }
    }

    std::vector<std::optional<std::size_t>> infer(const PublicBoard& board, std::size_t rounds) override {
        state_ = resolve_hypotheses(std::move(state_), board, modulus());
        std::vector<std::optional<std::size_t>> out(rounds);
        if (!state_.resolved) {
            return out;
        }
        const auto& h = state_.hypotheses.front();
        const auto c = modulus();
        for (const auto& [round, raw] : state_.raw) {
            auto it = h.offsets.find(round);
            if (it != h.offsets.end() && round <= rounds) {
                out[round - 1] = (raw + c - argmax(it->second)) % c;
            }
        }
        return out;
    }

    bool counts_for_success(std::size_t round) const override { return round >= 3; }
    bool may_claim_success() const override { return state_.resolved; }

    ProtocolConfig analog_;
    std::vector<StateVector> models_;
};

// Two-party relay: after the capture round Eve shares one pair with Alice
// (the captured carrier) and one with Bob (her half of a fresh Bell pair).
class PairRelay final : public Relay {
  public:
    using Relay::Relay;
    std::string name() const override { return "f-attack"; }

    void on_transit(TransitContext& ctx) override {
        auto& s = ctx.session();
        const auto round = ctx.round();
        const auto g = ctx.transfers().front().label;
        const auto c = cfg_.carrier_dim;
        if (round == 1) {
            state_.raw[round] = s.measure(PartyId::Eve, g, true);
            const std::string a[] = {"A"};
            state_.key_rank_after_capture = partial_trace_rank(s.state(), a);
            return;
        }
        if (round == 2) {
            ea_ = g;
            eb_ = s.fresh_label("eve.b");
            const auto out = s.fresh_label("eve.out");
            s.prepare(PartyId::Eve, bell_state(c, eb_, out));
            ctx.substitute(g, out);
            state_.held = {ea_, eb_};
            build_hypotheses();
            return;
        }
        if (auto ga = sync_gate(PartyId::Alice, round)) {
            s.apply(PartyId::Eve, *ga, ea_);
        }
        if (auto gb = sync_gate(PartyId::Bob, round)) {
            s.apply(PartyId::Eve, *gb, eb_);
        }
        s.controlled(PartyId::Eve, ControlledGateSpec::left_shift(), ea_, g);
        const auto r = s.measure(PartyId::Eve, g);
        state_.raw[round] = r;
        const auto fresh = s.fresh_label("eve.relay");
        s.prepare(PartyId::Eve, single_basis(fresh, c, r));
        s.controlled(PartyId::Eve, ControlledGateSpec::right_shift(), eb_, fresh);
        ctx.substitute(g, fresh);
        advance_hypotheses(round);
    }

  protected:
    StateVector model_after_capture(std::size_t j, std::size_t q2) const override {
        auto model = single_basis("A", cfg_.key_dim, j);
        if (auto g = round_key_gate(cfg_, PartyId::Alice, 2)) {
            model = apply_single(model, *g, "A");
        }
        model = tensor(model, single_basis("M", cfg_.carrier_dim, q2));
        return apply_controlled(model, encode_spec(cfg_), "A", "M");
    }

    StateVector evolve_model(const StateVector& model, std::size_t round) const override {
        auto out = model;
        if (auto g = round_key_gate(cfg_, PartyId::Alice, round)) {
            out = apply_single(out, *g, "A");
        }
        if (auto g = sync_gate(PartyId::Alice, round)) {
            out = apply_single(out, *g, "M");
        }
        return out;
    }

    std::vector<double> predict(const StateVector& model, std::size_t) const override {
        auto s = tensor(model, single_basis("X", cfg_.carrier_dim, 0));
        s = apply_controlled(s, encode_spec(cfg_), "A", "X");
        s = apply_controlled(s, ControlledGateSpec::left_shift(), "M", "X");
        const std::string x[] = {"X"};
        return probabilities(s, x);
    }

  private:
    std::string ea_;
    std::string eb_;
};

// Three-party relay: Eve keeps both carriers of the capture round and hands
// Bob and Charlie one half each of two fresh Bell pairs.
class GhzRelay final : public Relay {
  public:
    using Relay::Relay;
    std::string name() const override { return "f-attack"; }

    void on_transit(TransitContext& ctx) override {
        auto& s = ctx.session();
        const auto round = ctx.round();
        const auto x1 = ctx.transfers().at(0).label;
        const auto x2 = ctx.transfers().at(1).label;
        if (round == 1) {
            state_.raw[round] = s.measure(PartyId::Eve, x1, true);
            s.measure(PartyId::Eve, x2, true);
            const std::string a[] = {"a"};
            state_.key_rank_after_capture = partial_trace_rank(s.state(), a);
            return;
        }
        if (round == 2) {
            e1_ = x1;
            e2_ = x2;
            e3_ = s.fresh_label("eve.b");
            e5_ = s.fresh_label("eve.c");
            const auto e4 = s.fresh_label("eve.out");
            const auto e6 = s.fresh_label("eve.out");
            s.prepare(PartyId::Eve, bell_state(2, e3_, e4));
            s.prepare(PartyId::Eve, bell_state(2, e5_, e6));
            ctx.substitute(x1, e4);
            ctx.substitute(x2, e6);
            state_.held = {e1_, e2_, e3_, e5_};
            build_hypotheses();
            return;
        }
        const auto h = sync_gate(PartyId::Alice, round);
        for (const auto& e : {e1_, e2_, e3_, e5_}) {
            if (h) {
                s.apply(PartyId::Eve, *h, e);
            }
        }
        const auto cnot = ControlledGateSpec::right_shift();
        s.controlled(PartyId::Eve, cnot, e1_, x1);
        s.controlled(PartyId::Eve, cnot, e2_, x2);
        const auto r1 = s.measure(PartyId::Eve, x1);
        const auto r2 = s.measure(PartyId::Eve, x2);
        const bool odd = round % 2 == 1;
        const auto raw = odd ? r1 : (r1 ^ r2);
        state_.raw[round] = raw;

        const auto y1 = s.fresh_label("eve.relay");
        const auto y2 = s.fresh_label("eve.relay");
        if (odd) {
            s.prepare(PartyId::Eve, tensor(single_basis(y1, 2, r1), single_basis(y2, 2, r2)));
        } else {
            s.prepare(PartyId::Eve, bk_codeword(raw, y1, y2));
        }
        s.controlled(PartyId::Eve, cnot, e3_, y1);
        s.controlled(PartyId::Eve, cnot, e5_, y2);
        ctx.substitute(x1, y1);
        ctx.substitute(x2, y2);
        advance_hypotheses(round);
    }

  protected:
    StateVector model_after_capture(std::size_t j, std::size_t q2) const override {
        auto model = single_basis("a", cfg_.key_dim, j);
        if (auto g = round_key_gate(cfg_, PartyId::Alice, 2)) {
            model = apply_single(model, *g, "a");
        }
        model = tensor(model, bk_codeword(q2, "M1", "M2"));
        return apply_controlled(model, encode_spec(cfg_), "a", "M1");
    }

    StateVector evolve_model(const StateVector& model, std::size_t round) const override {
        auto out = model;
        if (auto g = round_key_gate(cfg_, PartyId::Alice, round)) {
            out = apply_single(out, *g, "a");
        }
        if (auto g = sync_gate(PartyId::Alice, round)) {
            out = apply_single(apply_single(out, *g, "M1"), *g, "M2");
        }
        return out;
    }

    std::vector<double> predict(const StateVector& model, std::size_t round) const override {
        const bool odd = round % 2 == 1;
        const auto enc = encode_spec(cfg_);
        auto s = tensor(model, odd ? tensor(single_basis("X1", 2, 0), single_basis("X2", 2, 0))
                                   : bk_codeword(0, "X1", "X2"));
        s = apply_controlled(s, enc, "a", "X1");
        if (odd) {
            s = apply_controlled(s, enc, "a", "X2");
        }
        s = apply_controlled(s, ControlledGateSpec::right_shift(), "M1", "X1");
        s = apply_controlled(s, ControlledGateSpec::right_shift(), "M2", "X2");
        const std::string xs[] = {"X1", "X2"};
        const auto joint = probabilities(s, xs);
        std::vector<double> out(2);
        for (std::size_t i = 0; i < 4; ++i) {
            const std::size_t v1 = i / 2;
            const std::size_t v2 = i % 2;
            out[odd ? v1 : (v1 ^ v2)] += joint[i];
        }
        return out;
    }

  private:
    std::string e1_, e2_, e3_, e5_;
};

} // namespace

std::string to_string(AttackKind kind) {
    switch (kind) {
    case AttackKind::Passive: return "passive";
    case AttackKind::CnotAncilla: return "cnot-ancilla";
    case AttackKind::FAttack: return "f-attack";
    }
    return "?";
}

AttackKind parse_attack(const std::string& name) {
    for (auto k : {AttackKind::Passive, AttackKind::CnotAncilla, AttackKind::FAttack}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("attack", "unknown attack '" + name + "' (expected passive, cnot-ancilla or f-attack)");
}

AttackState resolve_hypotheses(AttackState state, const PublicBoard& board, std::size_t modulus) {
    for (const auto& a : board.entries()) {
        const auto* value = std::get_if<SymbolValue>(&a.payload);
        if (a.announcer != PartyId::Alice || value == nullptr) {
            continue;
        }
        const auto raw = state.raw.find(a.round);
        if (raw == state.raw.end()) {
            continue;
        }
        const std::size_t offset = (raw->second + modulus - value->value % modulus) % modulus;
        std::vector<Hypothesis> keep;
        for (const auto& h : state.hypotheses) {
            auto it = h.offsets.find(a.round);
            if (it == h.offsets.end() || it->second[offset] > kImpossible) {
                keep.push_back(h);
            }
        }
        if (keep.empty()) {
            state.contradiction = true;
        } else {
            state.hypotheses = std::move(keep);
        }
    }
    state.resolved = state.hypotheses.size() == 1;
    return state;
}

std::optional<std::string> zlg_case_label(const Hypothesis& h) {
    std::optional<std::size_t> odd;
    std::optional<std::size_t> even;
    for (const auto& [round, p] : h.offsets) {
        if (p.size() != 2) {
            return std::nullopt;
        }
        const auto k = argmax(p);
        if (p[k] < 1.0 - kImpossible) {
            return std::nullopt;
        }
        auto& slot = round % 2 == 1 ? odd : even;
        if (slot && *slot != k) {
            return std::nullopt;
        }
        slot = k;
    }
    if (!odd || !even) {
        return std::nullopt;
    }
    static const char* names[2][2] = {{"psi3", "psi4"}, {"psi1", "psi2"}};
    return names[*odd][*even];
}

std::vector<std::optional<std::size_t>> Attack::infer(const PublicBoard&, std::size_t rounds) {
    std::vector<std::optional<std::size_t>> out(rounds);
    for (const auto& [round, raw] : state_.raw) {
        if (round <= rounds) {
            out[round - 1] = raw;
        }
    }
    return out;
}

bool Attack::counts_for_success(std::size_t) const { return true; }

bool Attack::may_claim_success() const { return true; }

AttackReport Attack::finish(const PublicBoard& board, const std::vector<RoundOutcome>& outcomes,
                            std::optional<std::size_t> detected_at) {
    AttackReport report;
    report.attack = name();
    report.detected_at = detected_at;
    report.inferred = infer(board, outcomes.size());
    report.raw.resize(outcomes.size());
    for (const auto& [round, raw] : state_.raw) {
        if (round <= outcomes.size()) {
            report.raw[round - 1] = raw;
        }
    }
    report.resolved = state_.resolved;
    report.contradiction = state_.contradiction;
    report.hypotheses_left = state_.hypotheses.size();
    for (const auto& h : state_.hypotheses) {
        report.hypotheses.push_back(h.name);
    }
    report.key_rank_after_capture = state_.key_rank_after_capture;

    bool all_correct = true;
    for (const auto& o : outcomes) {
        if (o.kind != RoundKind::Message) {
            continue;
        }
        ++report.message_rounds;
        const auto& guess = report.inferred[o.round - 1];
        const bool right = guess && *guess == o.alice_symbol;
        report.leaked += right ? 1 : 0;
        if (counts_for_success(o.round) && !right) {
            all_correct = false;
        }
    }
    report.succeeded = !detected_at && all_correct && !state_.contradiction && may_claim_success();
    return report;
}

std::unique_ptr<Attack> passive_interceptor(const ProtocolConfig& cfg) { return std::make_unique<Passive>(cfg); }

std::unique_ptr<Attack> cnot_ancilla_attack(const ProtocolConfig& cfg) {
    if (!is_zlg_family(cfg.family)) {
        throw ConfigError("attack", "cnot-ancilla needs a qubit-key family (zlg, zlg-nonorth, zlg-check-a, "
                                    "zlg-check-b), got " + to_string(cfg.family));
    }
    return std::make_unique<CnotAncilla>(cfg);
}

std::unique_ptr<Attack> f_attack_zlg(const ProtocolConfig& cfg) {
    if (cfg.family != Family::Zlg && cfg.family != Family::ZlgHd) {
        throw ConfigError("attack", "the two-party qubit relay needs zlg or zlg-hd, got " + to_string(cfg.family));
    }
    return std::make_unique<PairRelay>(cfg);
}

std::unique_ptr<Attack> f_attack_kbb(const ProtocolConfig& cfg) {
    if (cfg.family != Family::Kbb && cfg.family != Family::KbbHd) {
        throw ConfigError("attack", "the qudit relay needs kbb or kbb-hd, got " + to_string(cfg.family));
    }
    return std::make_unique<PairRelay>(cfg);
}

std::unique_ptr<Attack> f_attack_bk(const ProtocolConfig& cfg) {
    if (!is_bk_family(cfg.family)) {
        throw ConfigError("attack", "the three-party relay needs bk or bk-hd, got " + to_string(cfg.family));
    }
    return std::make_unique<GhzRelay>(cfg);
}

std::unique_ptr<Attack> make_attack(AttackKind kind, const ProtocolConfig& cfg) {
    switch (kind) {
    case AttackKind::Passive: return passive_interceptor(cfg);
    case AttackKind::CnotAncilla: return cnot_ancilla_attack(cfg);
    case AttackKind::FAttack:
        switch (cfg.family) {
        case Family::Zlg:
        case Family::ZlgHd: return f_attack_zlg(cfg);
        case Family::Kbb:
        case Family::KbbHd: return f_attack_kbb(cfg);
        case Family::Bk:
        case Family::BkHd: return f_attack_bk(cfg);
        default:
            throw ConfigError("attack", "f-attack is not defined for " + to_string(cfg.family) +
                                            " (supported: zlg, zlg-hd, kbb, kbb-hd, bk, bk-hd)");
        }
    }
    throw ConfigError("attack", "unknown attack");
}

} // namespace qkdlab
