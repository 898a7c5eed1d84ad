#pragma once

#include "qkdlab/protocols/protocol.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qkdlab {

enum class AttackKind { Passive, CnotAncilla, FAttack };

std::string to_string(AttackKind kind);
AttackKind parse_attack(const std::string& name);

/// One guess about how the shared key was split after the capture round:
/// j is the key value the first measurement collapsed to, q2 the symbol of
/// the captured carrier. offsets[n] is the predicted distribution of
/// (Eve's raw symbol - Alice's symbol) on relay round n.
struct Hypothesis {
    std::string name;
    std::size_t j = 0;
    std::size_t q2 = 0;
    std::map<std::size_t, std::vector<double>> offsets;
};

/// Qubit-relay case name from the offset pattern: "psi1" (+1 odd, 0 even),
/// "psi2" (+1 always), "psi3" (0 always), "psi4" (0 odd, +1 even). Needs a
/// deterministic prediction on one odd and one even round.
std::optional<std::string> zlg_case_label(const Hypothesis& h);

struct AttackState {
    std::vector<std::string> held;
    std::map<std::size_t, std::size_t> raw;
    std::vector<Hypothesis> hypotheses;
    bool resolved = false;
    /// Set when an announcement contradicts every remaining hypothesis. The
    /// set is then left as it was.
    bool contradiction = false;
    /// Rank of Alice's key particle right after the first interception.
    std::optional<std::size_t> key_rank_after_capture;
};

/// Drops hypotheses that give zero weight to an offset seen on an announced
/// relay round. Alice's announcements are the reference values.
AttackState resolve_hypotheses(AttackState state, const PublicBoard& board, std::size_t modulus);

struct AttackReport {
    std::string attack;
    bool succeeded = false;
    std::optional<std::size_t> detected_at;
    bool resolved = false;
    bool contradiction = false;
    std::size_t hypotheses_left = 0;
    std::vector<std::string> hypotheses;
    std::optional<std::size_t> key_rank_after_capture;
    /// Per round (index 0 is round 1): Eve's raw and corrected symbols.
    std::vector<std::optional<std::size_t>> raw;
    std::vector<std::optional<std::size_t>> inferred;
    /// Message rounds whose symbol Eve ends up knowing, and the message rounds considered.
    std::size_t leaked = 0;
    std::size_t message_rounds = 0;
};

class Attack : public Interceptor {
  public:
    explicit Attack(ProtocolConfig cfg) : cfg_(std::move(cfg)) {}

    const AttackState& state() const { return state_; }

    /// Post-session processing once the checks are on the board.
    AttackReport finish(const PublicBoard& board, const std::vector<RoundOutcome>& outcomes,
                        std::optional<std::size_t> detected_at);

  protected:
    /// Eve's best guess per round, after reading the board.
    virtual std::vector<std::optional<std::size_t>> infer(const PublicBoard& board, std::size_t rounds);
    /// Rounds that count towards success (default: every message round).
    virtual bool counts_for_success(std::size_t round) const;
    /// False while Eve cannot yet pin down her corrections.
    virtual bool may_claim_success() const;

    ProtocolConfig cfg_;
    AttackState state_;
};

std::unique_ptr<Attack> passive_interceptor(const ProtocolConfig& cfg);
std::unique_ptr<Attack> cnot_ancilla_attack(const ProtocolConfig& cfg);
std::unique_ptr<Attack> f_attack_zlg(const ProtocolConfig& cfg);
std::unique_ptr<Attack> f_attack_kbb(const ProtocolConfig& cfg);
std::unique_ptr<Attack> f_attack_bk(const ProtocolConfig& cfg);

/// Attack by kind for the configured family; ConfigError for pairs that do not fit.
std::unique_ptr<Attack> make_attack(AttackKind kind, const ProtocolConfig& cfg);

} // namespace qkdlab
