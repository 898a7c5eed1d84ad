#pragma once

#include "qkdlab/protocols/config.hpp"
#include "qkdlab/qcore/qcore.hpp"
#include "qkdlab/runtime/runtime.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qkdlab {

enum class RoundKind { Message, Check };

/// Alice's private mode coin in the check variants. Other families use Message
/// for message rounds and CheckI for compared rounds.
enum class RoundMode { Message, CheckI, CheckII };

std::string to_string(RoundKind kind);
std::string to_string(RoundMode mode);

struct RoundPlan {
    std::size_t round = 1;
    std::size_t symbol = 0;
    RoundKind kind = RoundKind::Message;
    RoundMode mode = RoundMode::Message;
};

struct RoundOutcome {
    std::size_t round = 1;
    RoundKind kind = RoundKind::Message;
    RoundMode mode = RoundMode::Message;
    std::size_t alice_symbol = 0;
    /// Raw measurement results of the receivers.
    std::size_t bob_symbol = 0;
    std::optional<std::size_t> charlie_symbol;
    /// What the receivers decode. Equals bob_symbol except on even BK rounds,
    /// where it is the parity of Bob's and Charlie's outcomes.
    std::size_t recovered = 0;
    /// Charlie's own copy on odd BK rounds.
    std::optional<std::size_t> charlie_recovered;
    bool detected = false;

    bool error() const {
        return recovered != alice_symbol || (charlie_recovered && *charlie_recovered != alice_symbol);
    }
};

/// Even-round BK codeword |q-bar> on two qubits.
StateVector bk_codeword(std::size_t q, const std::string& first, const std::string& second);

/// Initial shared key and who holds each half.
StateVector initial_key(const ProtocolConfig& cfg);
std::vector<std::pair<std::string, PartyId>> key_holders(const ProtocolConfig& cfg);
std::vector<std::string> key_labels(const ProtocolConfig& cfg);

/// The operator `party` applies to its key particle at the start of `round`,
/// if any.
std::optional<Gate> round_key_gate(const ProtocolConfig& cfg, PartyId party, std::size_t round);

/// Applies every party's round-`round` key operator to a bare key state.
StateVector advance_key(const ProtocolConfig& cfg, const StateVector& key, std::size_t round);

/// Alice's key-to-carrier coupling and the receivers' inverse.
ControlledGateSpec encode_spec(const ProtocolConfig& cfg);
ControlledGateSpec decode_spec(const ProtocolConfig& cfg);

/// Single carrier holding symbol q.
StateVector carrier_state(const ProtocolConfig& cfg, const std::string& label, std::size_t q);

RoundOutcome zlg_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome zlg_nonorth_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome zlg_check_a_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome zlg_check_b_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome zlg_hd_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome kbb_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome kbb_hd_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome bk_round_odd(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome bk_round_even(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);
RoundOutcome bk_hd_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);

/// Dispatches on the configured family (and round parity for BK).
RoundOutcome play_round(Session& s, const ProtocolConfig& cfg, const RoundPlan& plan);

/// Post-session comparison: for each check round Alice and the receivers
/// announce their values with the round position. Marks detected outcomes and
/// returns the first detecting round.
std::optional<std::size_t> announce_checks(Session& s, std::vector<RoundOutcome>& outcomes);

/// Convenience wrapper that owns a session for one protocol run.
class ProtocolSession {
  public:
    ProtocolSession(ProtocolConfig cfg, Rng nature, Interceptor* interceptor = nullptr);

    const ProtocolConfig& config() const { return cfg_; }
    Session& session() { return session_; }
    const Session& session() const { return session_; }

    RoundOutcome play(const RoundPlan& plan);
    std::optional<std::size_t> finish(std::vector<RoundOutcome>& outcomes) {
        return announce_checks(session_, outcomes);
    }

  private:
    ProtocolConfig cfg_;
    Session session_;
};

} // namespace qkdlab
