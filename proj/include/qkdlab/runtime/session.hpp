#pragma once

#include "qkdlab/qcore/qcore.hpp"
#include "qkdlab/runtime/board.hpp"
#include "qkdlab/runtime/channel.hpp"
#include "qkdlab/runtime/custody.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qkdlab {

/**
 * One protocol run: the joint state, who holds which subsystem, the public
 * board, and the quantum channel.
 *
 * Every state-changing call names the acting party and is checked against
 * the custody ledger. Measured subsystems are dropped from the state, so the
 * layout only ever carries live particles. Measurement outcomes come from the
 * session's own stream; Eve's measurements draw from it as well.
 */
class Session {
  public:
    Session(StateVector initial, const std::vector<std::pair<std::string, PartyId>>& holders, Rng nature,
            Interceptor* interceptor = nullptr);

    const StateVector& state() const { return state_; }
    const CustodyLedger& ledger() const { return ledger_; }
    const PublicBoard& board() const { return board_; }
    const std::vector<TransitRecord>& transit_log() const { return transit_log_; }
    bool interceptor_active() const { return intercepting_; }

    std::size_t round() const { return round_; }
    void begin_round(std::size_t round) { round_ = round; }

    void apply(PartyId party, const Gate& gate, const std::string& label);
    void controlled(PartyId party, const ControlledGateSpec& spec, const std::string& control,
                    const std::string& target);

    /// Appends `local` (a fresh product factor) to the joint state, held by `party`.
    void prepare(PartyId party, const StateVector& local);

    /// z-measurement. The subsystem is removed afterwards unless `keep` is
    /// set, in which case it stays in the state collapsed to the outcome.
    std::size_t measure(PartyId party, const std::string& label, bool keep = false);

    /// Sends a bundle of subsystems through the channel in one transit; the
    /// interceptor sees the whole bundle at once. Returns the labels that
    /// arrived, in bundle order.
    std::vector<std::string> send(const std::vector<Transfer>& bundle);
    std::vector<std::string> send(const std::vector<std::string>& labels, PartyId from, PartyId to);

    void announce(PartyId party, std::size_t about_round, Payload payload);

    void assert_custody(PartyId party, std::span<const std::string> labels) const;

    /// Label of the form stem.N not yet used in this session.
    std::string fresh_label(const std::string& stem);

  private:
    StateVector state_;
    CustodyLedger ledger_;
    PublicBoard board_;
    Rng nature_;
    Interceptor* interceptor_;
    std::vector<TransitRecord> transit_log_;
    std::size_t round_ = 0;
    std::size_t label_counter_ = 0;
    bool intercepting_ = false;
};

} // namespace qkdlab
