#include "qkdlab/runtime/board.hpp"
#include "qkdlab/runtime/custody.hpp"

namespace qkdlab {

std::string to_string(PartyId party) {
    switch (party) {
    case PartyId::Alice: return "Alice";
    case PartyId::Bob: return "Bob";
    case PartyId::Charlie: return "Charlie";
    case PartyId::Eve: return "Eve";
    }
    return "?";
}

void CustodyLedger::assign(const std::string& label, PartyId holder) {
    if (!holders_.emplace(label, holder).second) {
        throw ProtocolIntegrityError("custody: subsystem '" + label + "' already has a holder");
    }
}

void CustodyLedger::release(const std::string& label) {
    if (holders_.erase(label) == 0) {
        throw ProtocolIntegrityError("custody: release of unknown subsystem '" + label + "'");
    }
}

void CustodyLedger::set_in_transit(const std::string& label) {
    auto it = holders_.find(label);
    if (it == holders_.end()) {
        throw ProtocolIntegrityError("custody: unknown subsystem '" + label + "'");
    }
    it->second.reset();
}

void CustodyLedger::transfer(const std::string& label, PartyId to) {
    auto it = holders_.find(label);
    if (it == holders_.end()) {
        throw ProtocolIntegrityError("custody: unknown subsystem '" + label + "'");
    }
    it->second = to;
}

std::optional<PartyId> CustodyLedger::holder(const std::string& label) const {
    auto it = holders_.find(label);
    if (it == holders_.end()) {
        throw ProtocolIntegrityError("custody: unknown subsystem '" + label + "'");
    }
    return it->second;
}

bool CustodyLedger::in_transit(const std::string& label) const { return !holder(label).has_value(); }

void CustodyLedger::assert_custody(PartyId party, std::span<const std::string> labels,
                                   bool interceptor_active) const {
    for (const auto& label : labels) {
        const auto h = holder(label);
        if (h == party) {
            continue;
        }
        if (!h && party == PartyId::Eve && interceptor_active) {
            continue;
        }
        throw ProtocolIntegrityError("custody: " + to_string(party) + " does not hold '" + label + "' (held by " +
                                     (h ? to_string(*h) : std::string("channel")) + ")");
    }
}

std::vector<std::string> CustodyLedger::labels() const {
    std::vector<std::string> out;
    for (const auto& [label, h] : holders_) {
        out.push_back(label);
    }
    return out;
}

std::vector<std::string> CustodyLedger::held_by(PartyId party) const {
    std::vector<std::string> out;
    for (const auto& [label, h] : holders_) {
        if (h == party) {
            out.push_back(label);
        }
    }
    return out;
}

void PublicBoard::announce(std::size_t round, PartyId announcer, Payload payload) {
    entries_.push_back({round, announcer, std::move(payload)});
}

} // namespace qkdlab
