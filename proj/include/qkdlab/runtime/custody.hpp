#pragma once

#include "qkdlab/runtime/party.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qkdlab {

/// Holder of each live subsystem. An empty optional means "in transit".
class CustodyLedger {
  public:
    void assign(const std::string& label, PartyId holder);
    void release(const std::string& label);
    void set_in_transit(const std::string& label);
    void transfer(const std::string& label, PartyId to);

    bool contains(const std::string& label) const { return holders_.count(label) != 0; }
    std::optional<PartyId> holder(const std::string& label) const;
    bool in_transit(const std::string& label) const;

    /// Throws ProtocolIntegrityError unless `party` holds every label. When
    /// `interceptor_active` is set, Eve may also touch in-transit subsystems.
    void assert_custody(PartyId party, std::span<const std::string> labels,
                        bool interceptor_active = false) const;

    std::vector<std::string> labels() const;
    std::vector<std::string> held_by(PartyId party) const;

  private:
    std::map<std::string, std::optional<PartyId>> holders_;
};

} // namespace qkdlab
