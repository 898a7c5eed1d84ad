#pragma once

#include "qkdlab/runtime/party.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace qkdlab {

struct SymbolValue {
    std::size_t value = 0;
    bool operator==(const SymbolValue&) const = default;
};

/// Tells the receiver how to treat a carrier ("rotate" or "no-op").
struct OperationNotice {
    std::string operation;
    bool operator==(const OperationNotice&) const = default;
};

using Payload = std::variant<SymbolValue, OperationNotice>;

struct Announcement {
    /// Round the payload refers to. Check values are announced after the
    /// session with their positions, so this is not the posting time.
    std::size_t round = 0;
    PartyId announcer = PartyId::Alice;
    Payload payload;
    bool operator==(const Announcement&) const = default;
};

class PublicBoard {
  public:
    void announce(std::size_t round, PartyId announcer, Payload payload);
    const std::vector<Announcement>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::vector<Announcement> entries_;
};

} // namespace qkdlab
