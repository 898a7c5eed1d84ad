#pragma once

#include "qkdlab/runtime/party.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qkdlab {

class Session;

struct Transfer {
    std::string label;
    PartyId from = PartyId::Alice;
    PartyId to = PartyId::Bob;
};

struct TransitRecord {
    std::size_t round = 0;
    std::string label;
    PartyId from = PartyId::Alice;
    PartyId to = PartyId::Bob;
    /// Label that actually reached `to`; differs from `label` after a substitution.
    std::string delivered;
};

/// Handed to the interceptor while a bundle of carriers is in flight.
class TransitContext {
  public:
    TransitContext(Session& session, std::size_t round, std::vector<Transfer> transfers);

    Session& session() { return session_; }
    std::size_t round() const { return round_; }
    const std::vector<Transfer>& transfers() const { return transfers_; }

    /// Keep `original` and deliver `replacement` (which Eve must hold and
    /// which must have the same dimension) in its place.
    void substitute(const std::string& original, const std::string& replacement);

    const std::vector<std::string>& delivered() const { return delivered_; }

  private:
    Session& session_;
    std::size_t round_;
    std::vector<Transfer> transfers_;
    std::vector<std::string> delivered_;
    std::vector<std::size_t> dims_;
};

class Interceptor {
  public:
    virtual ~Interceptor() = default;
    virtual std::string name() const = 0;
    virtual void on_transit(TransitContext& ctx) = 0;
};

} // namespace qkdlab
