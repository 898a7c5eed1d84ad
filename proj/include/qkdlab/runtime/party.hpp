#pragma once

#include <stdexcept>
#include <string>

namespace qkdlab {

enum class PartyId { Alice, Bob, Charlie, Eve };

std::string to_string(PartyId party);

/// Raised when a party touches a subsystem it does not hold, or when the
/// channel is driven outside its contract. Never caught inside the library.
class ProtocolIntegrityError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace qkdlab
