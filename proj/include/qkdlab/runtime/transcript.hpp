#pragma once

#include "qkdlab/runtime/board.hpp"
#include "qkdlab/runtime/channel.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qkdlab {

struct RoundRecord {
    std::size_t round = 0;
    std::string kind;
    std::string mode;
    std::size_t alice = 0;
    std::size_t bob = 0;
    std::optional<std::size_t> charlie;
    std::optional<std::size_t> eve_raw;
    std::optional<std::size_t> eve_inferred;
    std::vector<TransitRecord> custody;
    std::vector<Announcement> announcements;
};

class Transcript {
  public:
    /// Rounds must arrive in order 1, 2, 3, ...
    void append(RoundRecord record);
    const std::vector<RoundRecord>& rounds() const { return rounds_; }
    RoundRecord& at(std::size_t round);

    /// One JSON object per line, one line per round.
    void write_jsonl(std::ostream& out) const;

  private:
    std::vector<RoundRecord> rounds_;
};

} // namespace qkdlab
