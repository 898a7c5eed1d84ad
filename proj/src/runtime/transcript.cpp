#include "qkdlab/runtime/transcript.hpp"

#include <json.hpp>

#include <ostream>

namespace qkdlab {

void Transcript::append(RoundRecord record) {
    if (record.round != rounds_.size() + 1) {
        throw ProtocolIntegrityError("transcript: expected round " + std::to_string(rounds_.size() + 1) + ", got " +
                                     std::to_string(record.round));
    }
    rounds_.push_back(std::move(record));
}

RoundRecord& Transcript::at(std::size_t round) {
    if (round == 0 || round > rounds_.size()) {
        throw ProtocolIntegrityError("transcript: no round " + std::to_string(round));
    }
    return rounds_[round - 1];
}

void Transcript::write_jsonl(std::ostream& out) const {
    for (const auto& r : rounds_) {
        nlohmann::ordered_json j;
        j["round"] = r.round;
        j["kind"] = r.kind;
        if (!r.mode.empty()) {
            j["mode"] = r.mode;
        }
        j["alice"] = r.alice;
        j["bob"] = r.bob;
        if (r.charlie) {
            j["charlie"] = *r.charlie;
        }
        if (r.eve_raw) {
            j["eve_raw"] = *r.eve_raw;
        }
        if (r.eve_inferred) {
            j["eve_inferred"] = *r.eve_inferred;
        }
        auto custody = nlohmann::ordered_json::array();
        for (const auto& t : r.custody) {
            custody.push_back({{"subsystem", t.label},
                               {"from", to_string(t.from)},
                               {"to", to_string(t.to)},
                               {"delivered", t.delivered}});
        }
        j["custody"] = custody;
        auto board = nlohmann::ordered_json::array();
        for (const auto& a : r.announcements) {
            nlohmann::ordered_json e{{"announcer", to_string(a.announcer)}};
            if (const auto* s = std::get_if<SymbolValue>(&a.payload)) {
                e["value"] = s->value;
            } else {
                e["notice"] = std::get<OperationNotice>(a.payload).operation;
            }
            board.push_back(e);
        }
        j["announcements"] = board;
        out << j.dump() << '\n';
    }
}

} // namespace qkdlab
