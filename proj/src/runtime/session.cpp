#include "qkdlab/runtime/session.hpp"

#include <algorithm>

namespace qkdlab {

TransitContext::TransitContext(Session& session, std::size_t round, std::vector<Transfer> transfers)
    : session_(session), round_(round), transfers_(std::move(transfers)) {
    for (const auto& t : transfers_) {
        delivered_.push_back(t.label);
        dims_.push_back(session_.state().layout().dim(t.label));
    }
}

void TransitContext::substitute(const std::string& original, const std::string& replacement) {
    auto it = std::find(delivered_.begin(), delivered_.end(), original);
    if (it == delivered_.end()) {
        throw ProtocolIntegrityError("channel: '" + original + "' is not in this transit");
    }
    const auto i = static_cast<std::size_t>(it - delivered_.begin());
    if (dims_[i] != session_.state().layout().dim(replacement)) {
        throw ProtocolIntegrityError("channel: substitute '" + replacement + "' has a different dimension");
    }
    if (session_.ledger().holder(replacement) != PartyId::Eve) {
        throw ProtocolIntegrityError("channel: substitute '" + replacement + "' is not held by the interceptor");
    }
    *it = replacement;
}

Session::Session(StateVector initial, const std::vector<std::pair<std::string, PartyId>>& holders, Rng nature,
                 Interceptor* interceptor)
    : state_(std::move(initial)), nature_(nature), interceptor_(interceptor) {
    for (const auto& [label, party] : holders) {
        ledger_.assign(label, party);
    }
    for (const auto& label : state_.layout().labels()) {
        if (!ledger_.contains(label)) {
            throw ProtocolIntegrityError("session: no holder given for '" + label + "'");
        }
    }
}

void Session::assert_custody(PartyId party, std::span<const std::string> labels) const {
    ledger_.assert_custody(party, labels, intercepting_);
}

void Session::apply(PartyId party, const Gate& gate, const std::string& label) {
    const std::string touched[] = {label};
    assert_custody(party, touched);
    state_ = apply_single(state_, gate, label);
}

void Session::controlled(PartyId party, const ControlledGateSpec& spec, const std::string& control,
                         const std::string& target) {
    const std::string touched[] = {control, target};
    assert_custody(party, touched);
    state_ = apply_controlled(state_, spec, control, target);
}

void Session::prepare(PartyId party, const StateVector& local) {
    for (const auto& label : local.layout().labels()) {
        ledger_.assign(label, party);
    }
    state_ = tensor(state_, local);
}

std::size_t Session::measure(PartyId party, const std::string& label, bool keep) {
    const std::string touched[] = {label};
    assert_custody(party, touched);
    auto [record, post] = measure_z(state_, label, nature_);
    if (keep) {
        state_ = std::move(post);
    } else {
        state_ = remove_subsystem(post, label, record.outcome);
        ledger_.release(label);
    }
    return record.outcome;
}

std::vector<std::string> Session::send(const std::vector<std::string>& labels, PartyId from, PartyId to) {
    std::vector<Transfer> bundle;
    for (const auto& label : labels) {
        bundle.push_back({label, from, to});
    }
    return send(bundle);
}

std::vector<std::string> Session::send(const std::vector<Transfer>& bundle) {
    for (const auto& t : bundle) {
        const std::string touched[] = {t.label};
        assert_custody(t.from, touched);
    }
    for (const auto& t : bundle) {
        ledger_.set_in_transit(t.label);
    }
    TransitContext ctx(*this, round_, bundle);
    if (interceptor_ != nullptr) {
        intercepting_ = true;
        try {
            interceptor_->on_transit(ctx);
        } catch (...) {
            intercepting_ = false;
            throw;
        }
        intercepting_ = false;
    }
    std::vector<std::string> delivered = ctx.delivered();
    for (std::size_t i = 0; i < bundle.size(); ++i) {
        const auto& t = bundle[i];
        if (delivered[i] != t.label) {
            // The original stays with the interceptor.
            if (ledger_.contains(t.label)) {
                ledger_.transfer(t.label, PartyId::Eve);
            }
        } else if (!ledger_.contains(t.label) || !ledger_.in_transit(t.label)) {
            throw ProtocolIntegrityError("channel: '" + t.label + "' was consumed in transit without a substitute");
        }
        ledger_.transfer(delivered[i], t.to);
        transit_log_.push_back({round_, t.label, t.from, t.to, delivered[i]});
    }
    return delivered;
}

void Session::announce(PartyId party, std::size_t about_round, Payload payload) {
    board_.announce(about_round, party, std::move(payload));
}

std::string Session::fresh_label(const std::string& stem) {
    std::string label;
    do {
        label = stem + "." + std::to_string(++label_counter_);
    } while (ledger_.contains(label));
    return label;
}

} // namespace qkdlab
