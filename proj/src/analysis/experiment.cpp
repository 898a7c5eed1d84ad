#include "qkdlab/analysis/experiment.hpp"

#include <algorithm>
#include <thread>

namespace qkdlab {

void ExperimentPlan::validate() const {
    config.validate();
    if (trials < 1) {
        throw ConfigError("trials", "must be >= 1");
    }
    if (!(check_fraction >= 0.0 && check_fraction <= 1.0)) {
        throw ConfigError("check_fraction", "must lie in [0, 1]");
    }
    if (jobs < 1) {
        throw ConfigError("jobs", "must be >= 1");
    }
    for (auto r : forced_checks) {
        if (r < 1 || r > config.rounds) {
            throw ConfigError("forced_checks", "round " + std::to_string(r) + " outside 1.." +
                                                   std::to_string(config.rounds));
        }
    }
    make_attack(attack, config);
}

std::vector<RoundPlan> make_schedule(const ExperimentPlan& plan, Rng& alice) {
    const auto& cfg = plan.config;
    const auto n = cfg.rounds;
    std::vector<RoundMode> modes(n, RoundMode::Message);
    if (is_check_variant(cfg.family)) {
        if (cfg.exact_mode_counts) {
            for (std::size_t i = 0; i < n; ++i) {
                modes[i] = static_cast<RoundMode>(3 * i / n);
            }
            for (std::size_t i = n; i > 1; --i) {
                std::swap(modes[i - 1], modes[alice.below(i)]);
            }
        } else {
            for (auto& m : modes) {
                m = static_cast<RoundMode>(alice.below(3));
            }
        }
    }
    std::vector<RoundPlan> out;
    for (std::size_t r = 1; r <= n; ++r) {
        RoundPlan p;
        p.round = r;
        p.symbol = alice.below(alphabet_size(cfg));
        p.mode = modes[r - 1];
        bool check = p.mode != RoundMode::Message;
        if (!is_check_variant(cfg.family) && plan.check_fraction > 0.0) {
            check = alice.bernoulli(plan.check_fraction);
        }
        if (plan.forced_checks.count(r) != 0) {
            check = true;
            if (p.mode == RoundMode::Message) {
                p.mode = RoundMode::CheckI;
            }
        }
        if (check && p.mode == RoundMode::Message) {
            p.mode = RoundMode::CheckI;
        }
        p.kind = check ? RoundKind::Check : RoundKind::Message;
        out.push_back(p);
    }
    return out;
}

namespace {

Transcript build_transcript(const Session& s, const std::vector<RoundOutcome>& outcomes, const AttackReport& a) {
    Transcript t;
    for (const auto& o : outcomes) {
        RoundRecord r;
        r.round = o.round;
        r.kind = to_string(o.kind);
        if (o.mode != RoundMode::Message) {
            r.mode = to_string(o.mode);
        }
        r.alice = o.alice_symbol;
        r.bob = o.recovered;
        r.charlie = o.charlie_symbol;
        r.eve_raw = a.raw[o.round - 1];
        r.eve_inferred = a.inferred[o.round - 1];
        for (const auto& tr : s.transit_log()) {
            if (tr.round == o.round) {
                r.custody.push_back(tr);
            }
        }
        for (const auto& an : s.board().entries()) {
            if (an.round == o.round) {
                r.announcements.push_back(an);
            }
        }
        t.append(std::move(r));
    }
    return t;
}

} // namespace

TrialResult run_trial(const ExperimentPlan& plan, std::size_t index) {
    const auto trial_seed = Rng::derive(plan.seed, index);
    Rng alice(Rng::derive(trial_seed, 0));
    Rng nature(Rng::derive(trial_seed, 1));

    auto attack = make_attack(plan.attack, plan.config);
    ProtocolSession ps(plan.config, nature, attack.get());
    TrialResult result;
    result.index = index;
    for (const auto& p : make_schedule(plan, alice)) {
        result.outcomes.push_back(ps.play(p));
    }
    const auto detected = ps.finish(result.outcomes);
    result.attack = attack->finish(ps.session().board(), result.outcomes, detected);
    if (plan.keep_transcripts) {
        result.transcript = build_transcript(ps.session(), result.outcomes, result.attack);
    }
    return result;
}

ExperimentReport run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    ExperimentReport rep;
    rep.plan = plan;
    rep.trials = plan.trials;
    rep.details.resize(plan.trials);

    const auto jobs = std::min(plan.jobs, plan.trials);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < plan.trials; ++i) {
            rep.details[i] = run_trial(plan, i);
        }
    } else {
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < jobs; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < plan.trials; i += jobs) {
                        rep.details[i] = run_trial(plan, i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    const auto n = plan.config.rounds;
    std::vector<std::size_t> round_errors(n);
    std::size_t errors = 0;
    std::size_t leaked = 0;
    std::size_t message_rounds = 0;
    double detect_sum = 0.0;
    for (const auto& t : rep.details) {
        rep.successes += t.attack.succeeded ? 1 : 0;
        if (t.attack.detected_at) {
            ++rep.detections;
            detect_sum += static_cast<double>(*t.attack.detected_at);
        }
        for (const auto& o : t.outcomes) {
            if (o.error()) {
                ++errors;
                ++round_errors[o.round - 1];
            }
        }
        leaked += t.attack.leaked;
        message_rounds += t.attack.message_rounds;
    }
    const auto trials = static_cast<double>(plan.trials);
    rep.success_rate = static_cast<double>(rep.successes) / trials;
    rep.success_ci = binomial_interval(rep.successes, plan.trials, plan.ci);
    rep.detection_rate = static_cast<double>(rep.detections) / trials;
    rep.detection_ci = binomial_interval(rep.detections, plan.trials, plan.ci);
    rep.qber = static_cast<double>(errors) / (trials * static_cast<double>(n));
    for (auto e : round_errors) {
        rep.per_round_qber.push_back(static_cast<double>(e) / trials);
    }
    rep.leak_fraction = message_rounds == 0 ? 0.0 : static_cast<double>(leaked) / static_cast<double>(message_rounds);
    if (rep.detections > 0) {
        rep.mean_rounds_to_detection = detect_sum / static_cast<double>(rep.detections);
    }
    return rep;
}

std::vector<std::pair<std::size_t, double>> detection_curve(const ExperimentPlan& plan,
                                                            const std::vector<std::size_t>& check_counts) {
    std::vector<std::pair<std::size_t, double>> out;
    for (auto count : check_counts) {
        auto p = plan;
        p.check_fraction = 0.0;
        p.forced_checks.clear();
        p.config.rounds = std::max<std::size_t>(count + 1, 2);
        for (std::size_t r = 2; r <= count + 1; ++r) {
            p.forced_checks.insert(r);
        }
        out.emplace_back(count, run_experiment(p).detection_rate);
    }
    return out;
}

} // namespace qkdlab
