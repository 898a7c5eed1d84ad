#include "oracles.hpp"

#include "qkdlab/analysis/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qkdlab;

namespace {

ExperimentPlan f_plan(Family f, std::size_t key, std::size_t carrier, std::size_t trials, std::size_t rounds = 8) {
    ExperimentPlan p;
    p.config.family = f;
    p.config.key_dim = key;
    p.config.carrier_dim = carrier;
    p.config.rounds = rounds;
    p.attack = AttackKind::FAttack;
    p.trials = trials;
    p.check_fraction = 0.0;
    p.forced_checks = {2, 3, 4};
    p.seed = 99;
    return p;
}

// Every message round >= 3 of a successful trial: Eve's corrected symbol is Alice's.
void check_success_branch(const TrialResult& t) {
    for (const auto& o : t.outcomes) {
        if (o.kind == RoundKind::Message && o.round >= 3) {
            REQUIRE(t.attack.inferred[o.round - 1].has_value());
            CHECK(*t.attack.inferred[o.round - 1] == o.alice_symbol);
        }
    }
}

// Plays `rounds` message rounds of zlg under the relay and returns the attack.
std::unique_ptr<Attack> zlg_relay_after(std::size_t rounds, std::uint64_t seed) {
    ProtocolConfig cfg;
    cfg.family = Family::Zlg;
    auto a = make_attack(AttackKind::FAttack, cfg);
    ProtocolSession ps(cfg, Rng(seed), a.get());
    Rng alice(seed + 1);
    for (std::size_t r = 1; r <= rounds; ++r) {
        ps.play({r, alice.below(2), RoundKind::Message, RoundMode::Message});
    }
    return a;
}

PublicBoard board_with(const std::vector<std::pair<std::size_t, std::size_t>>& alice_values) {
    PublicBoard b;
    for (const auto& [round, v] : alice_values) {
        b.announce(round, PartyId::Alice, SymbolValue{v});
    }
    return b;
}

} // namespace

TEST_SUITE("adversaries.selection") {
    TEST_CASE("attack names round-trip") {
        for (auto k : {AttackKind::Passive, AttackKind::CnotAncilla, AttackKind::FAttack}) {
            CHECK(parse_attack(to_string(k)) == k);
        }
        CHECK_THROWS_AS(parse_attack("ggwz"), ConfigError);
    }

    TEST_CASE("pairings that do not fit are config errors naming the attack field") {
        ProtocolConfig c;
        c.family = Family::Bk;
        try {
            make_attack(AttackKind::CnotAncilla, c);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field() == "attack");
        }
        c.family = Family::ZlgNonorth;
        CHECK_THROWS_AS(make_attack(AttackKind::FAttack, c), ConfigError);
        c.family = Family::Bk;
        CHECK_THROWS_AS(f_attack_kbb(c), ConfigError);
        CHECK_THROWS_AS(f_attack_zlg(c), ConfigError);
        c.family = Family::Zlg;
        CHECK_THROWS_AS(f_attack_bk(c), ConfigError);
    }
}

TEST_SUITE("adversaries.passive") {
    TEST_CASE("passive never succeeds and is never detected") {
        ExperimentPlan p;
        p.config.family = Family::Kbb;
        p.config.key_dim = p.config.carrier_dim = 3;
        p.config.rounds = 30;
        p.trials = 50;
        p.check_fraction = 0.5;
        const auto r = run_experiment(p);
        CHECK(r.successes == 0);
        CHECK(r.detections == 0);
        CHECK(r.qber == 0.0);
        CHECK(r.leak_fraction == 0.0);
    }
}

TEST_SUITE("adversaries.cnot") {
    TEST_CASE("error rate on the round after the attack is 2cos^2 sin^2") {
        for (double theta : {std::numbers::pi / 4, std::numbers::pi / 6, std::numbers::pi / 8}) {
            ExperimentPlan p;
            p.config.theta = theta;
            p.config.rounds = 2;
            p.attack = AttackKind::CnotAncilla;
            p.trials = 4000;
            p.check_fraction = 0.0;
            const auto r = run_experiment(p);
            const double expect = 2 * std::pow(std::cos(theta) * std::sin(theta), 2);
            CHECK(r.per_round_qber[0] == 0.0);
            CHECK(std::abs(r.per_round_qber[1] - expect) <= 3 * oracle::binomial_sigma(expect, p.trials));
        }
    }

    TEST_CASE("theta = 0: no errors and Eve's bits differ from Alice's by a constant") {
        ExperimentPlan p;
        p.config.theta = 0.0;
        p.config.rounds = 20;
        p.attack = AttackKind::CnotAncilla;
        p.trials = 200;
        p.check_fraction = 0.0;
        const auto r = run_experiment(p);
        CHECK(r.qber == 0.0);
        std::size_t aligned = 0;
        for (const auto& t : r.details) {
            const auto x0 = *t.attack.raw[0] ^ t.outcomes[0].alice_symbol;
            for (const auto& o : t.outcomes) {
                CHECK((*t.attack.raw[o.round - 1] ^ o.alice_symbol) == x0);
            }
            aligned += x0 == 0 ? 1 : 0;
        }
        // Both key branches occur.
        CHECK(aligned > 50);
        CHECK(aligned < 150);
    }
}

TEST_SUITE("adversaries.f_attack") {
    TEST_CASE("round 1 z-measurement is invisible to the receivers") {
        for (auto [f, k, c] : {std::tuple{Family::Zlg, 2u, 2u}, std::tuple{Family::Kbb, 3u, 3u},
                               std::tuple{Family::Bk, 2u, 2u}}) {
            auto p = f_plan(f, k, c, 300, 4);
            const auto r = run_experiment(p);
            for (const auto& t : r.details) {
                CHECK_FALSE(t.outcomes[0].error());
            }
        }
    }

    TEST_CASE("zlg: success and detection split the trials, failures are caught on round 2") {
        const auto r = run_experiment(f_plan(Family::Zlg, 2, 2, 600));
        for (const auto& t : r.details) {
            CHECK(t.attack.succeeded != t.attack.detected_at.has_value());
            CHECK_FALSE(t.attack.contradiction);
            if (t.attack.succeeded) {
                CHECK(t.attack.resolved);
                check_success_branch(t);
                for (const auto& o : t.outcomes) {
                    CHECK_FALSE(o.error());
                }
            } else {
                CHECK(*t.attack.detected_at == 2);
            }
        }
        CHECK(std::abs(r.success_rate - 0.5) <= 3 * oracle::binomial_sigma(0.5, r.trials));
    }

    TEST_CASE("kbb d=3: resolved dits equal Alice's in every successful trial") {
        const auto r = run_experiment(f_plan(Family::Kbb, 3, 3, 600));
        std::size_t wins = 0;
        for (const auto& t : r.details) {
            CHECK(t.attack.succeeded != t.attack.detected_at.has_value());
            if (t.attack.succeeded) {
                ++wins;
                check_success_branch(t);
            }
        }
        CHECK(std::abs(r.success_rate - 1.0 / 3) <= 3 * oracle::binomial_sigma(1.0 / 3, r.trials));
        CHECK(wins > 0);
    }

    TEST_CASE("bk: receivers get Alice's bits and odd-round raw bits are exact in the j=0 branch") {
        const auto r = run_experiment(f_plan(Family::Bk, 2, 2, 400, 10));
        std::size_t exact_branch = 0;
        for (const auto& t : r.details) {
            CHECK(t.attack.succeeded != t.attack.detected_at.has_value());
            if (!t.attack.succeeded) {
                continue;
            }
            check_success_branch(t);
            REQUIRE(t.attack.hypotheses.size() == 1);
            const bool j0 = t.attack.hypotheses.front().rfind("j=0", 0) == 0;
            for (const auto& o : t.outcomes) {
                CHECK(o.recovered == o.alice_symbol);
                if (o.charlie_recovered) {
                    CHECK(*o.charlie_recovered == o.alice_symbol);
                }
                if (o.round >= 3 && o.round % 2 == 1) {
                    const auto raw = *t.attack.raw[o.round - 1];
                    CHECK((raw == o.alice_symbol) == j0);
                }
            }
            exact_branch += j0 ? 1 : 0;
        }
        CHECK(exact_branch > 0);
    }

    TEST_CASE("random check schedules never contradict the true hypothesis") {
        for (auto [f, k, c] : {std::tuple{Family::Zlg, 2u, 2u}, std::tuple{Family::Kbb, 5u, 5u},
                               std::tuple{Family::Bk, 2u, 2u}}) {
            auto p = f_plan(f, k, c, 200, 12);
            p.forced_checks.clear();
            p.check_fraction = 0.3;
            const auto r = run_experiment(p);
            for (const auto& t : r.details) {
                CHECK_FALSE(t.attack.contradiction);
            }
        }
    }

    TEST_CASE("repaired families keep the key entangled and never leak undetected") {
        for (auto [f, k, c] : {std::tuple{Family::ZlgHd, 4u, 2u}, std::tuple{Family::BkHd, 4u, 2u},
                               std::tuple{Family::KbbHd, 4u, 2u}}) {
            const auto r = run_experiment(f_plan(f, k, c, 200));
            for (const auto& t : r.details) {
                REQUIRE(t.attack.key_rank_after_capture.has_value());
                CHECK(*t.attack.key_rank_after_capture >= 2);
                CHECK_FALSE(t.attack.succeeded);
                const bool full_leak = t.attack.leaked == t.attack.message_rounds;
                CHECK_FALSE((full_leak && !t.attack.detected_at));
            }
        }
    }
}

TEST_SUITE("adversaries.resolution") {
    TEST_CASE("case labels follow the offset pattern") {
        Hypothesis h;
        const auto set = [&](std::size_t odd, std::size_t even) {
            h.offsets.clear();
            for (std::size_t r = 3; r <= 6; ++r) {
                std::vector<double> p(2, 0.0);
                p[r % 2 == 1 ? odd : even] = 1.0;
                h.offsets[r] = p;
            }
            return zlg_case_label(h);
        };
        CHECK(set(1, 0) == "psi1");
        CHECK(set(1, 1) == "psi2");
        CHECK(set(0, 0) == "psi3");
        CHECK(set(0, 1) == "psi4");
        h.offsets = {{3, {1.0, 0.0}}};
        CHECK_FALSE(zlg_case_label(h).has_value());
        h.offsets = {{3, {0.5, 0.5}}, {4, {1.0, 0.0}}};
        CHECK_FALSE(zlg_case_label(h).has_value());
    }

    TEST_CASE("zlg relay carries the four cases with the simulated key/carrier mapping") {
        const auto a = zlg_relay_after(6, 3);
        const auto& hs = a->state().hypotheses;
        REQUIRE(hs.size() == 4);
        std::map<std::pair<std::size_t, std::size_t>, std::string> got;
        for (const auto& h : hs) {
            got[{h.j, h.q2}] = h.name;
        }
        CHECK(got[{0, 0}] == "psi1");
        CHECK(got[{0, 1}] == "psi2");
        CHECK(got[{1, 0}] == "psi3");
        CHECK(got[{1, 1}] == "psi4");
    }

    TEST_CASE("no announcements leave the set unchanged") {
        const auto a = zlg_relay_after(6, 5);
        const auto s = resolve_hypotheses(a->state(), PublicBoard{}, 2);
        CHECK(s.hypotheses.size() == 4);
        CHECK_FALSE(s.resolved);
        CHECK_FALSE(s.contradiction);
    }

    TEST_CASE("matching bits at both parities resolve to psi3; one announcement leaves two") {
        const auto a = zlg_relay_after(6, 7);
        const auto& raw = a->state().raw;
        auto one = resolve_hypotheses(a->state(), board_with({{3, raw.at(3)}}), 2);
        CHECK(one.hypotheses.size() == 2);
        auto both = resolve_hypotheses(a->state(), board_with({{3, raw.at(3)}, {4, raw.at(4)}}), 2);
        REQUIRE(both.hypotheses.size() == 1);
        CHECK(both.resolved);
        CHECK(both.hypotheses.front().name == "psi3");
        auto flipped = resolve_hypotheses(a->state(), board_with({{3, raw.at(3) ^ 1}, {4, raw.at(4) ^ 1}}), 2);
        REQUIRE(flipped.hypotheses.size() == 1);
        CHECK(flipped.hypotheses.front().name == "psi2");
    }

    TEST_CASE("announcements on rounds 1 and 2 carry no case information") {
        const auto a = zlg_relay_after(6, 9);
        const auto s = resolve_hypotheses(a->state(), board_with({{1, 0}, {2, 1}}), 2);
        CHECK(s.hypotheses.size() == 4);
    }

    TEST_CASE("an announcement ruling out every case is flagged and ignored") {
        auto a = zlg_relay_after(6, 11);
        auto s = a->state();
        const auto raw3 = s.raw.at(3);
        s = resolve_hypotheses(s, board_with({{3, raw3}, {4, s.raw.at(4)}}), 2);
        REQUIRE(s.hypotheses.size() == 1);
        s = resolve_hypotheses(s, board_with({{5, s.raw.at(5) ^ 1}}), 2);
        CHECK(s.contradiction);
        CHECK(s.hypotheses.size() == 1);
    }
}
