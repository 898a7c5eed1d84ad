#include "oracles.hpp"

#include "qkdlab/analysis/report.hpp"
#include "qkdlab/analysis/verify.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace qkdlab;

namespace {

EfficiencyInput input(double b_s, double q_t, double b_t, double tau = 1.0, int n = 3) {
    return {b_s, q_t, b_t, tau, n};
}

} // namespace

TEST_SUITE("analysis.efficiency") {
    TEST_CASE("epsilon examples") {
        CHECK(efficiency(input(1, 1, 0)) == doctest::Approx(1.0));
        CHECK(efficiency(input(0.5, 1, 2)) == doctest::Approx(1.0 / 6));
        CHECK(efficiency(input(0, 1, 2)) == 0.0);
        CHECK(efficiency(lucamarini_mancini_scheme().input) == doctest::Approx(0.5));
    }

    TEST_CASE("practical efficiency") {
        CHECK(practical_efficiency(input(1, 1, 0, 0.9)) == doctest::Approx(0.729));
        CHECK(practical_efficiency(input(0.5, 1, 2, 1.0, 1)) == doctest::Approx(1.0 / 6));
        for (double t : {0.1, 0.35, 0.8}) {
            CHECK(practical_efficiency(input(0.5, 1, 2, t, 1)) == doctest::Approx(t / 6));
        }
    }

    TEST_CASE("crossovers") {
        const auto own = reusable_key_scheme().input;
        CHECK(crossover_tau(own, bb84_scheme().input) == doctest::Approx(std::sqrt(1.0 / 6)).epsilon(1e-12));
        CHECK(crossover_tau(own, lucamarini_mancini_scheme().input) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK_THROWS_AS(crossover_tau(own, own), NoCrossingError);
        // eps' of a 0.1-efficient tau^1 scheme never reaches a tau^3 scheme of efficiency 1e-3 inside (0, 1].
        CHECK_THROWS_AS(crossover_tau(input(1e-3, 1, 0, 1, 3), input(0.1, 1, 0, 1, 1)), NoCrossingError);
    }

    TEST_CASE("invalid inputs name the field") {
        try {
            efficiency(input(1, 0, 0));
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field().find("q_t") != std::string::npos);
        }
        CHECK_THROWS_AS(practical_efficiency(input(1, 1, 0, 0.0)), ConfigError);
        CHECK_THROWS_AS(practical_efficiency(input(1, 1, 0, 1.5)), ConfigError);
    }

    TEST_CASE("monotone in tau and in b_t") {
        double last = -1.0;
        for (int i = 1; i <= 100; ++i) {
            const double e = practical_efficiency(input(1, 1, 0, i / 100.0));
            CHECK(e > last);
            last = e;
        }
        last = 2.0;
        for (int bt = 0; bt <= 10; ++bt) {
            const double e = efficiency(input(1, 1, bt));
            CHECK(e < last);
            last = e;
        }
    }
}

TEST_SUITE("analysis.stats") {
    TEST_CASE("normal interval is p +- 3 sigma clipped to [0, 1]") {
        const auto i = binomial_interval(50, 100);
        CHECK(i.lo == doctest::Approx(0.5 - 3 * 0.05));
        CHECK(i.hi == doctest::Approx(0.5 + 3 * 0.05));
        const auto z = binomial_interval(0, 100);
        CHECK(z.lo == 0.0);
        CHECK(z.hi == 0.0);
        CHECK(binomial_interval(100, 100).hi == 1.0);
    }

    TEST_CASE("exact interval matches the closed form at the edges") {
        const double alpha = 2 * (1 - 0.5 * std::erfc(-3 / std::sqrt(2.0)));
        const auto i = binomial_interval(0, 10, CiMethod::ClopperPearson);
        CHECK(i.lo == 0.0);
        CHECK(i.hi == doctest::Approx(1 - std::pow(alpha / 2, 0.1)).epsilon(1e-9));
        const auto j = binomial_interval(10, 10, CiMethod::ClopperPearson);
        CHECK(j.hi == 1.0);
        CHECK(j.lo == doctest::Approx(std::pow(alpha / 2, 0.1)).epsilon(1e-9));
        const auto k = binomial_interval(3, 10, CiMethod::ClopperPearson);
        CHECK(k.lo < 0.3);
        CHECK(k.hi > 0.3);
    }

    TEST_CASE("a rigged Bernoulli source lands inside its interval in >= 99% of runs") {
        Rng rng(1234);
        for (auto method : {CiMethod::Normal, CiMethod::ClopperPearson}) {
            const double p = 0.3;
            const std::size_t n = 400;
            const std::size_t runs = 2000;
            std::size_t covered = 0;
            for (std::size_t m = 0; m < runs; ++m) {
                std::size_t k = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    k += rng.bernoulli(p) ? 1 : 0;
                }
                const auto ci = binomial_interval(k, n, method);
                covered += (ci.lo <= p && p <= ci.hi) ? 1 : 0;
            }
            CHECK(static_cast<double>(covered) / runs >= 0.99);
        }
    }

    TEST_CASE("ci method names") {
        CHECK(parse_ci_method("normal") == CiMethod::Normal);
        CHECK(parse_ci_method("clopper-pearson") == CiMethod::ClopperPearson);
        CHECK_THROWS_AS(parse_ci_method("wilson"), ConfigError);
    }
}

TEST_SUITE("analysis.experiment") {
    TEST_CASE("plan validation") {
        ExperimentPlan p;
        p.trials = 0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p.trials = 1;
        p.check_fraction = 1.5;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p.check_fraction = 0.2;
        p.forced_checks = {0};
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p.forced_checks = {101};
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p.forced_checks = {};
        p.config.family = Family::Kbb;
        p.attack = AttackKind::CnotAncilla;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }

    TEST_CASE("schedules honour forced checks and the check fraction") {
        ExperimentPlan p;
        p.config.rounds = 2000;
        p.check_fraction = 0.25;
        p.forced_checks = {7, 9};
        Rng alice(5);
        const auto s = make_schedule(p, alice);
        std::size_t checks = 0;
        for (const auto& r : s) {
            checks += r.kind == RoundKind::Check ? 1 : 0;
            CHECK((r.kind == RoundKind::Check) == (r.mode != RoundMode::Message));
        }
        CHECK(s[6].kind == RoundKind::Check);
        CHECK(s[8].kind == RoundKind::Check);
        CHECK(std::abs(checks / 2000.0 - 0.25) <= 3 * oracle::binomial_sigma(0.25, 2000));
    }

    TEST_CASE("exact mode counts give thirds in the check variants") {
        ExperimentPlan p;
        p.config.family = Family::ZlgCheckA;
        p.config.rounds = 99;
        p.config.exact_mode_counts = true;
        Rng alice(8);
        const auto s = make_schedule(p, alice);
        std::array<std::size_t, 3> counts{};
        for (const auto& r : s) {
            ++counts[static_cast<std::size_t>(r.mode)];
        }
        CHECK(counts == std::array<std::size_t, 3>{33, 33, 33});
    }

    TEST_CASE("passive zlg: no errors and no detection") {
        ExperimentPlan p;
        p.trials = 100;
        p.config.rounds = 100;
        const auto r = run_experiment(p);
        CHECK(r.qber == 0.0);
        CHECK(r.detection_rate == 0.0);
        CHECK(r.per_round_qber.size() == 100);
        CHECK_FALSE(r.mean_rounds_to_detection.has_value());
    }

    TEST_CASE("reports are byte-identical across runs and thread counts") {
        ExperimentPlan p;
        p.config.family = Family::Bk;
        p.attack = AttackKind::FAttack;
        p.trials = 60;
        p.config.rounds = 12;
        p.seed = 4242;
        const auto a = report_json(run_experiment(p)).dump();
        const auto b = report_json(run_experiment(p)).dump();
        p.jobs = 4;
        const auto c = report_json(run_experiment(p)).dump();
        CHECK(a == b);
        CHECK(a == c);
        p.seed = 4243;
        CHECK(report_json(run_experiment(p)).dump() != a);
    }

    TEST_CASE("trial subsets are reproducible on their own") {
        ExperimentPlan p;
        p.attack = AttackKind::CnotAncilla;
        p.trials = 20;
        p.config.rounds = 10;
        const auto all = run_experiment(p);
        const auto t7 = run_trial(p, 7);
        REQUIRE(t7.outcomes.size() == all.details[7].outcomes.size());
        for (std::size_t i = 0; i < t7.outcomes.size(); ++i) {
            CHECK(t7.outcomes[i].recovered == all.details[7].outcomes[i].recovered);
            CHECK(t7.attack.raw[i] == all.details[7].attack.raw[i]);
        }
    }

    TEST_CASE("transcripts are kept on request") {
        ExperimentPlan p;
        p.config.family = Family::Bk;
        p.config.rounds = 4;
        p.trials = 2;
        p.keep_transcripts = true;
        p.forced_checks = {2};
        const auto r = run_experiment(p);
        REQUIRE(r.details[0].transcript.has_value());
        CHECK(r.details[0].transcript->rounds().size() == 4);
    }

    TEST_CASE("detection curve: passive is flat zero") {
        ExperimentPlan p;
        p.trials = 50;
        for (const auto& [n, d] : detection_curve(p, {0, 1, 3})) {
            CHECK(d == 0.0);
        }
    }

    TEST_CASE("detection curve: cnot at pi/4 follows 1 - 2^-n") {
        ExperimentPlan p;
        p.attack = AttackKind::CnotAncilla;
        p.trials = 3000;
        for (const auto& [n, d] : detection_curve(p, {0, 1, 2, 3, 4})) {
            const double expect = 1.0 - std::pow(0.5, static_cast<double>(n));
            CHECK(std::abs(d - expect) <= 3 * oracle::binomial_sigma(expect, p.trials) + 1e-12);
        }
    }

    TEST_CASE("detection curve: relay with a round-2 check is caught half the time") {
        ExperimentPlan p;
        p.attack = AttackKind::FAttack;
        p.trials = 2000;
        const auto curve = detection_curve(p, {1});
        CHECK(std::abs(curve[0].second - 0.5) <= 3 * oracle::binomial_sigma(0.5, p.trials));
    }
}

TEST_SUITE("analysis.verify") {
    TEST_CASE("every check passes at the default and a larger configuration") {
        VerifyOptions o;
        for (const auto& r : run_verify(o)) {
            CHECK_MESSAGE(r.passed, r.name);
        }
        o.dim = 5;
        o.hd_dim = 8;
        o.hd_carrier = 4;
        for (const auto& r : run_verify(o)) {
            CHECK_MESSAGE(r.passed, r.name);
        }
    }

    TEST_CASE("printed coefficient-2 forms are reported, not asserted") {
        VerifyOptions o;
        o.only = "zlg-hd-measured-hadamard";
        const auto r = run_verify(o);
        REQUIRE(r.size() == 1);
        CHECK(r[0].passed);
        REQUIRE(r[0].notes.size() == 2);
        CHECK(r[0].notes[0].deviation < kAlgebraTol);
        CHECK(r[0].notes[1].deviation > 0.01);
    }

    TEST_CASE("bad options") {
        VerifyOptions o;
        o.only = "no-such-check";
        CHECK_THROWS_AS(run_verify(o), ConfigError);
        o.only.reset();
        o.hd_dim = 6;
        o.hd_carrier = 4;
        CHECK_THROWS_AS(run_verify(o), ConfigError);
    }
}
