#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = qkdlab::cli::main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
    std::ifstream in(std::string(QKDLAB_GOLDEN_DIR) + "/" + name, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qkdlab_test_" + name);
}

} // namespace

TEST_SUITE("cli.golden") {
    TEST_CASE("output matches the recorded files byte for byte") {
        const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
            {"efficiency.txt", {"efficiency"}},
            {"efficiency_tau.csv", {"efficiency", "--tau", "0.9", "1", "--format", "csv"}},
            {"efficiency.json", {"efficiency", "--format", "json"}},
            {"verify_nonorth.txt", {"verify", "--only", "nonorth-encode", "--alpha", "0.6", "--beta", "0.8"}},
            {"run_bk_passive.json",
             {"run", "--protocol", "bk", "--attack", "passive", "--trials", "10", "--rounds", "100", "--seed", "7"}},
            {"run_zlg_f_attack.json",
             {"run", "--protocol", "zlg", "--attack", "f-attack", "--trials", "50", "--rounds", "10", "--seed", "7"}},
            {"run_kbb_table.txt",
             {"run", "--protocol", "kbb", "--dim", "3", "--attack", "f-attack", "--trials", "40", "--rounds", "8",
              "--seed", "1", "--format", "table"}},
            {"run_cnot_qber.csv",
             {"run", "--protocol", "zlg", "--attack", "cnot-ancilla", "--trials", "200", "--rounds", "5", "--seed", "3",
              "--format", "csv"}},
            {"curves_cnot.csv",
             {"curves", "--attack", "cnot-ancilla", "--trials", "400", "--max-checks", "3", "--seed", "5", "--format",
              "csv"}},
        };
        for (const auto& [file, args] : cases) {
            CAPTURE(file);
            const auto r = run(args);
            CHECK(r.code == 0);
            CHECK(r.out == golden(file));
        }
    }
}

TEST_SUITE("cli.behaviour") {
    TEST_CASE("efficiency output carries the crossovers and the 0.9 row") {
        const auto r = run({"efficiency", "--tau", "0.9", "1", "--format", "json"});
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["schemes"][0]["epsilon_prime"][0]["epsilon_prime"].get<double>() == doctest::Approx(0.729));
        CHECK(j["schemes"][0]["epsilon_prime"][1]["epsilon_prime"].get<double>() == doctest::Approx(1.0));
        CHECK(j["schemes"][1]["crossover_tau"].get<double>() == doctest::Approx(0.4082).epsilon(1e-4));
        CHECK(j["schemes"][2]["crossover_tau"].get<double>() == doctest::Approx(0.7071).epsilon(1e-4));
    }

    TEST_CASE("exit codes") {
        CHECK(run({}).code == qkdlab::cli::kConfigError);
        CHECK(run({"run", "--protocol", "nope"}).code == qkdlab::cli::kConfigError);
        CHECK(run({"run", "--protocol", "bk", "--attack", "cnot-ancilla"}).code == qkdlab::cli::kConfigError);
        CHECK(run({"run", "--trials", "0"}).code == qkdlab::cli::kConfigError);
        CHECK(run({"run", "--check-fraction", "2"}).code == qkdlab::cli::kConfigError);
        CHECK(run({"run", "--format", "xml", "--trials", "1", "--rounds", "1"}).code == qkdlab::cli::kConfigError);
        CHECK(run({"run", "--config", "/nonexistent/plan.json"}).code == qkdlab::cli::kIoError);
        CHECK(run({"run", "--trials", "1", "--rounds", "1", "--out", "/nonexistent/dir/x.json"}).code ==
              qkdlab::cli::kIoError);
        CHECK(run({"verify", "--only", "no-such-check"}).code == qkdlab::cli::kConfigError);
        CHECK(run({"verify"}).code == qkdlab::cli::kOk);
        CHECK(run({"--help"}).code == qkdlab::cli::kOk);
    }

    TEST_CASE("config errors name the field and the constraint") {
        const auto r = run({"run", "--protocol", "kbb", "--key-dim", "3", "--carrier-dim", "2"});
        CHECK(r.code == qkdlab::cli::kConfigError);
        CHECK(r.err.find("carrier_dim") != std::string::npos);
        const auto t = run({"run", "--trials", "0"});
        CHECK(t.err.find("trials: must be >= 1") != std::string::npos);
    }

    TEST_CASE("config file values apply and flags override them") {
        const auto path = temp_file("plan.json");
        {
            std::ofstream f(path);
            f << R"({"protocol": "kbb", "dim": 3, "attack": "f-attack", "trials": 20, "rounds": 6, "seed": 11})";
        }
        const auto a = run({"run", "--config", path.string()});
        REQUIRE(a.code == 0);
        const auto ja = nlohmann::json::parse(a.out);
        CHECK(ja["config"]["protocol"] == "kbb");
        CHECK(ja["config"]["key_dim"] == 3);
        CHECK(ja["config"]["carrier_dim"] == 3);
        CHECK(ja["config"]["seed"] == 11);
        const auto b = run({"run", "--config", path.string(), "--trials", "5", "--seed", "12"});
        const auto jb = nlohmann::json::parse(b.out);
        CHECK(jb["config"]["trials"] == 5);
        CHECK(jb["config"]["seed"] == 12);
        CHECK(jb["config"]["rounds"] == 6);

        {
            std::ofstream f(path);
            f << R"({"protocol": "zlg", "colour": "blue"})";
        }
        const auto c = run({"run", "--config", path.string()});
        CHECK(c.code == qkdlab::cli::kConfigError);
        CHECK(c.err.find("colour") != std::string::npos);
        std::filesystem::remove(path);
    }

    TEST_CASE("seed defaults to the environment override, then the constant") {
        ::unsetenv("QKDLAB_SEED");
        auto j = nlohmann::json::parse(run({"run", "--trials", "1", "--rounds", "1"}).out);
        CHECK(j["config"]["seed"] == 20240611);
        ::setenv("QKDLAB_SEED", "31337", 1);
        j = nlohmann::json::parse(run({"run", "--trials", "1", "--rounds", "1"}).out);
        CHECK(j["config"]["seed"] == 31337);
        ::setenv("QKDLAB_SEED", "abc", 1);
        CHECK(run({"run", "--trials", "1", "--rounds", "1"}).code == qkdlab::cli::kConfigError);
        ::unsetenv("QKDLAB_SEED");
    }

    TEST_CASE("--out writes the same bytes as stdout and --jobs does not change them") {
        const std::vector<std::string> base = {"run", "--protocol", "bk", "--attack", "f-attack", "--trials", "40",
                                               "--rounds", "8", "--seed", "2"};
        const auto serial = run(base);
        auto args = base;
        args.insert(args.end(), {"--jobs", "4"});
        const auto parallel = run(args);
        CHECK(serial.out == parallel.out);
        const auto path = temp_file("report.json");
        args.insert(args.end(), {"--out", path.string()});
        REQUIRE(run(args).code == 0);
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == serial.out);
        std::filesystem::remove(path);
    }
}
