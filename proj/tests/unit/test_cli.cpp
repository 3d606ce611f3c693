#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mtip/io/cli.hpp"
#include "oracles.hpp"

using namespace mtip;
using namespace mtip::io;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "mtip");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

/// path -> sha256 for every file listed in the manifest.
std::map<std::string, std::string> digests(const std::filesystem::path& dir) {
    const auto m = read_json(dir / "manifest.json");
    std::map<std::string, std::string> out;
    for (const auto& f : m["files"]) out[f["path"]] = f["sha256"];
    return out;
}

// Small versions of every experiment; each finishes in seconds.
constexpr const char* kSmallConfig = R"({
    "seed": 11,
    "simulate": {"t_end": 300, "eps": 0.001},
    "hysteresis": {"c_min": 2.96, "c_max": 2.97, "rate": 2e-5, "settle": 300,
                   "checkpoint_spacing": 250, "seeds": [1, 2]},
    "tongue": {"c_grid": [2.96, 2.97, 2.98], "rate": 1e-4, "settle": 300, "eps": 0.001},
    "intermittency": {"dt": 0.001, "t_unperturbed": 400, "t_total": 1000, "seeds": [1, 2, 3]},
    "multistability": {"trials": 10, "explore": 200, "settle": 200}
})";

}  // namespace

TEST_CASE("invalid input exits 1 without creating outputs") {
    const auto dir = oracle::temp_dir("cli_invalid");
    const auto out = (dir / "out").string();

    auto r = run({"simulate", "--config", (dir / "missing.json").string(), "--out", out});
    CHECK(r.code == 1);
    CHECK(r.err.find("missing.json") != std::string::npos);

    for (const char* text : {R"({"eps": -1})", R"({"foo": 1})", R"({"dt": 2})", "{\n  \"c\": }"}) {
        r = run({"simulate", "--config", write_file(dir / "bad.json", text).string(), "--out", out});
        INFO(text);
        CHECK(r.code == 1);
        CHECK_FALSE(r.err.empty());
        CHECK_FALSE(std::filesystem::exists(out));
    }
    r = run({"simulate", "--config", write_file(dir / "eps.json", R"({"eps": -1})").string()});
    CHECK(r.err.find("'eps'") != std::string::npos);

    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"simulate", "--threads", "0"}).code == 1);
}

TEST_CASE("numerical blow-up exits 2 and removes partial outputs") {
    const auto dir = oracle::temp_dir("cli_blowup");
    const auto out = dir / "out";
    const auto cfg = write_file(dir / "c.json", R"({"kappa": 1e9, "simulate": {"c": 1e9, "t_end": 50}})");
    const auto r = run({"simulate", "--config", cfg.string(), "--out", out.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("numerical") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(out / "trajectory.csv"));
    CHECK_FALSE(std::filesystem::exists(out / "manifest.json"));
}

TEST_CASE("simulate writes trajectory, envelope and manifest") {
    const auto dir = oracle::temp_dir("cli_sim");
    const auto cfg = write_file(dir / "c.json", kSmallConfig);
    const auto r = run({"simulate", "--config", cfg.string(), "--out", (dir / "o").string()});
    REQUIRE(r.code == 0);
    const auto summary = json::parse(r.out);
    CHECK(summary["samples"] == 30001);

    const auto m = read_json(dir / "o" / "manifest.json");
    CHECK(m["tool"] == "mtip");
    CHECK(m["command"] == "simulate");
    CHECK(m["tau_eff"].get<double>() == Catch::Approx(0.953));
    CHECK(m["config"]["seed"] == 11);
    CHECK(m["files"].size() == 2);
    for (const auto& f : m["files"])
        CHECK(f["sha256"] == sha256_file(dir / "o" / f["path"].get<std::string>()));
    CHECK(sha256_file(dir / "o" / "trajectory.csv").size() == 64);
}

TEST_CASE("every experiment is byte-reproducible and independent of --threads") {
    const auto dir = oracle::temp_dir("cli_repro");
    const auto cfg = write_file(dir / "c.json", kSmallConfig).string();
    for (const char* kind : {"simulate", "hysteresis", "tongue", "intermittency", "multistability"}) {
        INFO(kind);
        const auto a = dir / (std::string(kind) + "_a");
        const auto b = dir / (std::string(kind) + "_b");
        const auto c = dir / (std::string(kind) + "_c");
        REQUIRE(run({kind, "--config", cfg, "--out", a.string()}).code == 0);
        REQUIRE(run({kind, "--config", cfg, "--out", b.string()}).code == 0);
        REQUIRE(run({kind, "--config", cfg, "--out", c.string(), "--threads", "3"}).code == 0);
        const auto da = digests(a);
        CHECK_FALSE(da.empty());
        CHECK(da == digests(b));
        CHECK(da == digests(c));
    }
}

TEST_CASE("--seed changes noisy output") {
    const auto dir = oracle::temp_dir("cli_seed");
    const auto cfg = write_file(dir / "c.json", kSmallConfig).string();
    REQUIRE(run({"simulate", "--config", cfg, "--out", (dir / "a").string()}).code == 0);
    REQUIRE(run({"simulate", "--config", cfg, "--out", (dir / "b").string(), "--seed", "12"}).code == 0);
    CHECK(digests(dir / "a") != digests(dir / "b"));
}

TEST_CASE("hysteresis with several seeds writes one directory per seed") {
    const auto dir = oracle::temp_dir("cli_hyst");
    const auto cfg = write_file(dir / "c.json", kSmallConfig).string();
    REQUIRE(run({"hysteresis", "--config", cfg, "--out", (dir / "o").string()}).code == 0);
    for (const char* f : {"sweep_up.csv", "sweep_down.csv", "events.csv", "events_down.csv"}) {
        CHECK(std::filesystem::exists(dir / "o" / "seed_1" / f));
        CHECK(std::filesystem::exists(dir / "o" / "seed_2" / f));
    }
    const auto up = read_csv(dir / "o" / "seed_1" / "sweep_up.csv");
    CHECK(up.header == schema::sweep);
    CHECK_FALSE(up.rows.empty());
}

#ifdef MTIP_CLI_PATH
TEST_CASE("the installed executable reports exit codes") {
    const auto dir = oracle::temp_dir("cli_exe");
    const std::string exe = MTIP_CLI_PATH;
    const auto bad = write_file(dir / "bad.json", R"({"eps": -1})").string();
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status(exe + " --version") == 0);
    CHECK(status(exe + " simulate --config " + bad) == 1);
    const auto cfg = write_file(dir / "c.json", kSmallConfig).string();
    CHECK(status(exe + " simulate --config " + cfg + " --out " + (dir / "o").string()) == 0);
    CHECK(std::filesystem::exists(dir / "o" / "manifest.json"));
}
#endif
