#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "adept/scripted_backend.hpp"
#include "adept/text.hpp"
#include "support/test_support.hpp"

using namespace adept;

namespace {

const std::string kCli = ADEPT_CLI_PATH;
const std::filesystem::path kFixtures = std::filesystem::path(ADEPT_SOURCE_DIR) / "fixtures";

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "env -u ADEPT_API_KEY") {
    testing::TempDir dir("cli-io");
    const auto out_path = dir.path() / "out.txt";
    const auto err_path = dir.path() / "err.txt";
    const std::string command = env_prefix + " " + kCli + " " + args + " > " +
                                out_path.string() + " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

std::string debate1_args(const std::filesystem::path& out_dir) {
    return "run --scenario " + (kFixtures / "scenario/options.yaml").string() + " --personas " +
           (kFixtures / "personas_set_a").string() + " --model-config " +
           (kFixtures / "model_config/scripted.yaml").string() + " --script " +
           (kFixtures / "scripts/debate1.script.json").string() + " --out " + out_dir.string();
}

std::string debate2_args(const std::filesystem::path& out_dir) {
    return "run --scenario " + (kFixtures / "scenario/options.yaml").string() + " --personas " +
           (kFixtures / "personas_set_b").string() + " --model-config " +
           (kFixtures / "model_config/scripted.yaml").string() + " --script " +
           (kFixtures / "scripts/debate2.script.json").string() + " --out " + out_dir.string();
}

std::filesystem::path single_trace_in(const std::filesystem::path& dir) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (contains(entry.path().filename().string(), ".trace.json")) return entry.path();
    }
    FAIL("no trace file in output directory");
    return {};
}

} // namespace

TEST_CASE("run produces trace, report and the tally on stdout") {
    testing::TempDir out("run-ok");
    const CliResult result = run_cli(debate1_args(out.path()));
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "Option 2: 4 (majority)"));
    CHECK(contains(result.err, "wrote "));

    int traces = 0;
    int reports = 0;
    for (const auto& entry : std::filesystem::directory_iterator(out.path())) {
        const auto name = entry.path().filename().string();
        traces += contains(name, ".trace.json");
        reports += contains(name, ".report.txt");
    }
    CHECK(traces == 1);
    CHECK(reports == 1);
}

TEST_CASE("run with a missing persona directory exits 1 naming the path") {
    testing::TempDir out("run-missing");
    const std::string args = "run --scenario " + (kFixtures / "scenario/options.yaml").string() +
                             " --personas /no/such/personas-dir --model-config " +
                             (kFixtures / "model_config/scripted.yaml").string() + " --script " +
                             (kFixtures / "scripts/debate1.script.json").string();
    const CliResult result = run_cli(args);
    CHECK(result.exit_code == 1);
    CHECK(contains(result.err, "/no/such/personas-dir"));
}

TEST_CASE("live backend without ADEPT_API_KEY fails fast with exit 1") {
    testing::TempDir dir("live-nokey");
    const auto config_path = dir.path() / "live.yaml";
    std::ofstream(config_path) << "backend_kind: live\nmodel_id: m\n"
                               << "endpoint_url: http://127.0.0.1:1/v1/chat/completions\n";
    const std::string args = "run --scenario " + (kFixtures / "scenario/options.yaml").string() +
                             " --personas " + (kFixtures / "personas_set_a").string() +
                             " --model-config " + config_path.string();
    const CliResult result = run_cli(args, "env -u ADEPT_API_KEY");
    CHECK(result.exit_code == 1);
    CHECK(contains(result.err, "ADEPT_API_KEY"));
}

TEST_CASE("scripted backend without --script exits 1") {
    const std::string args = "run --scenario " + (kFixtures / "scenario/options.yaml").string() +
                             " --personas " + (kFixtures / "personas_set_a").string() +
                             " --model-config " +
                             (kFixtures / "model_config/scripted.yaml").string();
    const CliResult result = run_cli(args);
    CHECK(result.exit_code == 1);
    CHECK(contains(result.err, "--script"));
}

TEST_CASE("replay verifies an untampered trace and rejects a tampered one") {
    testing::TempDir out("replay");
    REQUIRE(run_cli(debate1_args(out.path())).exit_code == 0);
    const auto trace_path = single_trace_in(out.path());

    testing::TempDir replay_out("replay-out");
    const CliResult ok =
        run_cli("replay " + trace_path.string() + " --out " + replay_out.path().string());
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.out, "original: "));
    CHECK(contains(ok.out, "replayed: "));

    // Stdout carries two equal digests.
    std::istringstream lines(ok.out);
    std::string original_line;
    std::string replayed_line;
    std::getline(lines, original_line);
    std::getline(lines, replayed_line);
    CHECK(original_line.substr(10) == replayed_line.substr(10));

    SUBCASE("edited response text exits 4") {
        std::string text = read_file(trace_path);
        const std::string needle = "expected-survivor calculation";
        const auto pos = text.find(needle);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, needle.size(), "EXPECTED-survivor calculation");
        std::ofstream(trace_path) << text;
        const CliResult bad = run_cli("replay " + trace_path.string() + " --out " +
                                      replay_out.path().string());
        CHECK(bad.exit_code == 4);
    }
}

TEST_CASE("replay of an unreadable path exits 3") {
    const CliResult result = run_cli("replay /no/such/file.trace.json");
    CHECK(result.exit_code == 3);
}

TEST_CASE("run accepts a prior trace as the script source") {
    testing::TempDir out("rerun");
    REQUIRE(run_cli(debate1_args(out.path())).exit_code == 0);
    const auto trace_path = single_trace_in(out.path());

    testing::TempDir out2("rerun-2");
    const std::string args = "run --scenario " + (kFixtures / "scenario/options.yaml").string() +
                             " --personas " + (kFixtures / "personas_set_a").string() +
                             " --model-config " +
                             (kFixtures / "model_config/scripted.yaml").string() + " --script " +
                             trace_path.string() + " --out " + out2.path().string();
    const CliResult result = run_cli(args);
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "Option 2: 4 (majority)"));
}

TEST_CASE("tally prints the table and maps corrupt files to exit 3") {
    testing::TempDir out("tally");
    REQUIRE(run_cli(debate1_args(out.path())).exit_code == 0);
    const auto trace_path = single_trace_in(out.path());

    const CliResult result = run_cli("tally " + trace_path.string());
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "Option 2: 4 (majority)"));

    std::ofstream(trace_path) << "{ corrupt";
    CHECK(run_cli("tally " + trace_path.string()).exit_code == 3);
}

TEST_CASE("compare reports the published shift summary") {
    testing::TempDir out_a("cmp-a");
    testing::TempDir out_b("cmp-b");
    REQUIRE(run_cli(debate1_args(out_a.path())).exit_code == 0);
    REQUIRE(run_cli(debate2_args(out_b.path())).exit_code == 0);
    const auto trace_a = single_trace_in(out_a.path());
    const auto trace_b = single_trace_in(out_b.path());

    testing::TempDir cmp("cmp-out");
    const std::string base = (cmp.path() / "panel_swap").string();
    const CliResult result =
        run_cli("compare " + trace_a.string() + " " + trace_b.string() + " --out " + base);
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "3 vote shifts among 4 retained personas"));
    CHECK(std::filesystem::exists(base + ".txt"));
    CHECK(std::filesystem::exists(base + ".json"));
    CHECK(contains(read_file(base + ".txt"), "Option 2 | 4 (majority) | 4 (majority)"));

    SUBCASE("a trace compared with itself has zero shifts") {
        const CliResult self = run_cli("compare " + trace_a.string() + " " + trace_a.string() +
                                       " --out " + base + "_self");
        CHECK(self.exit_code == 0);
        CHECK(contains(self.out, "0 vote shifts among 6 retained personas"));
    }
}

TEST_CASE("compare rejects traces of different scenarios with exit 1") {
    testing::TempDir out_a("mismatch-a");
    REQUIRE(run_cli(debate1_args(out_a.path())).exit_code == 0);
    const auto trace_a = single_trace_in(out_a.path());

    // A tiny two-option debate, run through the CLI for a second trace.
    testing::TempDir mini("mini");
    const auto scenario_path = mini.path() / "scenario.yaml";
    std::ofstream(scenario_path) << "title: Mini\nnarrative: Pick one.\noptions:\n"
                                 << "  - {id: 1, label: L1, description: D1}\n"
                                 << "  - {id: 2, label: L2, description: D2}\n";
    const auto personas_dir = mini.path() / "personas";
    std::filesystem::create_directories(personas_dir);
    for (const char* name : {"Alpha", "Beta"}) {
        std::ofstream(personas_dir / (std::string(name) + ".yaml"))
            << "name: " << name << "\nprinciple: P\napproach: [a]\ncore_questions: [q]\n"
            << "decision_criteria: [d]\n";
    }
    Script script;
    script.personas = {"Alpha", "Beta"};
    for (const char* name : {"Alpha", "Beta"}) {
        script.entries.push_back({name, Phase::opening, std::string(name) + " opens", {}});
        script.entries.push_back({name, Phase::rebuttal, std::string(name) + " rebuts", {}});
        script.entries.push_back({name, Phase::ballot, "choice <vote>1</vote>", {}});
    }
    script.entries.push_back({kSummariserName, Phase::summary, "mini summary", {}});
    const auto script_path = mini.path() / "script.json";
    std::ofstream(script_path) << script_to_json(script);

    testing::TempDir out_mini("mini-out");
    const std::string mini_args =
        "run --scenario " + scenario_path.string() + " --personas " + personas_dir.string() +
        " --model-config " + (kFixtures / "model_config/scripted.yaml").string() + " --script " +
        script_path.string() + " --out " + out_mini.path().string();
    REQUIRE(run_cli(mini_args).exit_code == 0);
    const auto trace_mini = single_trace_in(out_mini.path());

    const CliResult result = run_cli("compare " + trace_a.string() + " " + trace_mini.string() +
                                     " --out " + (mini.path() / "cmp").string());
    CHECK(result.exit_code == 1);
    CHECK(contains(result.err, "different scenarios"));
}

TEST_CASE("validate approves the eight shipped personas") {
    const CliResult result = run_cli("validate " + (kFixtures / "personas").string());
    CHECK(result.exit_code == 0);
    std::size_t ok_lines = 0;
    std::istringstream lines(result.out);
    std::string line;
    while (std::getline(lines, line)) ok_lines += contains(line, ": OK");
    CHECK(ok_lines == 8);
}

TEST_CASE("validate itemizes persona errors and exits 1") {
    testing::TempDir dir("validate-bad");
    std::ofstream(dir.path() / "good.yaml")
        << "name: Fine\nprinciple: P\napproach: [a]\ncore_questions: [q]\n"
        << "decision_criteria: [d]\n";
    std::ofstream(dir.path() / "bad.yaml")
        << "name: Broken\nprinciple: P\napproach: [a]\ncore_questions: [q]\n";
    const CliResult result = run_cli("validate " + dir.path().string());
    CHECK(result.exit_code == 1);
    CHECK(contains(result.out, "good.yaml: OK"));
    CHECK(contains(result.out, "decision_criteria"));
}

TEST_CASE("validate understands scenario files") {
    const CliResult good =
        run_cli("validate " + (kFixtures / "scenario/options.yaml").string());
    CHECK(good.exit_code == 0);
    CHECK(contains(good.out, "OK (scenario)"));

    testing::TempDir dir("validate-scenario");
    const auto path = dir.path() / "dup.yaml";
    std::ofstream(path) << "title: T\nnarrative: N\noptions:\n"
                        << "  - {id: 1, label: A, description: D}\n"
                        << "  - {id: 1, label: B, description: D}\n";
    const CliResult bad = run_cli("validate " + path.string());
    CHECK(bad.exit_code == 1);
    CHECK(contains(bad.out, "duplicate id"));
}
