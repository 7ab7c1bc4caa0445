#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>

#include <json.hpp>

#include "pcblint/scoring.hpp"
#include "pcblint/waivers.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_bin() {
    const char* env = std::getenv("PCBLINT_BIN");
    REQUIRE_MESSAGE(env != nullptr, "PCBLINT_BIN must point at the pcblint binary");
    return env;
}

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    std::string cmd = cli_bin() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        result.output.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path()
               / ("pcblint-cli-" + std::to_string(::getpid()) + "-"
                  + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string fixture_path(const std::string& name) {
    return testsupport::fixtures_dir() + "/" + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << content;
}

} // namespace

TEST_CASE("cli quick: clean fixture exits 0, warning exits 1, bad XML exits 2") {
    auto clean = run_cli("quick " + fixture_path("blinky.sch") + " --lab H3");
    CHECK(clean.exit_code == 0);
    CHECK(clean.output.find("active findings: 0") != std::string::npos);

    TempDir tmp;
    write_file(tmp.file("warn.sch"),
               testsupport::with_value_removed(testsupport::blinky_sch(), "R1").render());
    auto warn = run_cli("quick " + tmp.file("warn.sch") + " --lab H3");
    CHECK(warn.exit_code == 1);
    CHECK(warn.output.find("S2-missing-value") != std::string::npos);

    write_file(tmp.file("bad.sch"), "this is not XML");
    auto bad = run_cli("quick " + tmp.file("bad.sch") + " --lab H3");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli quick: repeated runs leave no state behind") {
    TempDir tmp;
    write_file(tmp.file("a.sch"), testsupport::blinky_sch().render());
    std::set<std::string> before;
    for (const auto& e : fs::directory_iterator(tmp.path))
        before.insert(e.path().filename().string());
    auto first = run_cli("quick " + tmp.file("a.sch") + " --lab H3");
    auto second = run_cli("quick " + tmp.file("a.sch") + " --lab H3");
    CHECK(first.output == second.output);
    std::set<std::string> after;
    for (const auto& e : fs::directory_iterator(tmp.path))
        after.insert(e.path().filename().string());
    CHECK(before == after);
}

TEST_CASE("cli full: charges the ledger and reconciles waivers") {
    TempDir tmp;
    std::string ledger = tmp.file("ledger.json");

    SUBCASE("clean run records a passed full check") {
        auto r = run_cli("full " + fixture_path("blinky.sch") + " " + fixture_path("blinky.brd")
                         + " --lab H4 --ledger " + ledger);
        CHECK(r.exit_code == 0);
        auto parsed = pcblint::load_ledger_file(ledger, "");
        REQUIRE(parsed.events.size() == 1);
        CHECK(parsed.events[0].kind == pcblint::ReviewKind::FullCheck);
        CHECK(parsed.events[0].outcome == pcblint::ReviewOutcome::Passed);
    }
    SUBCASE("active error records a failed full check and exits 1") {
        write_file(tmp.file("broken.sch"),
                   testsupport::with_led_polarity_swapped(testsupport::blinky_sch()).render());
        auto r = run_cli("full " + tmp.file("broken.sch") + " --lab H3 --ledger " + ledger);
        CHECK(r.exit_code == 1);
        auto parsed = pcblint::load_ledger_file(ledger, "");
        REQUIRE(parsed.events.size() == 1);
        CHECK(parsed.events[0].outcome == pcblint::ReviewOutcome::Failed);
    }
    SUBCASE("no --ledger, no side effects") {
        auto r = run_cli("full " + fixture_path("blinky.sch") + " --lab H3");
        CHECK(r.exit_code == 0);
        CHECK_FALSE(fs::exists(ledger));
    }
    SUBCASE("an approved waiver silences the finding") {
        write_file(tmp.file("warn.sch"),
                   testsupport::with_value_removed(testsupport::blinky_sch(), "R1").render());
        write_file(tmp.file("waivers.txt"),
                   "S2-missing-value | part:R1 | approved | chosen at assembly | ok\n");
        auto r = run_cli("full " + tmp.file("warn.sch") + " --lab H3 --waivers "
                         + tmp.file("waivers.txt"));
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("waived: 1") != std::string::npos);
        CHECK(r.output.find("ready for human review: yes") != std::string::npos);
    }
    SUBCASE("a parse error does not charge the ledger") {
        write_file(tmp.file("bad.sch"), "<eagle><drawing></drawing></eagle>");
        auto r = run_cli("full " + tmp.file("bad.sch") + " --lab H3 --ledger " + ledger);
        CHECK(r.exit_code == 2);
        CHECK_FALSE(fs::exists(ledger));
    }
}

TEST_CASE("cli review: waiver decisions and charging") {
    TempDir tmp;
    std::string waivers = tmp.file("waivers.txt");
    std::string ledger = tmp.file("ledger.json");
    write_file(waivers, "S2-missing-value | part:R1 | proposed | it is fine |\n");

    auto ok = run_cli("review --waivers " + waivers
                      + " S2-missing-value part:R1 approve --note looks-good --ledger " + ledger
                      + " --charge passed");
    CHECK(ok.exit_code == 0);
    auto reloaded = pcblint::load_waiver_file(waivers);
    REQUIRE(reloaded.size() == 1);
    CHECK(reloaded[0].state == pcblint::WaiverState::Approved);
    CHECK(reloaded[0].reviewer_note == "looks-good");
    auto parsed = pcblint::load_ledger_file(ledger, "");
    REQUIRE(parsed.events.size() == 1);
    CHECK(parsed.events[0].kind == pcblint::ReviewKind::HumanReview);
    CHECK(parsed.events[0].outcome == pcblint::ReviewOutcome::Passed);

    auto again = run_cli("review --waivers " + waivers + " S2-missing-value part:R1 approve");
    CHECK(again.exit_code == 2);

    auto missing = run_cli("review --waivers " + waivers + " S9-bogus part:R1 approve");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("cli score: renders the pay-for-review arithmetic") {
    TempDir tmp;
    std::string path = tmp.file("ledger.json");

    pcblint::ReviewLedger ledger;
    ledger.lab = "H3";
    pcblint::record_event(ledger, pcblint::ReviewKind::FullCheck,
                          pcblint::ReviewOutcome::Passed, "2026-08-10T00:00:00Z");
    pcblint::record_event(ledger, pcblint::ReviewKind::HumanReview,
                          pcblint::ReviewOutcome::Passed, "2026-08-10T00:01:00Z");
    pcblint::save_ledger_file(path, ledger);
    auto best = run_cli("score --ledger " + path);
    CHECK(best.exit_code == 0);
    CHECK(best.output.find("11.0 / 10") != std::string::npos);

    pcblint::record_event(ledger, pcblint::ReviewKind::FullCheck,
                          pcblint::ReviewOutcome::Failed, "2026-08-10T00:02:00Z");
    pcblint::record_event(ledger, pcblint::ReviewKind::FullCheck,
                          pcblint::ReviewOutcome::Failed, "2026-08-10T00:03:00Z");
    pcblint::save_ledger_file(path, ledger);
    auto four = run_cli("score --ledger " + path);
    CHECK(four.output.find("10.0 / 10") != std::string::npos);

    pcblint::ReviewLedger incomplete;
    incomplete.lab = "H3";
    pcblint::record_event(incomplete, pcblint::ReviewKind::FullCheck,
                          pcblint::ReviewOutcome::Failed, "2026-08-10T00:00:00Z");
    pcblint::save_ledger_file(path, incomplete);
    auto inc = run_cli("score --ledger " + path);
    CHECK(inc.exit_code == 0);
    CHECK(inc.output.find("incomplete") != std::string::npos);
}

TEST_CASE("cli bom: writes the golden CSV") {
    TempDir tmp;
    fs::copy_file(fixture_path("blinky.sch"), tmp.file("blinky.sch"));
    fs::copy_file(fixture_path("blinky.sch"), tmp.file("blinky2.sch"));
    auto r = run_cli("bom " + tmp.file("blinky.sch") + " " + tmp.file("blinky2.sch") + " --out "
                     + tmp.file("bom.csv"));
    CHECK(r.exit_code == 0);
    std::ifstream in(tmp.file("bom.csv"), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == testsupport::read_fixture("bom_blinky_x2.golden.csv"));
}

TEST_CASE("cli: json reports parse and match the text findings") {
    TempDir tmp;
    write_file(tmp.file("warn.sch"),
               testsupport::with_value_removed(testsupport::blinky_sch(), "R1").render());
    auto json_run =
        run_cli("full " + tmp.file("warn.sch") + " --lab H3 --format json");
    CHECK(json_run.exit_code == 1);
    auto parsed = nlohmann::json::parse(json_run.output);
    CHECK(parsed["findings"]["active"].size() == 1);
    CHECK(parsed["summary"]["warnings"] == 1);

    // rule parallelism must not change the bytes
    auto seq = run_cli("full " + tmp.file("warn.sch") + " --lab H3 --format json");
    setenv("PCBLINT_JOBS", "4", 1);
    auto par = run_cli("full " + tmp.file("warn.sch") + " --lab H3 --format json");
    unsetenv("PCBLINT_JOBS");
    CHECK(seq.output == json_run.output);
    CHECK(par.output == json_run.output);
}

TEST_CASE("cli: operational errors exit 2") {
    CHECK(run_cli("quick " + fixture_path("blinky.sch") + " --lab NOPE").exit_code == 2);
    CHECK(run_cli("quick /no/such/file.sch --lab H3").exit_code == 2);
    CHECK(run_cli("full " + fixture_path("blinky.sch") + " --lab H4").exit_code == 2);
    CHECK(run_cli("score --ledger /no/such/ledger.json").exit_code == 2);
    CHECK(run_cli("bogus-subcommand").exit_code == 2);

    TempDir tmp;
    write_file(tmp.file("broken-waivers.txt"), "only | three | fields\n");
    CHECK(run_cli("full " + fixture_path("blinky.sch") + " --lab H3 --waivers "
                  + tmp.file("broken-waivers.txt"))
              .exit_code
          == 2);
}

TEST_CASE("cli: custom config file via --config") {
    TempDir tmp;
    write_file(tmp.file("config.json"),
               R"({"labs": {"STYLE": {"inputs": ["schematic"],
                   "enable": ["S1-tnames-literal", "S2-missing-value"]}}})");
    auto r = run_cli("quick " + fixture_path("blinky.sch") + " --lab STYLE --config "
                     + tmp.file("config.json"));
    CHECK(r.exit_code == 0);
    auto unknown = run_cli("quick " + fixture_path("blinky.sch") + " --lab H3 --config "
                           + tmp.file("config.json"));
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("cli: config via the PCBLINT_CONFIG environment variable") {
    TempDir tmp;
    write_file(tmp.file("config.json"),
               R"({"labs": {"STYLE": {"inputs": ["schematic"],
                   "enable": ["S2-missing-value"]}}})");
    setenv("PCBLINT_CONFIG", tmp.file("config.json").c_str(), 1);
    auto r = run_cli("quick " + fixture_path("blinky.sch") + " --lab STYLE");
    unsetenv("PCBLINT_CONFIG");
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: version flag") {
    auto r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("pcblint 1.0.0") != std::string::npos);
}

TEST_CASE("cli quick: library lab") {
    auto r = run_cli("quick " + fixture_path("rlib.lbr") + " --lab H2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("active findings: 0") != std::string::npos);
    // libraries have no netlist, so the report omits the statistics line
    CHECK(r.output.find("netlist:") == std::string::npos);
}

TEST_CASE("cli bom: a board input is an operational error") {
    CHECK(run_cli("bom " + fixture_path("blinky.brd")).exit_code == 2);
}
