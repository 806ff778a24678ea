#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "specforge/io.hpp"
#include "specforge/verify.hpp"

using namespace specforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "specforge_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const char* cli_binary() {
    const char* bin = std::getenv("SPECFORGE_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SPECFORGE_BIN must point at the CLI binary");
    return bin;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(cli_binary()) + " " + args + " >/dev/null 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("schedule json round-trips losslessly") {
    TargetSet set = make_target_set(true, {1.0}, {{2.0, 3.0}}, 10.0);
    auto [schedule, report] = design(set, 5);
    (void)report;
    nlohmann::json j = schedule_to_json(schedule);
    Schedule back = schedule_from_json(j);
    REQUIRE(back.cells.size() == schedule.cells.size());
    for (std::size_t k = 0; k < schedule.cells.size(); ++k) {
        CHECK(back.cells[k].d == schedule.cells[k].d);
        CHECK(back.cells[k].q.value() == schedule.cells[k].q.value());
        CHECK(back.cells[k].x_right == schedule.cells[k].x_right);
    }
    for (std::size_t k = 0; k < schedule.couplings.size(); ++k)
        CHECK(back.couplings[k].p.value() == schedule.couplings[k].p.value());
    REQUIRE(back.meta.source_set.has_value());
    CHECK(back.meta.source_set->points == set.points);

    // Distinguished strengths survive the trip as well.
    schedule.cells[0].q = Strength::infinite();
    schedule.couplings[0].p = Strength::infinite();
    schedule.cells[1].q = Strength::zero();
    Schedule special = schedule_from_json(schedule_to_json(schedule));
    CHECK(special.cells[0].q.is_infinite());
    CHECK(special.couplings[0].p.is_infinite());
    CHECK(special.cells[1].q.is_zero());
}

TEST_CASE("schedule json rejects unknown fields") {
    TargetSet set = make_target_set(true, {1.0}, {}, 10.0);
    auto [schedule, report] = design(set, 2);
    (void)report;
    nlohmann::json j = schedule_to_json(schedule);
    j["oops"] = true;
    CHECK_THROWS_AS(schedule_from_json(j), Error);
}

TEST_CASE("spectrum csv shape") {
    Spectrum spectrum;
    spectrum.eigenvalues.push_back({0.0, -1e-12, 1e-12, SpectrumMethod::Shooting});
    spectrum.eigenvalues.push_back({2.5, 2.4, 2.6, SpectrumMethod::FdOracle});
    spectrum.count = 2;
    std::string csv = spectrum_to_csv(spectrum);
    CHECK(csv.find("index,lambda,bracket_lo,bracket_hi,method") == 0);
    CHECK(csv.find("1,0,") != std::string::npos);
    CHECK(csv.find("FD_ORACLE") != std::string::npos);
}

TEST_CASE("cli: design, spectrum, verify round trip") {
    fs::path dir = temp_dir();
    fs::path target = dir / "set.json";
    fs::path schedule = dir / "schedule.json";
    fs::path csv = dir / "spectrum.csv";
    fs::path report = dir / "verify.json";
    spit(target,
         R"({"includes_zero": true, "points": [1.0], "intervals": [], "lambda_max": 10.0})");

    CHECK(run_cli("design --target " + target.string() + " --cells 12 --out " +
                  schedule.string()) == 0);
    Schedule loaded = load_schedule(schedule.string()); // re-validates on load
    CHECK(loaded.cells.size() == 12);

    // Determinism: repeated runs write identical bytes, whatever the
    // worker budget.
    fs::path schedule2 = dir / "schedule2.json";
    CHECK(run_cli("design --target " + target.string() + " --cells 12 --out " +
                  schedule2.string()) == 0);
    CHECK(slurp(schedule) == slurp(schedule2));
    fs::path schedule3 = dir / "schedule3.json";
    std::string threaded = std::string("SPECFORGE_THREADS=1 ") + cli_binary() + " design --target " +
                           target.string() + " --cells 12 --out " + schedule3.string() +
                           " >/dev/null 2>/dev/null";
    REQUIRE(std::system(threaded.c_str()) == 0);
    CHECK(slurp(schedule) == slurp(schedule3));

    CHECK(run_cli("spectrum --schedule " + schedule.string() + " --truncate 12 --lambda-max 3" +
                  " --out " + csv.string()) == 0);
    std::string body = slurp(csv);
    CHECK(body.find("index,lambda") == 0);
    CHECK(body.find("SHOOTING") != std::string::npos);

    CHECK(run_cli("spectrum --schedule " + schedule.string() + " --truncate 12 --lambda-max 3" +
                  " --oracle --out " + csv.string()) == 0);
    body = slurp(csv);
    CHECK(body.find("FD_ORACLE") != std::string::npos);
    CHECK(body.find("# max_deviation,") != std::string::npos);

    CHECK(run_cli("verify --schedule " + schedule.string() + " --target " + target.string() +
                  " --truncate 12 --lambda-max 3 --threshold 0.05 --skip-head 6 --out " +
                  report.string()) == 0);
    CHECK(slurp(report).find("\"pass\": true") != std::string::npos);

    // Decoupled run: distances collapse to the tuning residuals.
    CHECK(run_cli("verify --schedule " + schedule.string() + " --target " + target.string() +
                  " --truncate 12 --lambda-max 3 --threshold 1e-10 --skip-head 1 --decouple" +
                  " --out " + report.string()) == 0);

    // Verifying against the wrong set fails with the dedicated exit code.
    fs::path wrong = dir / "wrong.json";
    spit(wrong,
         R"({"includes_zero": true, "points": [2.0], "intervals": [], "lambda_max": 10.0})");
    CHECK(run_cli("verify --schedule " + schedule.string() + " --target " + wrong.string() +
                  " --truncate 12 --lambda-max 3 --threshold 0.05 --skip-head 6 --out " +
                  report.string()) == 6);
}

TEST_CASE("cli: zero cutoff produces the bare header") {
    fs::path dir = temp_dir();
    fs::path target = dir / "set0.json";
    fs::path schedule = dir / "schedule0.json";
    fs::path csv = dir / "empty.csv";
    spit(target, R"({"includes_zero": true, "points": [1.0], "lambda_max": 10.0})");
    REQUIRE(run_cli("design --target " + target.string() + " --cells 3 --out " +
                    schedule.string()) == 0);
    CHECK(run_cli("spectrum --schedule " + schedule.string() +
                  " --truncate 3 --lambda-max 0 --out " + csv.string()) == 0);
    CHECK(slurp(csv) == "index,lambda,bracket_lo,bracket_hi,method\n");
}

TEST_CASE("cli: error exit codes") {
    fs::path dir = temp_dir();
    fs::path nozero = dir / "nozero.json";
    fs::path schedule = dir / "never.json";
    spit(nozero,
         R"({"includes_zero": false, "points": [1.0], "intervals": [], "lambda_max": 10.0})");
    CHECK(run_cli("design --target " + nozero.string() + " --cells 4 --out " +
                  schedule.string()) == 2);

    fs::path malformed = dir / "malformed.json";
    spit(malformed,
         R"({"includes_zero": true, "points": [-1.0], "intervals": [], "lambda_max": 10.0})");
    CHECK(run_cli("design --target " + malformed.string() + " --cells 4 --out " +
                  schedule.string()) == 3);

    fs::path fine = dir / "fine.json";
    spit(fine, R"({"includes_zero": true, "points": [1.0], "lambda_max": 10.0})");
    CHECK(run_cli("design --target " + fine.string() + " --cells 0 --out " + schedule.string()) ==
          4);
    CHECK(run_cli("design --target " + fine.string() + " --out " + schedule.string()) == 4);
}

TEST_CASE("cli: chain tuning and lab commands") {
    fs::path dir = temp_dir();
    fs::path schedule = dir / "chain.json";
    CHECK(run_cli("tune-chain --targets 1,2 --coupling 1000 --tol 1e-8 --out " +
                  schedule.string()) == 0);
    Schedule chain = load_schedule(schedule.string());
    CHECK(chain.cells.size() == 2);

    fs::path report = dir / "extension.json";
    CHECK(run_cli("extension --n 48 --m 24 --xi-clusters 1,4 --mu 0.5 --out " +
                  report.string()) == 0);
    std::string body = slurp(report);
    CHECK(body.find("cluster_table") != std::string::npos);
    CHECK(body.find("weyl_identity") != std::string::npos);

    fs::path csv = dir / "rp.csv";
    CHECK(run_cli("rp-norms --k-max 60 --out " + csv.string()) == 0);
    std::string rp = slurp(csv);
    CHECK(rp.find("k,l2_sq,grad_sq,ratio") == 0);
    CHECK(rp.find("\n60,") != std::string::npos);
}

TEST_CASE("verify report fields") {
    TargetSet set = make_target_set(true, {1.0}, {}, 10.0);
    auto [schedule, report] = design(set, 8);
    (void)report;
    VerifyReport vr = build_verify_report(schedule, set, 8, 3.0, 1e-9, 1, true);
    CHECK(vr.pass);
    CHECK(vr.entries.size() == 8);
    for (const VerifyEntry& e : vr.entries) CHECK(e.distance <= 1e-10);
}
