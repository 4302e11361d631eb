#include "levypos/errors.hpp"
#include "levypos/reports.hpp"
#include "levypos/spec_io.hpp"

#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace levypos;
namespace fs = std::filesystem;

namespace {

const fs::path kSpecs = fs::path(LEVYPOS_SPEC_DIR);

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "levypos_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + LEVYPOS_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_spec(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "model.json";
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("fnv1a reference values", "[cli][hash]") {
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
    CHECK(config_hash(nlohmann::ordered_json{{"a", 1}}) == hex64(fnv1a(R"({"a":1})")));
}

TEST_CASE("number formatting round-trips", "[cli][format]") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(json_number(std::nan("")) == "nan");
}

TEST_CASE("spec parser", "[cli][spec]") {
    const LevyModel m = parse_model_spec(
        R"({"schema":1,"label":"x","gamma":0.5,"sigma2":0,"measure":{"kind":"stable_tails","alpha":0.5,"c_plus":1,"c_minus":2}})");
    CHECK(m.label == "x");
    CHECK(m.gamma == 0.5);
    CHECK(m.tail_plus(0.25) == Catch::Approx(2.0));

    CHECK_THROWS_AS(parse_model_spec("{"), InputError);
    CHECK_THROWS_AS(parse_model_spec(
                        R"({"schema":2,"label":"x","gamma":0,"sigma2":0,"measure":{"kind":"stable_tails","alpha":0.5,"c_plus":1,"c_minus":1}})"),
                    InputError);
    CHECK_THROWS_AS(parse_model_spec(
                        R"({"schema":1,"label":"x","gamma":0,"sigma2":0,"extra":1,"measure":{"kind":"stable_tails","alpha":0.5,"c_plus":1,"c_minus":1}})"),
                    InputError);
    CHECK_THROWS_AS(parse_model_spec(
                        R"({"schema":1,"label":"x","gamma":0,"sigma2":0,"measure":{"kind":"stable_tails","alpha":2.5,"c_plus":1,"c_minus":1}})"),
                    ValidationError);
}

TEST_CASE("canonical spec round-trips", "[cli][spec]") {
    const LevyModel m = load_model_spec(kSpecs / "table_a1.json");
    const LevyModel again = parse_model_spec(model_spec_json(m));
    CHECK(model_spec_json(again) == model_spec_json(m));
}

TEST_CASE("exit codes", "[cli][exit]") {
    const fs::path dir = scratch("exit");
    const std::string out = " --out \"" + (dir / "o").string() + "\"";
    CHECK(run_cli("analyze --spec \"" + (kSpecs / "symmetric_a1.json").string() + "\"" + out) == 0);
    CHECK(run_cli("frobnicate" + out) == 2);
    CHECK(run_cli("analyze --spec \"" + write_spec(dir, "{not json").string() + "\"" + out) == 2);
    CHECK(run_cli("analyze --spec \"" + (kSpecs / "symmetric_a1.json").string() + "\" --grid 5" + out) == 2);
    const fs::path bad = write_spec(
        dir, R"({"schema":1,"label":"bad","gamma":0,"sigma2":0,"measure":{"kind":"stable_tails","alpha":2.5,"c_plus":1,"c_minus":1}})");
    CHECK(run_cli("analyze --spec \"" + bad.string() + "\"" + out) == 3);
}

TEST_CASE("analyze reports the zero of A and provenance", "[cli][analyze]") {
    const fs::path dir = scratch("analyze");
    REQUIRE(run_cli("analyze --spec \"" + (kSpecs / "spec_pos_a0.5.json").string() + "\" --out \"" +
                    dir.string() + "\"") == 0);
    std::istringstream csv(slurp(dir / "functionals.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "# command=analyze");
    std::getline(csv, line);
    CHECK(line == "# model_label=spec_pos_a0.5");
    std::getline(csv, line);
    CHECK(line.rfind("# seed=", 0) == 0);
    std::getline(csv, line);
    CHECK(line.rfind("# config_hash=", 0) == 0);
    std::getline(csv, line);
    CHECK(line.rfind("x,", 0) == 0);
    bool found = false;
    while (std::getline(csv, line)) {
        if (line.rfind("0.25,", 0) == 0) {
            found = true;
            // Column 5 is A.
            std::istringstream row(line);
            std::string cell;
            for (int i = 0; i < 5; ++i) {
                std::getline(row, cell, ',');
            }
            CHECK(std::abs(std::stod(cell)) < 1e-12);
        }
    }
    CHECK(found);
}

TEST_CASE("classify verdicts", "[cli][classify]") {
    const auto verdict = [](const std::string& spec) {
        const fs::path dir = scratch("classify_" + spec);
        REQUIRE(run_cli("classify --spec \"" + (kSpecs / (spec + ".json")).string() + "\" --out \"" +
                        dir.string() + "\"") == 0);
        return nlohmann::json::parse(slurp(dir / "report.json"))["verdict"].get<std::string>();
    };
    CHECK(verdict("subordinator_a0.5") == "SpectrallyPositiveSubordinator");
    CHECK(verdict("drift_pos_a0.5") == "TendsPositive");
    CHECK(verdict("symmetric_a1") == "StaysTwoSided");
    CHECK(verdict("table_a1") == "StaysTwoSided");
}

TEST_CASE("simulate is reproducible and records provenance", "[cli][simulate]") {
    const fs::path a = scratch("sim_a");
    const fs::path b = scratch("sim_b");
    const std::string args = "simulate --spec \"" + (kSpecs / "symmetric_a1.json").string() +
                             "\" --t 0.01,0.001 --n 2000 --seed 7 --out ";
    REQUIRE(run_cli(args + "\"" + a.string() + "\"") == 0);
    REQUIRE(run_cli(args + "\"" + b.string() + "\"") == 0);
    CHECK(slurp(a / "simulation.csv") == slurp(b / "simulation.csv"));
    CHECK(slurp(a / "simulation.json") == slurp(b / "simulation.json"));

    const auto doc = nlohmann::json::parse(slurp(a / "simulation.json"));
    CHECK(doc["seed"] == 7);
    CHECK(slurp(a / "simulation.csv").find("# config_hash=" + doc["config_hash"].get<std::string>()) !=
          std::string::npos);

    const fs::path c = scratch("sim_c");
    REQUIRE(run_cli("simulate --spec \"" + (kSpecs / "symmetric_a1.json").string() +
                    "\" --t 0.01,0.001 --n 2000 --seed 8 --out \"" + c.string() + "\"") == 0);
    CHECK(slurp(a / "simulation.csv") != slurp(c / "simulation.csv"));
}
