#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "support/schema_check.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI binary through the shell, capturing stdout (stderr by request).
CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string command = std::string(MDISIM_CLI_PATH) + " " + args +
                              (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  std::array<char, 4096> buffer;
  std::size_t read = 0;
  while ((read = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), read);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

nlohmann::json schema(const char* name) {
  std::ifstream in(std::filesystem::path(MDISIM_REPO_DIR) / "schemas" / name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

std::string golden(const char* name) {
  return (std::filesystem::path(MDISIM_REPO_DIR) / "golden" / name).string();
}

int count_lines_with(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t at = 0;
  while ((at = text.find(needle, at)) != std::string::npos) {
    ++count;
    at += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("cli simulate: honest run reports zero check errors") {
  const auto result =
      run_cli("simulate --n 64 --m 32 --variant modified --seed 7 --format json");
  REQUIRE(result.exit_code == 0);
  const auto report = nlohmann::json::parse(result.output);
  CHECK(report["kind"] == "session_transcript");
  CHECK(report["aborted"] == false);
  CHECK(report["forward"]["check_error_rate"] == 0.0);
  CHECK(report["forward"]["decoded"] == report["forward"]["message"]);
  CHECK_FALSE(schema_check::validate(schema("transcript.schema.json"), report).has_value());
}

TEST_CASE("cli simulate: explicit cover sets parse") {
  const auto result =
      run_cli("simulate --variant cover=I,X --n 8 --m 4 --seed 1 --format json");
  REQUIRE(result.exit_code == 0);
  const auto report = nlohmann::json::parse(result.output);
  CHECK(report["config"]["variant"] == "cover");
  CHECK(report["config"]["cover"] == nlohmann::json::array({"I", "X"}));
}

TEST_CASE("cli simulate: intercept-resend is detected and aborts with code 2") {
  const auto result = run_cli("simulate --eve intercept-resend --m 400 --seed 3 --format json");
  CHECK(result.exit_code == 2);
  const auto report = nlohmann::json::parse(result.output);
  CHECK(report["aborted"] == true);
  const double rate = report["decoy_error"]["rate"].get<double>();
  CHECK(rate >= 0.20);
  CHECK(rate <= 0.30);
  CHECK_FALSE(schema_check::validate(schema("transcript.schema.json"), report).has_value());
}

TEST_CASE("cli simulate: fixed hex message round-trips") {
  const auto result =
      run_cli("simulate --n 16 --m 4 --seed 11 --message a3c1 --format json");
  REQUIRE(result.exit_code == 0);
  const auto report = nlohmann::json::parse(result.output);
  const std::string message = report["forward"]["message"].get<std::string>();
  CHECK(message.rfind("1010001111", 0) == 0);  // a3... high bits first
  CHECK(report["forward"]["decoded"] == report["forward"]["message"]);
}

TEST_CASE("cli leakage values") {
  SUBCASE("original leaks exactly one bit") {
    const auto result = run_cli("leakage --variant original --format json");
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.output);
    CHECK(report["mutual_information_bits"] == 1.0);
    CHECK_FALSE(
        schema_check::validate(schema("leakage_report.schema.json"), report).has_value());
  }
  SUBCASE("modified leaks nothing") {
    const auto result = run_cli("leakage --variant modified --format json");
    REQUIRE(result.exit_code == 0);
    CHECK(nlohmann::json::parse(result.output)["mutual_information_bits"] == 0.0);
  }
  SUBCASE("four-element cover leaks nothing") {
    const auto result = run_cli("leakage --cover I,X,IY,Z --format json");
    REQUIRE(result.exit_code == 0);
    CHECK(nlohmann::json::parse(result.output)["mutual_information_bits"] == 0.0);
  }
  SUBCASE("monte carlo estimate is reported with its gap") {
    const auto result =
        run_cli("leakage --variant modified --monte-carlo 5000 --seed 2 --format json");
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.output);
    REQUIRE(report["monte_carlo"].is_object());
    CHECK(report["monte_carlo"]["pairs"].get<long>() >= 5000);
    CHECK(report["monte_carlo"]["abs_gap"].get<double>() < 0.1);
    CHECK_FALSE(
        schema_check::validate(schema("leakage_report.schema.json"), report).has_value());
  }
}

TEST_CASE("cli classify prints all six pairs and succeeds") {
  const auto result = run_cli("classify --format json");
  REQUIRE(result.exit_code == 0);
  const auto report = nlohmann::json::parse(result.output);
  REQUIRE(report["pairs"].size() == 6);
  CHECK(report["safe_count"] == 4);
  CHECK_FALSE(schema_check::validate(schema("cover_pairs.schema.json"), report).has_value());

  const auto find_pair = [&](const char* a, const char* b) -> nlohmann::json {
    for (const auto& entry : report["pairs"]) {
      if (entry["pair"][0] == a && entry["pair"][1] == b) return entry;
    }
    return nullptr;
  };
  CHECK(find_pair("I", "X")["safe"] == true);
  CHECK(find_pair("IY", "Z")["safe"] == true);
  CHECK(find_pair("I", "Z")["safe"] == false);
  CHECK(find_pair("I", "Z")["leakage_bits"] == 1.0);

  SUBCASE("text format mentions each verdict") {
    const auto text = run_cli("classify --format text");
    CHECK(text.exit_code == 0);
    CHECK(count_lines_with(text.output, "): leakage") == 6);  // one line per pair
    CHECK(count_lines_with(text.output, "unsafe") == 2);
  }
}

TEST_CASE("cli tables: self-diff passes, cross-diff fails with code 4") {
  SUBCASE("original against golden table 1") {
    const auto result =
        run_cli("tables --variant original --diff " + golden("table1.csv") + " --format csv");
    CHECK(result.exit_code == 0);
  }
  SUBCASE("modified against golden table 2") {
    const auto result =
        run_cli("tables --variant modified --diff " + golden("table2.csv") + " --format csv");
    CHECK(result.exit_code == 0);
  }
  SUBCASE("original against golden table 2 reports the differing cover rows") {
    const auto result =
        run_cli("tables --variant original --diff " + golden("table2.csv") + " --format csv");
    CHECK(result.exit_code == 4);
    CHECK(count_lines_with(result.output, "differs") == 16);
  }
  SUBCASE("unreadable golden file") {
    const auto result = run_cli("tables --variant original --diff /nonexistent.csv");
    CHECK(result.exit_code == 3);
  }
  SUBCASE("csv output parses back to 32 rows") {
    const auto result = run_cli("tables --variant original --format csv");
    REQUIRE(result.exit_code == 0);
    CHECK(count_lines_with(result.output, "PHI") >= 16);
    CHECK(result.output.rfind("pre_state,bits,alice_op,bob_op,post_state\n", 0) == 0);
  }
  SUBCASE("json output validates") {
    const auto result = run_cli("tables --variant modified --format json");
    REQUIRE(result.exit_code == 0);
    CHECK_FALSE(schema_check::validate(schema("case_table.schema.json"),
                                       nlohmann::json::parse(result.output))
                    .has_value());
  }
}

TEST_CASE("cli reproducibility: identical flags give byte-identical reports") {
  const std::string flags = "simulate --n 40 --m 20 --mode qd --seed 123 --format json";
  const auto first = run_cli(flags);
  const auto second = run_cli(flags);
  REQUIRE(first.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("cli validation failures exit with code 3") {
  CHECK(run_cli("simulate --variant cover=I,Q --seed 1").exit_code == 3);
  CHECK(run_cli("simulate --variant nonsense").exit_code == 3);
  CHECK(run_cli("simulate --mode sideways").exit_code == 3);
  CHECK(run_cli("simulate --eve lasers").exit_code == 3);
  CHECK(run_cli("simulate --message xyz").exit_code == 3);
  CHECK(run_cli("simulate --format csv").exit_code == 3);
  CHECK(run_cli("simulate --n 0").exit_code == 3);
  CHECK(run_cli("leakage --cover I,I").exit_code == 3);
  CHECK(run_cli("no-such-subcommand", true).exit_code == 3);
}

TEST_CASE("cli output files and MDISIM_OUT_DIR resolution") {
  const auto dir = std::filesystem::temp_directory_path() / "mdisim_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  SUBCASE("--output writes the same bytes as stdout") {
    const auto to_stdout = run_cli("classify --format csv");
    const auto path = (dir / "pairs.csv").string();
    const auto to_file = run_cli("classify --format csv --output " + path);
    REQUIRE(to_file.exit_code == 0);
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == to_stdout.output);
  }
  SUBCASE("relative outputs resolve against MDISIM_OUT_DIR") {
    const std::string command = "MDISIM_OUT_DIR=" + dir.string() + " " +
                                std::string(MDISIM_CLI_PATH) +
                                " tables --variant original --format csv"
                                " --output nested/table.csv 2>/dev/null";
    REQUIRE(std::system(command.c_str()) == 0);
    CHECK(std::filesystem::exists(dir / "nested" / "table.csv"));
  }
  std::filesystem::remove_all(dir);
}
