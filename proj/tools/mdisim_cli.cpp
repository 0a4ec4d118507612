// Batch front end: run protocol sessions, compute leakage reports, classify
// cover pairs and regenerate/diff the encoding case tables.
//
// Exit codes: 0 success, 2 protocol abort (eavesdropper detected),
// 3 validation failure, 4 golden-diff or classification mismatch.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdisim/csv.hpp"
#include "mdisim/json_io.hpp"
#include "mdisim/leakage.hpp"
#include "mdisim/protocol.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAbort = 2;
constexpr int kExitValidation = 3;
constexpr int kExitMismatch = 4;

using mdisim::PauliLabel;
using mdisim::protocol::EncodingVariant;

std::vector<PauliLabel> parse_cover_tokens(const std::string& spelling) {
  std::vector<PauliLabel> ops;
  std::istringstream stream(spelling);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const auto op = mdisim::parse_pauli_label(token);
    if (!op) {
      throw std::invalid_argument("unknown cover operator '" + token +
                                  "' (expected I, X, IY or Z)");
    }
    ops.push_back(*op);
  }
  return EncodingVariant::cover_set(std::move(ops)).cover;
}

EncodingVariant parse_variant(const std::string& spelling) {
  if (spelling == "original") return EncodingVariant::original();
  if (spelling == "modified") return EncodingVariant::modified();
  if (spelling.rfind("cover=", 0) == 0) {
    return EncodingVariant::cover_set(parse_cover_tokens(spelling.substr(6)));
  }
  throw std::invalid_argument("unknown variant '" + spelling +
                              "' (expected original, modified or cover=<ops>)");
}

// Relative output paths resolve against MDISIM_OUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path out(path);
  if (out.is_relative()) {
    if (const char* dir = std::getenv("MDISIM_OUT_DIR")) {
      out = std::filesystem::path(dir) / out;
    }
  }
  return out;
}

void emit(const std::string& content, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  const std::filesystem::path path = resolve_output(output_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (content.empty() || content.back() != '\n') out << '\n';
}

std::string format_rate(const std::optional<double>& rate) {
  if (!rate) return "n/a";
  std::ostringstream out;
  out << std::setprecision(6) << *rate;
  return out.str();
}

std::string transcript_text(const mdisim::protocol::SessionTranscript& transcript) {
  const auto& config = transcript.config;
  std::ostringstream out;
  out << "session summary\n"
      << "  mode: " << (config.mode == mdisim::protocol::SessionMode::Qsdc ? "qsdc" : "qd")
      << "  variant: " << config.variant.name << "  n: " << config.n
      << "  m: " << config.m << "  seed: " << config.seed << '\n'
      << "  retained pairs: " << (config.n - transcript.delta)
      << "  delta: " << transcript.delta << '\n'
      << "  decoy samples: " << transcript.decoy_error.samples
      << "  errors: " << transcript.decoy_error.errors
      << "  rate: " << format_rate(transcript.decoy_error.rate) << '\n'
      << "  aborted: " << (transcript.aborted ? "yes" : "no");
  if (transcript.aborted) out << " (" << transcript.abort_reason << ")";
  out << '\n';
  const auto direction_line = [&](const char* name,
                                  const mdisim::protocol::DirectionRecord& record) {
    out << "  " << name << ": message bits: " << record.message.size()
        << "  decoded match: " << (record.decoded == record.message ? "yes" : "no")
        << "  check pairs: " << record.checking_pair_positions.size()
        << "  check error rate: " << format_rate(record.check_error_rate) << '\n';
  };
  if (!transcript.aborted) {
    direction_line("forward (alice -> bob)", transcript.forward);
    if (transcript.reverse) direction_line("reverse (bob -> alice)", *transcript.reverse);
  }
  return out.str();
}

int cmd_simulate(const std::string& variant_spec, int n, int m, const std::string& mode,
                 std::uint64_t seed, const std::string& eve, const std::string& message,
                 double checking_fraction, double qd_split, double abort_threshold,
                 const std::string& format, const std::string& output_path) {
  mdisim::protocol::SessionConfig config;
  config.n = n;
  config.m = m;
  config.variant = parse_variant(variant_spec);
  if (mode == "qsdc") {
    config.mode = mdisim::protocol::SessionMode::Qsdc;
  } else if (mode == "qd") {
    config.mode = mdisim::protocol::SessionMode::Qd;
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "' (expected qsdc or qd)");
  }
  config.seed = seed;
  config.checking_bit_fraction = checking_fraction;
  config.qd_split_fraction = qd_split;
  config.abort_threshold = abort_threshold;
  if (eve == "intercept-resend") {
    config.eavesdropper = mdisim::protocol::EveConfig{};
  } else if (eve != "none") {
    throw std::invalid_argument("unknown eavesdropper '" + eve +
                                "' (expected none or intercept-resend)");
  }
  if (message != "random") {
    config.fixed_message = mdisim::io::bits_from_hex(message);
  }

  const auto transcript = mdisim::protocol::run_session(config);
  if (format == "json") {
    emit(mdisim::io::transcript_to_json(transcript).dump(2), output_path);
  } else if (format == "text") {
    emit(transcript_text(transcript), output_path);
  } else {
    throw std::invalid_argument("simulate supports formats json and text");
  }
  return transcript.aborted ? kExitAbort : kExitOk;
}

std::string leakage_text(const mdisim::leakage::LeakageReport& report,
                         const std::optional<mdisim::leakage::MonteCarloEstimate>& mc) {
  std::ostringstream out;
  out << "variant: " << report.variant << "  cover: {";
  for (std::size_t i = 0; i < report.cover.size(); ++i) {
    if (i) out << ", ";
    out << mdisim::to_token(report.cover[i]);
  }
  out << "}\n"
      << "mutual information: " << report.mutual_information_bits << " bits\n"
      << "residual entropy:   " << report.residual_entropy_bits << " bits\n";
  for (const auto& posterior : report.posteriors) {
    out << "  view (" << mdisim::adversary::to_token(posterior.view.pre_class) << ", "
        << mdisim::to_token(posterior.view.final_label) << "): ";
    const char* bit_names[] = {"00", "01", "10", "11"};
    for (int bits = 0; bits < 4; ++bits) {
      if (bits) out << "  ";
      out << bit_names[bits] << ": " << posterior.p[bits];
    }
    out << '\n';
  }
  if (mc) {
    out << "monte carlo: " << mc->pairs << " pairs, estimate "
        << mc->estimate_bits << " bits, |estimate - exact| = " << mc->abs_gap << '\n';
  }
  return out.str();
}

int cmd_leakage(const std::string& variant_spec, const std::string& cover_spec,
                long monte_carlo_trials, std::uint64_t seed, const std::string& format,
                const std::string& output_path) {
  EncodingVariant variant = EncodingVariant::original();
  if (!cover_spec.empty()) {
    variant = EncodingVariant::cover_set(parse_cover_tokens(cover_spec));
  } else {
    variant = parse_variant(variant_spec);
  }

  const auto report = mdisim::leakage::analyze_cover(variant.name, variant.cover);
  std::optional<mdisim::leakage::MonteCarloEstimate> mc;
  if (monte_carlo_trials > 0) {
    mc = mdisim::leakage::monte_carlo_leakage(variant.cover, monte_carlo_trials, seed);
  }

  if (format == "json") {
    emit(mdisim::io::leakage_report_to_json(report, mc, seed).dump(2), output_path);
  } else if (format == "text") {
    emit(leakage_text(report, mc), output_path);
  } else {
    throw std::invalid_argument("leakage supports formats json and text");
  }
  return kExitOk;
}

int cmd_classify(std::uint64_t seed, const std::string& format,
                 const std::string& output_path) {
  const auto verdicts = mdisim::leakage::classify_cover_pairs();

  if (format == "json") {
    emit(mdisim::io::cover_pairs_to_json(verdicts, seed).dump(2), output_path);
  } else if (format == "csv") {
    emit(mdisim::io::cover_pairs_to_csv(verdicts), output_path);
  } else if (format == "text") {
    std::ostringstream out;
    out << "cover pair classification (safe = zero leakage)\n";
    for (const auto& verdict : verdicts) {
      out << "  (" << mdisim::to_token(verdict.pair.first) << ", "
          << mdisim::to_token(verdict.pair.second)
          << "): leakage " << verdict.leakage_bits << " bits  "
          << (verdict.safe ? "safe" : "unsafe") << '\n';
    }
    emit(out.str(), output_path);
  } else {
    throw std::invalid_argument("classify supports formats json, csv and text");
  }

  // Contract: success only when exactly the four cross-partition pairs are safe.
  const auto expected_safe = [](const mdisim::leakage::CoverPairVerdict& verdict) {
    const auto in_f1 = [](PauliLabel op) {
      return op == PauliLabel::I || op == PauliLabel::Z;
    };
    return in_f1(verdict.pair.first) != in_f1(verdict.pair.second);
  };
  for (const auto& verdict : verdicts) {
    if (verdict.safe != expected_safe(verdict)) return kExitMismatch;
  }
  return kExitOk;
}

int cmd_tables(const std::string& variant_spec, const std::string& diff_path,
               std::uint64_t seed, const std::string& format,
               const std::string& output_path) {
  const EncodingVariant variant = parse_variant(variant_spec);
  const auto rows = mdisim::leakage::generate_case_table(variant.cover);

  if (format == "csv") {
    emit(mdisim::io::case_table_to_csv(rows), output_path);
  } else if (format == "json") {
    emit(mdisim::io::case_table_to_json(variant.name, rows, seed).dump(2), output_path);
  } else if (format == "text") {
    std::ostringstream out;
    out << "pre     bits  alice  bob  post\n";
    for (const auto& row : rows) {
      out << "  " << std::left << std::setw(6) << mdisim::to_token(row.pre_state)
          << std::setw(6)
          << (std::string{static_cast<char>('0' + (row.bits >> 1)),
                          static_cast<char>('0' + (row.bits & 1))})
          << std::setw(7) << mdisim::to_token(row.alice_op) << std::setw(5)
          << mdisim::to_token(row.bob_op) << mdisim::to_token(row.post_state) << '\n';
    }
    emit(out.str(), output_path);
  } else {
    throw std::invalid_argument("tables supports formats csv, json and text");
  }

  if (diff_path.empty()) return kExitOk;

  const auto row_string = [](const mdisim::leakage::CaseRow& row) {
    std::ostringstream out;
    out << mdisim::to_token(row.pre_state) << ','
        << static_cast<char>('0' + (row.bits >> 1))
        << static_cast<char>('0' + (row.bits & 1)) << ','
        << mdisim::to_token(row.alice_op) << ',' << mdisim::to_token(row.bob_op) << ','
        << mdisim::to_token(row.post_state);
    return out.str();
  };

  const auto golden = mdisim::io::load_case_table_csv(diff_path);
  int mismatches = 0;
  const std::size_t common = std::min(rows.size(), golden.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (rows[i] == golden[i]) continue;
    ++mismatches;
    std::cout << "row " << i + 1 << " differs: generated " << row_string(rows[i])
              << "  golden " << row_string(golden[i]) << '\n';
  }
  if (rows.size() != golden.size()) {
    std::cout << "row count differs: generated " << rows.size() << ", golden "
              << golden.size() << '\n';
    ++mismatches;
  }
  if (mismatches > 0) {
    std::cout << mismatches << " mismatching row(s) against " << diff_path << '\n';
    return kExitMismatch;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDI-QSDC / MDI-QD protocol simulator and leakage analyzer"};
  app.require_subcommand(1);
  app.fallthrough();  // global --format/--output may follow the subcommand

  std::string format = "text";
  std::string output_path;
  app.add_option("--format", format, "Output format: json, csv or text")
      ->capture_default_str();
  app.add_option("-o,--output", output_path,
                 "Output file (default stdout; relative paths resolve against "
                 "MDISIM_OUT_DIR)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one protocol session");
  int n = 32, m = 16;
  std::string variant_spec = "original", mode = "qsdc", eve = "none", message = "random";
  std::uint64_t seed = 0;
  double checking_fraction = 0.125, qd_split = 0.5, abort_threshold = 0.05;
  simulate->add_option("--n", n, "EPR pairs per party")->capture_default_str();
  simulate->add_option("--m", m, "Decoy qubits per party")->capture_default_str();
  simulate->add_option("--variant", variant_spec,
                       "original | modified | cover=<ops> (ops from I,X,IY,Z)")
      ->capture_default_str();
  simulate->add_option("--mode", mode, "qsdc | qd")->capture_default_str();
  simulate->add_option("--seed", seed, "Session seed")->capture_default_str();
  simulate->add_option("--eve", eve, "none | intercept-resend")->capture_default_str();
  simulate->add_option("--message", message, "Payload as hex, or 'random'")
      ->capture_default_str();
  simulate->add_option("--checking-fraction", checking_fraction,
                       "Fraction of retained pairs used as checking bits")
      ->capture_default_str();
  simulate->add_option("--qd-split", qd_split, "QD forward-direction fraction")
      ->capture_default_str();
  simulate->add_option("--abort-threshold", abort_threshold,
                       "Decoy error rate above which the session aborts")
      ->capture_default_str();

  // leakage
  auto* leakage_cmd = app.add_subcommand("leakage", "Exact leakage of a cover set");
  std::string leakage_variant = "original", cover_spec;
  long monte_carlo_trials = 0;
  std::uint64_t leakage_seed = 0;
  leakage_cmd->add_option("--variant", leakage_variant, "original | modified")
      ->capture_default_str();
  leakage_cmd->add_option("--cover", cover_spec,
                          "Explicit cover set, e.g. I,X,IY,Z (overrides --variant)");
  leakage_cmd->add_option("--monte-carlo", monte_carlo_trials,
                          "Also estimate from this many simulated pairs");
  leakage_cmd->add_option("--seed", leakage_seed, "Monte Carlo seed")
      ->capture_default_str();

  // classify
  auto* classify = app.add_subcommand("classify", "Classify all 6 cover pairs");
  std::uint64_t classify_seed = 0;
  classify->add_option("--seed", classify_seed, "Echoed into the report")
      ->capture_default_str();

  // tables
  auto* tables = app.add_subcommand("tables", "Regenerate an encoding case table");
  std::string tables_variant = "original", diff_path;
  std::uint64_t tables_seed = 0;
  tables->add_option("--variant", tables_variant, "original | modified | cover=<ops>")
      ->capture_default_str();
  tables->add_option("--diff", diff_path, "Golden CSV to compare against");
  tables->add_option("--seed", tables_seed, "Echoed into the report")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(variant_spec, n, m, mode, seed, eve, message,
                          checking_fraction, qd_split, abort_threshold, format,
                          output_path);
    }
    if (leakage_cmd->parsed()) {
      return cmd_leakage(leakage_variant, cover_spec, monte_carlo_trials, leakage_seed,
                         format, output_path);
    }
    if (classify->parsed()) {
      return cmd_classify(classify_seed, format, output_path);
    }
    if (tables->parsed()) {
      return cmd_tables(tables_variant, diff_path, tables_seed, format, output_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
