#include "mdisim/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdisim::io {

namespace {

constexpr std::string_view kCaseTableHeader = "pre_state,bits,alice_op,bob_op,post_state";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

std::string bits_field(unsigned bits) {
  return {static_cast<char>('0' + ((bits >> 1) & 1u)), static_cast<char>('0' + (bits & 1u))};
}

}  // namespace

std::string case_table_to_csv(std::span<const leakage::CaseRow> rows) {
  std::string out{kCaseTableHeader};
  out += '\n';
  for (const leakage::CaseRow& row : rows) {
    out += to_token(row.pre_state);
    out += ',';
    out += bits_field(row.bits);
    out += ',';
    out += to_token(row.alice_op);
    out += ',';
    out += to_token(row.bob_op);
    out += ',';
    out += to_token(row.post_state);
    out += '\n';
  }
  return out;
}

std::vector<leakage::CaseRow> parse_case_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("case table CSV: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCaseTableHeader) {
    throw std::runtime_error("case table CSV: unexpected header: " + line);
  }

  std::vector<leakage::CaseRow> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 5) {
      throw std::runtime_error("case table CSV: line " + std::to_string(line_number) +
                               ": expected 5 fields");
    }
    const auto pre = parse_bell_label(fields[0]);
    const auto alice_op = parse_pauli_label(fields[2]);
    const auto bob_op = parse_pauli_label(fields[3]);
    const auto post = parse_bell_label(fields[4]);
    const bool bits_ok = fields[1].size() == 2 &&
                         (fields[1][0] == '0' || fields[1][0] == '1') &&
                         (fields[1][1] == '0' || fields[1][1] == '1');
    if (!pre || !alice_op || !bob_op || !post || !bits_ok) {
      throw std::runtime_error("case table CSV: line " + std::to_string(line_number) +
                               ": bad token");
    }
    const unsigned bits =
        static_cast<unsigned>((fields[1][0] - '0') * 2 + (fields[1][1] - '0'));
    rows.push_back({*pre, bits, *alice_op, *bob_op, *post});
  }
  return rows;
}

std::vector<leakage::CaseRow> load_case_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open case table CSV: " + path.string());
  }
  return parse_case_table_csv(in);
}

std::string cover_pairs_to_csv(std::span<const leakage::CoverPairVerdict> verdicts) {
  std::string out = "op_a,op_b,leakage_bits,safe\n";
  for (const leakage::CoverPairVerdict& verdict : verdicts) {
    std::ostringstream line;
    line << to_token(verdict.pair.first) << ',' << to_token(verdict.pair.second) << ','
         << verdict.leakage_bits << ',' << (verdict.safe ? "true" : "false") << '\n';
    out += line.str();
  }
  return out;
}

}  // namespace mdisim::io
