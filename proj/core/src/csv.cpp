// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "odcsgd/errors.hpp"

namespace odcsgd {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, int line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("bad number '" + s + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad number '" + s + "'", line);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", -1);
  return in;
}

}  // namespace

void write_ledger_csv(std::ostream& out, const RegretLedger& ledger, const RunTrace& trace) {
  out << kLedgerCsvHeader << '\n';
  const int horizon = ledger.horizon();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int t = 1; t <= horizon; ++t) {
    const auto k = static_cast<std::size_t>(t - 1);
    const double reg = ledger.has_dynamic_regret() ? ledger.reg_d[k] : nan;
    out << t << ',' << fmt(reg) << ',' << fmt(reg / t) << ',' << fmt(ledger.nreg_d[k]) << ','
        << fmt(ledger.nreg_d[k] / t) << ',' << fmt(ledger.disagreement[k]) << ','
        << fmt(trace.eta.at(k)) << ',' << fmt(trace.lambda.at(k)) << '\n';
  }
}

void write_ledger_csv(const std::filesystem::path& path, const RegretLedger& ledger,
                      const RunTrace& trace) {
  std::ofstream out = open_out(path);
  write_ledger_csv(out, ledger, trace);
}

std::vector<LedgerRow> read_ledger_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kLedgerCsvHeader) throw ParseError("unexpected header", 1);
  std::vector<LedgerRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw ParseError("expected 8 fields", lineno);
    LedgerRow row;
    row.t = static_cast<int>(parse_double(f[0], lineno));
    row.reg_d = parse_double(f[1], lineno);
    row.reg_d_over_t = parse_double(f[2], lineno);
    row.nreg_d = parse_double(f[3], lineno);
    row.nreg_d_over_t = parse_double(f[4], lineno);
    row.disagreement = parse_double(f[5], lineno);
    row.eta_t = parse_double(f[6], lineno);
    row.lambda_t = parse_double(f[7], lineno);
    rows.push_back(row);
  }
  return rows;
}

std::vector<LedgerRow> read_ledger_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_ledger_csv(in);
}

void write_states_csv(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out = open_out(path);
  const int d = trace.states.empty() ? 0 : static_cast<int>(trace.states.front().cols());
  out << "t,agent";
  for (int k = 0; k < d; ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t s = 0; s < trace.states.size(); ++s) {
    const Matrix& x = trace.states[s];
    for (int i = 0; i < x.rows(); ++i) {
      out << s + 1 << ',' << i;
      for (int k = 0; k < d; ++k) out << ',' << fmt(x(i, k));
      out << '\n';
    }
  }
}

RunTrace read_states_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty states file", 1);
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "t" || header[1] != "agent") {
    throw ParseError("unexpected header", 1);
  }
  const int d = static_cast<int>(header.size()) - 2;
  std::vector<std::vector<std::vector<double>>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (static_cast<int>(f.size()) != d + 2) throw ParseError("wrong field count", lineno);
    const auto t = static_cast<std::size_t>(parse_double(f[0], lineno));
    if (t < 1 || t > rows.size() + 1) throw ParseError("non-sequential t", lineno);
    if (t > rows.size()) rows.emplace_back();
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = parse_double(f[static_cast<std::size_t>(k) + 2], lineno);
    rows[t - 1].push_back(std::move(x));
  }
  RunTrace trace;
  for (const auto& snapshot : rows) {
    Matrix m(static_cast<Eigen::Index>(snapshot.size()), d);
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      for (int k = 0; k < d; ++k) m(static_cast<Eigen::Index>(i), k) = snapshot[i][static_cast<std::size_t>(k)];
    }
    trace.states.push_back(std::move(m));
  }
  return trace;
}

}  // namespace odcsgd
