// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/regret.hpp"

namespace odcsgd {

/// Column order of the per-seed ledger CSV.
inline constexpr const char* kLedgerCsvHeader =
    "t,reg_d,reg_d_over_t,nreg_d,nreg_d_over_t,disagreement,eta_t,lambda_t";

struct LedgerRow {
  int t = 0;
  double reg_d = 0.0;
  double reg_d_over_t = 0.0;
  double nreg_d = 0.0;
  double nreg_d_over_t = 0.0;
  double disagreement = 0.0;
  double eta_t = 0.0;
  double lambda_t = 0.0;
};

/// One row per t = 1..T. Values use round-trip precision; reg columns are
/// "nan" when the ledger has no dynamic regret.
void write_ledger_csv(std::ostream& out, const RegretLedger& ledger, const RunTrace& trace);
void write_ledger_csv(const std::filesystem::path& path, const RegretLedger& ledger,
                      const RunTrace& trace);

/// Throws ParseError on a malformed file.
std::vector<LedgerRow> read_ledger_csv(std::istream& in);
std::vector<LedgerRow> read_ledger_csv(const std::filesystem::path& path);

/// Full state trace: columns t, agent, x0, ..., x{d-1} for t = 1..T+1.
void write_states_csv(const std::filesystem::path& path, const RunTrace& trace);
/// Rebuilds the states of a trace (other fields left empty).
RunTrace read_states_csv(const std::filesystem::path& path);

}  // namespace odcsgd
