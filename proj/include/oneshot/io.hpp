#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oneshot/fluctuation.hpp"
#include "oneshot/measurement.hpp"
#include "oneshot/states.hpp"

namespace oneshot::io {

// Reads a whole file; InvalidInput if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// State files:
//   {"probs": [..], "energies": [..]}                         quasiclassical
//   {"rho": [[re, im], ..], "hamiltonian": [[re, im], ..]}    row-major, d*d entries
// Hamiltonian entries may also be plain reals. Errors name the source, the
// line for syntax errors and the offending field for schema errors.
using AnyState = std::variant<QuasiState, DensityState>;

AnyState parse_state(std::string_view text, std::string_view source = "<input>");
AnyState load_state(const std::filesystem::path& path);

// load_state, with density states reduced through to_quasi_state.
QuasiState load_quasi_state(const std::filesystem::path& path);

std::string to_json(const QuasiState& s);
std::string to_json(const DensityState& s);

// {"initial_energies": [..], "segments": [{"quench": [..]} | {"thermalize": lambda}, ..]}
Protocol parse_protocol(std::string_view text, std::string_view source = "<input>");
Protocol load_protocol(const std::filesystem::path& path);
std::string to_json(const Protocol& p);

// {"outcome": i, "fee_nats": x, "seed": s}
struct LedgerRecord {
  std::size_t outcome;
  double fee_nats;
  std::uint64_t seed;

  friend bool operator==(const LedgerRecord&, const LedgerRecord&) = default;
};

LedgerRecord ledger_record(const MeasurementLedger& ledger);
std::string to_json(const MeasurementLedger& ledger);
LedgerRecord parse_ledger(std::string_view text, std::string_view source = "<input>");

// CSV with header "W,prob", one atom per row.
std::string to_csv(const WorkDistribution& d);
WorkDistribution parse_distribution_csv(std::string_view text, std::string_view source = "<input>");

// Shortest text that reads back to the same double.
std::string format_double(double x);

}  // namespace oneshot::io
