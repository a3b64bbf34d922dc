#include "oneshot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "oneshot/error.hpp"

namespace oneshot::io {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(std::string_view source, const std::string& field, const std::string& what) {
  throw InvalidInput(std::string(source) + ": field '" + field + "': " + what);
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InvalidInput(std::string(source) + ": line " + std::to_string(line) + ", column " + std::to_string(column) +
                       ": malformed JSON");
  }
}

const json& require_field(const json& obj, const char* name, std::string_view source) {
  if (!obj.is_object()) throw InvalidInput(std::string(source) + ": top level must be a JSON object");
  const auto it = obj.find(name);
  if (it == obj.end()) field_error(source, name, "missing");
  return *it;
}

double as_number(const json& v, std::string_view source, const std::string& field) {
  if (!v.is_number()) field_error(source, field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(source, field, "must be finite");
  return x;
}

std::vector<double> as_number_array(const json& v, std::string_view source, const std::string& field) {
  if (!v.is_array()) field_error(source, field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], source, field + "[" + std::to_string(i) + "]"));
  return out;
}

std::complex<double> as_complex(const json& v, std::string_view source, const std::string& field) {
  if (v.is_number()) return {as_number(v, source, field), 0.0};
  if (!v.is_array() || v.size() != 2) field_error(source, field, "expected [re, im] or a number");
  return {as_number(v[0], source, field + "[0]"), as_number(v[1], source, field + "[1]")};
}

// Flat row-major list of d*d entries, or d rows of d entries.
ComplexMatrix as_matrix(const json& v, std::string_view source, const std::string& field, Eigen::Index dim) {
  if (!v.is_array()) field_error(source, field, "expected an array");
  const auto d = static_cast<std::size_t>(dim);
  ComplexMatrix m(dim, dim);
  if (v.size() == d * d) {
    for (std::size_t k = 0; k < d * d; ++k) {
      m(static_cast<Eigen::Index>(k / d), static_cast<Eigen::Index>(k % d)) =
          as_complex(v[k], source, field + "[" + std::to_string(k) + "]");
    }
    return m;
  }
  if (v.size() == d) {
    for (std::size_t i = 0; i < d; ++i) {
      const std::string row_field = field + "[" + std::to_string(i) + "]";
      const json& row = v[i];
      if (!row.is_array() || row.size() != d) field_error(source, row_field, "expected a row of " + std::to_string(d));
      for (std::size_t j = 0; j < d; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            as_complex(row[j], source, row_field + "[" + std::to_string(j) + "]");
      }
    }
    return m;
  }
  field_error(source, field, "expected " + std::to_string(d * d) + " entries");
}

json complex_array(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AnyState parse_state(std::string_view text, std::string_view source) {
  const json doc = parse_json(text, source);
  if (!doc.is_object()) throw InvalidInput(std::string(source) + ": top level must be a JSON object");
  if (doc.contains("probs")) {
    std::vector<double> probs = as_number_array(doc["probs"], source, "probs");
    std::vector<double> energies = as_number_array(require_field(doc, "energies", source), source, "energies");
    if (energies.size() != probs.size()) {
      field_error(source, "energies", "has " + std::to_string(energies.size()) + " entries, probs has " +
                                          std::to_string(probs.size()));
    }
    try {
      return QuasiState(std::move(probs), EnergyLevels(std::move(energies)));
    } catch (const InvalidInput& e) {
      field_error(source, "probs", e.what());
    }
  }
  if (doc.contains("rho")) {
    const json& rho = doc["rho"];
    if (!rho.is_array() || rho.empty()) field_error(source, "rho", "expected a non-empty array");
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rho.size()))));
    if (d * d != rho.size()) field_error(source, "rho", "entry count " + std::to_string(rho.size()) + " is not a square");
    const auto dim = static_cast<Eigen::Index>(d);
    ComplexMatrix r = as_matrix(rho, source, "rho", dim);
    ComplexMatrix h = as_matrix(require_field(doc, "hamiltonian", source), source, "hamiltonian", dim);
    try {
      return DensityState(std::move(r), std::move(h));
    } catch (const InvalidInput& e) {
      field_error(source, "rho", e.what());
    }
  }
  throw InvalidInput(std::string(source) + ": expected a 'probs' or 'rho' field");
}

AnyState load_state(const std::filesystem::path& path) { return parse_state(read_file(path), path.string()); }

QuasiState load_quasi_state(const std::filesystem::path& path) {
  AnyState s = load_state(path);
  if (auto* q = std::get_if<QuasiState>(&s)) return std::move(*q);
  try {
    return to_quasi_state(std::get<DensityState>(s));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::string to_json(const QuasiState& s) {
  return dump(json{{"probs", s.probs()}, {"energies", s.energies().values()}});
}

std::string to_json(const DensityState& s) {
  return dump(json{{"rho", complex_array(s.rho())}, {"hamiltonian", complex_array(s.hamiltonian())}});
}

Protocol parse_protocol(std::string_view text, std::string_view source) {
  const json doc = parse_json(text, source);
  std::vector<double> initial = as_number_array(require_field(doc, "initial_energies", source), source, "initial_energies");
  const json& segs = require_field(doc, "segments", source);
  if (!segs.is_array()) field_error(source, "segments", "expected an array");
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string field = "segments[" + std::to_string(k) + "]";
    const json& s = segs[k];
    if (!s.is_object() || s.size() != 1) field_error(source, field, "expected {\"quench\": [..]} or {\"thermalize\": x}");
    if (s.contains("quench")) {
      try {
        segments.emplace_back(Quench{EnergyLevels(as_number_array(s["quench"], source, field + ".quench"))});
      } catch (const InvalidInput& e) {
        field_error(source, field + ".quench", e.what());
      }
    } else if (s.contains("thermalize")) {
      segments.emplace_back(Thermalize{as_number(s["thermalize"], source, field + ".thermalize")});
    } else {
      field_error(source, field, "unknown segment kind '" + s.begin().key() + "'");
    }
  }
  try {
    return Protocol(EnergyLevels(std::move(initial)), std::move(segments));
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(source) + ": " + e.what());
  }
}

Protocol load_protocol(const std::filesystem::path& path) { return parse_protocol(read_file(path), path.string()); }

std::string to_json(const Protocol& p) {
  json segs = json::array();
  for (const Segment& s : p.segments()) {
    if (const auto* q = std::get_if<Quench>(&s)) {
      segs.push_back({{"quench", q->levels.values()}});
    } else {
      segs.push_back({{"thermalize", std::get<Thermalize>(s).lambda}});
    }
  }
  return dump(json{{"initial_energies", p.initial_energies().values()}, {"segments", segs}});
}

LedgerRecord ledger_record(const MeasurementLedger& ledger) {
  return {ledger.outcome, ledger.fee_paid.value, ledger.seed};
}

std::string to_json(const MeasurementLedger& ledger) {
  const LedgerRecord r = ledger_record(ledger);
  return dump(json{{"outcome", r.outcome}, {"fee_nats", r.fee_nats}, {"seed", r.seed}});
}

LedgerRecord parse_ledger(std::string_view text, std::string_view source) {
  const json doc = parse_json(text, source);
  const json& outcome = require_field(doc, "outcome", source);
  const json& seed = require_field(doc, "seed", source);
  if (!outcome.is_number_unsigned()) field_error(source, "outcome", "expected a non-negative integer");
  if (!seed.is_number_unsigned()) field_error(source, "seed", "expected a non-negative integer");
  return {outcome.get<std::size_t>(), as_number(require_field(doc, "fee_nats", source), source, "fee_nats"),
          seed.get<std::uint64_t>()};
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const WorkDistribution& d) {
  std::string out = "W,prob\n";
  for (const auto& a : d.atoms()) out += format_double(a.work) + "," + format_double(a.prob) + "\n";
  return out;
}

WorkDistribution parse_distribution_csv(std::string_view text, std::string_view source) {
  std::vector<WorkAtom> atoms;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ": line " + std::to_string(line_no);
    if (!header) {
      if (line != "W,prob") throw InvalidInput(where + ": expected header 'W,prob'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw InvalidInput(where + ": expected two columns");
    const auto parse = [&](std::string_view cell, const char* column) {
      double x = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw InvalidInput(where + ": column " + column + ": not a number");
      }
      return x;
    };
    atoms.push_back({parse(line.substr(0, comma), "W"), parse(line.substr(comma + 1), "prob")});
  }
  if (!header) throw InvalidInput(std::string(source) + ": empty distribution file");
  return WorkDistribution(std::move(atoms));
}

}  // namespace oneshot::io
