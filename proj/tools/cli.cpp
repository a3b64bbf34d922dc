#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "oneshot/catalysis.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/error.hpp"
#include "oneshot/fluctuation.hpp"
#include "oneshot/io.hpp"
#include "oneshot/measurement.hpp"
#include "oneshot/thermal_ops.hpp"
#include "oneshot/work.hpp"

namespace oneshot::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<double> betas{1.0};
  double eps = 0.0;
  std::vector<std::string> alphas{"0", "0.5", "1", "2", "inf"};
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string units = "nats";
  std::string out_path;

  // transform
  std::string catalyst;
  std::string curves_path;
  // embezzle
  std::vector<std::size_t> dims{16, 32, 64, 128, 256, 512, 1024};
  // fluctuation
  std::string mode = "exact";
  std::size_t samples = 100000;
  // measure
  std::size_t memory_dim = 0;
};

// Dimensionless quantity (nats, equivalently multiples of k_B T) in the
// requested units.
double present(double nats, const RunConfig& cfg) { return cfg.units == "bits" ? to_bits(nats) : nats; }

json number(double x) {
  if (std::isfinite(x)) return x + 0.0;  // no "-0" in output
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string cell(double x) {
  if (std::isfinite(x)) return io::format_double(x + 0.0);
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string cell(bool b) { return b ? "true" : "false"; }

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<json> row) { rows_.push_back(std::move(row)); }

  std::string csv() const {
    std::string s;
    for (std::size_t c = 0; c < columns_.size(); ++c) s += (c ? "," : "") + columns_[c];
    s += "\n";
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) s += ",";
        const json& v = row[c];
        if (v.is_boolean()) {
          s += cell(v.get<bool>());
        } else if (v.is_number()) {
          s += v.is_number_unsigned() ? std::to_string(v.get<std::uint64_t>()) : cell(v.get<double>());
        } else {
          s += v.get<std::string>();
        }
      }
      s += "\n";
    }
    return s;
  }

  json rows() const {
    json arr = json::array();
    for (const auto& row : rows_) {
      json obj = json::object();
      for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = row[c];
      arr.push_back(std::move(obj));
    }
    return arr;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<json>> rows_;
};

std::vector<Alpha> parse_alphas(const std::vector<std::string>& labels) {
  std::vector<Alpha> out;
  for (const auto& l : labels) out.push_back(Alpha::parse(l));
  return out;
}

InverseTemperature single_beta(const RunConfig& cfg) {
  if (cfg.betas.size() != 1) throw InvalidInput("--beta: this command takes a single value");
  return InverseTemperature(cfg.betas.front());
}

std::string cmd_entropy(const RunConfig& cfg) {
  const QuasiState p = io::load_quasi_state(cfg.inputs.at(0));
  const std::vector<Alpha> alphas = parse_alphas(cfg.alphas);
  const SmoothingParameter eps(cfg.eps);
  std::vector<std::string> cols{"beta"};
  for (const auto& a : alphas) cols.push_back("H_" + a.label());
  for (const auto& a : alphas) cols.push_back("D_" + a.label());
  for (const char* c : {"H0_eps", "Hinf_eps", "D0_eps", "Dinf_eps"}) cols.emplace_back(c);
  Table table(cols);
  for (double b : cfg.betas) {
    const InverseTemperature beta(b);
    const std::vector<double> gamma = gibbs_weights(p.energies(), beta);
    std::vector<json> row{b};
    for (const auto& a : alphas) row.push_back(number(present(renyi_entropy(p.view(), a), cfg)));
    for (const auto& a : alphas) row.push_back(number(present(renyi_divergence(p.view(), gamma, a), cfg)));
    row.push_back(number(present(smooth_h_0(p.view(), eps), cfg)));
    row.push_back(number(present(smooth_h_inf(p.view(), eps), cfg)));
    row.push_back(number(present(smooth_d_0(p.view(), gamma, eps), cfg)));
    row.push_back(number(present(smooth_d_inf(p.view(), gamma, eps), cfg)));
    table.add(std::move(row));
  }
  if (cfg.format == "csv") return table.csv();
  return json{{"units", cfg.units}, {"eps", cfg.eps}, {"rows", table.rows()}}.dump(2) + "\n";
}

std::string cmd_work(const RunConfig& cfg) {
  const QuasiState p = io::load_quasi_state(cfg.inputs.at(0));
  const SmoothingParameter eps(cfg.eps);
  const std::string u = cfg.units;
  Table table({"beta", "W_cost", "W_yield", "W_cost_eps", "W_yield_eps", "W_cost_" + u, "W_yield_" + u,
               "W_cost_eps_" + u, "W_yield_eps_" + u});
  for (double b : cfg.betas) {
    const InverseTemperature beta(b);
    const WorkQuantity values[] = {work_cost(p, beta), work_yield(p, beta), smooth_work_cost(p, beta, eps),
                                   smooth_work_yield(p, beta, eps)};
    std::vector<json> row{b};
    for (const auto& w : values) row.push_back(number(w.in_energy(beta).value));
    for (const auto& w : values) row.push_back(number(present(w.in_kT(beta).value, cfg)));
    table.add(std::move(row));
  }
  if (cfg.format == "csv") return table.csv();
  return json{{"units", cfg.units}, {"eps", cfg.eps}, {"rows", table.rows()}}.dump(2) + "\n";
}

std::string curves_csv(const QuasiState& p, const QuasiState& q, InverseTemperature beta) {
  std::string s = "state,x,y\n";
  for (const auto& [name, state] : {std::pair{"p", &p}, std::pair{"q", &q}}) {
    for (const auto& pt : lorenz_curve(*state, beta)) s += std::string(name) + "," + cell(pt.x) + "," + cell(pt.y) + "\n";
  }
  return s;
}

json monotone_json(const MonotoneRecord& m, const RunConfig& cfg) {
  return json{{"alpha", m.alpha.label()},
              {"input", number(present(m.input_divergence, cfg))},
              {"output", number(present(m.output_divergence, cfg))}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InvalidInput(path + ": cannot write file");
}

std::string cmd_transform(const RunConfig& cfg) {
  const QuasiState p = io::load_quasi_state(cfg.inputs.at(0));
  const QuasiState q = io::load_quasi_state(cfg.inputs.at(1));
  const InverseTemperature beta = single_beta(cfg);
  const std::vector<Alpha> alphas = parse_alphas(cfg.alphas);
  const std::string curves = curves_csv(p, q, beta);
  if (!cfg.curves_path.empty()) write_file(cfg.curves_path, curves);
  if (cfg.format == "csv") return curves;

  const TransformVerdict verdict = second_laws_check(p, q, beta, alphas);
  json laws{{"feasible", verdict.feasible}, {"necessary_only", TransformVerdict::necessary_only}};
  laws["witness"] = verdict.witness ? monotone_json(*verdict.witness, cfg) : json(nullptr);
  laws["monotones"] = json::array();
  for (const auto& m : verdict.monotones) laws["monotones"].push_back(monotone_json(m, cfg));
  json doc{{"beta", beta.value()},
           {"units", cfg.units},
           {"thermo_majorizes", thermo_majorization_check(p, q, beta)},
           {"second_laws", laws}};
  if (!cfg.catalyst.empty()) {
    const Catalyst c{io::load_quasi_state(cfg.catalyst)};
    doc["catalytic"] = catalytic_transform_check(p, q, c, beta);
  }
  return doc.dump(2) + "\n";
}

std::string cmd_embezzle(const RunConfig& cfg) {
  const SmoothingParameter eps(cfg.eps);
  const std::vector<EmbezzleReport> reports = embezzle_sweep(cfg.dims);
  Table table({"N", "degradation", "work_nats", "close_tr", "close_catD"});
  for (const auto& r : reports) {
    table.add({r.catalyst_dim, r.degradation, r.work_embezzled, within_trace_bound(r.degradation, eps),
               within_catD_bound(r.degradation, r.catalyst_dim, eps)});
  }
  if (cfg.format == "csv") return table.csv();
  return json{{"eps", cfg.eps}, {"rows", table.rows()}}.dump(2) + "\n";
}

json atoms_json(const WorkDistribution& d) {
  json arr = json::array();
  for (const auto& a : d.atoms()) arr.push_back({{"W", a.work}, {"prob", a.prob}});
  return arr;
}

std::string cmd_fluctuation(const RunConfig& cfg) {
  const Protocol protocol = io::load_protocol(cfg.inputs.at(0));
  const InverseTemperature beta = single_beta(cfg);
  const double df = delta_F(protocol.initial_energies(), protocol.final_energies(), beta);
  const double expected = std::exp(-beta.value() * df);
  if (cfg.mode == "mc") {
    const JarzynskiEstimate est = jarzynski_estimate(protocol, beta, cfg.samples, cfg.seed);
    if (cfg.format == "csv") {
      Table t({"estimate", "standard_error", "expected", "samples", "seed"});
      t.add({est.estimate, number(est.standard_error), expected, cfg.samples, cfg.seed});
      return t.csv();
    }
    return json{{"mode", "mc"},
                {"beta", beta.value()},
                {"delta_F", df},
                {"expected", expected},
                {"estimate", est.estimate},
                {"standard_error", number(est.standard_error)},
                {"samples", cfg.samples},
                {"seed", cfg.seed}}
               .dump(2) +
           "\n";
  }
  const WorkDistribution fwd = enumerate_forward(protocol, beta);
  if (cfg.format == "csv") return io::to_csv(fwd);
  const WorkDistribution rev = enumerate_reverse(protocol, beta);
  const CrooksReport crooks = crooks_check(fwd, rev, beta, df);
  const double jarzynski = fwd.expectation([b = beta.value()](double w) { return std::exp(-b * w); });
  return json{{"mode", "exact"},
              {"beta", beta.value()},
              {"delta_F", df},
              {"jarzynski", jarzynski},
              {"expected", expected},
              {"jarzynski_deviation", std::abs(jarzynski - expected)},
              {"crooks_max_deviation", crooks.max_deviation},
              {"crooks_compared", crooks.compared},
              {"crooks_unmatched", crooks.unmatched_work},
              {"mean_work", fwd.mean()},
              {"forward", atoms_json(fwd)},
              {"reverse", atoms_json(rev)}}
             .dump(2) +
         "\n";
}

std::string cmd_measure(const RunConfig& cfg) {
  const QuasiState p = io::load_quasi_state(cfg.inputs.at(0));
  const std::size_t memory = cfg.memory_dim == 0 ? p.size() : cfg.memory_dim;
  const MeasurementLedger ledger =
      measure_and_reset(record_measurement(p, memory), single_beta(cfg), SmoothingParameter(cfg.eps), cfg.seed);
  if (cfg.format == "csv") {
    const io::LedgerRecord r = io::ledger_record(ledger);
    Table t({"outcome", "fee_nats", "seed"});
    t.add({r.outcome, r.fee_nats, r.seed});
    return t.csv();
  }
  return io::to_json(ledger);
}

void add_common(CLI::App* sub, RunConfig& cfg, bool beta_list) {
  auto* beta = sub->add_option("--beta", cfg.betas, beta_list ? "Inverse temperature(s), comma separated"
                                                              : "Inverse temperature");
  beta->delimiter(',')->capture_default_str();
  sub->add_option("--eps", cfg.eps, "Smoothing parameter in [0, 1]")->capture_default_str();
  sub->add_option("--out", cfg.out_path, "Write the result here instead of stdout");
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--units", cfg.units, "Units for dimensionless results")
      ->check(CLI::IsMember({"nats", "bits", "kT"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"One-shot thermodynamics toolkit", "oneshot"};
  app.require_subcommand(1);

  auto* entropy = app.add_subcommand("entropy", "Renyi entropies and divergences of a state against its Gibbs state");
  entropy->add_option("state", cfg.inputs, "State file")->required()->expected(1)->check(CLI::ExistingFile);
  entropy->add_option("--alpha", cfg.alphas, "Renyi orders, e.g. 0,0.5,1,2,inf")->delimiter(',');
  add_common(entropy, cfg, true);

  auto* work = app.add_subcommand("work", "Work cost of formation and distillable work");
  work->add_option("state", cfg.inputs, "State file")->required()->expected(1)->check(CLI::ExistingFile);
  add_common(work, cfg, true);

  auto* transform = app.add_subcommand("transform", "Decide p -> q under thermal operations");
  transform->add_option("states", cfg.inputs, "Input and target state files")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  transform->add_option("--catalyst", cfg.catalyst, "Catalyst state file")->check(CLI::ExistingFile);
  transform->add_option("--curves", cfg.curves_path, "Write Lorenz curve CSV here");
  transform->add_option("--alpha", cfg.alphas, "Renyi orders for the second-law check")->delimiter(',');
  add_common(transform, cfg, false);

  auto* embezzle = app.add_subcommand("embezzle", "Embezzling-catalyst sweep");
  embezzle->add_option("--n", cfg.dims, "Catalyst dimensions, comma separated")->delimiter(',');
  add_common(embezzle, cfg, false);

  auto* fluct = app.add_subcommand("fluctuation", "Work statistics of a quench/thermalize protocol");
  fluct->add_option("protocol", cfg.inputs, "Protocol file")->required()->expected(1);
  fluct->add_option("--mode", cfg.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  fluct->add_option("--samples", cfg.samples, "Monte Carlo trajectories")->check(CLI::PositiveNumber);
  fluct->add_option("--seed", cfg.seed, "Monte Carlo seed");
  add_common(fluct, cfg, false);

  auto* measure = app.add_subcommand("measure", "Record a state in a memory, read it, and pay for the reset");
  measure->add_option("state", cfg.inputs, "State file")->required()->expected(1)->check(CLI::ExistingFile);
  measure->add_option("--memory", cfg.memory_dim, "Memory dimension (default: state dimension)");
  measure->add_option("--seed", cfg.seed, "Readout seed");
  add_common(measure, cfg, false);

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    std::string result;
    if (*entropy) result = cmd_entropy(cfg);
    if (*work) result = cmd_work(cfg);
    if (*transform) result = cmd_transform(cfg);
    if (*embezzle) result = cmd_embezzle(cfg);
    if (*fluct) result = cmd_fluctuation(cfg);
    if (*measure) result = cmd_measure(cfg);
    if (cfg.out_path.empty()) {
      out << result;
    } else {
      write_file(cfg.out_path, result);
    }
    return kOk;
  } catch (const CapacityExceeded& e) {
    err << "oneshot: " << e.what() << "\n";
    return kInfeasible;
  } catch (const InvalidInput& e) {
    err << "oneshot: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "oneshot: " << e.what() << "\n";
    return kInfeasible;
  }
}

}  // namespace oneshot::cli
