#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pham/closed_forms.hpp"
#include "pham/degree_lab.hpp"
#include "pham/errors.hpp"
#include "pham/poly_json.hpp"
#include "pham/report_io.hpp"

namespace pham::cli {

namespace {

struct RunConfig {
  std::vector<int> exponents;
  std::string preset;
  std::string phi_file;
  std::string format = "text";
  std::string kind = "D";
  EpsilonGrid grid;
  std::optional<std::uint64_t> jitter;
  long long mu_cap = 16;
  std::vector<double> eps_pair = {1e-3, 1e-4};
  std::size_t sample = 0;
};

OutputFormat format_of(const RunConfig& c) { return *parse_format(c.format); }

std::optional<Preset> preset_of(const RunConfig& c) {
  if (c.preset.empty()) return std::nullopt;
  auto p = parse_preset(c.preset);
  if (!p) throw InvalidArgument("unknown preset '" + c.preset + "'");
  return p;
}

std::optional<SparsePoly> phi_of(const RunConfig& c) {
  if (c.phi_file.empty()) return std::nullopt;
  std::ifstream in(c.phi_file);
  if (!in) throw InvalidArgument("cannot open " + c.phi_file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(c.phi_file + ": " + e.what());
  }
  return poly_from_json(j);
}

VerifyOptions verify_options(const RunConfig& c) {
  VerifyOptions o;
  o.preset = preset_of(c);
  o.phi = phi_of(c);
  o.grid = c.grid;
  o.jitter_seed = c.jitter;
  o.mu_cap = c.mu_cap;
  o.grid.validate();
  return o;
}

GenericLine single_line(const ExponentVector& a, const RunConfig& c, bool omega) {
  auto [main, om] = verification_lines(a, verify_options(c));
  return omega ? om : main;
}

int cmd_mult(const RunConfig& c, std::ostream& out) {
  const ExponentVector a(c.exponents);
  const auto m = compute_multiplicities(a);
  std::optional<HomogeneousReport> h;
  if (a.all_equal()) h = homogeneous_report(a[0], static_cast<int>(a.size()));
  switch (format_of(c)) {
    case OutputFormat::json: out << render_json(multiplicities_to_json(a, m, h)); break;
    case OutputFormat::csv: out << multiplicities_csv(a, m); break;
    case OutputFormat::text: out << multiplicities_text(a, m, h); break;
  }
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const ExponentVector a(c.exponents);
  const auto report = verify_all(a, verify_options(c));
  switch (format_of(c)) {
    case OutputFormat::json: out << render_json(report_to_json(report)); break;
    case OutputFormat::csv: out << slopes_csv(report.estimates); break;
    case OutputFormat::text: out << report_text(report); break;
  }
  return report.exit_code();
}

int cmd_cluster(const RunConfig& c, std::ostream& out) {
  const ExponentVector a(c.exponents);
  const GenericLine line = single_line(a, c, false);
  const auto report = cluster_scaling(line, c.eps_pair.at(0), c.eps_pair.at(1));
  switch (format_of(c)) {
    case OutputFormat::json: out << render_json(cluster_to_json(report)); break;
    case OutputFormat::csv: out << cluster_csv(report); break;
    case OutputFormat::text: out << cluster_text(report); break;
  }
  return report.all_pass() ? kOk : kFailed;
}

int cmd_trace(const RunConfig& c, std::ostream& out) {
  const ExponentVector a(c.exponents);
  const auto kind = parse_kind(c.kind);
  if (!kind) throw InvalidArgument("unknown kind '" + c.kind + "'");
  const auto options = verify_options(c);
  if (milnor_number(a) > options.mu_cap) throw InvalidArgument("Milnor number exceeds the cap");
  if (c.sample >= static_cast<std::size_t>(c.grid.count)) throw InvalidArgument("--sample is outside the grid");
  const GenericLine line = single_line(a, c, *kind == ProductKind::Omega);
  const ProductKind kinds[] = {*kind};
  const auto traces = sample_traces(line, kinds, c.grid, true);
  if (format_of(c) == OutputFormat::csv || format_of(c) == OutputFormat::text) {
    out << factors_csv(traces.front(), c.sample);
  } else {
    const auto est = estimate_from_trace(traces.front(), predicted_degree(a, *kind));
    out << slopes_csv({est});
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local multiplicities of bifurcation sets of Pham singularities", "pham-mult"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_exponents = [&](CLI::App* sub) {
    sub->add_option("exponents", c.exponents, "Pham exponents a_1 ... a_n (each >= 1)")->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  };
  auto add_line = [&](CLI::App* sub) {
    sub->add_option("--preset", c.preset, "phi preset")
        ->check(CLI::IsMember({"linear", "quadratic_1d", "xy_coupled"}));
    sub->add_option("--phi", c.phi_file, "JSON polynomial file for phi");
    sub->add_option("--phase", c.grid.phase, "Argument of eps in radians");
    sub->add_option("--jitter", c.jitter, "Seed for multiplicative q jitter in [0.9, 1.1]");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--eps-start", c.grid.start, "Largest |eps| sample");
    sub->add_option("--eps-ratio", c.grid.ratio, "Ratio between successive |eps| samples");
    sub->add_option("--eps-count", c.grid.count, "Number of |eps| samples");
    sub->add_option("--mu-cap", c.mu_cap, "Largest Milnor number attempted");
  };

  auto* mult = app.add_subcommand("mult", "Closed-form multiplicities");
  add_exponents(mult);
  add_format(mult);

  auto* verify = app.add_subcommand("verify", "Numerical verification of every closed form");
  add_exponents(verify);
  add_format(verify);
  add_line(verify);
  add_grid(verify);

  auto* cluster = app.add_subcommand("cluster", "Critical-value gap exponents per depth");
  add_exponents(cluster);
  add_format(cluster);
  add_line(cluster);
  cluster->add_option("--eps", c.eps_pair, "Two |eps| magnitudes")->expected(2);

  auto* trace = app.add_subcommand("trace", "Dump per-factor log magnitudes as CSV");
  add_exponents(trace);
  add_format(trace);
  add_line(trace);
  add_grid(trace);
  trace->add_option("--kind", c.kind, "Product kind")->check(CLI::IsMember({"D", "Y", "Omega", "Hessian"}));
  trace->add_option("--sample", c.sample, "Grid sample index to dump");

  auto* presets = app.add_subcommand("presets", "List phi presets");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*presets) {
      out << presets_text();
      return kOk;
    }
    if (*mult) return cmd_mult(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*cluster) return cmd_cluster(c, out);
    if (*trace) return cmd_trace(c, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace pham::cli
