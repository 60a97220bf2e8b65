#include "pham/report_io.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace pham {

namespace {

using nlohmann::json;

json optional_double(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json exponents_json(const ExponentVector& a) { return json(std::vector<int>(a.begin(), a.end())); }

std::string integer_text(const std::optional<Integer>& v) { return v ? v->str() : "unsupported"; }

std::string fixed(double x, int digits) {
  if (!std::isfinite(x)) return "-";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  std::string s(buf, r.ptr);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string join_labels(const LogProductTrace& trace, const FactorRecord& f) {
  auto lab = [&](std::size_t k) { return label_string(trace.labels.at(f.indices[k])); };
  switch (trace.kind) {
    case ProductKind::D: return lab(0) + " " + lab(1);
    case ProductKind::Y: return lab(0) + ";" + lab(1) + " " + lab(2);
    case ProductKind::Omega: return lab(0) + " " + lab(1) + "|" + lab(2) + " " + lab(3);
    case ProductKind::Hessian: return lab(0);
  }
  return {};
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "text") return OutputFormat::text;
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  return std::nullopt;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string format_exponent(const Exponent& e) {
  std::string s = std::to_string(e.numerator());
  if (e.denominator() != 1) s += "/" + std::to_string(e.denominator());
  return s;
}

json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return v.str();
}

json rational_to_json(const Rational& r) {
  std::string exact = numerator(r).str();
  if (denominator(r) != 1) exact += "/" + denominator(r).str();
  return json{{"exact", exact}, {"approx", static_cast<double>(r)}};
}

json multiplicities_to_json(const ExponentVector& a, const MultiplicitySet& m,
                            const std::optional<HomogeneousReport>& homogeneous) {
  json j;
  j["exponents"] = exponents_json(a);
  j["mu"] = integer_to_json(m.mu);
  j["L"] = integer_to_json(m.L);
  j["caustic"] = integer_to_json(m.caustic);
  j["maxwell"] = integer_to_json(m.maxwell);
  j["mixed_stokes"] = integer_to_json(m.mixed_stokes);
  j["pure_stokes"] = m.pure_stokes ? integer_to_json(*m.pure_stokes) : json("unsupported");
  if (homogeneous) {
    json h;
    h["caustic_over_n_mu"] = rational_to_json(homogeneous->caustic_ratio);
    h["maxwell_over_half_mu_squared"] = rational_to_json(homogeneous->maxwell_ratio);
    h["mixed_over_half_mu_cubed"] = rational_to_json(homogeneous->mixed_ratio);
    h["pure_over_eighth_mu_fourth"] =
        homogeneous->pure_ratio ? rational_to_json(*homogeneous->pure_ratio) : json("unsupported");
    j["homogeneous_ratios"] = h;
  }
  return j;
}

json histogram_to_json(const FactorHistogram& h) {
  json j;
  j["kind"] = std::string(kind_name(h.kind));
  json counts = json::object();
  for (const auto& [e, c] : h.counts) counts[format_exponent(e)] = c;
  j["counts"] = counts;
  j["exact_zeros"] = h.exact_zeros;
  j["unclassified"] = h.unclassified;
  j["exponent_sum"] = h.exponent_sum;
  if (h.predicted) {
    json p = json::object();
    for (const auto& [e, c] : *h.predicted) p[format_exponent(e)] = c;
    j["predicted"] = p;
    j["predicted_zeros"] = h.predicted_zeros.value_or(0);
    j["matches_prediction"] = h.matches_prediction();
  } else {
    j["predicted"] = nullptr;
  }
  return j;
}

json report_to_json(const MultiplicityReport& report) {
  json j;
  j["exponents"] = exponents_json(report.a);
  j["closed_forms"] = multiplicities_to_json(report.a, report.closed, std::nullopt);
  j["grid"] = {{"start", report.grid.start},
               {"ratio", report.grid.ratio},
               {"count", report.grid.count},
               {"phase", report.grid.phase}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["quantity"] = r.quantity;
    row["closed_form"] = r.closed_form ? integer_to_json(*r.closed_form) : json(nullptr);
    row["estimate"] = optional_double(r.estimate);
    row["snapped"] = optional_double(r.snapped);
    row["residual"] = optional_double(r.residual);
    row["verdict"] = std::string(verdict_name(r.verdict));
    row["line"] = r.line;
    row["hint"] = r.hint;
    rows.push_back(row);
  }
  j["rows"] = rows;
  json estimates = json::array();
  for (const auto& e : report.estimates) {
    json s;
    s["kind"] = std::string(kind_name(e.kind));
    json slopes = json::array();
    for (double x : e.slopes) slopes.push_back(finite_or_null(x));
    s["slopes"] = slopes;
    s["extrapolated"] = finite_or_null(e.extrapolated);
    s["snapped"] = e.snapped;
    s["predicted"] = e.predicted ? json(*e.predicted) : json(nullptr);
    s["verdict"] = std::string(verdict_name(e.verdict));
    estimates.push_back(s);
  }
  j["estimates"] = estimates;
  json hist = json::array();
  for (const auto& h : report.histograms) hist.push_back(histogram_to_json(h));
  j["histograms"] = hist;
  j["all_match"] = report.all_match();
  j["exit_code"] = report.exit_code();
  return j;
}

json cluster_to_json(const ClusterReport& report) {
  json j;
  j["exponents"] = exponents_json(report.a);
  j["eps"] = {report.eps_first, report.eps_second};
  json levels = json::array();
  for (const auto& l : report.levels) {
    json level;
    level["depth"] = l.depth;
    level["predicted"] = format_exponent(l.predicted);
    level["measured"] = optional_double(l.measured);
    level["pairs"] = l.pair_count;
    level["pass"] = l.pass;
    levels.push_back(level);
  }
  j["levels"] = levels;
  j["all_pass"] = report.all_pass();
  return j;
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

std::string multiplicities_text(const ExponentVector& a, const MultiplicitySet& m,
                                const std::optional<HomogeneousReport>& homogeneous) {
  std::ostringstream os;
  os << "a = " << a.to_string() << "\n";
  os << "  mu             " << m.mu << "\n";
  os << "  L              " << m.L << "\n";
  os << "  caustic        " << m.caustic << "\n";
  os << "  maxwell        " << m.maxwell << "\n";
  os << "  mixed_stokes   " << m.mixed_stokes << "\n";
  os << "  pure_stokes    " << integer_text(m.pure_stokes) << "\n";
  if (homogeneous) {
    os << "homogeneous ratios\n";
    os << "  C/(n mu)       " << fixed(static_cast<double>(homogeneous->caustic_ratio), 6) << "\n";
    os << "  M/(mu^2/2)     " << fixed(static_cast<double>(homogeneous->maxwell_ratio), 6) << "\n";
    os << "  mixed/(mu^3/2) " << fixed(static_cast<double>(homogeneous->mixed_ratio), 6) << "\n";
    os << "  pure/(mu^4/8)  "
       << (homogeneous->pure_ratio ? fixed(static_cast<double>(*homogeneous->pure_ratio), 6) : "unsupported")
       << "\n";
  }
  return os.str();
}

std::string multiplicities_csv(const ExponentVector& a, const MultiplicitySet& m) {
  std::ostringstream os;
  os << "exponents,mu,L,caustic,maxwell,mixed_stokes,pure_stokes\n";
  std::string ex;
  for (int x : a) ex += (ex.empty() ? "" : " ") + std::to_string(x);
  os << ex << ',' << m.mu << ',' << m.L << ',' << m.caustic << ',' << m.maxwell << ',' << m.mixed_stokes << ','
     << integer_text(m.pure_stokes) << "\n";
  return os.str();
}

std::string report_text(const MultiplicityReport& report) {
  std::ostringstream os;
  os << "a = " << report.a.to_string() << "  grid: start " << format_double(report.grid.start) << ", ratio "
     << format_double(report.grid.ratio) << ", count " << report.grid.count << ", phase "
     << format_double(report.grid.phase) << "\n";
  os << pad("quantity", 14) << pad("closed", 12) << pad("estimate", 14) << pad("snapped", 10) << pad("residual", 10)
     << pad("verdict", 14) << "line\n";
  for (const auto& r : report.rows) {
    os << pad(r.quantity, 14) << pad(r.closed_form ? r.closed_form->str() : "-", 12)
       << pad(r.estimate ? fixed(*r.estimate, 4) : "-", 14) << pad(r.snapped ? fixed(*r.snapped, 1) : "-", 10)
       << pad(r.residual ? fixed(*r.residual, 4) : "-", 10) << pad(std::string(verdict_name(r.verdict)), 14)
       << r.line << "\n";
    if (!r.hint.empty()) os << "    " << r.hint << "\n";
  }
  for (const auto& h : report.histograms) {
    os << kind_name(h.kind) << " factor exponents:";
    for (const auto& [e, c] : h.counts) os << ' ' << c << " @ " << format_exponent(e);
    if (h.exact_zeros) os << ", " << h.exact_zeros << " exact zeros";
    if (h.unclassified) os << ", " << h.unclassified << " unclassified";
    if (h.predicted) os << (h.matches_prediction() ? "  (as predicted)" : "  (differs from prediction)");
    os << "\n";
  }
  return os.str();
}

std::string cluster_text(const ClusterReport& report) {
  std::ostringstream os;
  os << "a = " << report.a.to_string() << "  eps " << format_double(report.eps_first) << " -> "
     << format_double(report.eps_second) << "\n";
  os << pad("depth", 7) << pad("predicted", 12) << pad("measured", 12) << pad("pairs", 9) << "pass\n";
  for (const auto& l : report.levels) {
    const double p = static_cast<double>(l.predicted.numerator()) / static_cast<double>(l.predicted.denominator());
    os << pad(std::to_string(l.depth), 7) << pad(format_exponent(l.predicted) + " (" + fixed(p, 3) + ")", 12)
       << pad(l.measured ? fixed(*l.measured, 4) : "-", 12) << pad(std::to_string(l.pair_count), 9)
       << (l.pass ? "yes" : "no") << "\n";
  }
  return os.str();
}

std::string cluster_csv(const ClusterReport& report) {
  std::string s = "depth,predicted,measured,pairs,pass\n";
  for (const auto& l : report.levels) {
    s += std::to_string(l.depth) + "," + format_exponent(l.predicted) + "," +
         (l.measured ? format_double(*l.measured) : "") + "," + std::to_string(l.pair_count) + "," +
         (l.pass ? "true" : "false") + "\n";
  }
  return s;
}

std::string slopes_csv(const std::vector<DegreeEstimate>& estimates) {
  std::string s = "kind,eps_magnitude,log_total,slope\n";
  for (const auto& e : estimates) {
    for (std::size_t k = 0; k < e.eps_magnitudes.size(); ++k) {
      s += std::string(kind_name(e.kind)) + "," + format_double(e.eps_magnitudes[k]) + "," +
           format_double(e.log_totals[k]) + "," + (k < e.slopes.size() ? format_double(e.slopes[k]) : "") + "\n";
    }
  }
  return s;
}

std::string factors_csv(const LogProductTrace& trace, std::size_t sample) {
  const auto& eval = trace.samples.at(sample);
  std::string s = "kind,indices,log_magnitude\n";
  for (const auto& f : eval.factors) {
    s += std::string(factor_kind_name(trace.kind)) + "," + join_labels(trace, f) + "," +
         (f.log_magnitude ? format_double(*f.log_magnitude) : "") + "\n";
  }
  return s;
}

std::string presets_text() {
  std::string s;
  for (auto p : all_presets()) s += pad(std::string(preset_name(p)), 14) + std::string(preset_description(p)) + "\n";
  return s;
}

}  // namespace pham
