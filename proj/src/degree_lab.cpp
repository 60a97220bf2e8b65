#include "pham/degree_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pham/errors.hpp"

namespace pham {

namespace {

double to_double(const Exponent& e) { return static_cast<double>(e.numerator()) / static_cast<double>(e.denominator()); }

long long ll(const Integer& v) { return to_int64(v); }

bool monotone(std::span<const double> s) {
  bool up = true, down = true;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double tiny = 1e-9 * std::max(1.0, std::abs(s[k]));
    if (s[k] < s[k - 1] - tiny) up = false;
    if (s[k] > s[k - 1] + tiny) down = false;
  }
  return up || down;
}

}  // namespace

void EpsilonGrid::validate() const {
  if (!(start > 0.0 && start <= 1e-2)) throw InvalidArgument("epsilon grid start must lie in (0, 1e-2]");
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("epsilon grid ratio must lie in (0, 1)");
  if (count < 4) throw InvalidArgument("epsilon grid needs at least 4 samples");
  if (!std::isfinite(phase)) throw InvalidArgument("epsilon grid phase must be finite");
}

std::vector<double> EpsilonGrid::magnitudes() const {
  std::vector<double> m;
  double e = start;
  for (int k = 0; k < count; ++k, e *= ratio) m.push_back(e);
  return m;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Match: return "Match";
    case Verdict::Mismatch: return "Mismatch";
    case Verdict::Degenerate: return "Degenerate";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Skipped: return "Skipped";
  }
  return "?";
}

std::optional<Integer> predicted_degree(const ExponentVector& a, ProductKind kind) {
  switch (kind) {
    case ProductKind::D: return l_value(a);
    case ProductKind::Hessian: return caustic_multiplicity(a);
    case ProductKind::Y: return mixed_stokes_multiplicity(a);
    case ProductKind::Omega: {
      auto p = pure_stokes_multiplicity(a);
      if (!p) return std::nullopt;
      return 2 * *p;
    }
  }
  return std::nullopt;
}

std::vector<LogProductTrace> sample_traces(const GenericLine& line, std::span<const ProductKind> kinds,
                                           const EpsilonGrid& grid, bool keep_factors) {
  grid.validate();
  GenericLine sampled = line;
  sampled.phase = grid.phase;
  const auto labels = enumerate_labels(line.a);
  std::vector<LogProductTrace> traces;
  for (auto k : kinds) traces.push_back(LogProductTrace{k, {}, {}, labels, {}});

  const SparsePoly phi = sampled.phi();
  for (double mag : grid.magnitudes()) {
    const Complex eps = sampled.epsilon(mag);
    const CriticalPointSet set = track_to_phi(sampled, eps);
    const CVector values = set.values();
    for (auto& tr : traces) {
      tr.epsilon_samples.push_back(eps);
      tr.magnitudes.push_back(mag);
      if (tr.kind == ProductKind::Hessian) {
        tr.samples.push_back(log_hessian_product(LineFunction(line.a, phi, eps), set, keep_factors));
      } else {
        tr.samples.push_back(log_values_product(tr.kind, values, keep_factors));
      }
    }
  }
  return traces;
}

double extrapolate_slopes(std::span<const double> s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double last = s.back();
  if (s.size() < 3) return last;
  const double d1 = s[s.size() - 2] - s[s.size() - 3];
  const double d2 = last - s[s.size() - 2];
  if (std::abs(d2) <= 1e-12 * std::max(1.0, std::abs(last)) || d1 == 0.0) return last;
  const double r = d2 / d1;
  if (!(std::abs(r) < 0.95)) return last;
  return last + d2 * r / (1.0 - r);
}

std::string degeneracy_hint(ProductKind kind, const FactorRecord& zero, const std::vector<Label>& labels) {
  auto lab = [&](std::size_t k) { return label_string(labels.at(zero.indices[k])); };
  switch (kind) {
    case ProductKind::D: return "coincident critical values: labels " + lab(0) + " " + lab(1);
    case ProductKind::Y: return "arithmetic progression: labels " + lab(0) + " ; " + lab(1) + " " + lab(2);
    case ProductKind::Omega: return "parallelogram: labels " + lab(0) + " " + lab(1) + " | " + lab(2) + " " + lab(3);
    case ProductKind::Hessian: return "degenerate critical point: label " + lab(0);
  }
  return {};
}

DegreeEstimate estimate_from_trace(const LogProductTrace& trace, std::optional<Integer> predicted) {
  DegreeEstimate est;
  est.kind = trace.kind;
  if (predicted) est.predicted = ll(*predicted);
  const std::size_t m = trace.samples.size();
  if (m < 2) throw InvalidArgument("degree estimation needs at least two samples");
  for (std::size_t k = 0; k < m; ++k) {
    est.eps_magnitudes.push_back(trace.magnitudes.size() == m ? trace.magnitudes[k]
                                                              : std::abs(trace.epsilon_samples[k]));
    est.log_totals.push_back(trace.samples[k].log_total);
  }
  for (std::size_t k = 0; k + 1 < m; ++k)
    est.slopes.push_back((est.log_totals[k + 1] - est.log_totals[k]) /
                         (std::log(est.eps_magnitudes[k + 1]) - std::log(est.eps_magnitudes[k])));
  est.extrapolated = extrapolate_slopes(est.slopes);
  est.snapped = std::llround(est.extrapolated);
  est.residual = std::abs(est.extrapolated - static_cast<double>(est.snapped));

  for (const auto& s : trace.samples) {
    if (s.degenerate()) {
      est.verdict = Verdict::Degenerate;
      if (auto z = s.first_zero()) est.hint = degeneracy_hint(trace.kind, *z, trace.labels);
      return est;
    }
  }
  const auto [lo, hi] = std::minmax_element(est.slopes.begin(), est.slopes.end());
  if (!monotone(est.slopes) && *hi - *lo > kInconclusiveSpread) {
    est.verdict = Verdict::Inconclusive;
    return est;
  }
  if (!est.predicted) {
    est.verdict = Verdict::Skipped;
  } else if (est.residual <= kMatchTolerance && est.snapped == *est.predicted) {
    est.verdict = Verdict::Match;
  } else {
    est.verdict = Verdict::Mismatch;
  }
  return est;
}

DegreeEstimate estimate_degree(const GenericLine& line, ProductKind kind, const EpsilonGrid& grid) {
  const ProductKind kinds[] = {kind};
  const auto traces = sample_traces(line, kinds, grid, true);
  return estimate_from_trace(traces.front(), predicted_degree(line.a, kind));
}

bool FactorHistogram::matches_prediction() const {
  if (!predicted) return false;
  return counts == *predicted && exact_zeros == predicted_zeros.value_or(0) && unclassified == 0;
}

std::vector<Exponent> admissible_exponents(const ExponentVector& a, ProductKind kind) {
  std::vector<Exponent> out;
  if (kind == ProductKind::Hessian) {
    Exponent s = 0;
    for (int ai : a) s += Exponent(ai - 1, ai);
    out.push_back(s);
    return out;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(Exponent(1) + Exponent(1, a[i]));
    for (std::size_t j = i; j < a.size(); ++j) out.push_back(Exponent(1) + Exponent(1, a[i]) + Exponent(1, a[j]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FactorHistogram classify_factors(const LogProductTrace& trace, const ExponentVector& a, bool strict) {
  if (trace.samples.size() < 2) throw InvalidArgument("classify_factors needs at least two samples");
  const auto& s1 = trace.samples[trace.samples.size() - 2];
  const auto& s2 = trace.samples.back();
  if (s1.factors.size() != s2.factors.size() || s1.factors.size() != s1.factor_count)
    throw InvalidArgument("classify_factors needs traces recorded with factors");
  const double dlog = std::log(std::abs(trace.epsilon_samples.back())) -
                      std::log(std::abs(trace.epsilon_samples[trace.samples.size() - 2]));
  const auto candidates = admissible_exponents(a, trace.kind);

  FactorHistogram h;
  h.kind = trace.kind;
  for (std::size_t k = 0; k < s1.factors.size(); ++k) {
    const auto& f1 = s1.factors[k];
    const auto& f2 = s2.factors[k];
    if (!f1.log_magnitude || !f2.log_magnitude) {
      ++h.exact_zeros;
      continue;
    }
    const double slope = (*f2.log_magnitude - *f1.log_magnitude) / dlog;
    const Exponent* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
      const double d = std::abs(slope - to_double(c));
      if (d < best_dist) {
        best_dist = d;
        best = &c;
      }
    }
    if (best == nullptr || best_dist > kClassifyTolerance) {
      if (strict) {
        std::ostringstream os;
        os << kind_name(trace.kind) << " factor " << k << " has slope " << slope
           << ", farther than " << kClassifyTolerance << " from every admissible exponent";
        throw UnclassifiedFactor(os.str(), slope);
      }
      ++h.unclassified;
      continue;
    }
    ++h.counts[*best];
    h.exponent_sum += to_double(*best);
  }
  return h;
}

std::optional<HistogramPrediction> predicted_histogram(const GenericLine& line, ProductKind kind) {
  const ExponentVector& a = line.a;
  const std::size_t n = a.size();
  HistogramPrediction p;
  auto add = [&](const Exponent& e, const Integer& count) {
    if (count != 0) p.counts[e] += ll(count);
  };
  switch (kind) {
    case ProductKind::D: {
      const auto counts = pair_depth_counts(a);
      for (std::size_t i = 0; i < n; ++i) add(Exponent(1) + Exponent(1, a[i]), counts[i]);
      return p;
    }
    case ProductKind::Y: {
      const auto counts = triple_depth_counts(a);
      for (std::size_t i = 0; i < n; ++i) add(Exponent(1) + Exponent(1, a[i]), counts[i]);
      return p;
    }
    case ProductKind::Hessian:
      add(admissible_exponents(a, kind).front(), milnor_number(a));
      return p;
    case ProductKind::Omega:
      break;
  }

  const Integer mu = milnor_number(a);
  if (n == 1) {
    const int d = a[0];
    const Exponent generic = Exponent(1) + Exponent(1, d);
    if (d % 2 == 1) {
      add(generic, binom22(mu));
      return p;
    }
    // ordered choices of two distinct pairs of opposite roots
    const Integer opposite = Integer(d / 2) * (d / 2 - 1);
    add(generic, binom22(mu) - opposite);
    if (line.tail.empty()) {
      p.zeros = ll(opposite);
      return p;
    }
    if (line.tail.coefficient({2}) != Complex(0.0)) {
      add(Exponent(1) + Exponent(2, d), opposite);
      return p;
    }
    return std::nullopt;
  }
  if (n == 2 && a[0] % 2 == 1 && a[1] % 2 == 1) {
    const int A = a[0], B = a[1];
    const Integer pairs = binom2(Integer(A)) * binom2(Integer(B));
    const Integer same_collection = A * binom22(Integer(B));
    const Integer cross = 4 * pairs * binom2(Integer(B));
    const Integer parallelograms = 2 * pairs;
    add(Exponent(1) + Exponent(1, A), binom22(mu) - same_collection - cross);
    add(Exponent(1) + Exponent(1, B), same_collection + cross - parallelograms);
    bool separable = true;
    for (const auto& [exps, c] : line.tail.terms())
      if (exps[0] != 0 && exps[1] != 0) separable = false;
    if (separable) {
      p.zeros = ll(parallelograms);
      return p;
    }
    if (line.tail.coefficient({1, 1}) != Complex(0.0)) {
      add(Exponent(1) + Exponent(1, A) + Exponent(1, B), parallelograms);
      return p;
    }
  }
  return std::nullopt;
}

bool ClusterReport::all_pass() const {
  return std::all_of(levels.begin(), levels.end(), [](const ClusterLevel& l) { return l.pass; });
}

ClusterReport cluster_scaling(const GenericLine& line, double eps_first, double eps_second) {
  if (!(eps_first > 0.0 && eps_second > 0.0) || eps_first == eps_second)
    throw InvalidArgument("cluster_scaling needs two distinct positive magnitudes");
  const auto set1 = track_to_phi(line, line.epsilon(eps_first));
  const auto set2 = track_to_phi(line, line.epsilon(eps_second));
  const double dlog = std::log(eps_first) - std::log(eps_second);

  ClusterReport report{line.a, eps_first, eps_second, {}};
  for (std::size_t depth = 0; depth < line.a.size(); ++depth) {
    std::vector<double> exps;
    for (std::size_t k = 0; k < set1.size(); ++k)
      for (std::size_t l = k + 1; l < set1.size(); ++l) {
        const auto& lk = set1.points[k].label;
        const auto& ll_ = set1.points[l].label;
        if (!std::equal(lk.begin(), lk.begin() + static_cast<std::ptrdiff_t>(depth), ll_.begin())) continue;
        if (lk[depth] == ll_[depth]) continue;
        const double g1 = std::abs(set1.points[k].value - set1.points[l].value);
        const double g2 = std::abs(set2.points[k].value - set2.points[l].value);
        exps.push_back((std::log(g1) - std::log(g2)) / dlog);
      }
    ClusterLevel level;
    level.depth = static_cast<int>(depth) + 1;
    level.predicted = Exponent(line.a[depth] + 1, line.a[depth]);
    level.pair_count = exps.size();
    if (!exps.empty()) {
      std::sort(exps.begin(), exps.end());
      const std::size_t mid = exps.size() / 2;
      const double median = exps.size() % 2 ? exps[mid] : 0.5 * (exps[mid - 1] + exps[mid]);
      level.measured = median;
      level.pass = std::abs(median - to_double(level.predicted)) <= kClusterTolerance;
    }
    report.levels.push_back(level);
  }
  return report;
}

bool MultiplicityReport::all_match() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ReportRow& r) { return r.verdict == Verdict::Match || r.verdict == Verdict::Skipped; });
}

int MultiplicityReport::exit_code() const {
  bool degenerate = false;
  for (const auto& r : rows) {
    if (r.verdict == Verdict::Mismatch || r.verdict == Verdict::Inconclusive) return 1;
    if (r.verdict == Verdict::Degenerate) degenerate = true;
  }
  return degenerate ? 3 : 0;
}

namespace {

std::optional<Preset> auto_omega_preset(const ExponentVector& a) {
  const Integer mu = milnor_number(a);
  if (a.size() == 1 && a[0] % 2 == 0 && a[0] >= 4) return Preset::quadratic_1d;
  if (a.size() == 2 && a[1] >= 2 && mu >= 4) return Preset::xy_coupled;
  return Preset::linear;
}

GenericLine resolve_line(const ExponentVector& a, const VerifyOptions& o, bool omega) {
  GenericLine line = [&] {
    if (o.phi) return line_from_phi(a, *o.phi, o.grid.phase);
    if (o.preset) return default_line(a, *o.preset, o.grid.phase);
    return default_line(a, omega ? *auto_omega_preset(a) : Preset::linear, o.grid.phase);
  }();
  if (o.jitter_seed) line = jittered(line, *o.jitter_seed);
  return line;
}

ReportRow row_from_estimate(std::string quantity, const std::optional<Integer>& closed, const DegreeEstimate& est,
                            std::string line, double divisor = 1.0) {
  ReportRow row;
  row.quantity = std::move(quantity);
  row.closed_form = closed;
  row.estimate = est.extrapolated / divisor;
  row.snapped = static_cast<double>(est.snapped) / divisor;
  row.residual = est.residual / divisor;
  row.verdict = est.verdict;
  row.line = std::move(line);
  row.hint = est.hint;
  return row;
}

}  // namespace

std::pair<GenericLine, GenericLine> verification_lines(const ExponentVector& a, const VerifyOptions& options) {
  return {resolve_line(a, options, false), resolve_line(a, options, true)};
}

std::string line_name(const ExponentVector& a, const VerifyOptions& o, bool omega) {
  std::string name = o.phi ? "user" : std::string(preset_name(o.preset ? *o.preset
                                                               : omega ? *auto_omega_preset(a)
                                                                       : Preset::linear));
  if (o.jitter_seed) name += "+jitter(" + std::to_string(*o.jitter_seed) + ")";
  return name;
}

MultiplicityReport verify_all(const ExponentVector& a, const VerifyOptions& options) {
  options.grid.validate();
  const Integer mu = milnor_number(a);
  if (mu > options.mu_cap)
    throw InvalidArgument("Milnor number " + mu.str() + " exceeds the cap " + std::to_string(options.mu_cap));

  MultiplicityReport report{a, compute_multiplicities(a), options.grid, {}, {}, {}};
  const auto [main_line, omega_line] = verification_lines(a, options);
  const std::string main_name = line_name(a, options, false);
  const std::string omega_name = line_name(a, options, true);
  const bool want_omega = report.closed.pure_stokes.has_value();
  const bool shared = want_omega && main_name == omega_name;

  std::vector<ProductKind> kinds = {ProductKind::D, ProductKind::Hessian, ProductKind::Y};
  if (shared) kinds.push_back(ProductKind::Omega);
  auto traces = sample_traces(main_line, kinds, options.grid, true);
  if (want_omega && !shared) {
    const ProductKind om[] = {ProductKind::Omega};
    traces.push_back(sample_traces(omega_line, om, options.grid, true).front());
  }

  auto find = [&](ProductKind k) -> const LogProductTrace& {
    return *std::find_if(traces.begin(), traces.end(), [&](const LogProductTrace& t) { return t.kind == k; });
  };

  const auto d_est = estimate_from_trace(find(ProductKind::D), report.closed.L);
  const auto h_est = estimate_from_trace(find(ProductKind::Hessian), report.closed.caustic);
  const auto y_est = estimate_from_trace(find(ProductKind::Y), report.closed.mixed_stokes);
  report.estimates = {d_est, h_est, y_est};

  report.rows.push_back(row_from_estimate("deg_D", report.closed.L, d_est, main_name));
  report.rows.push_back(row_from_estimate("caustic", report.closed.caustic, h_est, main_name));

  ReportRow maxwell;
  maxwell.quantity = "maxwell";
  maxwell.closed_form = report.closed.maxwell;
  maxwell.line = main_name;
  const double m_est = (d_est.extrapolated - 3.0 * h_est.extrapolated) / 2.0;
  maxwell.estimate = m_est;
  maxwell.snapped = static_cast<double>(std::llround(m_est));
  maxwell.residual = std::abs(m_est - *maxwell.snapped);
  if (d_est.verdict == Verdict::Degenerate || h_est.verdict == Verdict::Degenerate) {
    maxwell.verdict = Verdict::Degenerate;
    maxwell.hint = d_est.hint.empty() ? h_est.hint : d_est.hint;
  } else if (d_est.verdict == Verdict::Inconclusive || h_est.verdict == Verdict::Inconclusive) {
    maxwell.verdict = Verdict::Inconclusive;
  } else {
    const bool ok = *maxwell.residual <= kMatchTolerance &&
                    static_cast<long long>(*maxwell.snapped) == to_int64(report.closed.maxwell);
    maxwell.verdict = ok ? Verdict::Match : Verdict::Mismatch;
  }
  report.rows.push_back(maxwell);

  report.rows.push_back(row_from_estimate("mixed_stokes", report.closed.mixed_stokes, y_est, main_name));

  if (want_omega) {
    const auto o_est = estimate_from_trace(find(ProductKind::Omega), 2 * *report.closed.pure_stokes);
    report.estimates.push_back(o_est);
    report.rows.push_back(row_from_estimate("pure_stokes", report.closed.pure_stokes, o_est, omega_name, 2.0));
  } else {
    ReportRow skipped;
    skipped.quantity = "pure_stokes";
    skipped.verdict = Verdict::Skipped;
    skipped.line = omega_name;
    skipped.hint = "no closed form for this parity/arity";
    report.rows.push_back(skipped);
  }

  for (const auto& tr : traces) {
    if (tr.kind == ProductKind::Hessian) continue;
    FactorHistogram h = classify_factors(tr, a, false);
    const GenericLine& line = tr.kind == ProductKind::Omega ? omega_line : main_line;
    if (auto p = predicted_histogram(line, tr.kind)) {
      h.predicted = p->counts;
      h.predicted_zeros = p->zeros;
    }
    report.histograms.push_back(std::move(h));
  }
  return report;
}

}  // namespace pham
