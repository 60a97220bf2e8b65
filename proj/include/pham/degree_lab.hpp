#pragma once

// Vanishing orders of D, Y, Omega and the Hessian product along a line
// {f - eps*phi}, estimated from log-log slopes on a geometric epsilon grid and
// compared with the closed forms.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "pham/closed_forms.hpp"
#include "pham/critical_tracker.hpp"
#include "pham/discriminant_products.hpp"

namespace pham {

/// Tolerance on |extrapolated - snapped| for a Match.
inline constexpr double kMatchTolerance = 0.05;
/// Largest distance from a per-factor slope to its snapped exponent.
inline constexpr double kClassifyTolerance = 0.08;
/// Spread above which a non-monotone slope sequence is Inconclusive.
inline constexpr double kInconclusiveSpread = 0.2;
/// Cluster gap exponents must land this close to (a_i + 1)/a_i.
inline constexpr double kClusterTolerance = 0.05;

struct EpsilonGrid {
  double start = 1e-2;
  double ratio = 0.31622776601683794;  // 10^{-1/2}
  int count = 7;
  double phase = kDefaultPhase;

  void validate() const;
  std::vector<double> magnitudes() const;
};

enum class Verdict { Match, Mismatch, Degenerate, Inconclusive, Skipped };
std::string_view verdict_name(Verdict v);

struct DegreeEstimate {
  ProductKind kind = ProductKind::D;
  std::vector<double> eps_magnitudes;
  std::vector<double> log_totals;
  std::vector<double> slopes;  // slopes[k] between samples k and k+1
  double extrapolated = 0.0;
  long long snapped = 0;
  double residual = 0.0;
  std::optional<long long> predicted;
  Verdict verdict = Verdict::Inconclusive;
  std::string hint;  // set for Degenerate
};

/// Closed-form vanishing order of the product along a generic line:
/// D -> L, Hessian -> C, Y -> mixed, Omega -> 2 * pure (when defined).
std::optional<Integer> predicted_degree(const ExponentVector& a, ProductKind kind);

/// Tracks the critical points once per grid sample and evaluates every requested kind.
std::vector<LogProductTrace> sample_traces(const GenericLine& line, std::span<const ProductKind> kinds,
                                           const EpsilonGrid& grid, bool keep_factors = true);

/// Richardson-style limit of a slope sequence: Aitken's delta-squared on the
/// last three slopes when they converge geometrically, else the last slope.
double extrapolate_slopes(std::span<const double> slopes);

DegreeEstimate estimate_from_trace(const LogProductTrace& trace, std::optional<Integer> predicted);
DegreeEstimate estimate_degree(const GenericLine& line, ProductKind kind, const EpsilonGrid& grid = {});

/// Text naming the first structural zero of an evaluation, e.g. "parallelogram: labels 0.1 1.2 | 0.2 1.1".
std::string degeneracy_hint(ProductKind kind, const FactorRecord& zero, const std::vector<Label>& labels);

using Exponent = boost::rational<long long>;

struct FactorHistogram {
  ProductKind kind = ProductKind::D;
  std::map<Exponent, long long> counts;
  long long exact_zeros = 0;
  long long unclassified = 0;
  double exponent_sum = 0.0;  // sum of snapped exponents

  std::optional<std::map<Exponent, long long>> predicted;
  std::optional<long long> predicted_zeros;

  /// True when a prediction exists and counts, zeros and unclassified all agree with it.
  bool matches_prediction() const;
};

/// Candidate per-factor exponents: {1 + 1/a_j} and {1 + 1/a_i + 1/a_j}; for the
/// Hessian the single value sum (a_i - 1)/a_i.
std::vector<Exponent> admissible_exponents(const ExponentVector& a, ProductKind kind);

/// Per-factor slopes between the two smallest-|eps| samples, snapped to the
/// nearest admissible exponent. Throws UnclassifiedFactor when `strict` and a
/// slope is farther than kClassifyTolerance from every candidate.
FactorHistogram classify_factors(const LogProductTrace& trace, const ExponentVector& a, bool strict = true);

struct HistogramPrediction {
  std::map<Exponent, long long> counts;
  long long zeros = 0;
};

/// Factor-exponent counts implied by the depth hierarchy, where known.
std::optional<HistogramPrediction> predicted_histogram(const GenericLine& line, ProductKind kind);

struct ClusterLevel {
  int depth = 0;
  Exponent predicted;
  std::optional<double> measured;  // median; empty when the level has no pairs
  std::size_t pair_count = 0;
  bool pass = true;
};

struct ClusterReport {
  ExponentVector a;
  double eps_first = 0.0;
  double eps_second = 0.0;
  std::vector<ClusterLevel> levels;

  bool all_pass() const;
};

ClusterReport cluster_scaling(const GenericLine& line, double eps_first, double eps_second);

struct VerifyOptions {
  std::optional<Preset> preset;  // empty: linear for D/Y/Hessian and a generic preset for Omega
  std::optional<SparsePoly> phi;
  EpsilonGrid grid;
  std::optional<std::uint64_t> jitter_seed;
  long long mu_cap = 16;
};

struct ReportRow {
  std::string quantity;  // deg_D, caustic, maxwell, mixed_stokes, pure_stokes
  std::optional<Integer> closed_form;
  std::optional<double> estimate;
  std::optional<double> snapped;
  std::optional<double> residual;
  Verdict verdict = Verdict::Skipped;
  std::string line;
  std::string hint;
};

struct MultiplicityReport {
  ExponentVector a;
  MultiplicitySet closed;
  EpsilonGrid grid;
  std::vector<ReportRow> rows;
  std::vector<DegreeEstimate> estimates;
  std::vector<FactorHistogram> histograms;

  bool all_match() const;
  /// 0 all attempted rows Match, 1 Mismatch or Inconclusive, 3 Degenerate.
  int exit_code() const;
};

/// Resolves the lines `verify_all` uses: first for D/Y/Hessian, second for Omega.
std::pair<GenericLine, GenericLine> verification_lines(const ExponentVector& a, const VerifyOptions& options);
std::string line_name(const ExponentVector& a, const VerifyOptions& options, bool omega);

MultiplicityReport verify_all(const ExponentVector& a, const VerifyOptions& options = {});

}  // namespace pham
