#pragma once

// Rendering of multiplicities, verification reports, cluster reports and
// traces as JSON, CSV and plain-text tables. Numbers are formatted with
// std::to_chars, so output does not depend on the locale.

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "pham/closed_forms.hpp"
#include "pham/degree_lab.hpp"

namespace pham {

enum class OutputFormat { text, json, csv };
std::optional<OutputFormat> parse_format(std::string_view name);

/// Shortest round-trip decimal form, '.' separator.
std::string format_double(double x);
std::string format_exponent(const Exponent& e);  // "4/3", "2"

/// Integers that fit in int64 become JSON numbers, larger ones strings.
nlohmann::json integer_to_json(const Integer& v);
nlohmann::json rational_to_json(const Rational& r);  // {"exact": "p/q", "approx": x}

nlohmann::json multiplicities_to_json(const ExponentVector& a, const MultiplicitySet& m,
                                      const std::optional<HomogeneousReport>& homogeneous);
nlohmann::json report_to_json(const MultiplicityReport& report);
nlohmann::json cluster_to_json(const ClusterReport& report);
nlohmann::json histogram_to_json(const FactorHistogram& h);

/// Two-space indented dump plus trailing newline; parse + render is the identity.
std::string render_json(const nlohmann::json& j);

std::string multiplicities_text(const ExponentVector& a, const MultiplicitySet& m,
                                const std::optional<HomogeneousReport>& homogeneous);
std::string multiplicities_csv(const ExponentVector& a, const MultiplicitySet& m);
std::string report_text(const MultiplicityReport& report);
std::string cluster_text(const ClusterReport& report);
std::string cluster_csv(const ClusterReport& report);

/// kind,eps_magnitude,log_total,slope; the slope column is empty on the last sample.
std::string slopes_csv(const std::vector<DegreeEstimate>& estimates);

/// kind,indices,log_magnitude for one sample of a trace. Labels are joined with
/// '.', points with ' '; Y separates its distinguished point with ';' and Omega
/// its two pairs with '|'. Exact zeros have an empty log_magnitude.
std::string factors_csv(const LogProductTrace& trace, std::size_t sample);

std::string presets_text();

}  // namespace pham
