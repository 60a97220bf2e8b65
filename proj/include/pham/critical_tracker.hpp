#pragma once

// Critical points and critical values of f - eps*phi for the normalized Pham
// function f, with labels (k_1,...,k_n) that encode the depth hierarchy: two
// points lie in one collection of depth i iff their labels share the first i
// entries.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pham/closed_forms.hpp"
#include "pham/polyalg.hpp"

namespace pham {

inline constexpr double kDefaultPhase = 0.37;
/// Coefficient of xy in the xy_coupled preset.
inline constexpr double kXyCoupling = 0.003;
/// Coefficient of z^2 in the quadratic_1d preset.
inline constexpr double kQuadraticCoefficient = 0.1;

enum class Preset { linear, quadratic_1d, xy_coupled };

std::string_view preset_name(Preset p);
std::optional<Preset> parse_preset(std::string_view name);
std::vector<Preset> all_presets();
std::string_view preset_description(Preset p);

/// The line {f - eps*phi}, phi = sum q_i z_i + tail.
struct GenericLine {
  GenericLine(ExponentVector a, std::vector<double> q, SparsePoly tail, double phase = kDefaultPhase);

  ExponentVector a;
  std::vector<double> q;
  SparsePoly tail;  // no constant or linear terms
  double phase;

  SparsePoly linear_part() const;
  SparsePoly phi() const;
  Complex epsilon(double magnitude) const;
};

/// q ladder: q_1 = 1, then x0.3 on a strict decrease of the exponent and x0.01 on equality.
std::vector<double> ladder_coefficients(const ExponentVector& a);

GenericLine default_line(const ExponentVector& a, Preset preset, double phase = kDefaultPhase);

/// Splits a user polynomial into linear part and tail and validates it.
GenericLine line_from_phi(const ExponentVector& a, const SparsePoly& phi, double phase = kDefaultPhase);

/// Multiplies each ladder ratio q_{i+1}/q_i by a seeded factor in [0.9, 1.1]
/// (capped at 1 where a_{i+1} = a_i so the line stays admissible).
GenericLine jittered(const GenericLine& line, std::uint64_t seed);

using Label = std::vector<int>;

struct CriticalPoint {
  Label label;
  CVector coords;
  Complex value;
};

struct CriticalPointSet {
  Complex epsilon;
  std::vector<CriticalPoint> points;  // label order

  std::size_t size() const { return points.size(); }
  CVector values() const;
};

/// All labels of prod [0, a_i - 1], k_1 most significant.
std::vector<Label> enumerate_labels(const ExponentVector& a);

/// f - eps*phi with the Pham part differentiated symbolically.
class LineFunction {
 public:
  LineFunction(const ExponentVector& a, const SparsePoly& phi, Complex eps);

  Complex value(std::span<const Complex> z) const;
  CVector gradient(std::span<const Complex> z) const;
  Eigen::MatrixXcd hessian(std::span<const Complex> z) const;
  SparsePoly as_sparse() const;

  const PhamFunction& pham() const { return f_; }
  Complex epsilon() const { return eps_; }

 private:
  PhamFunction f_;
  SparsePoly phi_;
  Complex eps_;
  std::vector<SparsePoly> phi_grad_;
  std::vector<std::vector<SparsePoly>> phi_second_;
};

/// Closed-form critical points of f - eps*phi_0; requires an empty tail,
/// eps != 0 and |eps| <= 0.01.
CriticalPointSet separable_critical_set(const GenericLine& line, Complex eps);

struct TrackOptions {
  int steps = 32;
  int max_doublings = 3;
  double newton_tolerance = 1e-13;
  int max_newton_iterations = 50;
};

/// Tracks the critical points of f - eps(phi_0 + t(target - phi_0)) from t = 0
/// to t = 1. `target` must share the linear part of the line.
CriticalPointSet track_to(const GenericLine& line, const SparsePoly& target, Complex eps,
                          const TrackOptions& options = {});

CriticalPointSet track_to_phi(const GenericLine& line, Complex eps, int steps = 32);

/// phi_0, ..., phi_n: phi_j keeps the linear part plus the tail monomials in z_1..z_j only.
std::vector<SparsePoly> phi_ladder(const GenericLine& line);

/// max_k |grad(f - eps*phi)(z_k)|_inf over the set.
double max_gradient_residual(const ExponentVector& a, const SparsePoly& phi, const CriticalPointSet& set);

/// Residual bound 1e-11 max(1,|eps|) demanded of every returned set.
double residual_tolerance(Complex eps);

/// Differences v_k - v_l over pairs (k < l) that share the first `depth`
/// label entries, in label order.
CVector within_collection_differences(const CriticalPointSet& set, std::size_t depth);

std::string label_string(const Label& label);  // "0.2.1"

}  // namespace pham
