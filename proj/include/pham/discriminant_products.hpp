#pragma once

// Discriminant-type products over tuples of critical values, accumulated as
// sums of natural logs of factor magnitudes.
//
//   D      ordered pairs (i, j), i != j:                  v_i - v_j
//   Y      first point distinguished, unordered pair:     2 v_1 - v_2 - v_3
//   Omega  ordered pair of disjoint unordered pairs:      v_1 + v_2 - v_3 - v_4
//   Hessian one factor per critical point:                det Hess(f_eps)
//
// Tuples are enumerated lexicographically in point index (= label order).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pham/critical_tracker.hpp"
#include "pham/polyalg.hpp"

namespace pham {

enum class ProductKind { D, Y, Omega, Hessian };

std::string_view kind_name(ProductKind k);  // "D", "Y", "Omega", "Hessian"
std::optional<ProductKind> parse_kind(std::string_view name);
std::string_view factor_kind_name(ProductKind k);  // "D_pair", "Y_triple", "Omega_quad", "Hessian"
std::size_t kind_arity(ProductKind k);

struct FactorRecord {
  std::array<std::uint32_t, 4> indices{};  // first kind_arity() entries used
  std::optional<double> log_magnitude;     // empty: ExactZero
};

struct ProductEvaluation {
  ProductKind kind = ProductKind::D;
  double log_total = 0.0;  // over nonzero factors
  std::size_t exact_zeros = 0;
  std::size_t factor_count = 0;
  std::vector<FactorRecord> factors;  // empty unless requested

  bool degenerate() const { return exact_zeros > 0; }
  std::optional<FactorRecord> first_zero() const;
};

/// Number of factors a product of this kind has over mu points.
Integer expected_factor_count(ProductKind kind, const Integer& mu);

ProductEvaluation log_D(std::span<const Complex> values, bool keep_factors = true);
ProductEvaluation log_Y(std::span<const Complex> values, bool keep_factors = true);
ProductEvaluation log_Omega(std::span<const Complex> values, bool keep_factors = true);
ProductEvaluation log_values_product(ProductKind kind, std::span<const Complex> values, bool keep_factors = true);

/// sum over the points of log |det Hess(f_eps)|.
ProductEvaluation log_hessian_product(const SparsePoly& f_eps, const CriticalPointSet& points,
                                      bool keep_factors = true);
/// Same, with the Pham part differentiated symbolically.
ProductEvaluation log_hessian_product(const LineFunction& f_eps, const CriticalPointSet& points,
                                      bool keep_factors = true);

/// Per-kind trace along a sequence of epsilon samples.
struct LogProductTrace {
  ProductKind kind = ProductKind::D;
  std::vector<Complex> epsilon_samples;
  std::vector<ProductEvaluation> samples;
  std::vector<Label> labels;  // index -> label, shared by all samples
  std::vector<double> magnitudes;  // grid |eps| values; empty means use |epsilon_samples|
};

}  // namespace pham
