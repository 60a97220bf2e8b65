#pragma once

// Closed-form local multiplicities of the bifurcation sets of a Pham
// singularity f = z_1^{a_1+1} + ... + z_n^{a_n+1}. Everything here is exact.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pham {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Pham exponents a_1 >= ... >= a_n >= 1. The constructor sorts into
/// descending order and rejects empty input and entries < 1.
class ExponentVector {
 public:
  explicit ExponentVector(std::vector<int> a);
  ExponentVector(std::initializer_list<int> a) : ExponentVector(std::vector<int>(a)) {}

  std::size_t size() const { return a_.size(); }
  int operator[](std::size_t i) const { return a_[i]; }
  std::span<const int> values() const { return a_; }
  auto begin() const { return a_.begin(); }
  auto end() const { return a_.end(); }

  bool all_equal() const;
  std::string to_string() const;  // "(5,3)"

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

 private:
  std::vector<int> a_;
};

struct MultiplicitySet {
  Integer mu;
  Integer L;
  Integer caustic;
  Integer maxwell;
  Integer mixed_stokes;
  std::optional<Integer> pure_stokes;  // empty: no closed form for this parity/arity
};

Integer milnor_number(const ExponentVector& a);
Integer l_value(const ExponentVector& a);
Integer caustic_multiplicity(const ExponentVector& a);
Integer maxwell_multiplicity(const ExponentVector& a);

/// A(A-1)(A-2)/2: one distinguished point plus an unordered pair.
Integer binom12(const Integer& A);
/// C(A,2)*C(A-2,2): ordered pairs of disjoint unordered pairs.
Integer binom22(const Integer& A);
/// A(A-1)/2, zero for A < 2.
Integer binom2(const Integer& A);

Integer mixed_stokes_multiplicity(const ExponentVector& a);

/// Defined for n = 1 (any d) and for n = 2 with both exponents odd.
std::optional<Integer> pure_stokes_multiplicity(const ExponentVector& a);

/// L written as a sum over depth levels, in the style of the mixed formula.
Integer l_value_rewritten(const ExponentVector& a);

/// T_j: number of (1;2)-triples whose first separating depth is j (1-based
/// j maps to index j-1). Sum of T_j equals binom12(mu).
std::vector<Integer> triple_depth_counts(const ExponentVector& a);

/// sum_j T_j (1 + 1/a_j); equals mixed_stokes_multiplicity.
Integer mixed_stokes_telescoped(const ExponentVector& a);

/// Ordered pairs of distinct points whose first separating depth is j.
std::vector<Integer> pair_depth_counts(const ExponentVector& a);

MultiplicitySet compute_multiplicities(const ExponentVector& a);

struct HomogeneousReport {
  int a = 0;
  int n = 0;
  Integer mu;
  Integer caustic;
  Integer maxwell;
  Integer mixed_stokes;
  std::optional<Integer> pure_stokes;
  // C/(n mu), M/(mu^2/2), mixed/(mu^3/2), pure/(mu^4/8)
  Rational caustic_ratio;
  Rational maxwell_ratio;
  Rational mixed_ratio;
  std::optional<Rational> pure_ratio;
};

/// Closed forms for the homogeneous case a_1 = ... = a_n = a, computed from
/// the dedicated homogeneous expressions for C and M and cross-checked
/// against the general formulas (InternalError on disagreement).
HomogeneousReport homogeneous_report(int a, int n);

/// Exact integer quotient; throws InternalError if the rational is not integral.
Integer to_integer_exact(const Rational& r, const char* context);

/// Converts to long long, throwing InvalidArgument on overflow.
long long to_int64(const Integer& v);

}  // namespace pham
