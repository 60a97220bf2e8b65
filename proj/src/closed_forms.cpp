#include "pham/closed_forms.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

#include "pham/errors.hpp"

namespace pham {

namespace {

// a_lo * ... * a_{hi-1}, empty product = 1.
Integer range_product(const ExponentVector& a, std::size_t lo, std::size_t hi) {
  Integer p = 1;
  for (std::size_t i = lo; i < hi; ++i) p *= a[i];
  return p;
}

Rational ratio(const Integer& num, const Integer& den) { return Rational(num, den); }

}  // namespace

ExponentVector::ExponentVector(std::vector<int> a) : a_(std::move(a)) {
  if (a_.empty()) throw InvalidArgument("exponent vector must have at least one entry");
  for (int v : a_) {
    if (v < 1) throw InvalidArgument("Pham exponents must be positive, got " + std::to_string(v));
  }
  std::sort(a_.begin(), a_.end(), std::greater<>());
}

bool ExponentVector::all_equal() const {
  return std::all_of(a_.begin(), a_.end(), [&](int v) { return v == a_.front(); });
}

std::string ExponentVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a_.size(); ++i) os << (i ? "," : "") << a_[i];
  os << ')';
  return os.str();
}

Integer to_integer_exact(const Rational& r, const char* context) {
  if (denominator(r) != 1) {
    std::ostringstream os;
    os << context << ": non-integral value " << r;
    throw InternalError(os.str());
  }
  return numerator(r);
}

long long to_int64(const Integer& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw InvalidArgument("value does not fit in 64 bits: " + v.str());
  return v.convert_to<long long>();
}

Integer milnor_number(const ExponentVector& a) { return range_product(a, 0, a.size()); }

Integer l_value(const ExponentVector& a) {
  Integer total = 0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    Integer ai = a[i];
    Integer tail = range_product(a, i + 1, n);
    total += range_product(a, 0, i) * (ai * ai - 1) * tail * tail;
  }
  return total;
}

Integer caustic_multiplicity(const ExponentVector& a) {
  Rational sum = 0;
  for (int ai : a) sum += Rational(ai - 1, ai);
  return to_integer_exact(Rational(milnor_number(a)) * sum, "caustic_multiplicity");
}

Integer maxwell_multiplicity(const ExponentVector& a) {
  const Integer diff = l_value(a) - 3 * caustic_multiplicity(a);
  if (diff < 0 || (diff % 2) != 0)
    throw InternalError("maxwell_multiplicity: L - 3C = " + diff.str() + " is not even and nonnegative");
  return diff / 2;
}

Integer binom12(const Integer& A) {
  if (A < 3) return 0;
  return A * (A - 1) * (A - 2) / 2;
}

Integer binom22(const Integer& A) {
  if (A < 4) return 0;
  return A * (A - 1) * (A - 2) * (A - 3) / 4;
}

Integer binom2(const Integer& A) {
  if (A < 2) return 0;
  return A * (A - 1) / 2;
}

Integer mixed_stokes_multiplicity(const ExponentVector& a) {
  const std::size_t n = a.size();
  Rational total = Rational(binom12(milnor_number(a))) * ratio(a[0] + 1, a[0]);
  for (std::size_t j = 1; j < n; ++j) {
    const Integer prev = a[j - 1];
    const Integer cur = a[j];
    total += Rational(range_product(a, 0, j) * binom12(range_product(a, j, n))) *
             ratio(prev - cur, prev * cur);
  }
  return to_integer_exact(total, "mixed_stokes_multiplicity");
}

std::optional<Integer> pure_stokes_multiplicity(const ExponentVector& a) {
  if (a.size() == 1) {
    const Integer d = a[0];
    Integer numer;
    if (d % 2 == 1) {
      numer = (d + 1) * (d - 1) * (d - 2) * (d - 3);
    } else {
      numer = (d - 2) * ((d + 1) * (d - 1) * (d - 3) + 1);
    }
    return to_integer_exact(Rational(numer, 8), "pure_stokes_multiplicity(n=1)");
  }
  if (a.size() == 2 && a[0] % 2 == 1 && a[1] % 2 == 1) {
    const Integer A = a[0];
    const Integer B = a[1];
    const Integer pairs = binom2(A) * binom2(B);
    Rational total = Rational(binom22(A * B)) * ratio(A + 1, 2 * A);
    total += Rational(binom22(B)) * ratio(A - B, 2 * B);
    total += Rational(pairs * (B - 1)) * ratio(A - B, A);
    total += Rational(pairs) * ratio(1, A);
    return to_integer_exact(total, "pure_stokes_multiplicity(n=2)");
  }
  return std::nullopt;
}

Integer l_value_rewritten(const ExponentVector& a) {
  const std::size_t n = a.size();
  Rational total = Rational(2 * binom2(milnor_number(a))) * ratio(a[0] + 1, a[0]);
  for (std::size_t j = 1; j < n; ++j) {
    const Integer prev = a[j - 1];
    const Integer cur = a[j];
    total += Rational(2 * range_product(a, 0, j) * binom2(range_product(a, j, n))) *
             ratio(prev - cur, prev * cur);
  }
  return to_integer_exact(total, "l_value_rewritten");
}

std::vector<Integer> triple_depth_counts(const ExponentVector& a) {
  const std::size_t n = a.size();
  std::vector<Integer> counts(n);
  for (std::size_t j = 0; j < n; ++j) {
    // triples inside one depth-j collection minus those inside one depth-(j+1) collection
    counts[j] = range_product(a, 0, j) * binom12(range_product(a, j, n)) -
                range_product(a, 0, j + 1) * binom12(range_product(a, j + 1, n));
  }
  return counts;
}

Integer mixed_stokes_telescoped(const ExponentVector& a) {
  const auto counts = triple_depth_counts(a);
  Rational total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) total += Rational(counts[j]) * ratio(a[j] + 1, a[j]);
  return to_integer_exact(total, "mixed_stokes_telescoped");
}

std::vector<Integer> pair_depth_counts(const ExponentVector& a) {
  const std::size_t n = a.size();
  const Integer mu = milnor_number(a);
  std::vector<Integer> counts(n);
  for (std::size_t j = 0; j < n; ++j) counts[j] = mu * (a[j] - 1) * range_product(a, j + 1, n);
  return counts;
}

MultiplicitySet compute_multiplicities(const ExponentVector& a) {
  MultiplicitySet m;
  m.mu = milnor_number(a);
  m.L = l_value(a);
  m.caustic = caustic_multiplicity(a);
  m.maxwell = maxwell_multiplicity(a);
  m.mixed_stokes = mixed_stokes_multiplicity(a);
  m.pure_stokes = pure_stokes_multiplicity(a);
  if (3 * m.caustic + 2 * m.maxwell != m.L) throw InternalError("3C + 2M != L");
  return m;
}

HomogeneousReport homogeneous_report(int a, int n) {
  if (a < 1 || n < 1) throw InvalidArgument("homogeneous_report needs a >= 1 and n >= 1");
  const ExponentVector ev(std::vector<int>(static_cast<std::size_t>(n), a));
  const Integer A = a;
  const Integer a_pow_n1 = boost::multiprecision::pow(A, static_cast<unsigned>(n - 1));
  const Integer a_pow_n = a_pow_n1 * A;

  HomogeneousReport r;
  r.a = a;
  r.n = n;
  r.mu = a_pow_n;
  // n * a^{n-1} (a-1); the factor n is what makes C ~ n mu.
  r.caustic = n * a_pow_n1 * (A - 1);
  const Integer twice_m = a_pow_n1 * ((A + 1) * (a_pow_n - 1) - 3 * n * (A - 1));
  if (twice_m % 2 != 0) throw InternalError("homogeneous Maxwell numerator is odd");
  r.maxwell = twice_m / 2;
  if (r.caustic != caustic_multiplicity(ev) || r.maxwell != maxwell_multiplicity(ev))
    throw InternalError("homogeneous closed forms disagree with the general formulas");
  r.mixed_stokes = mixed_stokes_multiplicity(ev);
  r.pure_stokes = pure_stokes_multiplicity(ev);

  const Integer& mu = r.mu;
  r.caustic_ratio = Rational(r.caustic, n * mu);
  r.maxwell_ratio = Rational(2 * r.maxwell, mu * mu);
  r.mixed_ratio = Rational(2 * r.mixed_stokes, mu * mu * mu);
  if (r.pure_stokes) r.pure_ratio = Rational(8 * *r.pure_stokes, mu * mu * mu * mu);
  return r;
}

}  // namespace pham
