#include "pham/discriminant_products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pham/errors.hpp"

namespace pham {

namespace {

constexpr double kZeroFactor = 1e3 * std::numeric_limits<double>::epsilon();

class Accumulator {
 public:
  Accumulator(ProductKind kind, double scale, bool keep) : scale_(scale), keep_(keep) { eval_.kind = kind; }

  void add(Complex factor, std::array<std::uint32_t, 4> idx) {
    ++eval_.factor_count;
    const double mag = std::abs(factor);
    FactorRecord rec{idx, std::nullopt};
    if (mag < kZeroFactor * scale_) {
      ++eval_.exact_zeros;
    } else {
      const double l = std::log(mag);
      eval_.log_total += l;
      rec.log_magnitude = l;
    }
    if (keep_) eval_.factors.push_back(rec);
  }

  ProductEvaluation take() { return std::move(eval_); }

 private:
  ProductEvaluation eval_;
  double scale_;
  bool keep_;
};

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

std::uint32_t u32(std::size_t i) { return static_cast<std::uint32_t>(i); }

}  // namespace

std::string_view kind_name(ProductKind k) {
  switch (k) {
    case ProductKind::D: return "D";
    case ProductKind::Y: return "Y";
    case ProductKind::Omega: return "Omega";
    case ProductKind::Hessian: return "Hessian";
  }
  return "?";
}

std::optional<ProductKind> parse_kind(std::string_view name) {
  for (auto k : {ProductKind::D, ProductKind::Y, ProductKind::Omega, ProductKind::Hessian})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::string_view factor_kind_name(ProductKind k) {
  switch (k) {
    case ProductKind::D: return "D_pair";
    case ProductKind::Y: return "Y_triple";
    case ProductKind::Omega: return "Omega_quad";
    case ProductKind::Hessian: return "Hessian";
  }
  return "?";
}

std::size_t kind_arity(ProductKind k) {
  switch (k) {
    case ProductKind::D: return 2;
    case ProductKind::Y: return 3;
    case ProductKind::Omega: return 4;
    case ProductKind::Hessian: return 1;
  }
  return 0;
}

std::optional<FactorRecord> ProductEvaluation::first_zero() const {
  for (const auto& f : factors)
    if (!f.log_magnitude) return f;
  return std::nullopt;
}

Integer expected_factor_count(ProductKind kind, const Integer& mu) {
  switch (kind) {
    case ProductKind::D: return 2 * binom2(mu);
    case ProductKind::Y: return binom12(mu);
    case ProductKind::Omega: return binom22(mu);
    case ProductKind::Hessian: return mu;
  }
  return 0;
}

ProductEvaluation log_D(std::span<const Complex> v, bool keep) {
  Accumulator acc(ProductKind::D, max_abs(v), keep);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (i != j) acc.add(v[i] - v[j], {u32(i), u32(j), 0, 0});
  return acc.take();
}

ProductEvaluation log_Y(std::span<const Complex> v, bool keep) {
  Accumulator acc(ProductKind::Y, max_abs(v), keep);
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == i) continue;
        acc.add((v[i] - v[j]) + (v[i] - v[k]), {u32(i), u32(j), u32(k), 0});
      }
    }
  return acc.take();
}

ProductEvaluation log_Omega(std::span<const Complex> v, bool keep) {
  Accumulator acc(ProductKind::Omega, max_abs(v), keep);
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        for (std::size_t l = k + 1; l < m; ++l) {
          if (l == i || l == j) continue;
          acc.add((v[i] - v[k]) + (v[j] - v[l]), {u32(i), u32(j), u32(k), u32(l)});
        }
      }
  return acc.take();
}

ProductEvaluation log_values_product(ProductKind kind, std::span<const Complex> values, bool keep) {
  switch (kind) {
    case ProductKind::D: return log_D(values, keep);
    case ProductKind::Y: return log_Y(values, keep);
    case ProductKind::Omega: return log_Omega(values, keep);
    case ProductKind::Hessian: break;
  }
  throw InvalidArgument("Hessian products need the function, not only its critical values");
}

namespace {

template <class HessianFn>
ProductEvaluation hessian_product(HessianFn&& hessian, const CriticalPointSet& points, bool keep) {
  ProductEvaluation eval;
  eval.kind = ProductKind::Hessian;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Eigen::MatrixXcd h = hessian(points.points[k].coords);
    const Complex det = h.size() == 0 ? Complex(1.0) : Complex(h.partialPivLu().determinant());
    // scale: product of row norms bounds |det|
    double scale = 1.0;
    for (Eigen::Index r = 0; r < h.rows(); ++r) scale *= h.row(r).cwiseAbs().sum();
    ++eval.factor_count;
    FactorRecord rec{{u32(k), 0, 0, 0}, std::nullopt};
    if (std::abs(det) < kZeroFactor * scale) {
      ++eval.exact_zeros;
    } else {
      rec.log_magnitude = std::log(std::abs(det));
      eval.log_total += *rec.log_magnitude;
    }
    if (keep) eval.factors.push_back(rec);
  }
  return eval;
}

}  // namespace

ProductEvaluation log_hessian_product(const SparsePoly& f_eps, const CriticalPointSet& points, bool keep) {
  return hessian_product([&](const CVector& z) { return hessian_at(f_eps, z); }, points, keep);
}

ProductEvaluation log_hessian_product(const LineFunction& f_eps, const CriticalPointSet& points, bool keep) {
  return hessian_product([&](const CVector& z) { return f_eps.hessian(z); }, points, keep);
}

}  // namespace pham
