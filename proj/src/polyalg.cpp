#include "pham/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pham/errors.hpp"

namespace pham {

namespace {

void check_dims(std::size_t n_vars, std::size_t got) {
  if (n_vars != got)
    throw InvalidArgument("dimension mismatch: polynomial has " + std::to_string(n_vars) +
                          " variables, point has " + std::to_string(got));
}

Complex ipow(Complex z, int k) {
  Complex r = 1.0;
  for (; k > 0; --k) r *= z;
  return r;
}

}  // namespace

SparsePoly SparsePoly::versal(const ExponentVector& a, std::map<Monomial, Complex> terms) {
  SparsePoly p(a.size());
  for (auto& [exps, c] : terms) p.add_term(exps, c);
  if (!p.in_versal_box(a))
    throw InvalidArgument("perturbation leaves the versal box of " + a.to_string());
  return p;
}

SparsePoly SparsePoly::monomial(std::size_t n_vars, Monomial exps, Complex coeff) {
  SparsePoly p(n_vars);
  p.add_term(exps, coeff);
  return p;
}

void SparsePoly::add_term(const Monomial& exps, Complex coeff) {
  if (exps.size() != n_vars_)
    throw InvalidArgument("monomial has " + std::to_string(exps.size()) + " exponents, expected " +
                          std::to_string(n_vars_));
  for (int e : exps)
    if (e < 0) throw InvalidArgument("negative exponent in monomial");
  if (coeff == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

Complex SparsePoly::coefficient(const Monomial& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

Complex SparsePoly::evaluate(std::span<const Complex> z) const {
  check_dims(n_vars_, z.size());
  Complex sum = 0.0;
  for (const auto& [exps, c] : terms_) {
    Complex term = c;
    for (std::size_t i = 0; i < n_vars_; ++i) term *= ipow(z[i], exps[i]);
    sum += term;
  }
  return sum;
}

SparsePoly SparsePoly::derivative(std::size_t var) const {
  if (var >= n_vars_) throw InvalidArgument("derivative variable out of range");
  SparsePoly d(n_vars_);
  for (const auto& [exps, c] : terms_) {
    if (exps[var] == 0) continue;
    Monomial e = exps;
    --e[var];
    d.add_term(e, c * static_cast<double>(exps[var]));
  }
  return d;
}

std::vector<SparsePoly> SparsePoly::gradient() const {
  std::vector<SparsePoly> g;
  g.reserve(n_vars_);
  for (std::size_t i = 0; i < n_vars_; ++i) g.push_back(derivative(i));
  return g;
}

bool SparsePoly::in_versal_box(const ExponentVector& a) const {
  if (n_vars_ != a.size()) return false;
  for (const auto& [exps, c] : terms_) {
    bool constant = true;
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (exps[i] > a[i] - 1) return false;
      if (exps[i] != 0) constant = false;
    }
    if (constant) return false;
  }
  return true;
}

int SparsePoly::degree() const {
  int best = -1;
  for (const auto& [exps, c] : terms_) {
    int d = 0;
    for (int e : exps) d += e;
    best = std::max(best, d);
  }
  return best;
}

int SparsePoly::highest_variable() const {
  int best = -1;
  for (const auto& [exps, c] : terms_)
    for (std::size_t i = 0; i < n_vars_; ++i)
      if (exps[i] != 0) best = std::max(best, static_cast<int>(i));
  return best;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  check_dims(n_vars_, o.n_vars_);
  for (const auto& [exps, c] : o.terms_) add_term(exps, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  check_dims(n_vars_, o.n_vars_);
  for (const auto& [exps, c] : o.terms_) add_term(exps, -c);
  return *this;
}

SparsePoly& SparsePoly::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [exps, c] : terms_) c *= s;
  return *this;
}

Complex PhamFunction::evaluate(std::span<const Complex> z) const {
  check_dims(n_vars(), z.size());
  Complex sum = 0.0;
  for (std::size_t i = 0; i < n_vars(); ++i) {
    const int p = a_[i] + 1;
    Complex term = ipow(z[i], p);
    if (normalized_) term /= static_cast<double>(p);
    sum += term;
  }
  return sum;
}

std::vector<SparsePoly> PhamFunction::gradient() const {
  std::vector<SparsePoly> g;
  for (std::size_t i = 0; i < n_vars(); ++i) {
    Monomial e(n_vars(), 0);
    e[i] = a_[i];
    g.push_back(SparsePoly::monomial(n_vars(), e, normalized_ ? 1.0 : a_[i] + 1.0));
  }
  return g;
}

CVector PhamFunction::gradient_at(std::span<const Complex> z) const {
  check_dims(n_vars(), z.size());
  CVector g(n_vars());
  for (std::size_t i = 0; i < n_vars(); ++i) {
    g[i] = ipow(z[i], a_[i]);
    if (!normalized_) g[i] *= a_[i] + 1.0;
  }
  return g;
}

CVector PhamFunction::hessian_diagonal_at(std::span<const Complex> z) const {
  check_dims(n_vars(), z.size());
  CVector h(n_vars());
  for (std::size_t i = 0; i < n_vars(); ++i) {
    h[i] = static_cast<double>(a_[i]) * ipow(z[i], a_[i] - 1);
    if (!normalized_) h[i] *= a_[i] + 1.0;
  }
  return h;
}

SparsePoly PhamFunction::to_sparse() const {
  SparsePoly p(n_vars());
  for (std::size_t i = 0; i < n_vars(); ++i) {
    Monomial e(n_vars(), 0);
    e[i] = a_[i] + 1;
    p.add_term(e, normalized_ ? 1.0 / (a_[i] + 1.0) : 1.0);
  }
  return p;
}

Eigen::MatrixXcd hessian_at(const SparsePoly& p, std::span<const Complex> z) {
  check_dims(p.n_vars(), z.size());
  const auto n = static_cast<Eigen::Index>(p.n_vars());
  Eigen::MatrixXcd h(n, n);
  const auto grad = p.gradient();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const Complex v = grad[static_cast<std::size_t>(i)].derivative(static_cast<std::size_t>(j)).evaluate(z);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

Complex hessian_det_at(const SparsePoly& p, std::span<const Complex> z) {
  const Eigen::MatrixXcd h = hessian_at(p, z);
  if (h.size() == 0) return 1.0;
  return h.partialPivLu().determinant();
}

Complex horner(std::span<const Complex> coeffs, Complex z) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

namespace {

struct HornerResult {
  Complex value;
  Complex derivative;
  double magnitude_bound;  // sum |c_k| |z|^k, the rounding scale of `value`
};

HornerResult horner_with_derivative(std::span<const Complex> c, Complex z) {
  Complex p = 0.0, dp = 0.0;
  double bound = 0.0;
  const double az = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
    bound = bound * az + std::abs(*it);
  }
  return {p, dp, bound};
}

}  // namespace

CVector univariate_roots(std::span<const Complex> coeffs) {
  constexpr int kMaxSweeps = 200;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  if (coeffs.size() < 2) throw InvalidArgument("univariate_roots needs degree >= 1");
  if (coeffs.back() == Complex(0.0)) throw InvalidArgument("leading coefficient is zero");
  const std::size_t deg = coeffs.size() - 1;

  double max_coeff = 0.0;
  for (const auto& c : coeffs) max_coeff = std::max(max_coeff, std::abs(c));

  // Start on a circle whose radius is the largest |c_k/c_d|^{1/(d-k)}.
  double radius = 0.0;
  const double lead = std::abs(coeffs.back());
  for (std::size_t k = 0; k < deg; ++k) {
    const double ck = std::abs(coeffs[k]);
    if (ck == 0.0) continue;
    radius = std::max(radius, std::pow(ck / lead, 1.0 / static_cast<double>(deg - k)));
  }
  if (radius == 0.0) radius = 1.0;

  CVector z(deg);
  for (std::size_t k = 0; k < deg; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(deg) + 0.4;
    z[k] = std::polar(radius, angle);
  }

  std::vector<bool> done(deg, false);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool all_done = true;
    for (std::size_t i = 0; i < deg; ++i) {
      if (done[i]) continue;
      const auto h = horner_with_derivative(coeffs, z[i]);
      if (std::abs(h.value) <= 4.0 * kEps * h.magnitude_bound) {
        done[i] = true;
        continue;
      }
      all_done = false;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const Complex newton = h.value / h.derivative;
      const Complex step = newton / (1.0 - newton * repulsion);
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }

  // One Newton polish per root, kept only when it lowers the residual.
  for (auto& root : z) {
    const auto h = horner_with_derivative(coeffs, root);
    if (h.derivative == Complex(0.0)) continue;
    const Complex candidate = root - h.value / h.derivative;
    if (std::abs(horner(coeffs, candidate)) < std::abs(h.value)) root = candidate;
  }

  double worst = 0.0;
  bool ok = true;
  for (const auto& root : z) {
    const double res = std::abs(horner(coeffs, root));
    const double bound = 1e-12 * max_coeff * std::pow(std::max(1.0, std::abs(root)), static_cast<double>(deg));
    worst = std::max(worst, res);
    if (!(res <= bound)) ok = false;
  }
  if (!ok) throw NonConvergence("Aberth iteration did not converge", worst);
  return z;
}

}  // namespace pham
