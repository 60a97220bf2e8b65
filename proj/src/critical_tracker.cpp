#include "pham/critical_tracker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pham/errors.hpp"

namespace pham {

namespace {

// The start points must be this many predicted displacements apart.
constexpr double kSeparationRatio = 4.0;
constexpr double kCollisionFraction = 1e-3;
constexpr double kMaxEpsilon = 1e-2;

bool is_linear_or_constant(const Monomial& e) {
  int d = 0;
  for (int v : e) d += v;
  return d <= 1;
}

Complex principal_root(Complex w, int k) {
  return std::polar(std::pow(std::abs(w), 1.0 / k), std::arg(w) / k);
}

Complex unit_root(int k, int a) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(a));
}

// Per-coordinate magnitude |q_i eps|^{1/a_i} of the separable critical points.
std::vector<double> coordinate_scales(const GenericLine& line, Complex eps) {
  std::vector<double> s(line.a.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = std::pow(line.q[i] * std::abs(eps), 1.0 / line.a[i]);
  return s;
}

double scaled_distance(const CVector& x, const CVector& y, const std::vector<double>& scale) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]) / scale[i]);
  return d;
}

double scaled_norm(const Eigen::VectorXcd& v, const std::vector<double>& scale) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    d = std::max(d, std::abs(v(i)) / scale[static_cast<std::size_t>(i)]);
  return d;
}

Eigen::VectorXcd to_eigen(const CVector& v) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::linear: return "linear";
    case Preset::quadratic_1d: return "quadratic_1d";
    case Preset::xy_coupled: return "xy_coupled";
  }
  return "?";
}

std::optional<Preset> parse_preset(std::string_view name) {
  for (Preset p : all_presets())
    if (preset_name(p) == name) return p;
  return std::nullopt;
}

std::vector<Preset> all_presets() { return {Preset::linear, Preset::quadratic_1d, Preset::xy_coupled}; }

std::string_view preset_description(Preset p) {
  switch (p) {
    case Preset::linear: return "phi = sum q_i z_i with the q ladder (any n)";
    case Preset::quadratic_1d: return "phi = z + 0.1 z^2 (n = 1, a >= 3)";
    case Preset::xy_coupled: return "phi = x + q_2 y + 0.003 xy (n = 2, both a_i >= 2)";
  }
  return "";
}

GenericLine::GenericLine(ExponentVector a_, std::vector<double> q_, SparsePoly tail_, double phase_)
    : a(std::move(a_)), q(std::move(q_)), tail(std::move(tail_)), phase(phase_) {
  const std::size_t n = a.size();
  if (q.size() != n) throw InvalidArgument("line needs one linear coefficient per variable");
  if (q[0] != 1.0) throw InvalidArgument("line normalization requires q_1 = 1");
  for (std::size_t i = 0; i < n; ++i)
    if (!(q[i] > 0.0 && q[i] <= 1.0)) throw InvalidArgument("linear coefficients must lie in (0, 1]");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (a[i + 1] == a[i] && q[i + 1] > 0.01 * q[i] * (1.0 + 1e-12))
      throw InvalidArgument("equal exponents need q_{i+1}/q_i <= 0.01");
  if (tail.n_vars() != n) throw InvalidArgument("tail has the wrong number of variables");
  if (!tail.in_versal_box(a)) throw InvalidArgument("tail leaves the versal box of " + a.to_string());
  for (const auto& [exps, c] : tail.terms())
    if (is_linear_or_constant(exps)) throw InvalidArgument("tail must not contain linear terms");
  if (!std::isfinite(phase)) throw InvalidArgument("phase must be finite");
}

SparsePoly GenericLine::linear_part() const {
  SparsePoly p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Monomial e(a.size(), 0);
    e[i] = 1;
    p.add_term(e, q[i]);
  }
  return p;
}

SparsePoly GenericLine::phi() const { return linear_part() + tail; }

Complex GenericLine::epsilon(double magnitude) const { return std::polar(magnitude, phase); }

std::vector<double> ladder_coefficients(const ExponentVector& a) {
  std::vector<double> q(a.size(), 1.0);
  for (std::size_t i = 1; i < a.size(); ++i) q[i] = q[i - 1] * (a[i] == a[i - 1] ? 0.01 : 0.3);
  return q;
}

GenericLine default_line(const ExponentVector& a, Preset preset, double phase) {
  const std::size_t n = a.size();
  SparsePoly tail(n);
  switch (preset) {
    case Preset::linear:
      break;
    case Preset::quadratic_1d:
      if (n != 1) throw InvalidArgument("preset quadratic_1d needs n = 1, got " + a.to_string());
      if (a[0] < 3) throw InvalidArgument("preset quadratic_1d needs a >= 3 so that z^2 is in the versal box");
      tail.add_term({2}, kQuadraticCoefficient);
      break;
    case Preset::xy_coupled:
      if (n != 2) throw InvalidArgument("preset xy_coupled needs n = 2, got " + a.to_string());
      if (a[1] < 2) throw InvalidArgument("preset xy_coupled needs both exponents >= 2");
      tail.add_term({1, 1}, kXyCoupling);
      break;
  }
  return GenericLine(a, ladder_coefficients(a), std::move(tail), phase);
}

GenericLine line_from_phi(const ExponentVector& a, const SparsePoly& phi, double phase) {
  if (phi.n_vars() != a.size()) throw InvalidArgument("phi has the wrong number of variables");
  if (!phi.in_versal_box(a)) throw InvalidArgument("phi leaves the versal box of " + a.to_string());
  std::vector<double> q(a.size(), 0.0);
  SparsePoly tail(a.size());
  for (const auto& [exps, c] : phi.terms()) {
    if (is_linear_or_constant(exps)) {
      if (c.imag() != 0.0) throw InvalidArgument("linear coefficients of phi must be real");
      const auto i = static_cast<std::size_t>(std::find(exps.begin(), exps.end(), 1) - exps.begin());
      q[i] = c.real();
    } else {
      tail.add_term(exps, c);
    }
  }
  return GenericLine(a, std::move(q), std::move(tail), phase);
}

GenericLine jittered(const GenericLine& line, std::uint64_t seed) {
  std::uint64_t state = seed;
  std::vector<double> q = line.q;
  for (std::size_t i = 1; i < q.size(); ++i) {
    const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    const double factor = 0.9 + 0.2 * u;
    double ratio = line.q[i] / line.q[i - 1] * factor;
    if (line.a[i] == line.a[i - 1]) ratio = std::min(ratio, 0.01);
    q[i] = std::min(1.0, q[i - 1] * ratio);
  }
  return GenericLine(line.a, std::move(q), line.tail, line.phase);
}

CVector CriticalPointSet::values() const {
  CVector v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.value);
  return v;
}

std::vector<Label> enumerate_labels(const ExponentVector& a) {
  std::vector<Label> out;
  Label cur(a.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = a.size();
    while (i > 0) {
      --i;
      if (++cur[i] < a[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::string label_string(const Label& label) {
  std::ostringstream os;
  for (std::size_t i = 0; i < label.size(); ++i) os << (i ? "." : "") << label[i];
  return os.str();
}

LineFunction::LineFunction(const ExponentVector& a, const SparsePoly& phi, Complex eps)
    : f_(a), phi_(phi), eps_(eps) {
  if (phi.n_vars() != a.size()) throw InvalidArgument("phi has the wrong number of variables");
  phi_grad_ = phi_.gradient();
  phi_second_.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) phi_second_[i] = phi_grad_[i].gradient();
}

Complex LineFunction::value(std::span<const Complex> z) const { return f_.evaluate(z) - eps_ * phi_.evaluate(z); }

CVector LineFunction::gradient(std::span<const Complex> z) const {
  CVector g = f_.gradient_at(z);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= eps_ * phi_grad_[i].evaluate(z);
  return g;
}

Eigen::MatrixXcd LineFunction::hessian(std::span<const Complex> z) const {
  const auto n = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXcd h(n, n);
  const CVector diag = f_.hessian_diagonal_at(z);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      Complex v = -eps_ * phi_second_[ui][uj].evaluate(z);
      if (i == j) v += diag[ui];
      h(i, j) = v;
    }
  }
  return h;
}

SparsePoly LineFunction::as_sparse() const { return f_.to_sparse() - phi_ * eps_; }

CriticalPointSet separable_critical_set(const GenericLine& line, Complex eps) {
  if (!line.tail.empty()) throw InvalidArgument("separable_critical_set needs an empty tail");
  if (eps == Complex(0.0) || std::abs(eps) > kMaxEpsilon * (1.0 + 1e-12))
    throw InvalidArgument("separable_critical_set needs 0 < |eps| <= 0.01");
  const ExponentVector& a = line.a;
  const std::size_t n = a.size();

  std::vector<Complex> base(n);
  std::vector<Complex> value_coeff(n);
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = principal_root(line.q[i] * eps, a[i]);
    // value of z^{a+1}/(a+1) - eps q z at z^a = q eps is -a/(a+1) q eps z
    value_coeff[i] = -static_cast<double>(a[i]) / (a[i] + 1.0) * line.q[i] * eps;
  }

  CriticalPointSet set{eps, {}};
  for (auto& label : enumerate_labels(a)) {
    CriticalPoint p{label, CVector(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.coords[i] = base[i] * unit_root(label[i], a[i]);
      p.value += value_coeff[i] * p.coords[i];
    }
    set.points.push_back(std::move(p));
  }
  return set;
}

double residual_tolerance(Complex eps) { return 1e-11 * std::max(1.0, std::abs(eps)); }

double max_gradient_residual(const ExponentVector& a, const SparsePoly& phi, const CriticalPointSet& set) {
  const LineFunction fn(a, phi, set.epsilon);
  double worst = 0.0;
  for (const auto& p : set.points)
    for (const auto& g : fn.gradient(p.coords)) worst = std::max(worst, std::abs(g));
  return worst;
}

namespace {

struct TrackFailure {
  bool collision = false;
  std::string message;
};

// Newton on the gradient system; returns false if it does not converge.
bool newton_correct(const LineFunction& fn, CVector& z, const std::vector<double>& scale,
                    const TrackOptions& opt) {
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    const Eigen::VectorXcd g = to_eigen(fn.gradient(z));
    const Eigen::VectorXcd step = fn.hessian(z).partialPivLu().solve(g);
    if (!step.allFinite()) return false;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= step(static_cast<Eigen::Index>(i));
    if (scaled_norm(step, scale) <= opt.newton_tolerance) {
      // quadratic convergence: one more step lands at rounding level
      const Eigen::VectorXcd g2 = to_eigen(fn.gradient(z));
      const Eigen::VectorXcd polish = fn.hessian(z).partialPivLu().solve(g2);
      if (polish.allFinite() && scaled_norm(polish, scale) <= scaled_norm(step, scale))
        for (std::size_t i = 0; i < z.size(); ++i) z[i] -= polish(static_cast<Eigen::Index>(i));
      return true;
    }
  }
  return false;
}

std::optional<TrackFailure> track_once(const GenericLine& line, const SparsePoly& delta,
                                       const CriticalPointSet& start, const std::vector<double>& scale,
                                       const TrackOptions& opt, int steps, std::vector<CVector>& out) {
  const std::size_t mu = start.size();
  const auto phi0 = line.linear_part();
  const Complex eps = start.epsilon;

  std::vector<double> dist0(mu * mu, 0.0);
  for (std::size_t k = 0; k < mu; ++k)
    for (std::size_t l = k + 1; l < mu; ++l)
      dist0[k * mu + l] = scaled_distance(start.points[k].coords, start.points[l].coords, scale);

  out.clear();
  for (const auto& p : start.points) out.push_back(p.coords);

  const auto delta_grad = delta.gradient();
  for (int s = 1; s <= steps; ++s) {
    const double t_prev = static_cast<double>(s - 1) / steps;
    const double t = static_cast<double>(s) / steps;
    const LineFunction prev_fn(line.a, phi0 + delta * t_prev, eps);
    const LineFunction fn(line.a, phi0 + delta * t, eps);
    for (std::size_t k = 0; k < mu; ++k) {
      CVector& z = out[k];
      // Euler predictor: H dz/dt = eps grad(delta)
      Eigen::VectorXcd rhs(static_cast<Eigen::Index>(z.size()));
      for (std::size_t i = 0; i < z.size(); ++i)
        rhs(static_cast<Eigen::Index>(i)) = eps * delta_grad[i].evaluate(z);
      const Eigen::VectorXcd dz = prev_fn.hessian(z).partialPivLu().solve(rhs);
      if (dz.allFinite())
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += dz(static_cast<Eigen::Index>(i)) / static_cast<double>(steps);
      if (!newton_correct(fn, z, scale, opt))
        return TrackFailure{false, "Newton correction diverged for label " + label_string(start.points[k].label) +
                                       " at t = " + std::to_string(t)};
    }
    for (std::size_t k = 0; k < mu; ++k)
      for (std::size_t l = k + 1; l < mu; ++l)
        if (scaled_distance(out[k], out[l], scale) < kCollisionFraction * dist0[k * mu + l])
          return TrackFailure{true, "paths of labels " + label_string(start.points[k].label) + " and " +
                                        label_string(start.points[l].label) + " collide at t = " + std::to_string(t)};
  }
  return std::nullopt;
}

void check_separation(const GenericLine& line, const SparsePoly& delta, const CriticalPointSet& start,
                      const std::vector<double>& scale) {
  const LineFunction fn0(line.a, line.linear_part(), start.epsilon);
  const auto delta_grad = delta.gradient();
  double max_disp = 0.0;
  for (const auto& p : start.points) {
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(p.coords.size()));
    for (std::size_t i = 0; i < p.coords.size(); ++i)
      rhs(static_cast<Eigen::Index>(i)) = start.epsilon * delta_grad[i].evaluate(p.coords);
    max_disp = std::max(max_disp, scaled_norm(fn0.hessian(p.coords).partialPivLu().solve(rhs), scale));
  }
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < start.size(); ++k)
    for (std::size_t l = k + 1; l < start.size(); ++l)
      min_dist = std::min(min_dist, scaled_distance(start.points[k].coords, start.points[l].coords, scale));
  if (!(min_dist > kSeparationRatio * max_disp)) {
    std::ostringstream os;
    os << "|eps| = " << std::abs(start.epsilon) << " is too large for this tail: start points are "
       << min_dist << " apart (scaled) but the predicted displacement is " << max_disp;
    throw ClusterOverlap(os.str());
  }
}

}  // namespace

CriticalPointSet track_to(const GenericLine& line, const SparsePoly& target, Complex eps,
                          const TrackOptions& options) {
  const GenericLine base(line.a, line.q, SparsePoly(line.a.size()), line.phase);
  CriticalPointSet start = separable_critical_set(base, eps);
  const SparsePoly delta = target - line.linear_part();
  if (delta.empty()) return start;
  for (const auto& [exps, c] : delta.terms())
    if (is_linear_or_constant(exps)) throw InvalidArgument("homotopy target must share the linear part of the line");

  const auto scale = coordinate_scales(line, eps);
  check_separation(line, delta, start, scale);

  std::vector<CVector> coords;
  int steps = options.steps;
  for (int attempt = 0;; ++attempt) {
    const auto failure = track_once(line, delta, start, scale, options, steps, coords);
    if (!failure) break;
    if (attempt >= options.max_doublings) {
      if (failure->collision) throw PathCollision(failure->message);
      throw NewtonDivergence(failure->message);
    }
    steps *= 2;
  }

  const LineFunction fn(line.a, target, eps);
  CriticalPointSet result{eps, {}};
  const double tol = residual_tolerance(eps);
  for (std::size_t k = 0; k < start.size(); ++k) {
    CriticalPoint p{start.points[k].label, coords[k], fn.value(coords[k])};
    for (const auto& g : fn.gradient(p.coords))
      if (!(std::abs(g) <= tol))
        throw NewtonDivergence("gradient residual above tolerance at label " + label_string(p.label));
    result.points.push_back(std::move(p));
  }
  for (std::size_t k = 0; k < result.size(); ++k)
    for (std::size_t l = k + 1; l < result.size(); ++l) {
      double d = 0.0;
      for (std::size_t i = 0; i < line.a.size(); ++i)
        d = std::max(d, std::abs(result.points[k].coords[i] - result.points[l].coords[i]));
      if (d < 1e3 * tol) throw PathCollision("tracked points of labels " + label_string(result.points[k].label) +
                                             " and " + label_string(result.points[l].label) + " coincide");
    }
  return result;
}

CriticalPointSet track_to_phi(const GenericLine& line, Complex eps, int steps) {
  TrackOptions opt;
  opt.steps = steps;
  return track_to(line, line.phi(), eps, opt);
}

std::vector<SparsePoly> phi_ladder(const GenericLine& line) {
  const std::size_t n = line.a.size();
  std::vector<SparsePoly> ladder;
  for (std::size_t j = 0; j <= n; ++j) {
    SparsePoly p = line.linear_part();
    for (const auto& [exps, c] : line.tail.terms()) {
      bool only_leading = true;
      for (std::size_t r = j; r < n; ++r)
        if (exps[r] != 0) only_leading = false;
      if (only_leading) p.add_term(exps, c);
    }
    ladder.push_back(std::move(p));
  }
  return ladder;
}

CVector within_collection_differences(const CriticalPointSet& set, std::size_t depth) {
  CVector out;
  for (std::size_t k = 0; k < set.size(); ++k)
    for (std::size_t l = k + 1; l < set.size(); ++l) {
      const auto& lk = set.points[k].label;
      const auto& ll = set.points[l].label;
      if (std::equal(lk.begin(), lk.begin() + static_cast<std::ptrdiff_t>(depth), ll.begin()))
        out.push_back(set.points[k].value - set.points[l].value);
    }
  return out;
}

}  // namespace pham
