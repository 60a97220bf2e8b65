#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <set>

#include "pham/critical_tracker.hpp"
#include "pham/errors.hpp"

using namespace pham;

namespace {

SparsePoly poly(std::size_t n, std::initializer_list<std::pair<Monomial, Complex>> terms) {
  SparsePoly p(n);
  for (const auto& [m, c] : terms) p.add_term(m, c);
  return p;
}

void check_labels_exhaustive(const ExponentVector& a, const CriticalPointSet& set) {
  const auto expected = enumerate_labels(a);
  REQUIRE(set.size() == expected.size());
  for (std::size_t k = 0; k < set.size(); ++k) CHECK(set.points[k].label == expected[k]);
}

double relative_gap(const CVector& x, const CVector& y) {
  double scale = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    scale = std::max(scale, std::abs(x[k]));
    worst = std::max(worst, std::abs(x[k] - y[k]));
  }
  return scale == 0.0 ? worst : worst / scale;
}

}  // namespace

TEST_CASE("preset names round-trip") {
  for (auto p : all_presets()) {
    CHECK(parse_preset(preset_name(p)) == p);
    CHECK_FALSE(preset_description(p).empty());
  }
  CHECK_FALSE(parse_preset("cubic").has_value());
}

TEST_CASE("default_line ladder examples") {
  CHECK(default_line({5, 3}, Preset::linear).q == std::vector<double>{1.0, 0.3});
  CHECK(default_line({3, 3}, Preset::linear).q == std::vector<double>{1.0, 0.01});
  CHECK(default_line({5}, Preset::linear).tail.empty());
  CHECK_THROWS_AS(default_line({4}, Preset::xy_coupled), InvalidArgument);
  CHECK_THROWS_AS(default_line({3, 1}, Preset::xy_coupled), InvalidArgument);
  CHECK_THROWS_AS(default_line({3, 3}, Preset::quadratic_1d), InvalidArgument);
  CHECK_THROWS_AS(default_line({2}, Preset::quadratic_1d), InvalidArgument);

  const auto quad = default_line({4}, Preset::quadratic_1d);
  CHECK(quad.tail.coefficient({2}) == Complex(kQuadraticCoefficient));
  const auto xy = default_line({5, 3}, Preset::xy_coupled);
  CHECK(xy.tail.coefficient({1, 1}) == Complex(kXyCoupling));
  CHECK(xy.q == std::vector<double>{1.0, 0.3});
}

TEST_CASE("GenericLine validates its invariants") {
  const ExponentVector a{3, 3};
  CHECK_THROWS_AS(GenericLine(a, {0.5, 0.001}, SparsePoly(2)), InvalidArgument);
  CHECK_THROWS_AS(GenericLine(a, {1.0, 0.5}, SparsePoly(2)), InvalidArgument);
  CHECK_THROWS_AS(GenericLine(a, {1.0, 0.0}, SparsePoly(2)), InvalidArgument);
  CHECK_THROWS_AS(GenericLine(a, {1.0, 0.01}, poly(2, {{{3, 0}, 1.0}})), InvalidArgument);
  CHECK_THROWS_AS(GenericLine(a, {1.0, 0.01}, poly(2, {{{1, 0}, 1.0}})), InvalidArgument);
  CHECK_NOTHROW(GenericLine(a, {1.0, 0.01}, poly(2, {{{2, 2}, 1.0}})));
}

TEST_CASE("line_from_phi splits linear part and tail") {
  const ExponentVector a{5, 3};
  const auto line = line_from_phi(a, poly(2, {{{1, 0}, 1.0}, {{0, 1}, 0.3}, {{1, 1}, 0.5}}));
  CHECK(line.q == std::vector<double>{1.0, 0.3});
  CHECK(line.tail == poly(2, {{{1, 1}, 0.5}}));
  CHECK_THROWS_AS(line_from_phi(a, poly(2, {{{1, 0}, Complex(1.0, 1.0)}, {{0, 1}, 0.3}})), InvalidArgument);
}

TEST_CASE("jitter keeps the line admissible and is seeded") {
  const auto base = default_line({5, 5, 3}, Preset::linear);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto j = jittered(base, seed);
    CHECK(j.q[0] == 1.0);
    CHECK(j.q[1] / j.q[0] <= 0.01);
    const double r = (j.q[2] / j.q[1]) / (base.q[2] / base.q[1]);
    CHECK(r >= 0.9);
    CHECK(r <= 1.1);
  }
  CHECK(jittered(base, 3).q == jittered(base, 3).q);
  CHECK(jittered(base, 3).q != jittered(base, 4).q);
}

TEST_CASE("labels enumerate the box, first entry most significant") {
  const auto labels = enumerate_labels({3, 2});
  REQUIRE(labels.size() == 6);
  CHECK(labels[0] == Label{0, 0});
  CHECK(labels[1] == Label{0, 1});
  CHECK(labels[5] == Label{2, 1});
  CHECK(label_string(labels[3]) == "1.1");
}

TEST_CASE("separable set for a = (3)") {
  const auto line = default_line({3}, Preset::linear);
  const Complex eps = 1e-3;
  const auto set = separable_critical_set(line, eps);
  check_labels_exhaustive({3}, set);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& p = set.points[k];
    CHECK(std::abs(std::abs(p.coords[0]) - 0.1) < 1e-15);
    const Complex unit = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / 3.0);
    const Complex expected = -0.75 * std::pow(eps, 4.0 / 3.0) * unit;
    CHECK(std::abs(p.value - expected) < 1e-15 * std::abs(expected) * 10);
  }
}

TEST_CASE("separable set for a = (1) is the Morse point") {
  const auto line = default_line({1}, Preset::linear, 0.37);
  const Complex eps = line.epsilon(4e-3);
  const auto set = separable_critical_set(line, eps);
  REQUIRE(set.size() == 1);
  CHECK(std::abs(set.points[0].coords[0] - eps) < 1e-18);
  CHECK(std::abs(set.points[0].value + eps * eps / 2.0) < 1e-18);
}

TEST_CASE("separable set for a = (3,3) is a tensor product") {
  const ExponentVector a{3, 3};
  const auto line = default_line(a, Preset::linear);
  const auto set = separable_critical_set(line, line.epsilon(1e-3));
  check_labels_exhaustive(a, set);
  for (const auto& p : set.points)
    for (const auto& q : set.points) {
      if (p.label[0] == q.label[0]) CHECK(p.coords[0] == q.coords[0]);
      if (p.label[1] == q.label[1]) CHECK(p.coords[1] == q.coords[1]);
    }
  CHECK(max_gradient_residual(a, line.phi(), set) <= residual_tolerance(set.epsilon));
  CHECK_THROWS_AS(separable_critical_set(line, 0.02), InvalidArgument);
  CHECK_THROWS_AS(separable_critical_set(line, 0.0), InvalidArgument);
  CHECK_THROWS_AS(separable_critical_set(default_line(a, Preset::xy_coupled), 1e-3), InvalidArgument);
}

TEST_CASE("tracking with an empty tail reproduces the separable set") {
  const ExponentVector a{5, 3};
  const auto line = default_line(a, Preset::linear);
  const Complex eps = line.epsilon(1e-3);
  const auto tracked = track_to_phi(line, eps);
  const auto exact = separable_critical_set(line, eps);
  REQUIRE(tracked.size() == exact.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    CHECK(tracked.points[k].label == exact.points[k].label);
    CHECK(tracked.points[k].coords == exact.points[k].coords);
    CHECK(tracked.points[k].value == exact.points[k].value);
  }
}

TEST_CASE("quadratic_1d tracking agrees with the univariate roots") {
  const ExponentVector a{4};
  const auto line = default_line(a, Preset::quadratic_1d);
  const Complex eps = line.epsilon(1e-3);
  const auto set = track_to_phi(line, eps);
  check_labels_exhaustive(a, set);
  // z^4 - eps (1 + 2 alpha z) = 0
  const CVector coeffs{-eps, -2.0 * kQuadraticCoefficient * eps, 0.0, 0.0, 1.0};
  const auto roots = univariate_roots(coeffs);
  for (const auto& p : set.points) {
    double best = 1e300;
    for (const auto& r : roots) best = std::min(best, std::abs(r - p.coords[0]));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("correspondence displacement scales like |eps|^(1/a_i + 1/a_1)") {
  const std::vector<GenericLine> lines = {default_line({4}, Preset::quadratic_1d),
                                          default_line({5}, Preset::quadratic_1d),
                                          default_line({3, 3}, Preset::xy_coupled),
                                          default_line({5, 3}, Preset::xy_coupled)};
  for (const auto& line : lines) {
    CAPTURE(line.a.to_string());
    const double e1 = 1e-3, e2 = e1 / 4.0;
    const auto t1 = track_to_phi(line, line.epsilon(e1));
    const auto s1 = separable_critical_set(GenericLine(line.a, line.q, SparsePoly(line.a.size())), line.epsilon(e1));
    const auto t2 = track_to_phi(line, line.epsilon(e2));
    const auto s2 = separable_critical_set(GenericLine(line.a, line.q, SparsePoly(line.a.size())), line.epsilon(e2));
    for (std::size_t i = 0; i < line.a.size(); ++i) {
      const double bound = 1.0 / line.a[i] + 1.0 / line.a[0] - 0.1;
      for (std::size_t k = 0; k < t1.size(); ++k) {
        const double d1 = std::abs(t1.points[k].coords[i] - s1.points[k].coords[i]);
        const double d2 = std::abs(t2.points[k].coords[i] - s2.points[k].coords[i]);
        if (d1 == 0.0 && d2 == 0.0) continue;
        CHECK(std::log(d1 / d2) / std::log(4.0) >= bound);
      }
    }
  }
}

TEST_CASE("xy_coupled tracking at eps = 1e-3 gives a labelled bijection") {
  const ExponentVector a{3, 3};
  const auto line = default_line(a, Preset::xy_coupled);
  const auto set = track_to_phi(line, line.epsilon(1e-3));
  check_labels_exhaustive(a, set);
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : set.points) distinct.insert({p.coords[0].real(), p.coords[1].real()});
  CHECK(distinct.size() == 9);
  CHECK(max_gradient_residual(a, line.phi(), set) <= residual_tolerance(set.epsilon));
}

TEST_CASE("tracked sets meet the residual bound across presets and grid") {
  const std::vector<GenericLine> lines = {
      default_line({3}, Preset::linear),       default_line({8}, Preset::quadratic_1d),
      default_line({5, 5}, Preset::xy_coupled), default_line({7, 2}, Preset::xy_coupled),
      GenericLine({3, 2, 2}, {1.0, 0.3, 0.003}, poly(3, {{{1, 1, 0}, 0.01}, {{2, 0, 1}, 0.01}}))};
  for (const auto& line : lines) {
    CAPTURE(line.a.to_string());
    for (double mag : {1e-2, 1e-3, 1e-5}) {
      const auto set = track_to_phi(line, line.epsilon(mag));
      check_labels_exhaustive(line.a, set);
      CHECK(max_gradient_residual(line.a, line.phi(), set) <= residual_tolerance(set.epsilon));
    }
  }
}

TEST_CASE("phi ladder examples") {
  const auto xy = default_line({3, 3}, Preset::xy_coupled);
  const auto ladder = phi_ladder(xy);
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[0] == xy.linear_part());
  CHECK(ladder[1] == xy.linear_part());
  CHECK(ladder[2] == xy.phi());

  const auto lin = default_line({5, 3}, Preset::linear);
  for (const auto& p : phi_ladder(lin)) CHECK(p == lin.phi());

  const auto quad = default_line({4}, Preset::quadratic_1d);
  const auto ql = phi_ladder(quad);
  REQUIRE(ql.size() == 2);
  CHECK(ql[0] == quad.linear_part());
  CHECK(ql[1] == quad.phi());
}

TEST_CASE("within-collection differences survive tails in earlier variables") {
  struct Case {
    ExponentVector a;
    SparsePoly tail;
    std::size_t depth;  // tail only involves z_1..z_depth
  };
  const std::vector<Case> cases = {
      {{3, 2, 2}, poly(3, {{{1, 1, 0}, 0.01}}), 2},
      {{4, 3}, poly(2, {{{2, 0}, 0.1}, {{3, 0}, 0.05}}), 1},
      {{5, 3, 2}, poly(3, {{{2, 0, 0}, 0.1}}), 1},
      {{3, 3, 2}, poly(3, {{{1, 2, 0}, 0.003}, {{2, 0, 0}, 0.05}}), 2},
  };
  for (const auto& c : cases) {
    CAPTURE(c.a.to_string());
    const GenericLine line(c.a, ladder_coefficients(c.a), c.tail);
    const GenericLine bare(c.a, ladder_coefficients(c.a), SparsePoly(c.a.size()));
    for (double mag : {1e-3, 1e-4}) {
      const Complex eps = line.epsilon(mag);
      const auto tracked = track_to_phi(line, eps);
      const auto exact = separable_critical_set(bare, eps);
      for (std::size_t m = c.depth; m < c.a.size(); ++m) {
        const auto d1 = within_collection_differences(tracked, m);
        const auto d0 = within_collection_differences(exact, m);
        REQUIRE(d1.size() == d0.size());
        CHECK(relative_gap(d1, d0) <= 1e-10);
      }
    }
  }
}

TEST_CASE("tracker reports overlapping clusters") {
  const auto line = default_line({5, 5}, Preset::xy_coupled);
  GenericLine strong(line.a, {1.0, 0.001}, poly(2, {{{1, 1}, 0.5}}));
  CHECK_THROWS_AS(track_to_phi(strong, strong.epsilon(1e-2)), ClusterOverlap);
}

TEST_CASE("track_to rejects targets with another linear part") {
  const auto line = default_line({3, 3}, Preset::xy_coupled);
  CHECK_THROWS_AS(track_to(line, poly(2, {{{1, 0}, 2.0}}), line.epsilon(1e-3)), InvalidArgument);
}
