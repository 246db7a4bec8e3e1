#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "collapselab/fixtures.hpp"
#include "collapselab/metric.hpp"
#include "oracles.hpp"

using namespace collapselab;

namespace {

  auto has_code(ErrorCode code) {
    return Catch::Matchers::Predicate<Error>([code](Error const& e) { return e.code() == code; });
  }

  oracle::Dist dense(MetricSpace const& X) {
    oracle::Dist d(X.size(), std::vector<double>(X.size()));
    for (std::size_t i = 0; i < X.size(); ++i) {
      for (std::size_t j = 0; j < X.size(); ++j) {
        d[i][j] = X(i, j);
      }
    }
    return d;
  }

  MetricSpace random_planar(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<std::vector<double>>       pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({u(rng), u(rng)});
    }
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i * n + j] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
      }
    }
    return MetricSpace(n, std::move(d), 0);
  }

  //! Rational distances in [1, 2] always satisfy the triangle inequality.
  ExactMetricSpace random_rational(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(12, 24);
    std::vector<Rational>              upper;
    for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) {
      upper.emplace_back(num(rng), 12);
    }
    return ExactMetricSpace::from_upper_triangle(n, upper, 0);
  }

  MetricSpace two_point(double gap) {
    return MetricSpace::from_upper_triangle(2, {gap}, 0);
  }

}  // namespace

TEST_CASE("metric validation", "[metric]") {
  CHECK(validate_metric(MetricSpace::from_upper_triangle(3, {1, 1, 1})).pass);

  auto bad = validate_metric(MetricSpace::from_upper_triangle(3, {1, 5, 1}));
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.worst_triple);
  CHECK(*bad.worst_triple == std::array<std::size_t, 3>{0, 1, 2});
  CHECK(bad.worst_violation == Catch::Approx(3.0));

  CHECK(validate_metric(fixtures::euclidean_ball_sample(3, 1.0, 40, 7)).pass);

  MetricSpace asym(2, {0, 1, 2, 0});
  CHECK_FALSE(validate_metric(asym).symmetric);
  MetricSpace diag(2, {1, 1, 1, 0});
  CHECK_FALSE(validate_metric(diag).zero_diagonal);
}

TEST_CASE("distortion of correspondences", "[metric]") {
  auto X = fixtures::euclidean_ball_sample(2, 1.0, 5, 3);
  Correspondence id;
  for (std::size_t i = 0; i < X.size(); ++i) {
    id.pairs.emplace_back(i, i);
  }
  CHECK(distortion(id, X, X) == 0);

  Correspondence forced{{{0, 0}, {1, 1}}};
  CHECK(distortion(forced, two_point(1), two_point(3)) == 2);

  Correspondence partial{{{0, 0}}};
  CHECK_THROWS_MATCHES(distortion(partial, two_point(1), two_point(3)), Error, has_code(ErrorCode::invalid_argument));

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto           A = random_planar(rng, 4), B = random_planar(rng, 4);
    Correspondence R;
    for (std::size_t i = 0; i < 4; ++i) {
      R.pairs.emplace_back(i, (i * 3 + static_cast<std::size_t>(trial)) % 4);
    }
    R.pairs.emplace_back(0, 2);
    double brute = 0;
    for (auto [a, b] : R.pairs) {
      for (auto [c, d] : R.pairs) {
        brute = std::max(brute, std::abs(A(a, c) - B(b, d)));
      }
    }
    CHECK(distortion(R, A, B) == brute);
  }
}

TEST_CASE("exact GH distance on small spaces", "[metric]") {
  auto X = fixtures::euclidean_ball_sample(2, 1.0, 5, 11);
  CHECK(gh_exact_small(X, X).value == 0);
  CHECK(gh_exact_small(two_point(1), two_point(4)).value == Catch::Approx(1.5));

  MetricSpace point(1, {0}, 0);
  std::mt19937_64 rng(4);
  auto            Y = random_planar(rng, 4);
  CHECK(gh_exact_small(point, Y).value == Catch::Approx(Y.diameter() / 2));
  CHECK(gh_exact_small(point, Y).value == Catch::Approx(oracle::gh_brute_force(dense(point), dense(Y))));

  auto big = fixtures::euclidean_ball_sample(2, 1.0, 7, 1);
  CHECK_THROWS_MATCHES(gh_exact_small(big, X), Error, has_code(ErrorCode::cap_exceeded));
}

TEST_CASE("exact GH agrees with brute force over all relations", "[metric][oracle]") {
  std::mt19937_64                          rng(23);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t nx = size(rng), ny = size(rng);
    if (nx * ny > 16) {
      ny = 16 / nx;
    }
    auto X = random_planar(rng, nx), Y = random_planar(rng, ny);
    auto e = gh_exact_small(X, Y);
    CHECK(e.value == Catch::Approx(oracle::gh_brute_force(dense(X), dense(Y))).margin(1e-12));
    CHECK(e.witness.surjective(nx, ny));
    CHECK(distortion(e.witness, X, Y) / 2 == Catch::Approx(e.value).margin(1e-12));

    auto p = gh_exact_small(X, Y, 6, true);
    CHECK(p.value == Catch::Approx(oracle::gh_brute_force(dense(X), dense(Y), 0, 0)).margin(1e-12));
    CHECK(p.value >= e.value - 1e-12);
  }
}

TEST_CASE("exact GH is symmetric and satisfies the triangle inequality", "[metric][property]") {
  std::mt19937_64                          rng(29);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    auto X = random_planar(rng, size(rng)), Y = random_planar(rng, size(rng)), Z = random_planar(rng, size(rng));
    double xy = gh_exact_small(X, Y).value, yx = gh_exact_small(Y, X).value;
    double yz = gh_exact_small(Y, Z).value, xz = gh_exact_small(X, Z).value;
    CHECK(std::abs(xy - yx) <= 1e-9);
    CHECK(xz <= xy + yz + 1e-9);
  }
}

TEST_CASE("exact GH scales exactly in rational mode", "[metric][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    auto           X = random_rational(rng, 3 + trial % 2), Y = random_rational(rng, 2 + trial % 3);
    Rational const lambda(3 + trial, 7);
    auto           base   = gh_exact_small(X, Y).value;
    auto           scaled = gh_exact_small(fixtures::rescale(X, lambda), fixtures::rescale(Y, lambda)).value;
    CHECK(scaled == lambda * base);
  }
}

TEST_CASE("heuristic GH bounds sandwich the exact value", "[metric][property]") {
  auto X = fixtures::euclidean_ball_sample(2, 1.0, 30, 5);
  auto same = gh_upper_heuristic(X, X, 1);
  CHECK(same.upper == 0);
  CHECK(same.lower == 0);

  MetricSpace p1(1, {0}, 0);
  CHECK(gh_upper_heuristic(p1, fixtures::rescale(p1, 2.0), 1).upper == 0);

  std::mt19937_64                          rng(37);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  for (int trial = 0; trial < 80; ++trial) {
    auto A = random_planar(rng, size(rng)), B = random_planar(rng, size(rng));
    auto exact = gh_exact_small(A, B).value;
    auto h     = gh_upper_heuristic(A, B, static_cast<std::uint64_t>(trial), 300);
    CHECK(h.lower <= exact + 1e-12);
    CHECK(exact <= h.upper + 1e-12);
    CHECK(h.witness.surjective(A.size(), B.size()));
    CHECK(distortion(h.witness, A, B) / 2 == Catch::Approx(h.upper).margin(1e-12));
  }

  auto T  = fixtures::flat_torus_sample({1.0, 2.0}, 40, 3);
  auto r1 = gh_upper_heuristic(X, T, 99, 500);
  auto r2 = gh_upper_heuristic(X, T, 99, 500);
  CHECK(r1.upper == r2.upper);
  CHECK(r1.witness.pairs == r2.witness.pairs);
  CHECK(r1.lower <= r1.upper);
}

TEST_CASE("pointed epsilon-approximation checks", "[metric]") {
  auto X = fixtures::euclidean_ball_sample(2, 2.0, 20, 13);
  std::vector<std::optional<std::size_t>> id;
  for (std::size_t i = 0; i < X.size(); ++i) {
    id.emplace_back(i);
  }
  CHECK(eps_gha_check(id, X, X, 0.3).pass);

  auto collapse = eps_gha_check({0, 0}, two_point(1), MetricSpace(1, {0}, 0), 0.5);
  CHECK_FALSE(collapse.pass);
  CHECK(collapse.isometric_defect == 1);

  // Folding an 8-point circle of length 8 onto the segment [0, 4].
  auto                                    C = fixtures::circle_net(8, 8.0);
  auto                                    I = MetricSpace::from_upper_triangle(5, {1, 2, 3, 4, 1, 2, 3, 1, 2, 1}, 0);
  std::vector<std::optional<std::size_t>> fold;
  for (std::size_t i = 0; i < 8; ++i) {
    fold.emplace_back(std::min(i, 8 - i));
  }
  auto r = eps_gha_check(fold, C, I, 0.1);
  CHECK(r.domain_size == 8);
  CHECK(r.isometric_defect == 4);
  CHECK(r.onto_defect == 0);
  CHECK_FALSE(r.pass);
  auto loose = eps_gha_check(fold, C, I, 5.0);
  CHECK(loose.domain_size == 1);
  CHECK(loose.pass);

  std::vector<std::optional<std::size_t>> missing(X.size());
  CHECK_FALSE(eps_gha_check(missing, X, X, 0.5).pass);
}

TEST_CASE("fixture geometry", "[metric][fixtures]") {
  auto X = fixtures::euclidean_ball_sample(3, 1.0, 12, 2);
  CHECK(fixtures::rescale(X, 1.0).matrix() == X.matrix());
  CHECK(fixtures::rescale(X, 2.5)(3, 4) == Catch::Approx(2.5 * X(3, 4)));

  auto P = fixtures::product(two_point(3), two_point(4));
  REQUIRE(P.size() == 4);
  CHECK(P(0, 1) == 4);
  CHECK(P(0, 2) == 3);
  CHECK(P(0, 3) == 5);
  CHECK(P(1, 2) == 5);
  CHECK(P.basepoint() == std::optional<std::size_t>{0});

  // A cone of total angle 2 pi is the plane.
  auto cone = fixtures::cone_sample(2 * std::numbers::pi, 1.5, 30, 8);
  CHECK(validate_metric(cone).pass);
  for (std::size_t i = 0; i < cone.size(); ++i) {
    for (std::size_t j = 0; j < cone.size(); ++j) {
      auto const& a = cone.coordinates()[i];
      auto const& b = cone.coordinates()[j];
      double      e = std::hypot(a[0] * std::cos(a[1]) - b[0] * std::cos(b[1]), a[0] * std::sin(a[1]) - b[0] * std::sin(b[1]));
      CHECK(cone(i, j) == Catch::Approx(e).margin(1e-9));
    }
  }
  CHECK(validate_metric(fixtures::cone_sample(1.0, 2.0, 30, 9)).pass);

  auto T = fixtures::flat_torus_sample({1.0, 3.0}, 30, 4);
  CHECK(validate_metric(T).pass);
  CHECK(T.diameter() <= std::hypot(0.5, 1.5) + 1e-12);
  auto G = fixtures::flat_torus_grid({2.0}, 4);
  CHECK(G(0, 3) == Catch::Approx(0.5));
  CHECK(G(0, 2) == Catch::Approx(1.0));

  auto circle = fixtures::circle_net(6, 6.0);
  CHECK(circle(0, 5) == 1);
  CHECK(circle(0, 3) == 3);

  auto base = fixtures::circle_net(5, 2.0);
  CHECK(validate_metric(fixtures::cone_over(base, {0.5, 1.0, 2.0})).pass);

  auto tripod = fixtures::line_times_tripod({-1, 0, 1}, {0, 0.5, 1});
  CHECK(validate_metric(tripod).pass);
  REQUIRE(tripod.basepoint());
  CHECK(tripod.size() == 3 * 7);
}
