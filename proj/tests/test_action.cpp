#include <cmath>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "collapselab/action.hpp"
#include "collapselab/packing.hpp"

using namespace collapselab;
using collapselab::fixtures::circle_rotation_action;
using collapselab::fixtures::torus_translation_action;

namespace {

  auto has_code(ErrorCode code) {
    return Catch::Matchers::Predicate<Error>([code](Error const& e) { return e.code() == code; });
  }

  IsometricAction trivial_action(GroupContext ctx, std::size_t points) {
    auto                     X = fixtures::circle_net(points, static_cast<double>(points));
    std::vector<Permutation> maps(ctx.size(), Permutation::identity(points));
    return IsometricAction(std::move(ctx), std::move(X), std::move(maps));
  }

  // Frozen values from an independent 30-digit integration.
  constexpr double V3_closed_0_1 = 0.0041971757682781673722642509510292;
  constexpr double V3_closed_1   = 5.1109327057082889769303250008399;
  constexpr double V3_closed_5   = 34567.675564905882538825058538473;
  constexpr double V2_1          = 3.4122762652849023064483572863;

}  // namespace

TEST_CASE("action validation", "[action]") {
  auto ctx = groups::free_abelian(1);
  auto X   = fixtures::circle_net(4, 4.0);
  Permutation r({1, 2, 3, 0});
  CHECK_THROWS_MATCHES(IsometricAction(ctx, X, {r, r}), Error, has_code(ErrorCode::malformed_input));
  Permutation swap({1, 0, 2, 3});
  CHECK_THROWS_MATCHES(IsometricAction(ctx, X, {swap, swap}), Error, has_code(ErrorCode::malformed_input));
  IsometricAction loose(ctx, X, {swap, swap}, 1.0);
  CHECK(loose.distortion() == 1.0);

  // Non-commuting permutations cannot give a Z^2 action.
  auto                     z2 = groups::free_abelian(2);
  Permutation              a({1, 0, 2}), b({0, 2, 1});
  auto                     tri = MetricSpace::from_upper_triangle(3, {1, 1, 1});
  IsometricAction          bad(z2, tri, {a, a, b, b});
  CHECK_THROWS_MATCHES(ActionBall(bad, 2), Error, has_code(ErrorCode::malformed_input));
}

TEST_CASE("displacement", "[action]") {
  auto rot = circle_rotation_action(8, 8.0, 1);
  CHECK(rot.distortion() == 0);
  ActionBall ab(rot, 3);
  auto const& id = ab.act(rot.group().identity());
  for (std::size_t x = 0; x < 8; ++x) {
    CHECK(rot.displacement(id, x) == 0);
    CHECK(rot.displacement(ab.act(rot.group().image(0)), x) == 1);
  }
  auto prof = displacement_profile(rot, ab.act(rot.group().image(0)), 0, 2.5);
  CHECK(prof.max_on_ball == 1);
  CHECK(prof.ball_size == 5);
  CHECK_THROWS_MATCHES(ab.act(power(rot.group().image(0), 9)), Error, has_code(ErrorCode::not_found_within_cap));

  // Chordal variant: 8 points on a circle of radius 1.
  std::vector<double> chord(64);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      chord[i * 8 + j] = 2 * std::sin(std::numbers::pi * static_cast<double>((i + 8 - j) % 8) / 8);
    }
  }
  std::vector<std::uint32_t> f(8), g(8);
  for (std::uint32_t i = 0; i < 8; ++i) {
    f[i] = (i + 1) % 8;
    g[i] = (i + 7) % 8;
  }
  IsometricAction chordal(groups::free_abelian(1), MetricSpace(8, chord, 0), {Permutation(f), Permutation(g)}, 1e-12);
  CHECK(chordal.displacement(Permutation(f), 3) == Catch::Approx(2 * std::sin(std::numbers::pi / 8)));
}

TEST_CASE("displacement identities on torus samples", "[action][property]") {
  auto       act = torus_translation_action({0.25, 0.5}, 6);
  ActionBall ab(act, 3);
  auto const& X = act.space();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, ab.ball().size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t gi = pick(rng), hi = pick(rng);
    auto const& g  = ab.ball().entries()[gi].element;
    auto const& h  = ab.ball().entries()[hi].element;
    auto const& pg = ab.permutation(gi);
    auto const& ph = ab.permutation(hi);
    for (std::size_t x = 0; x < X.size(); x += 5) {
      auto const hx = ph(static_cast<std::uint32_t>(x));
      // d(gh x, x) <= d(g (hx), hx) + d(hx, x)
      CHECK(act.displacement(pg * ph, x) <= act.displacement(pg, hx) + act.displacement(ph, x) + 1e-12);
      // displacement(g^-1, x) = displacement(g, g^-1 x)
      auto const ginv = pg.inverse();
      CHECK(act.displacement(ginv, x) == Catch::Approx(act.displacement(pg, ginv(static_cast<std::uint32_t>(x)))));
    }
    if (auto j = ab.ball().find(g * h)) {
      CHECK(ab.permutation(*j) == pg * ph);
    }
  }
}

TEST_CASE("short subgroups", "[action]") {
  auto act = torus_translation_action({1.0 / 8, 1.0}, 8);
  ActionBall ab(act, 4);

  auto all = short_subgroup(ab, 0, act.space().diameter());
  CHECK(all.generators.size() == ab.ball().size() - 1);

  auto collapsed = short_subgroup(ab, 0, 2.0 / 8);
  REQUIRE_FALSE(collapsed.generators.empty());
  bool has_a = false;
  for (auto const& s : collapsed.generators) {
    CHECK(s.displacement < 2 * collapsed.delta);
    CHECK(s.element.matrix().at(0, 2) == 0);  // no b-component
    has_a = has_a || s.element == act.group().image(0);
  }
  CHECK(has_a);
  for (auto i : collapsed.snapshot) {
    CHECK(ab.ball().entries()[i].element.matrix().at(0, 2) == 0);
  }

  auto triv = trivial_action(groups::heisenberg(), 4);
  ActionBall tb(triv, 3);
  auto       ts = short_subgroup(tb, 0, 1e-6);
  CHECK(ts.generators.size() == tb.ball().size() - 1);
  CHECK(ts.snapshot.size() == tb.ball().size());

  CHECK_THROWS_MATCHES(short_subgroup(ab, 0, 0.0), Error, has_code(ErrorCode::invalid_argument));
  CHECK_THROWS_MATCHES(short_subgroup(act, 0, 0.1, 50, 1000), Error, has_code(ErrorCode::ball_too_large));
}

TEST_CASE("short subgroups grow with delta", "[action][property]") {
  auto       act = torus_translation_action({0.1, 0.3, 0.7}, 5);
  ActionBall ab(act, 3);
  std::vector<std::size_t> prev;
  for (double delta : {0.01, 0.06, 0.1, 0.2, 0.4, 0.8}) {
    auto                     s = short_subgroup(ab, 7, delta);
    std::vector<std::size_t> now;
    for (auto const& e : s.generators) {
      now.push_back(e.ball_index);
    }
    CHECK(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
    prev = now;
  }
}

TEST_CASE("power lemma scan", "[action]") {
  auto rot = circle_rotation_action(64, 64.0, 12);
  auto g   = rot.maps()[0];
  CHECK(power_small_displacement(rot, Permutation::identity(64), 0, 0.5, 10, 5) == std::optional<std::size_t>{1});
  auto d = power_small_displacement(rot, g, 0, 2.0, 64.0, 100);
  REQUIRE(d);
  CHECK(*d == 16);
  // Oracle: the power d moves every point by min(12 d mod 64, 64 - 12 d mod 64).
  std::size_t least = 0;
  for (std::size_t k = 1; k <= 100 && least == 0; ++k) {
    std::size_t shift = (12 * k) % 64;
    if (std::min(shift, 64 - shift) < 2) {
      least = k;
    }
  }
  CHECK(least == *d);

  auto coarse = circle_rotation_action(1000, 1.0, 618);
  CHECK_FALSE(power_small_displacement(coarse, coarse.maps()[0], 0, 0.0005, 1.0, 100));

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n     = std::uniform_int_distribution<std::size_t>(5, 60)(rng);
    std::size_t steps = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    double      eps   = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
    auto        a     = circle_rotation_action(n, static_cast<double>(n), steps);
    auto        found = power_small_displacement(a, a.maps()[0], 0, eps, static_cast<double>(n), 2 * n);
    std::optional<std::size_t> expected;
    for (std::size_t k = 1; k <= 2 * n && !expected; ++k) {
      std::size_t shift = (steps * k) % n;
      if (static_cast<double>(std::min(shift, n - shift)) < eps) {
        expected = k;
      }
    }
    CHECK(found == expected);
  }
}

TEST_CASE("hyperbolic ball volumes", "[action][packing]") {
  auto closed = [](double r) { return std::numbers::pi * (std::sinh(2 * r) - 2 * r); };
  for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(static_cast<double>(hyperbolic_ball_volume(3, r)) == Catch::Approx(closed(r)).epsilon(1e-8));
  }
  CHECK(static_cast<double>(hyperbolic_ball_volume(3, 0.1)) == Catch::Approx(V3_closed_0_1).epsilon(1e-10));
  CHECK(static_cast<double>(hyperbolic_ball_volume(3, 1.0)) == Catch::Approx(V3_closed_1).epsilon(1e-10));
  CHECK(static_cast<double>(hyperbolic_ball_volume(3, 5.0)) == Catch::Approx(V3_closed_5).epsilon(1e-10));
  CHECK(static_cast<double>(hyperbolic_ball_volume(2, 1.0)) == Catch::Approx(V2_1).epsilon(1e-10));
}

TEST_CASE("packing bound", "[action][packing]") {
  auto b = packing_power_bound(2, 0.1, 1);
  CHECK(b.N0 == 8807952);
  CHECK(b.M0 == 17615904);
  CHECK(b.k0 == BigInt("3523912700"));
  CHECK_FALSE(b.N1.has_value());
  CHECK(b.log10_N1 == Catch::Approx(3523912700.0 * std::log10(17615904.0)));

  CHECK(packing_power_bound(3, 0.05, 1).N0 == BigInt("11642508329665"));

  for (std::size_t n : {2, 3, 4}) {
    for (double eps : {0.09, 0.05, 0.02}) {
      auto base = packing_power_bound(n, eps, 1);
      CHECK(packing_power_bound(n, eps / 2, 1).N0 >= base.N0);
      CHECK(packing_power_bound(n, eps, 2).N0 >= base.N0);
      CHECK(base.M0 == 2 * base.N0);
      CHECK(base.k0 >= base.N0);
    }
  }
  CHECK_THROWS_MATCHES(packing_power_bound(1, 0.05, 1), Error, has_code(ErrorCode::invalid_argument));
  CHECK_THROWS_MATCHES(packing_power_bound(2, 0.2, 1), Error, has_code(ErrorCode::invalid_argument));
  CHECK_THROWS_MATCHES(packing_power_bound(2, 0.05, 0.5), Error, has_code(ErrorCode::invalid_argument));
}

TEST_CASE("K constant", "[action]") {
  CHECK(K_constant(1, 0) == 10);
  CHECK(K_constant(2, 3) == 160);
  for (std::size_t w = 1; w <= 12; ++w) {
    for (std::size_t l = 1; l <= 12; ++l) {
      CHECK(BigInt((2 * w + 1) * (3 * (std::size_t{1} << l) - 2)) <= K_constant(w, l));
    }
  }
}

TEST_CASE("displacement property of graded generators", "[action]") {
  auto z2 = refine_lcs(lower_central_series(groups::free_abelian(2)));

  auto       triv = trivial_action(groups::free_abelian(2), 5);
  ActionBall tb(triv, 2);
  CHECK(displacement_property_check(tb, z2, 0, 1e-9).pass);

  double const delta = 0.01;
  double const eps   = static_cast<double>(K_constant(1, 1)) * delta;
  for (double scale : {0.05, 0.1, 0.15, 0.25, 0.5}) {
    auto       act = torus_translation_action({scale, scale}, 6);
    ActionBall ab(act, 2);
    auto       rep = displacement_property_check(ab, z2, 0, eps);
    CHECK(rep.m == 2);
    CHECK(rep.pass == (scale < eps));
  }

  auto       mixed = torus_translation_action({0.01, 1.0}, 6);
  ActionBall mb(mixed, 2);
  auto       rep = displacement_property_check(mb, z2, 0, 0.1);
  CHECK_FALSE(rep.pass);
  CHECK(rep.failing == std::vector<std::size_t>{1});
  CHECK(z2.generators[1].word.letters() == std::vector<Letter>{2});

  auto heis = refine_lcs(lower_central_series(groups::heisenberg()));
  CHECK_THROWS_MATCHES(displacement_property_check(mb, heis, 0, 0.1), Error, has_code(ErrorCode::not_realizable));
}

TEST_CASE("rank bounds from short subgroups", "[action]") {
  auto       t2 = torus_translation_action({0.01, 0.01}, 8);
  ActionBall b2(t2, 3);
  auto       full = rank_bound_report(b2, 0, 0.1, 2, 0);
  CHECK(full.rank == 2);
  CHECK(full.within_bound);
  CHECK(full.equality);

  auto       t3 = torus_translation_action({0.01, 0.01, 1.0}, 6);
  ActionBall b3(t3, 3);
  auto       partial = rank_bound_report(b3, 0, 0.1, 3, 1);
  CHECK(partial.rank == 2);
  CHECK(partial.equality);

  auto       big = torus_translation_action({1.0, 1.0}, 6);
  ActionBall bb(big, 3);
  auto       none = rank_bound_report(bb, 0, 0.1, 2, 2);
  CHECK(none.short_generators == 0);
  CHECK(none.rank == 0);
  CHECK(none.equality);
}

TEST_CASE("powers of graded generators become short at every net point", "[action][property]") {
  auto       act = torus_translation_action({1.0 / 8, 1.0}, 8);
  ActionBall ab(act, 2);
  auto       ref = refine_lcs(lower_central_series(groups::free_abelian(2)));
  for (auto const& sg : ref.generators) {
    auto g = realize(ab, ref.lcs.B, sg.word);
    for (std::size_t x = 0; x < act.space().size(); ++x) {
      auto d = power_small_displacement(act, g, x, 0.01, 0.5, 8);
      REQUIRE(d);
      CHECK(*d <= 8);
    }
  }
}
