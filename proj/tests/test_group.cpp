#include <random>

#include <catch_amalgamated.hpp>

#include "collapselab/canonical.hpp"
#include "collapselab/group.hpp"
#include "oracles.hpp"

using namespace collapselab;

namespace {

  oracle::Mat to_oracle(UnitriangularMatrix const& m) {
    oracle::Mat out(m.dimension(), std::vector<std::int64_t>(m.dimension()));
    for (std::size_t i = 0; i < m.dimension(); ++i) {
      for (std::size_t j = 0; j < m.dimension(); ++j) {
        out[i][j] = static_cast<std::int64_t>(m.entry(i, j));
      }
    }
    return out;
  }

  UnitriangularMatrix random_ut(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> pick(-5, 5);
    UnitriangularMatrix                m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m.at(i, j) = pick(rng);
      }
    }
    return m;
  }

  std::vector<oracle::Mat> oracle_gens(GroupContext const& ctx) {
    std::vector<oracle::Mat> gens;
    for (auto const& g : ctx.images()) {
      gens.push_back(to_oracle(g.matrix()));
    }
    return gens;
  }

}  // namespace

TEST_CASE("evaluate and commutator in the Heisenberg group", "[group]") {
  auto ctx = groups::heisenberg();
  CHECK(evaluate(Word{}, ctx).is_identity());

  // x, x^-1, y, y^-1 = letters 0..3.
  auto z = evaluate(Word{0, 2, 1, 3}, ctx).matrix();
  auto expected = oracle::multiply(
      oracle::multiply(oracle::multiply(to_oracle(ctx.image(0).matrix()), to_oracle(ctx.image(2).matrix())),
                       to_oracle(ctx.image(1).matrix())),
      to_oracle(ctx.image(3).matrix()));
  CHECK(to_oracle(z) == expected);
  CHECK(z.at(0, 1) == 0);
  CHECK(z.at(1, 2) == 0);
  CHECK(abs(z.at(0, 2)) == 1);

  auto c = commutator(ctx.image(0), ctx.image(2)).matrix();
  CHECK(c.at(0, 2) == 1);
  CHECK(c.depth() == 2);
  CHECK(commutator(ctx.image(0), ctx.identity()).is_identity());
}

TEST_CASE("abelian embedding commutes", "[group]") {
  auto ctx = groups::free_abelian(2);
  CHECK(evaluate(Word{0, 2}, ctx) == evaluate(Word{2, 0}, ctx));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    GroupElement g = evaluate(Word{static_cast<Letter>(rng() % 4), static_cast<Letter>(rng() % 4)}, ctx);
    GroupElement h = evaluate(Word{static_cast<Letter>(rng() % 4)}, ctx);
    CHECK(commutator(g, h).is_identity());
  }
}

TEST_CASE("matrix arithmetic matches the int64 oracle and group laws", "[group][property]") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 3u, 4u, 5u}) {
    for (int t = 0; t < 50; ++t) {
      auto a = random_ut(rng, n), b = random_ut(rng, n), c = random_ut(rng, n);
      CHECK(to_oracle(a * b) == oracle::multiply(to_oracle(a), to_oracle(b)));
      CHECK(to_oracle(a.inverse()) == oracle::unitriangular_inverse(to_oracle(a)));
      CHECK((a * b) * c == a * (b * c));
      CHECK((a * a.inverse()).is_identity());
      CHECK((a.inverse() * a).is_identity());
    }
  }
}

TEST_CASE("permutations compose as functions", "[group]") {
  Permutation p({1, 2, 0});
  Permutation q({1, 0, 2});
  auto        pq = p * q;
  for (std::uint32_t x = 0; x < 3; ++x) {
    CHECK(pq(x) == p(q(x)));
  }
  CHECK((p * p.inverse()).is_identity());
  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);
  CHECK_THROWS_AS(GroupElement(p) * GroupElement(UnitriangularMatrix(3)), Error);
}

TEST_CASE("evaluate is a monoid homomorphism on words", "[group][property]") {
  auto            ctx = groups::unitriangular(4);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    Word u, v;
    for (int i = 0; i < 6; ++i) {
      u.letters.push_back(static_cast<Letter>(rng() % ctx.size()));
      v.letters.push_back(static_cast<Letter>(rng() % ctx.size()));
    }
    CHECK(evaluate(concat(u, v), ctx) == evaluate(u, ctx) * evaluate(v, ctx));
  }
}

TEST_CASE("group context validation", "[group]") {
  auto x = GroupElement(UnitriangularMatrix::elementary(2, 0, 1));
  CHECK_THROWS_AS(GroupContext(SymmetricGeneratingSet({1, 0}), {x, x}), Error);
  CHECK_THROWS_AS(GroupContext::from_generators({GroupElement(UnitriangularMatrix(2))}), Error);
  auto involution = GroupContext::from_generators({GroupElement(Permutation({1, 0}))});
  CHECK(involution.size() == 1);
  CHECK(involution.generators().inverse(0) == 0);
}

TEST_CASE("ball enumeration sizes", "[group][oracle]") {
  auto z2 = groups::free_abelian(2);
  CHECK(ball_enumerate(z2, 0).size() == 1);
  CHECK(ball_enumerate(z2, 2).size() == 13);
  CHECK(ball_enumerate(z2, 5).size() == 61);

  auto heis = groups::heisenberg();
  auto gens = oracle_gens(heis);
  for (std::size_t r = 0; r <= 5; ++r) {
    CHECK(ball_enumerate(heis, r).size() == oracle::product_ball_size(gens, r));
  }

  CHECK_THROWS_MATCHES(ball_enumerate(heis, 6, 100),
                       Error,
                       Catch::Matchers::Predicate<Error>(
                           [](Error const& e) { return e.code() == ErrorCode::ball_too_large; }));
}

TEST_CASE("ball enumeration is monotone and words are canonical", "[group][property]") {
  auto       ctx = groups::heisenberg();
  CayleyBall small(ctx, 3), large(ctx, 5);
  for (auto const& e : small.entries()) {
    auto idx = large.find(e.element);
    REQUIRE(idx);
    CHECK(large.entries()[*idx].word == e.word);
    CHECK(evaluate(e.word, ctx) == e.element);
  }
  for (std::size_t i = 0; i < large.size(); i += 37) {
    auto const& e = large.entries()[i];
    CHECK(canonical_presentation(e.element, ctx, 5).word == e.word);
  }
  for (std::size_t i = 1; i < large.size(); ++i) {
    CHECK(compare_presentations(large.entries()[i - 1].word, large.entries()[i].word) < 0);
  }
}

TEST_CASE("finite permutation groups are enumerated completely", "[group]") {
  auto s3 = GroupContext::from_generators({GroupElement(Permutation({1, 0, 2})), GroupElement(Permutation({1, 2, 0}))});
  CayleyBall ball(s3, 10);
  CHECK(ball.size() == 6);
}
