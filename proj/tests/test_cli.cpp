#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "collapselab/cli.hpp"
#include "collapselab/fixtures.hpp"
#include "collapselab/io.hpp"
#include "collapselab/quotients.hpp"

using namespace collapselab;
using io::Json;

namespace {

  std::string const samples = COLLAPSELAB_SAMPLES_DIR;

  std::string sample(std::string const& name) {
    return samples + "/" + name;
  }

  struct Outcome {
    int         code = -1;
    std::string out;
    std::string err;
    Json        report() const { return Json::parse(out); }
  };

  Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "collapselab");
    std::vector<char const*> argv;
    for (auto const& a : args) {
      argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Outcome            o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out  = out.str();
    o.err  = err.str();
    return o;
  }

  std::filesystem::path scratch(std::string const& name) {
    auto dir = std::filesystem::temp_directory_path() / "collapselab_test_cli";
    std::filesystem::create_directories(dir);
    return dir / name;
  }

  std::string write(std::string const& name, std::string const& text) {
    auto          p = scratch(name);
    std::ofstream f(p, std::ios::binary);
    f << text;
    return p.string();
  }

  std::string slurp(std::string const& path) {
    std::ifstream      f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

}  // namespace

TEST_CASE("FNV-1a hashes", "[cli][io]") {
  CHECK(io::fnv1a64("") == "cbf29ce484222325");
  CHECK(io::fnv1a64("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a64("foobar") == "85944171f73967e8");
}

TEST_CASE("scalar serialization round trips", "[cli][io]") {
  for (auto q : {Rational(0), Rational(3, 4), Rational(-7, 3), Rational(BigInt("123456789012345678901234567890"), 7)}) {
    CHECK(io::to_rational(io::rational_json(q)) == q);
  }
  CHECK(io::rational_json(Rational(3, 4)) == Json::array({"3", "4"}));
  CHECK(io::to_rational(Json("5/10")) == Rational(1, 2));
  CHECK(io::to_rational(Json(2)) == Rational(2));
  CHECK(io::to_bigint(io::bigint_json(BigInt("-98765432109876543210"))) == BigInt("-98765432109876543210"));
  CHECK(io::number_json(std::numeric_limits<double>::infinity()) == Json("inf"));
  CHECK(io::to_double(Json("-inf")) == -std::numeric_limits<double>::infinity());
  CHECK(std::isnan(io::to_double(Json("nan"))));
  CHECK(io::to_double(io::number_json(0.1)) == 0.1);
  CHECK_THROWS_AS(io::to_rational(Json("1/0")), Error);
}

TEST_CASE("word files are 1-based with negative inverses", "[cli][io]") {
  auto const  ctx = groups::heisenberg();
  auto const& S   = ctx.generators();
  // Letters index the symmetric set x, x^-1, y, y^-1; -i names the inverse of letter i.
  auto w = io::to_word(Json::array({1, -3, 2}), S);
  CHECK(w.letters == std::vector<Letter>{0, 3, 1});
  CHECK(io::word_json(w) == Json::array({1, 4, 2}));
  CHECK(io::parse_word_text("1, -3 2", S).letters == w.letters);
  CHECK(io::parse_word_text("e", S).letters.empty());
  CHECK_THROWS_AS(io::to_word(Json::array({5}), S), Error);
  CHECK_THROWS_AS(io::to_word(Json::array({0}), S), Error);
}

TEST_CASE("group, oracle, space and action files round trip", "[cli][io]") {
  SECTION("unitriangular group with listed generators") {
    auto ctx = groups::unitriangular(4);
    auto j   = io::group_json(ctx, io::alternating_listed(ctx));
    CHECK_FALSE(j.contains("inverse_pairing"));
    auto g = io::parse_group(j);
    REQUIRE(g.ctx.size() == ctx.size());
    for (std::size_t a = 0; a < ctx.size(); ++a) {
      CHECK(g.ctx.image(static_cast<Letter>(a)) == ctx.image(static_cast<Letter>(a)));
    }
  }
  SECTION("oracle") {
    auto ctx    = groups::heisenberg();
    auto oracle = quotients::heisenberg_mod2_center();
    auto listed = io::alternating_listed(ctx);
    auto g      = io::parse_group(io::group_json(ctx, listed));
    auto back   = io::parse_oracle(io::oracle_json(oracle, listed), g);
    CHECK(back.index() == oracle.index());
    CHECK(coset_table(g.ctx, back).index == 4);
  }
  SECTION("float and exact spaces") {
    auto X    = fixtures::euclidean_ball_sample(2, 1.0, 12, 3);
    auto back = io::parse_space(Json::parse(io::space_json(X).dump()));
    REQUIRE(back.space.size() == X.size());
    CHECK_FALSE(back.exact.has_value());
    for (std::size_t i = 0; i < X.size(); ++i) {
      for (std::size_t j = 0; j < X.size(); ++j) {
        CHECK(back.space(i, j) == X(i, j));
      }
    }
    auto E  = ExactMetricSpace::from_upper_triangle(3, {Rational(1, 3), Rational(1, 2), Rational(2, 3)}, 1);
    auto eb = io::parse_space(io::space_json(E));
    REQUIRE(eb.exact.has_value());
    CHECK((*eb.exact)(0, 2) == Rational(1, 2));
    CHECK(eb.exact->basepoint() == 1);
  }
  SECTION("metric violations are rejected on load") {
    Json bad{{"size", 3}, {"distances", {1, 1, 5}}};
    CHECK_THROWS_AS(io::parse_space(bad), Error);
  }
  SECTION("action with inline parts") {
    auto act  = fixtures::circle_rotation_action(12, 12.0, 5);
    auto back = io::parse_action(io::action_json(act, io::alternating_listed(act.group())), ".");
    REQUIRE(back.action.maps().size() == act.maps().size());
    for (std::size_t i = 0; i < act.maps().size(); ++i) {
      CHECK(back.action.maps()[i] == act.maps()[i]);
    }
  }
}

TEST_CASE("refine reports the Heisenberg refinement", "[cli]") {
  auto o = run({"refine", "--group", sample("heisenberg.json")});
  REQUIRE(o.code == 0);
  auto r = o.report();
  CHECK(r["schema_version"] == 1);
  CHECK(r["command"] == "refine");
  CHECK(r["status"] == "pass");
  CHECK(r["result"]["rank"] == 3);
  CHECK(r["result"]["step"] == 2);
  CHECK(r["result"]["counts"] == Json::array({2, 1}));
  for (auto const& g : r["result"]["generators"]) {
    CHECK(g["word_length"].get<int>() <= 10);
  }
}

TEST_CASE("gh-dist on two-point spaces", "[cli]") {
  auto o = run({"gh-dist", "--exact", sample("a.json"), sample("b.json")});
  REQUIRE(o.code == 0);
  auto r = o.report();
  CHECK(r["result"]["distance"] == 1.0);
  CHECK(r["result"]["distance_exact"] == Json::array({"1", "1"}));
  CHECK(r["config"]["exact"] == true);

  auto h = run({"gh-dist", sample("a.json"), sample("b.json")}).report();
  CHECK(h["result"]["lower"].get<double>() <= 1.0);
  CHECK(h["result"]["upper"].get<double>() >= 1.0);
}

TEST_CASE("schreier reports its bounds", "[cli]") {
  auto o = run({"schreier", "--group", sample("z2.json"), "--oracle", sample("mod2.json")});
  REQUIRE(o.code == 0);
  auto b = o.report()["result"]["bounds"];
  CHECK(b["count"].get<std::size_t>() <= b["count_bound"].get<std::size_t>());
  CHECK(b["count_bound"] == 2 * 2 * 4);
  CHECK(b["max_length"].get<std::size_t>() <= 2 * 2 + 1);
  CHECK(b["length_bound"] == 5);
  CHECK(b["pass"] == true);
  CHECK(o.report()["result"]["generation"]["ok"] == true);
}

TEST_CASE("reports hash their inputs", "[cli]") {
  auto r = run({"schreier", "--group", sample("z2.json"), "--oracle", sample("mod2.json")}).report();
  CHECK(r["inputs"]["group"]["fnv1a64"] == io::fnv1a64(slurp(sample("z2.json"))));
  CHECK(r["inputs"]["oracle"]["fnv1a64"] == io::fnv1a64(slurp(sample("mod2.json"))));

  auto a = run({"rank-bound", "--action", sample("torus_action.json"), "--delta", "0.1", "--ambient", "2", "--limit-k", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.report()["inputs"]["action"]["fnv1a64"] == io::fnv1a64(slurp(sample("torus_action.json"))));
}

TEST_CASE("exit codes", "[cli]") {
  SECTION("property failure") {
    auto map = write("map.json", "[0, 1]\n");
    auto o   = run({"gha-check", sample("a.json"), sample("b.json"), "--map", map, "--epsilon", "0.5"});
    CHECK(o.code == 1);
    CHECK(o.report()["status"] == "fail");
  }
  SECTION("input errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"refine"}).code == 2);
    CHECK(run({"refine", "--group", sample("missing.json")}).code == 2);
    CHECK(run({"refine", "--group", write("broken.json", "{\"backend\": ")}).code == 2);
    CHECK(run({"gh-dist", write("bad_space.json", "{\"size\": 3, \"distances\": [1, 1, 5]}"),
                sample("a.json")}).code == 2);
    auto o = run({"refine", "--group", write("empty.json", "{}")});
    CHECK(o.code == 2);
    CHECK(o.err.find("MALFORMED_INPUT") != std::string::npos);
  }
  SECTION("cap exceeded") {
    auto o = run({"gh-dist", "--exact", sample("segment.json"), sample("a.json"), "--ball-cap", "4"});
    CHECK(o.code == 3);
    CHECK(o.err.find("CAP_EXCEEDED") != std::string::npos);
  }
  SECTION("power lemma not found within the cap") {
    auto o = run({"power-lemma", "--action", sample("circle_action.json"), "--word", "1", "--epsilon", "0.5", "--power-cap", "3"});
    CHECK(o.code == 1);
  }
}

TEST_CASE("identical runs give identical reports", "[cli][property]") {
  std::vector<std::vector<std::string>> commands{
      {"stratify", "--space", sample("cone.json"), "--seed", "3"},
      {"gh-dist", sample("segment.json"), sample("b.json"), "--seed", "8"},
      {"fixtures", "--kind", "torus-sample", "--sides", "1,0.5", "--size", "30", "--seed", "4"},
      {"group-analyze", "--group", sample("ut4.json")},
  };
  for (auto const& c : commands) {
    auto first = run(c), second = run(c);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
  }
  auto path = scratch("report.json").string();
  auto args = commands[0];
  auto base = run(args);
  args.insert(args.end(), {"--out", path});
  auto to_file = run(args);
  CHECK(to_file.out.empty());
  CHECK(slurp(path) == base.out);
  CHECK_FALSE(base.report()["config"].contains("out"));
  CHECK(base.report()["config"]["seed"] == 3);
}

TEST_CASE("fixture output loads back", "[cli]") {
  auto g = run({"fixtures", "--kind", "heisenberg"});
  REQUIRE(g.code == 0);
  auto group = io::parse_group(Json::parse(g.out));
  CHECK(group.ctx.size() == 4);

  auto s = run({"fixtures", "--kind", "log-polar-cone", "--per-octave", "2", "--octaves", "3", "--size", "8"});
  REQUIRE(s.code == 0);
  auto space = io::parse_space(Json::parse(s.out));
  CHECK(space.space.size() == 1 + 2 * 3 * 8);

  auto a = run({"fixtures", "--kind", "circle-action", "--size", "10", "--length", "10", "--shift", "3"});
  REQUIRE(a.code == 0);
  auto action = io::parse_action(Json::parse(a.out), ".");
  CHECK(action.action.space().size() == 10);
}
