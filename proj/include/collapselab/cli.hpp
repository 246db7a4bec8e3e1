#ifndef COLLAPSELAB_CLI_HPP_
#define COLLAPSELAB_CLI_HPP_

// Subcommand dispatch for the collapselab tool. Each subcommand reads its
// inputs, runs one library pipeline and writes a deterministic JSON report.
//
// Exit codes: 0 success, 1 property failure, 2 input error, 3 cap exceeded.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "action.hpp"
#include "canonical.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "group.hpp"
#include "io.hpp"
#include "metric.hpp"
#include "nilpotent.hpp"
#include "packing.hpp"
#include "quotients.hpp"
#include "stratify.hpp"
#include "subgroups.hpp"

namespace collapselab::cli {

  using io::Json;

  enum ExitCode : int { exit_ok = 0, exit_property = 1, exit_input = 2, exit_cap = 3 };

  inline int exit_code(ErrorCode code) {
    switch (code) {
      case ErrorCode::cap_exceeded:
      case ErrorCode::ball_too_large:
      case ErrorCode::not_found_within_cap:
      case ErrorCode::step_cap_exceeded:
      case ErrorCode::search_exhausted: return exit_cap;
      case ErrorCode::decomposition_failed:
      case ErrorCode::selection_failed: return exit_property;
      default: return exit_input;
    }
  }

  //! Every flag of every subcommand; unset optionals take per-subcommand
  //! defaults, and the effective value is recorded in the report.
  struct RunConfig {
    std::optional<std::string>   group, oracle, action, map, out, kind;
    std::vector<std::string>     spaces;
    std::optional<std::size_t>   basepoint, ball_cap, power_cap, k_cap, alpha_max, dimension, ambient, limit_k, size,
        shift, per_octave, octaves;
    std::optional<double>        delta, epsilon, radius, length, angle;
    std::optional<std::uint64_t> seed;
    std::optional<std::string>   word;
    std::vector<long long>       powers;
    std::vector<double>          sides, radii;
    std::vector<std::size_t>     apex;
    bool                         exact   = false;
    bool                         pointed = false;
  };

  namespace detail {

    template <class T>
    T param(io::Report& rep, char const* key, std::optional<T> const& v, T fallback) {
      T value = v.value_or(fallback);
      if constexpr (std::is_floating_point_v<T>) {
        rep.config(key, io::number_json(value));
      } else {
        rep.config(key, value);
      }
      return value;
    }

    template <class T>
    T required(io::Report& rep, char const* key, std::optional<T> const& v) {
      require(v.has_value(), ErrorCode::malformed_input, std::string("--") + key + " is required");
      return param(rep, key, v, *v);
    }

    inline io::Input load(io::Report& rep, char const* role, std::optional<std::string> const& path) {
      require(path.has_value(), ErrorCode::malformed_input, std::string("--") + role + " is required");
      auto f = io::read_input(*path);
      rep.input(role, f);
      return f;
    }

    inline io::GroupFile load_group(RunConfig const& cfg, io::Report& rep) {
      auto f = load(rep, "group", cfg.group);
      return io::parse_group(io::parse_json(f.content, f.path));
    }

    inline FiniteQuotientOracle load_oracle(RunConfig const& cfg, io::Report& rep, io::GroupFile const& g) {
      auto f = load(rep, "oracle", cfg.oracle);
      return io::parse_oracle(io::parse_json(f.content, f.path), g);
    }

    inline io::SpaceFile load_space(io::Report& rep, char const* role, std::string const& path) {
      auto f = io::read_input(path);
      rep.input(role, f);
      return io::parse_space(io::parse_json(f.content, f.path));
    }

    inline io::ActionFile load_action(RunConfig const& cfg, io::Report& rep) {
      auto f = load(rep, "action", cfg.action);
      auto a = io::parse_action(io::parse_json(f.content, f.path), std::filesystem::path(f.path).parent_path());
      for (auto const& [role, input] : a.referenced) {
        rep.input("action." + role, input);
      }
      return a;
    }

    inline Json bigints_json(IntVector const& v) {
      Json j = Json::array();
      for (auto const& x : v) {
        j.push_back(io::bigint_json(x));
      }
      return j;
    }

    inline Json pairs_json(Correspondence const& R) {
      Json j = Json::array();
      for (auto const& [x, y] : R.pairs) {
        j.push_back(Json::array({x, y}));
      }
      return j;
    }

    inline std::size_t basepoint_of(io::Report& rep, RunConfig const& cfg, MetricSpace const& X) {
      std::size_t p = param(rep, "basepoint", cfg.basepoint, X.basepoint().value_or(0));
      require(p < X.size(), ErrorCode::invalid_argument, "basepoint out of range");
      return p;
    }

    inline Json table_json(CosetTable const& table, Transversal const& trans) {
      Json reps = Json::array();
      for (std::size_t j = 0; j < trans.index; ++j) {
        auto const& r = trans.representatives[j];
        reps.push_back({{"coset", j}, {"word", io::word_json(r.word)}, {"length", r.length()}, {"certified", r.certified}});
      }
      return {{"index", table.index}, {"representatives", std::move(reps)}, {"max_length", trans.max_length()}};
    }

    inline Json refinement_json(PolycyclicRefinement const& ref) {
      Json gens = Json::array();
      for (auto const& g : ref.generators) {
        gens.push_back({{"level", g.level},
                        {"k", g.k},
                        {"weight", g.weight},
                        {"word", io::word_json(g.word)},
                        {"word_length", g.word_length},
                        {"canonical_length", g.canonical_length ? Json(*g.canonical_length) : Json()},
                        {"coordinates", bigints_json(g.coordinates)}});
      }
      Json levels = Json::array();
      for (std::size_t s = 0; s < ref.counts.size(); ++s) {
        levels.push_back({{"level", s + 1},
                          {"count", ref.counts[s]},
                          {"ambient_rank", ref.abelian[s].ambient_rank},
                          {"free_rank", ref.abelian[s].free_rank},
                          {"torsion", bigints_json(ref.abelian[s].torsion)}});
      }
      return {{"rank", ref.rank},
              {"step", ref.step()},
              {"counts", ref.counts},
              {"length_bound", ref.length_bound},
              {"lengths_certified", ref.lengths_certified},
              {"series_length", ref.series_length()},
              {"levels", std::move(levels)},
              {"generators", std::move(gens)}};
    }

    inline Json splitting_json(SplittingReport const& r) {
      auto factor = [](SplitFactor const& f) {
        return Json{{"a", f.a},
                    {"b", f.b},
                    {"span", io::number_json(f.span)},
                    {"excess", io::number_json(f.excess)},
                    {"defect", io::number_json(f.defect)}};
      };
      Json factors = Json::array();
      for (auto const& f : r.factors) {
        factors.push_back(factor(f));
      }
      Json cands = Json::array();
      for (auto const& c : r.candidates) {
        cands.push_back({{"index", c.index},
                         {"score", io::number_json(c.score)},
                         {"lower", io::number_json(c.lower)},
                         {"good", c.good}});
      }
      return {{"k", r.k},
              {"k_cap", r.k_cap},
              {"epsilon", io::number_json(r.epsilon)},
              {"basepoint", r.basepoint},
              {"diameter", io::number_json(r.diameter)},
              {"factors", std::move(factors)},
              {"rejected", r.rejected ? factor(*r.rejected) : Json()},
              {"residual_sample_size", r.residual_sample.size()},
              {"candidates", std::move(cands)}};
    }

    inline std::optional<Word> word_option(io::Report& rep, RunConfig const& cfg, GroupContext const& ctx) {
      if (!cfg.word) {
        return std::nullopt;
      }
      Word w = io::parse_word_text(*cfg.word, ctx.generators());
      rep.config("word", io::word_json(w));
      return w;
    }

    inline std::vector<BigInt> powers_option(io::Report& rep, RunConfig const& cfg, std::size_t count) {
      std::vector<BigInt> p;
      Json                rec = Json::array();
      if (cfg.powers.empty()) {
        p.assign(count, 1);
      } else {
        for (auto v : cfg.powers) {
          p.emplace_back(v);
        }
      }
      for (auto const& x : p) {
        rec.push_back(io::bigint_json(x));
      }
      rep.config("powers", std::move(rec));
      return p;
    }

  }  // namespace detail

  ////////////////////////////////////////////////////////////////////////
  // Handlers: fill the report and return whether the property holds.
  ////////////////////////////////////////////////////////////////////////

  inline bool group_analyze(RunConfig const& cfg, io::Report& rep) {
    auto              g   = detail::load_group(cfg, rep);
    auto const&       ctx = g.ctx;
    std::size_t const R   = detail::param<std::size_t>(rep, "ball-cap", cfg.ball_cap, 4);
    CayleyBall        ball(ctx, R);
    Json              sizes = Json::array();
    for (std::size_t r = 0; r <= ball.radius(); ++r) {
      sizes.push_back(ball.count_within(r));
    }
    Json pairing = Json::array();
    for (Letter a = 0; a < ctx.size(); ++a) {
      pairing.push_back(ctx.generators().inverse(a) + 1);
    }
    auto& res              = rep.result();
    res["backend"]         = std::string(to_string(ctx.backend()));
    res["dimension"]       = ctx.dimension();
    res["generators"]      = ctx.size();
    res["listed"]          = g.listed.size();
    res["inverse_pairing"] = std::move(pairing);
    res["ball_sizes"]      = std::move(sizes);
    if (ctx.backend() == Backend::unitriangular) {
      auto ref              = refine_lcs(lower_central_series(ctx));
      res["nilpotent"]      = {{"step", ref.step()}, {"rank", ref.rank}, {"counts", ref.counts}};
    } else {
      std::vector<Permutation> perms;
      for (auto const& e : ctx.images()) {
        perms.push_back(e.permutation());
      }
      res["order"]     = permutation_closure(perms, ctx.dimension()).size();
      res["nilpotent"] = {{"rank", 0}};
    }
    return true;
  }

  inline bool transversal(RunConfig const& cfg, io::Report& rep) {
    auto              g      = detail::load_group(cfg, rep);
    auto              oracle = detail::load_oracle(cfg, rep, g);
    auto              table  = coset_table(g.ctx, oracle);
    std::size_t const radius = detail::param<std::size_t>(rep, "ball-cap", cfg.ball_cap, table.index);
    auto              trans  = canonical_transversal(table, g.ctx, oracle, radius);
    auto&             res    = rep.result();
    res                      = detail::table_json(table, trans);
    bool const lengths_ok    = trans.max_length() <= table.index;
    bool       pass          = lengths_ok;
    res["length_bound"]      = table.index;
    res["lengths_ok"]        = lengths_ok;
    res["normal"]            = oracle.is_normal();
    if (oracle.is_normal()) {
      auto closure = prefix_closure_check(trans, table, g.ctx, oracle);
      Json cex     = Json::array();
      for (auto const& c : closure.counterexamples) {
        cex.push_back({{"coset", c.coset}, {"first", c.first}, {"last", c.last}});
      }
      res["prefix_closure"] = {{"pass", closure.pass}, {"checked", closure.checked}, {"counterexamples", cex}};
      pass                  = pass && closure.pass;
    }
    return pass;
  }

  inline bool schreier(RunConfig const& cfg, io::Report& rep) {
    auto              g      = detail::load_group(cfg, rep);
    auto              oracle = detail::load_oracle(cfg, rep, g);
    auto              table  = coset_table(g.ctx, oracle);
    std::size_t const R      = detail::param<std::size_t>(rep, "ball-cap", cfg.ball_cap, 4);
    auto              trans  = canonical_transversal(table, g.ctx, oracle, table.index);
    CayleyBall        ball(g.ctx, R);
    auto              set = schreier_generators(trans, table, g.ctx, oracle, &ball);
    auto              gen = verify_generation(set, table, g.ctx, oracle, ball, R);
    Json              entries = Json::array();
    for (auto const& e : set.entries) {
      entries.push_back({{"word", io::word_json(e.word)},
                         {"length", e.length},
                         {"length_exact", e.length_exact},
                         {"coset", e.coset},
                         {"generator", e.generator + 1}});
    }
    auto& res          = rep.result();
    res["transversal"] = detail::table_json(table, trans);
    res["generators"]  = std::move(entries);
    res["bounds"]      = {{"index", set.index},
                          {"generators", set.num_generators},
                          {"count", set.entries.size()},
                          {"count_bound", set.count_bound()},
                          {"max_length", set.max_length},
                          {"length_bound", set.length_bound()},
                          {"pass", set.bounds_hold()}};
    res["generation"]  = {{"radius", gen.radius},
                          {"ball_elements", gen.ball_elements},
                          {"subgroup_in_ball", gen.subgroup_in_ball},
                          {"rewritten", gen.rewritten},
                          {"ok", gen.ok}};
    return set.bounds_hold() && gen.ok;
  }

  inline bool lcs(RunConfig const& cfg, io::Report& rep) {
    auto g      = detail::load_group(cfg, rep);
    auto series = lower_central_series(g.ctx);
    Json weights = Json::array();
    for (auto const& w : series.weights) {
      Json entries = Json::array();
      for (auto const& e : w.entries) {
        entries.push_back({{"word", io::word_json(e.word)}, {"length", e.word.size()}});
      }
      weights.push_back({{"weight", w.weight}, {"entries", std::move(entries)}});
    }
    Json levels = Json::array();
    for (std::size_t s = 0; s <= series.step; ++s) {
      levels.push_back(series.level_generators(s).size());
    }
    auto& res                    = rep.result();
    res["step"]                  = series.step;
    res["weights"]               = std::move(weights);
    res["level_generator_counts"] = std::move(levels);
    return true;
  }

  inline bool refine(RunConfig const& cfg, io::Report& rep) {
    auto g   = detail::load_group(cfg, rep);
    auto ref = refine_lcs(lower_central_series(g.ctx));
    auto& res = rep.result();
    res       = detail::refinement_json(ref);
    bool pass = true;
    for (auto const& s : ref.generators) {
      pass = pass && s.canonical_length.value_or(s.word_length) <= ref.length_bound;
    }
    if (!cfg.powers.empty()) {
      auto powers            = detail::powers_option(rep, cfg, ref.generators.size());
      res["graded_rank"]     = rank_of_graded_subgroup(ref, powers);
      pass                   = pass && res["graded_rank"] == ref.rank;
    }
    res["lengths_within_bound"] = pass;
    return pass;
  }

  inline bool standard_form_cmd(RunConfig const& cfg, io::Report& rep) {
    auto g = detail::load_group(cfg, rep);
    auto w = detail::word_option(rep, cfg, g.ctx);
    require(w.has_value(), ErrorCode::malformed_input, "--word is required");
    auto ref    = refine_lcs(lower_central_series(g.ctx));
    auto powers = detail::powers_option(rep, cfg, ref.generators.size());
    auto sf     = standard_form(evaluate(*w, g.ctx), ref, powers);
    Json residual = Json::array();
    for (auto const& [i, e] : sf.residual_factors) {
      residual.push_back({{"generator", i + 1}, {"exponent", io::bigint_json(e)}});
    }
    Json graded = Json::array();
    for (auto const& s : ref.generators) {
      graded.push_back(io::word_json(s.word));
    }
    auto& res               = rep.result();
    res["graded_generators"] = std::move(graded);
    res["exponents"]        = detail::bigints_json(sf.exponents);
    res["residual_factors"] = std::move(residual);
    res["index_bound"]      = io::bigint_json(sf.index_bound);
    res["verified"]         = sf.verified;
    return sf.verified;
  }

  inline bool gh_dist(RunConfig const& cfg, io::Report& rep) {
    require(cfg.spaces.size() == 2, ErrorCode::malformed_input, "gh-dist takes exactly two space files");
    auto          X       = detail::load_space(rep, "space_a", cfg.spaces[0]);
    auto          Y       = detail::load_space(rep, "space_b", cfg.spaces[1]);
    bool const    exact   = detail::param(rep, "exact", std::optional<bool>(cfg.exact), false);
    bool const    pointed = detail::param(rep, "pointed", std::optional<bool>(cfg.pointed), false);
    auto&         res     = rep.result();
    if (exact) {
      std::size_t const cap = detail::param<std::size_t>(rep, "ball-cap", cfg.ball_cap, 6);
      if (X.exact && Y.exact) {
        auto r                  = gh_exact_small(*X.exact, *Y.exact, cap, pointed);
        res["distance"]         = io::number_json(as_double(r.value));
        res["distance_exact"]   = io::rational_json(r.value);
        res["witness"]          = detail::pairs_json(r.witness);
      } else {
        auto r          = gh_exact_small(X.space, Y.space, cap, pointed);
        res["distance"] = io::number_json(r.value);
        res["witness"]  = detail::pairs_json(r.witness);
      }
      res["method"] = "exact";
      return true;
    }
    std::uint64_t const seed = detail::param<std::uint64_t>(rep, "seed", cfg.seed, 0);
    GHBound b = pointed ? gh_pointed_upper(X.space, Y.space, seed) : gh_upper_heuristic(X.space, Y.space, seed);
    res["method"]  = pointed ? "pointed-landmark" : "local-search";
    res["lower"]   = io::number_json(b.lower);
    res["upper"]   = io::number_json(b.upper);
    res["witness"] = detail::pairs_json(b.witness);
    return b.lower <= b.upper;
  }

  inline bool gha_check(RunConfig const& cfg, io::Report& rep) {
    require(cfg.spaces.size() == 2, ErrorCode::malformed_input, "gha-check takes exactly two space files");
    auto         X   = detail::load_space(rep, "space_a", cfg.spaces[0]);
    auto         Y   = detail::load_space(rep, "space_b", cfg.spaces[1]);
    auto         mf  = detail::load(rep, "map", cfg.map);
    double const eps = detail::required(rep, "epsilon", cfg.epsilon);
    Json         mj  = io::parse_json(mf.content, mf.path);
    if (mj.is_object()) {
      mj = io::detail::field(mj, "map", "map file");
    }
    require(mj.is_array(), ErrorCode::malformed_input, "map must be an array of point indices or nulls");
    std::vector<std::optional<std::size_t>> f;
    for (auto const& x : mj) {
      f.push_back(x.is_null() ? std::nullopt : std::optional(io::detail::index(x, "map entry")));
    }
    auto r   = eps_gha_check(f, X.space, Y.space, eps);
    auto& res = rep.result();
    res["pass"]             = r.pass;
    res["basepoint_ok"]     = r.basepoint_ok;
    res["defined_on_ball"]  = r.defined_on_ball;
    res["domain_size"]      = r.domain_size;
    res["isometric_defect"] = io::number_json(r.isometric_defect);
    res["worst_pair"]       = r.worst_pair ? Json::array({r.worst_pair->first, r.worst_pair->second}) : Json();
    res["onto_defect"]      = io::number_json(r.onto_defect);
    res["worst_target"]     = r.worst_target ? Json(*r.worst_target) : Json();
    return r.pass;
  }

  inline bool action_displacement(RunConfig const& cfg, io::Report& rep) {
    auto         a = detail::load_action(cfg, rep);
    auto const&  X = a.action.space();
    std::size_t  p = detail::basepoint_of(rep, cfg, X);
    double const R = detail::param(rep, "radius", cfg.radius, std::numeric_limits<double>::infinity());
    std::vector<Word> words;
    if (auto w = detail::word_option(rep, cfg, a.action.group())) {
      words.push_back(*w);
    } else {
      for (Letter l : a.group.listed) {
        words.push_back(Word{l});
      }
    }
    Json elements = Json::array();
    for (auto const& w : words) {
      auto prof = displacement_profile(a.action, a.action.act(w), p, R);
      Json per  = Json::array();
      for (double d : prof.per_point) {
        per.push_back(io::number_json(d));
      }
      elements.push_back({{"word", io::word_json(w)},
                          {"at_basepoint", io::number_json(prof.per_point[p])},
                          {"max_on_ball", io::number_json(prof.max_on_ball)},
                          {"ball_size", prof.ball_size},
                          {"per_point", std::move(per)}});
    }
    auto& res          = rep.result();
    res["distortion"]  = io::number_json(a.action.distortion());
    res["elements"]    = std::move(elements);
    return true;
  }

  inline bool short_subgroup_cmd(RunConfig const& cfg, io::Report& rep) {
    auto              a     = detail::load_action(cfg, rep);
    std::size_t       p     = detail::basepoint_of(rep, cfg, a.action.space());
    double const      delta = detail::required(rep, "delta", cfg.delta);
    std::size_t const R     = detail::param<std::size_t>(rep, "ball-cap", cfg.ball_cap, 3);
    auto              sg    = short_subgroup(a.action, p, delta, R);
    Json              gens  = Json::array();
    bool              pass  = true;
    for (auto const& s : sg.generators) {
      gens.push_back({{"word", io::word_json(s.word)}, {"displacement", io::number_json(s.displacement)}});
      pass = pass && s.displacement < 2 * delta + a.action.slack();
    }
    auto& res             = rep.result();
    res["radius"]         = sg.radius;
    res["ball_size"]      = sg.ball_size;
    res["short_elements"] = std::move(gens);
    res["snapshot_size"]  = sg.snapshot.size();
    return pass;
  }

  inline bool power_lemma(RunConfig const& cfg, io::Report& rep) {
    auto              a   = detail::load_action(cfg, rep);
    std::size_t       p   = detail::basepoint_of(rep, cfg, a.action.space());
    auto              w   = detail::word_option(rep, cfg, a.action.group());
    require(w.has_value(), ErrorCode::malformed_input, "--word is required");
    double const      eps = detail::required(rep, "epsilon", cfg.epsilon);
    double const      R   = detail::param(rep, "radius", cfg.radius, 1.0);
    std::size_t const cap = detail::param<std::size_t>(rep, "power-cap", cfg.power_cap, 64);
    Permutation const g   = a.action.act(*w);
    auto              d   = power_small_displacement(a.action, g, p, eps, R, cap);
    auto&             res = rep.result();
    res["displacement_at_basepoint"] = io::number_json(a.action.displacement(g, p));
    res["found"]                     = d.has_value();
    res["power"]                     = d ? Json(*d) : Json();
    if (d) {
      Permutation gd = Permutation::identity(a.action.space().size());
      for (std::size_t i = 0; i < *d; ++i) {
        gd = gd * g;
      }
      res["max_displacement"] = io::number_json(max_displacement_ball(a.action, gd, p, R));
    }
    return d.has_value();
  }

  inline bool packing_bound(RunConfig const& cfg, io::Report& rep) {
    std::size_t const n   = detail::required(rep, "dimension", cfg.dimension);
    double const      eps = detail::required(rep, "epsilon", cfg.epsilon);
    double const      R   = detail::param(rep, "radius", cfg.radius, 1.0);
    auto              b   = packing_power_bound(n, eps, R);
    auto&             res = rep.result();
    res["outer_volume"]   = io::number_json(static_cast<double>(b.outer_volume));
    res["inner_volume"]   = io::number_json(static_cast<double>(b.inner_volume));
    res["net_volume"]     = io::number_json(static_cast<double>(b.net_volume));
    res["N0"]             = io::bigint_json(b.N0);
    res["M0"]             = io::bigint_json(b.M0);
    res["k0"]             = io::bigint_json(b.k0);
    res["log10_N1"]       = io::number_json(b.log10_N1);
    res["N1"]             = b.N1 ? io::bigint_json(*b.N1) : Json();
    return true;
  }

  inline bool stratify(RunConfig const& cfg, io::Report& rep) {
    require(cfg.spaces.size() == 1, ErrorCode::malformed_input, "stratify takes exactly one --space");
    auto                sf    = detail::load_space(rep, "space", cfg.spaces[0]);
    MetricSpace         X     = sf.space;
    std::size_t const   p     = detail::basepoint_of(rep, cfg, X);
    double const        eps   = detail::param(rep, "epsilon", cfg.epsilon, 0.05);
    std::size_t const   amax  = detail::param<std::size_t>(rep, "alpha-max", cfg.alpha_max, 4);
    std::uint64_t const seed  = detail::param<std::uint64_t>(rep, "seed", cfg.seed, 0);
    std::size_t const   k_cap = detail::param<std::size_t>(rep, "k-cap", cfg.k_cap, 3);
    X.set_basepoint(p);

    ScaleOptions so;
    so.seed     = seed;
    auto scales = good_bad_scales(X, p, eps, amax, so);
    Json sj     = Json::array();
    for (auto const& v : scales.scales) {
      sj.push_back({{"alpha", v.alpha},
                    {"radius", io::number_json(v.radius)},
                    {"score", io::number_json(v.score)},
                    {"lower", io::number_json(v.lower)},
                    {"verdict", v.skipped ? "SKIPPED" : (v.good ? "GOOD" : "BAD")},
                    {"outer_size", v.outer_size},
                    {"inner_size", v.inner_size}});
    }
    Json lines = Json::array();
    for (auto const& l : line_detect(X, eps, p)) {
      lines.push_back({{"points", l.points},
                       {"span", io::number_json(l.span)},
                       {"excess", io::number_json(l.excess)},
                       {"through_basepoint", l.through_basepoint}});
    }
    auto split = splitting_detect(X, k_cap, eps);

    std::size_t const l = detail::param<std::size_t>(rep, "dimension", cfg.dimension, split.k);
    NoncollapseGrid   grid;
    grid.radii = cfg.radii.empty() ? std::vector<double>{1, 0.5, 0.25} : cfg.radii;
    grid.seed  = seed;
    Json radii = Json::array();
    for (double r : grid.radii) {
      radii.push_back(io::number_json(r));
    }
    rep.config("radii", std::move(radii));
    Json nc;
    if (l == 0) {
      nc = {{"value", 0}, {"note", "no Euclidean dimension to compare against"}};
    } else {
      auto r = noncollapse_radius(X, p, l, grid);
      nc     = {{"value", io::number_json(r.value)},
                {"witness", r.witness ? Json(*r.witness) : Json()},
                {"witness_radius", io::number_json(r.witness_radius)},
                {"witness_bound", io::number_json(r.witness_bound)},
                {"best_ratio", io::number_json(r.best_ratio)},
                {"note", r.note ? Json(*r.note) : Json()}};
    }
    auto& res         = rep.result();
    res["scales"]     = std::move(sj);
    res["bad_count"]  = scales.bad_count();
    res["warnings"]   = scales.warnings;
    res["lines"]      = std::move(lines);
    res["splitting"]  = detail::splitting_json(split);
    res["noncollapse"] = std::move(nc);
    return true;
  }

  inline bool split_detect(RunConfig const& cfg, io::Report& rep) {
    require(cfg.spaces.size() == 1, ErrorCode::malformed_input, "split-detect takes exactly one --space");
    auto              sf    = detail::load_space(rep, "space", cfg.spaces[0]);
    MetricSpace       X     = sf.space;
    std::size_t const p     = detail::basepoint_of(rep, cfg, X);
    double const      eps   = detail::param(rep, "epsilon", cfg.epsilon, 0.05);
    std::size_t const k_cap = detail::param<std::size_t>(rep, "k-cap", cfg.k_cap, 3);
    X.set_basepoint(p);
    SplittingReport r;
    if (!cfg.apex.empty()) {
      rep.config("apex", cfg.apex);
      ConeSplitOptions opt;
      opt.epsilon = eps;
      opt.k_cap   = k_cap;
      opt.radius  = detail::param(rep, "radius", cfg.radius, 1.0);
      opt.seed    = detail::param<std::uint64_t>(rep, "seed", cfg.seed, 0);
      for (auto c : cfg.apex) {
        require(c < X.size(), ErrorCode::invalid_argument, "apex candidate out of range");
      }
      r = cone_split_check(X, cfg.apex, opt);
    } else {
      r = splitting_detect(X, k_cap, eps);
    }
    rep.result() = detail::splitting_json(r);
    rep.result()["method"] = cfg.apex.empty() ? "pythagorean" : "cone-split";
    return true;
  }

  inline bool rank_bound(RunConfig const& cfg, io::Report& rep) {
    auto              a     = detail::load_action(cfg, rep);
    std::size_t       p     = detail::basepoint_of(rep, cfg, a.action.space());
    double const      delta = detail::required(rep, "delta", cfg.delta);
    std::size_t const R     = detail::param<std::size_t>(rep, "ball-cap", cfg.ball_cap, 3);
    std::size_t const n     = detail::required(rep, "ambient", cfg.ambient);
    std::size_t const k     = detail::param<std::size_t>(rep, "limit-k", cfg.limit_k, 0);
    ActionBall        ab(a.action, R);
    auto              r   = rank_bound_report(ab, p, delta, n, k);
    auto&             res = rep.result();
    res["rank"]             = r.rank;
    res["step"]             = r.step;
    res["short_generators"] = r.short_generators;
    res["bound"]            = n - k;
    res["within_bound"]     = r.within_bound;
    res["equality"]         = r.equality;
    return r.within_bound;
  }

  //! Writes an input file (group, space or action) rather than a report.
  inline Json fixture(RunConfig const& cfg, io::Report& rep) {
    std::string const kind = detail::required(rep, "kind", cfg.kind);
    auto              num  = [&](char const* key, std::optional<std::size_t> const& v, std::size_t d) {
      return detail::param<std::size_t>(rep, key, v, d);
    };
    auto real = [&](char const* key, std::optional<double> const& v, double d) { return detail::param(rep, key, v, d); };
    auto list = [&](char const* key, std::vector<double> const& v, std::vector<double> d) {
      auto out = v.empty() ? d : v;
      Json j   = Json::array();
      for (double x : out) {
        j.push_back(io::number_json(x));
      }
      rep.config(key, std::move(j));
      return out;
    };
    Json out;
    auto group = [](GroupContext const& ctx) { return io::group_json(ctx, io::alternating_listed(ctx)); };
    auto action = [](IsometricAction const& a) { return io::action_json(a, io::alternating_listed(a.group())); };
    if (kind == "heisenberg") {
      out = group(groups::heisenberg());
    } else if (kind == "unitriangular") {
      out = group(groups::unitriangular(num("dimension", cfg.dimension, 4)));
    } else if (kind == "free-abelian") {
      out = group(groups::free_abelian(num("dimension", cfg.dimension, 2)));
    } else if (kind == "heisenberg-mod2") {
      out = io::oracle_json(quotients::heisenberg_mod2_center(), io::alternating_listed(groups::heisenberg()));
    } else if (kind == "segment") {
      out = io::space_json(fixtures::segment_net(num("size", cfg.size, 16), real("length", cfg.length, 1)));
    } else if (kind == "circle") {
      out = io::space_json(fixtures::circle_net(num("size", cfg.size, 16), real("length", cfg.length, 1)));
    } else if (kind == "euclidean-ball") {
      auto k = num("dimension", cfg.dimension, 2);
      auto r = real("radius", cfg.radius, 1);
      auto c = num("size", cfg.size, 200);
      out    = io::space_json(fixtures::euclidean_ball_sample(k, r, c, detail::param<std::uint64_t>(rep, "seed", cfg.seed, 0)));
    } else if (kind == "torus-grid") {
      auto sides = list("sides", cfg.sides, {1, 1});
      out        = io::space_json(fixtures::flat_torus_grid(sides, num("size", cfg.size, 8)));
    } else if (kind == "torus-sample") {
      auto sides = list("sides", cfg.sides, {1, 1});
      out = io::space_json(fixtures::flat_torus_sample(sides, num("size", cfg.size, 200), detail::param<std::uint64_t>(rep, "seed", cfg.seed, 0)));
    } else if (kind == "cone") {
      auto angle = real("angle", cfg.angle, 1.5 * std::numbers::pi);
      auto r     = real("radius", cfg.radius, 1);
      auto c     = num("size", cfg.size, 300);
      out        = io::space_json(fixtures::cone_sample(angle, r, c, detail::param<std::uint64_t>(rep, "seed", cfg.seed, 0)));
    } else if (kind == "log-polar-cone") {
      auto angle = real("angle", cfg.angle, 1.5 * std::numbers::pi);
      auto m     = num("per-octave", cfg.per_octave, 3);
      auto o     = num("octaves", cfg.octaves, 6);
      out        = io::space_json(fixtures::log_polar_cone(angle, m, o, num("size", cfg.size, 12)));
    } else if (kind == "torus-action") {
      auto steps = list("sides", cfg.sides, {0.25, 1});
      out        = action(fixtures::torus_translation_action(steps, num("size", cfg.size, 4)));
    } else if (kind == "circle-action") {
      out = action(fixtures::circle_rotation_action(
          num("size", cfg.size, 8), real("length", cfg.length, 8), num("shift", cfg.shift, 1)));
    } else {
      fail(ErrorCode::malformed_input, "unknown fixture kind \"" + kind + "\"");
    }
    out["fixture"] = rep.json().at("config");
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Dispatch
  ////////////////////////////////////////////////////////////////////////

  struct Subcommand {
    char const*                                         name;
    char const*                                         help;
    std::vector<std::string>                            flags;
    std::function<bool(RunConfig const&, io::Report&)> run;
  };

  inline std::vector<Subcommand> const& subcommands() {
    static std::vector<Subcommand> const list = {
        {"group-analyze", "Ball sizes and nilpotency data of a group", {"group", "ball-cap"}, group_analyze},
        {"transversal", "Canonical coset transversal", {"group", "oracle", "ball-cap"}, transversal},
        {"schreier", "Schreier generators with their count and length bounds", {"group", "oracle", "ball-cap"}, schreier},
        {"lcs", "Lower central series by basic commutators", {"group"}, lcs},
        {"refine", "Polycyclic refinement and graded generators", {"group", "powers"}, refine},
        {"standard-form", "Standard form of an element for given powers", {"group", "word", "powers"}, standard_form_cmd},
        {"gh-dist", "Gromov-Hausdorff distance of two spaces", {"spaces", "exact", "pointed", "seed", "ball-cap"}, gh_dist},
        {"gha-check", "Check a pointed epsilon-approximation", {"spaces", "map", "epsilon"}, gha_check},
        {"action-displacement", "Displacement of elements of an action", {"action", "basepoint", "word", "radius"}, action_displacement},
        {"short-subgroup", "Elements moving the basepoint less than 2 delta", {"action", "basepoint", "delta", "ball-cap"}, short_subgroup_cmd},
        {"power-lemma", "Least power with small displacement on a ball", {"action", "basepoint", "word", "epsilon", "radius", "power-cap"}, power_lemma},
        {"packing-bound", "Packing counts for the power lemma", {"dimension", "epsilon", "radius"}, packing_bound},
        {"stratify", "Scale verdicts, lines, splitting and noncollapsing radius", {"spaces", "basepoint", "epsilon", "alpha-max", "seed", "k-cap", "dimension", "radii"}, stratify},
        {"split-detect", "Euclidean factor detection", {"spaces", "basepoint", "epsilon", "k-cap", "apex", "radius", "seed"}, split_detect},
        {"rank-bound", "Rank of the short subgroup against n - k", {"action", "basepoint", "delta", "ball-cap", "ambient", "limit-k"}, rank_bound},
        {"fixtures", "Write a fixture group, space or action file", {"kind", "dimension", "size", "length", "radius", "angle", "sides", "seed", "shift", "per-octave", "octaves"}, nullptr},
    };
    return list;
  }

  namespace detail {

    inline void add_flag(CLI::App& sub, std::string const& f, RunConfig& c) {
      if (f == "group") sub.add_option("--group", c.group, "Group file");
      else if (f == "oracle") sub.add_option("--oracle", c.oracle, "Quotient oracle file");
      else if (f == "action") sub.add_option("--action", c.action, "Action file");
      else if (f == "spaces") sub.add_option("--space,spaces", c.spaces, "Metric space file(s)");
      else if (f == "map") sub.add_option("--map", c.map, "Point map file");
      else if (f == "basepoint") sub.add_option("--basepoint", c.basepoint, "Basepoint index (0-based)");
      else if (f == "delta") sub.add_option("--delta", c.delta, "Displacement threshold delta");
      else if (f == "epsilon") sub.add_option("--epsilon", c.epsilon, "Tolerance epsilon");
      else if (f == "radius") sub.add_option("--radius", c.radius, "Ball radius");
      else if (f == "ball-cap") sub.add_option("--ball-cap", c.ball_cap, "Cayley ball radius cap");
      else if (f == "power-cap") sub.add_option("--power-cap", c.power_cap, "Largest power tried");
      else if (f == "seed") sub.add_option("--seed", c.seed, "Random seed");
      else if (f == "exact") sub.add_flag("--exact", c.exact, "Exact search");
      else if (f == "pointed") sub.add_flag("--pointed", c.pointed, "Pin the basepoints");
      else if (f == "word") sub.add_option("--word", c.word, "Word as comma-separated 1-based letters");
      else if (f == "powers") sub.add_option("--powers", c.powers, "Powers a_{s,k}")->delimiter(',');
      else if (f == "k-cap") sub.add_option("--k-cap", c.k_cap, "Largest Euclidean factor dimension");
      else if (f == "alpha-max") sub.add_option("--alpha-max", c.alpha_max, "Largest dyadic scale index");
      else if (f == "dimension") sub.add_option("--dimension", c.dimension, "Dimension");
      else if (f == "radii") sub.add_option("--radii", c.radii, "Noncollapse grid radii")->delimiter(',');
      else if (f == "apex") sub.add_option("--apex", c.apex, "Apex candidates")->delimiter(',');
      else if (f == "ambient") sub.add_option("--ambient", c.ambient, "Ambient dimension n");
      else if (f == "limit-k") sub.add_option("--limit-k", c.limit_k, "Limit dimension k");
      else if (f == "kind") sub.add_option("--kind", c.kind, "Fixture kind");
      else if (f == "size") sub.add_option("--size", c.size, "Point count or points per side");
      else if (f == "length") sub.add_option("--length", c.length, "Length");
      else if (f == "angle") sub.add_option("--angle", c.angle, "Cone angle");
      else if (f == "sides") sub.add_option("--sides", c.sides, "Side lengths or steps")->delimiter(',');
      else if (f == "per-octave") sub.add_option("--per-octave", c.per_octave, "Shells per octave");
      else if (f == "octaves") sub.add_option("--octaves", c.octaves, "Octaves of shells");
      else if (f == "shift") sub.add_option("--shift", c.shift, "Rotation step in points");
    }

    inline void emit(std::string const& text, std::optional<std::string> const& out_path, std::ostream& out) {
      if (!out_path) {
        out << text;
        return;
      }
      std::ofstream f(*out_path, std::ios::binary);
      require(static_cast<bool>(f), ErrorCode::malformed_input, "cannot write " + *out_path);
      f << text;
      require(static_cast<bool>(f), ErrorCode::malformed_input, "failed writing " + *out_path);
    }

  }  // namespace detail

  inline int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collapsing and nilpotency experiments on finite groups and metric spaces", "collapselab"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::map<CLI::App*, Subcommand const*> by_app;
    for (auto const& sc : subcommands()) {
      auto* sub = app.add_subcommand(sc.name, sc.help);
      for (auto const& f : sc.flags) {
        detail::add_flag(*sub, f, cfg);
      }
      sub->add_option("--out", cfg.out, "Output file (default: standard output)");
      by_app[sub] = &sc;
    }
    try {
      app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
      return app.exit(e, out, err);
    } catch (CLI::ParseError const& e) {
      app.exit(e, out, err);
      return exit_input;
    }
    Subcommand const& sc = *by_app.at(app.get_subcommands().front());
    try {
      io::Report rep(sc.name);
      if (sc.run == nullptr) {
        detail::emit(fixture(cfg, rep).dump() + "\n", cfg.out, out);
        return exit_ok;
      }
      bool pass = sc.run(cfg, rep);
      rep.status(pass);
      detail::emit(rep.dump(), cfg.out, out);
      return pass ? exit_ok : exit_property;
    } catch (Error const& e) {
      err << "collapselab " << sc.name << ": " << e.what() << "\n";
      return exit_code(e.code());
    } catch (Json::exception const& e) {
      err << "collapselab " << sc.name << ": MALFORMED_INPUT: " << e.what() << "\n";
      return exit_input;
    }
  }

}  // namespace collapselab::cli

#endif  // COLLAPSELAB_CLI_HPP_
