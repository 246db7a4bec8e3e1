#ifndef COLLAPSELAB_ACTION_HPP_
#define COLLAPSELAB_ACTION_HPP_

// Groups acting by (almost) isometric permutations of a finite metric
// space: displacement, short subgroups, the power lemma and the
// displacement property of graded generators.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "group.hpp"
#include "metric.hpp"
#include "nilpotent.hpp"
#include "parallel.hpp"

namespace collapselab {

  class IsometricAction {
   public:
    IsometricAction() = default;

    //! `maps[a]` is the permutation of generator letter a. The observed
    //! distortion must not exceed `declared_distortion` (1e-9 slack).
    IsometricAction(GroupContext group, MetricSpace space, std::vector<Permutation> maps, double declared_distortion = 0)
        : _group(std::move(group)), _space(std::move(space)), _maps(std::move(maps)), _declared(declared_distortion) {
      require(_maps.size() == _group.size(), ErrorCode::malformed_input, "one permutation per generator letter");
      auto const& S = _group.generators();
      for (Letter a = 0; a < S.size(); ++a) {
        require(_maps[a].degree() == _space.size(), ErrorCode::malformed_input, "permutation degree differs from the space");
        require(_maps[S.inverse(a)] == _maps[a].inverse(),
                ErrorCode::malformed_input,
                "generator " + std::to_string(a + 1) + " and its inverse do not act inversely");
      }
      for (auto const& m : _maps) {
        for (std::size_t x = 0; x < _space.size(); ++x) {
          for (std::size_t y = 0; y < _space.size(); ++y) {
            _distortion = std::max(_distortion, std::abs(_space(m(x), m(y)) - _space(x, y)));
          }
        }
      }
      require(_distortion <= _declared + 1e-9,
              ErrorCode::malformed_input,
              "action distortion " + std::to_string(_distortion) + " exceeds the declared value");
    }

    [[nodiscard]] GroupContext const& group() const noexcept {
      return _group;
    }
    [[nodiscard]] MetricSpace const& space() const noexcept {
      return _space;
    }
    [[nodiscard]] std::vector<Permutation> const& maps() const noexcept {
      return _maps;
    }
    //! eps_act: max over generators and point pairs of |d(gx, gy) - d(x, y)|.
    [[nodiscard]] double distortion() const noexcept {
      return _distortion;
    }
    [[nodiscard]] double declared_distortion() const noexcept {
      return _declared;
    }
    //! Slack added to every strict displacement comparison: the observed
    //! distortion (0 for exact isometries).
    [[nodiscard]] double slack() const noexcept {
      return _distortion;
    }

    //! Permutation of a word: g = a_1 ... a_k acts as a_1(a_2(... a_k(x))).
    [[nodiscard]] Permutation act(Word const& w) const {
      Permutation p = Permutation::identity(_space.size());
      for (Letter a : w.letters) {
        require(a < _maps.size(), ErrorCode::letter_out_of_range, "letter outside the action's alphabet");
        p = p * _maps[a];
      }
      return p;
    }

    [[nodiscard]] double displacement(Permutation const& g, std::size_t x) const {
      return _space(g(static_cast<std::uint32_t>(x)), x);
    }

   private:
    GroupContext             _group;
    MetricSpace              _space;
    std::vector<Permutation> _maps;
    double                   _declared   = 0;
    double                   _distortion = 0;
  };

  //! The Cayley ball of the acting group with each element's permutation.
  //! Constructing it also checks that equal elements act equally on the
  //! ball (relations up to twice the radius).
  class ActionBall {
   public:
    ActionBall(IsometricAction const& action, std::size_t radius, std::size_t entry_cap = default_ball_entry_cap)
        : _action(&action), _ball(action.group(), radius, entry_cap) {
      auto const& entries = _ball.entries();
      _perms.reserve(entries.size());
      for (auto const& e : entries) {
        if (e.parent == CayleySweep::no_parent) {
          _perms.push_back(Permutation::identity(action.space().size()));
        } else {
          _perms.push_back(_perms[e.parent] * action.maps()[e.letter]);
        }
      }
      for (std::size_t i = 0; i < entries.size(); ++i) {
        for (Letter a = 0; a < action.group().size(); ++a) {
          if (auto j = _ball.find(entries[i].element * action.group().image(a))) {
            require(_perms[*j] == _perms[i] * action.maps()[a],
                    ErrorCode::malformed_input,
                    "the permutations do not define an action of the group");
          }
        }
      }
    }

    [[nodiscard]] CayleyBall const& ball() const noexcept {
      return _ball;
    }
    [[nodiscard]] std::vector<Permutation> const& permutations() const noexcept {
      return _perms;
    }
    [[nodiscard]] Permutation const& permutation(std::size_t i) const {
      return _perms.at(i);
    }

    [[nodiscard]] Permutation const& act(GroupElement const& g) const {
      auto i = _ball.find(g);
      if (!i) {
        fail(ErrorCode::not_found_within_cap,
             "element is outside the radius-" + std::to_string(_ball.radius()) + " ball of the action");
      }
      return _perms[*i];
    }

    [[nodiscard]] IsometricAction const& action() const noexcept {
      return *_action;
    }

   private:
    IsometricAction const*   _action;
    CayleyBall               _ball;
    std::vector<Permutation> _perms;
  };

  struct DisplacementProfile {
    std::vector<double> per_point;    // d(g x, x)
    double              max_on_ball = 0;
    std::size_t         ball_size   = 0;
  };

  //! Displacement at every point and its maximum over the open ball B_R(p).
  inline DisplacementProfile displacement_profile(IsometricAction const& action,
                                                  Permutation const&     g,
                                                  std::size_t            p,
                                                  double                 R) {
    auto const&         X = action.space();
    DisplacementProfile out;
    out.per_point.resize(X.size());
    parallel_for(X.size(), [&](std::size_t x) { out.per_point[x] = action.displacement(g, x); });
    for (auto x : X.ball(p, R)) {
      out.max_on_ball = std::max(out.max_on_ball, out.per_point[x]);
      ++out.ball_size;
    }
    return out;
  }

  inline double max_displacement_ball(IsometricAction const& action, Permutation const& g, std::size_t p, double R) {
    double best = 0;
    for (auto x : action.space().ball(p, R)) {
      best = std::max(best, action.displacement(g, x));
    }
    return best;
  }

  ////////////////////////////////////////////////////////////////////////
  // Short subgroups
  ////////////////////////////////////////////////////////////////////////

  struct ShortElement {
    std::size_t  ball_index = 0;
    GroupElement element;
    ReducedWord  word;
    double       displacement = 0;
  };

  struct ShortSubgroup {
    double                    delta     = 0;
    std::size_t               basepoint = 0;
    std::size_t               radius    = 0;
    std::vector<ShortElement> generators;  // non-identity ball elements with d(g p, p) < 2 delta
    std::vector<std::size_t>  snapshot;    // ball indices reachable by products of short elements
    std::size_t               ball_size = 0;

    [[nodiscard]] std::vector<GroupElement> elements() const {
      std::vector<GroupElement> out;
      for (auto const& s : generators) {
        out.push_back(s.element);
      }
      return out;
    }
  };

  inline ShortSubgroup short_subgroup(ActionBall const& ab, std::size_t p, double delta) {
    require(delta > 0, ErrorCode::invalid_argument, "delta must be positive");
    require(p < ab.action().space().size(), ErrorCode::invalid_argument, "basepoint out of range");
    auto const&   action  = ab.action();
    auto const&   entries = ab.ball().entries();
    ShortSubgroup out;
    out.delta     = delta;
    out.basepoint = p;
    out.radius    = ab.ball().radius();
    out.ball_size = entries.size();
    for (std::size_t i = 1; i < entries.size(); ++i) {
      double d = action.displacement(ab.permutation(i), p);
      if (d < 2 * delta + action.slack()) {
        out.generators.push_back({i, entries[i].element, entries[i].word, d});
      }
    }
    // Closure of the identity under right multiplication by short elements,
    // restricted to the ball.
    std::vector<bool>        seen(entries.size(), false);
    std::vector<std::size_t> frontier{0};
    seen[0] = true;
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (auto i : frontier) {
        for (auto const& s : out.generators) {
          for (auto const& g : {s.element, s.element.inverse()}) {
            if (auto j = ab.ball().find(entries[i].element * g); j && !seen[*j]) {
              seen[*j] = true;
              next.push_back(*j);
            }
          }
        }
      }
      frontier = std::move(next);
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (seen[i]) {
        out.snapshot.push_back(i);
      }
    }
    return out;
  }

  inline ShortSubgroup short_subgroup(IsometricAction const& action,
                                      std::size_t            p,
                                      double                 delta,
                                      std::size_t            radius,
                                      std::size_t            entry_cap = default_ball_entry_cap) {
    ActionBall ab(action, radius, entry_cap);
    return short_subgroup(ab, p, delta);
  }

  ////////////////////////////////////////////////////////////////////////
  // Power lemma
  ////////////////////////////////////////////////////////////////////////

  //! Least 1 <= d <= power_cap with max_{x in B_R(p)} d(g^d x, x) < eps.
  inline std::optional<std::size_t> power_small_displacement(IsometricAction const& action,
                                                             Permutation const&     g,
                                                             std::size_t            p,
                                                             double                 eps,
                                                             double                 R,
                                                             std::size_t            power_cap) {
    require(eps > 0, ErrorCode::invalid_argument, "epsilon must be positive");
    auto const  ball = action.space().ball(p, R);
    Permutation gd   = g;
    for (std::size_t d = 1; d <= power_cap; ++d) {
      double worst = 0;
      for (auto x : ball) {
        worst = std::max(worst, action.displacement(gd, x));
      }
      if (worst < eps + action.slack()) {
        return d;
      }
      gd = gd * g;
    }
    return std::nullopt;
  }

  //! K = 10 w 2^l.
  inline BigInt K_constant(std::size_t w, std::size_t l) {
    require(w >= 1, ErrorCode::invalid_argument, "w must be at least 1");
    return BigInt(10) * w * (BigInt(1) << l);
  }

  ////////////////////////////////////////////////////////////////////////
  // Graded generators acting
  ////////////////////////////////////////////////////////////////////////

  //! Permutation of an element of a subgroup context: each generator of `B`
  //! is located in the ball, then the word is composed.
  inline Permutation realize(ActionBall const& ab, GroupContext const& B, ReducedWord const& word) {
    std::vector<Permutation> gens;
    for (Letter a = 0; a < B.size(); ++a) {
      auto i = ab.ball().find(B.image(a));
      if (!i) {
        fail(ErrorCode::not_realizable,
             "generator " + std::to_string(a + 1) + " of the subgroup is outside the action ball");
      }
      gens.push_back(ab.permutation(*i));
    }
    Permutation p = Permutation::identity(ab.action().space().size());
    for (Letter a : word.letters()) {
      p = p * gens[a];
    }
    return p;
  }

  struct DisplacementReport {
    std::size_t              m = 0;
    double                   epsilon = 0;
    std::vector<double>      displacements;  // one per graded generator
    std::vector<std::size_t> failing;        // indices with displacement >= eps
    bool                     pass = false;
  };

  //! (m, eps)-displacement: every graded generator moves p by less than eps.
  inline DisplacementReport displacement_property_check(ActionBall const&           ab,
                                                        PolycyclicRefinement const& ref,
                                                        std::size_t                 p,
                                                        double                      eps) {
    require(eps > 0, ErrorCode::invalid_argument, "epsilon must be positive");
    DisplacementReport r;
    r.m       = ref.rank;
    r.epsilon = eps;
    for (std::size_t i = 0; i < ref.generators.size(); ++i) {
      Permutation g = realize(ab, ref.lcs.B, ref.generators[i].word);
      double      d = ab.action().displacement(g, p);
      r.displacements.push_back(d);
      if (!(d < eps + ab.action().slack())) {
        r.failing.push_back(i);
      }
    }
    r.pass = r.failing.empty();
    return r;
  }

  struct RankBoundReport {
    std::size_t rank             = 0;
    std::size_t short_generators = 0;
    std::size_t ambient_n        = 0;
    std::size_t limit_k          = 0;
    bool        within_bound     = false;  // rank <= n - k
    bool        equality         = false;
    std::size_t step             = 0;
  };

  //! Rank of the subgroup generated by the delta-short elements of the ball.
  inline RankBoundReport rank_bound_report(ActionBall const& ab, std::size_t p, double delta, std::size_t ambient_n, std::size_t limit_k) {
    require(limit_k <= ambient_n, ErrorCode::invalid_argument, "limit dimension exceeds the ambient dimension");
    auto            sg = short_subgroup(ab, p, delta);
    RankBoundReport r;
    r.short_generators = sg.generators.size();
    r.ambient_n        = ambient_n;
    r.limit_k          = limit_k;
    if (!sg.generators.empty() && ab.action().group().backend() == Backend::unitriangular) {
      auto ref = refine_lcs(lower_central_series(generator_context(sg.elements())), 0);
      r.rank   = ref.rank;
      r.step   = ref.step();
    }
    r.within_bound = r.rank <= ambient_n - limit_k;
    r.equality     = r.rank == ambient_n - limit_k;
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Fixture actions
  ////////////////////////////////////////////////////////////////////////

  namespace fixtures {

    //! Z^n acting on the flat-torus grid with `per_side` points per direction
    //! and spacing steps[i]; generator i shifts direction i by one step.
    inline IsometricAction torus_translation_action(std::vector<double> const& steps, std::size_t per_side) {
      std::vector<double> sides;
      for (double s : steps) {
        sides.push_back(s * static_cast<double>(per_side));
      }
      MetricSpace              grid = flat_torus_grid(sides, per_side);
      std::size_t const        n    = steps.size();
      GroupContext             ctx  = groups::free_abelian(n);
      std::vector<Permutation> maps;
      std::size_t              stride = 1;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> fwd(grid.size()), bwd(grid.size());
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
          std::size_t const c    = (idx / stride) % per_side;
          std::size_t const base = idx - c * stride;
          fwd[idx]               = static_cast<std::uint32_t>(base + ((c + 1) % per_side) * stride);
          bwd[idx]               = static_cast<std::uint32_t>(base + ((c + per_side - 1) % per_side) * stride);
        }
        maps.emplace_back(std::move(fwd));
        maps.emplace_back(std::move(bwd));
        stride *= per_side;
      }
      return IsometricAction(std::move(ctx), std::move(grid), std::move(maps), 1e-12);
    }

    //! Z acting on an n-point circle net by rotation through `steps` points.
    inline IsometricAction circle_rotation_action(std::size_t n, double length, std::size_t steps) {
      MetricSpace                X = circle_net(n, length);
      std::vector<std::uint32_t> fwd(n), bwd(n);
      for (std::size_t i = 0; i < n; ++i) {
        fwd[i] = static_cast<std::uint32_t>((i + steps) % n);
        bwd[i] = static_cast<std::uint32_t>((i + n - steps % n) % n);
      }
      return IsometricAction(groups::free_abelian(1), std::move(X), {Permutation(fwd), Permutation(bwd)}, 1e-12);
    }

  }  // namespace fixtures

}  // namespace collapselab

#endif  // COLLAPSELAB_ACTION_HPP_
