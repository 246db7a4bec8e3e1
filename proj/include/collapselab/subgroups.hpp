#ifndef COLLAPSELAB_SUBGROUPS_HPP_
#define COLLAPSELAB_SUBGROUPS_HPP_

// Finite-index subgroups N = phi^-1(H) described through a homomorphism phi
// onto a finite permutation group: coset tables, the canonical transversal,
// Schreier generating sets and the infix-closure property of transversals.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "canonical.hpp"
#include "error.hpp"
#include "group.hpp"
#include "words.hpp"

namespace collapselab {

  struct PermutationHash {
    std::size_t operator()(Permutation const& p) const {
      return p.hash();
    }
  };

  struct KeyHash {
    std::size_t operator()(std::vector<std::uint32_t> const& v) const {
      std::size_t h = v.size();
      for (auto x : v) {
        hash_combine(h, x);
      }
      return h;
    }
  };

  //! All products of `gens`, as a sorted list. Throws cap_exceeded beyond `cap`.
  inline std::vector<Permutation> permutation_closure(std::vector<Permutation> const& gens,
                                                      std::size_t                     degree,
                                                      std::size_t                     cap = 1U << 20) {
    std::unordered_set<Permutation, PermutationHash> seen;
    std::vector<Permutation>                         queue{Permutation::identity(degree)};
    seen.insert(queue.front());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (auto const& g : gens) {
        Permutation p = queue[i] * g;
        if (seen.insert(p).second) {
          require(seen.size() <= cap, ErrorCode::cap_exceeded, "finite image group is too large");
          queue.push_back(std::move(p));
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
  }

  ////////////////////////////////////////////////////////////////////////
  // FiniteQuotientOracle
  ////////////////////////////////////////////////////////////////////////

  //! phi: Gamma -> Sym(Q) given on generators, together with a subgroup H of
  //! the image. Membership in N = phi^-1(H) is decided on words.
  class FiniteQuotientOracle {
   public:
    FiniteQuotientOracle() = default;

    //! `subgroup` must already be closed under products.
    static FiniteQuotientOracle from_subgroup_elements(std::vector<Permutation> images,
                                                       std::vector<Permutation> subgroup) {
      require(!images.empty(), ErrorCode::malformed_input, "oracle has no generator images");
      std::size_t const degree = images[0].degree();
      subgroup.push_back(Permutation::identity(degree));
      std::sort(subgroup.begin(), subgroup.end());
      subgroup.erase(std::unique(subgroup.begin(), subgroup.end()), subgroup.end());
      for (auto const& a : subgroup) {
        require(a.degree() == degree, ErrorCode::malformed_input, "subgroup element has wrong degree");
        for (auto const& b : subgroup) {
          require(std::binary_search(subgroup.begin(), subgroup.end(), a * b),
                  ErrorCode::inconsistent_oracle,
                  "subgroup element list is not closed under products");
        }
      }
      return FiniteQuotientOracle(std::move(images), std::move(subgroup));
    }

    static FiniteQuotientOracle from_subgroup_generators(std::vector<Permutation>        images,
                                                         std::vector<Permutation> const& generators) {
      require(!images.empty(), ErrorCode::malformed_input, "oracle has no generator images");
      std::size_t const degree = images[0].degree();
      auto              H      = permutation_closure(generators, degree);
      return FiniteQuotientOracle(std::move(images), std::move(H));
    }

    [[nodiscard]] std::size_t degree() const noexcept {
      return _images.empty() ? 0 : _images[0].degree();
    }
    [[nodiscard]] std::size_t num_generators() const noexcept {
      return _images.size();
    }
    [[nodiscard]] Permutation const& image(Letter a) const {
      return _images.at(a);
    }
    [[nodiscard]] std::vector<Permutation> const& images() const noexcept {
      return _images;
    }
    //! H, sorted.
    [[nodiscard]] std::vector<Permutation> const& subgroup() const noexcept {
      return _subgroup;
    }
    //! The image group phi(Gamma), sorted.
    [[nodiscard]] std::vector<Permutation> const& image_group() const noexcept {
      return _image_group;
    }
    //! [phi(Gamma) : H] = [Gamma : N].
    [[nodiscard]] std::size_t index() const noexcept {
      return _image_group.size() / _subgroup.size();
    }

    [[nodiscard]] Permutation phi(Word const& w) const {
      Permutation p = Permutation::identity(degree());
      for (Letter a : w.letters) {
        p = p * _images.at(a);
      }
      return p;
    }

    [[nodiscard]] bool in_subgroup(Permutation const& p) const {
      return std::binary_search(_subgroup.begin(), _subgroup.end(), p);
    }

    [[nodiscard]] bool contains(Word const& w) const {
      return in_subgroup(phi(w));
    }

    //! Invariant of the left coset pH: the least permutation in it.
    [[nodiscard]] std::vector<std::uint32_t> coset_key(Permutation const& p) const {
      std::vector<std::uint32_t> best;
      for (auto const& h : _subgroup) {
        Permutation ph = p * h;
        if (best.empty() || ph.images() < best) {
          best = ph.images();
        }
      }
      return best;
    }

    //! Throws inconsistent_oracle unless the images fit the context.
    void validate(GroupContext const& ctx) const {
      auto const& S = ctx.generators();
      require(_images.size() == S.size(),
              ErrorCode::inconsistent_oracle,
              "oracle has " + std::to_string(_images.size()) + " images for " + std::to_string(S.size())
                  + " generators");
      for (Letter a = 0; a < S.size(); ++a) {
        require(_images[S.inverse(a)] == _images[a].inverse(),
                ErrorCode::inconsistent_oracle,
                "image of generator " + std::to_string(a + 1) + " does not respect the inverse pairing");
      }
    }

    //! Checks phi(g) phi(s) = phi(gs) whenever two ball words name the same
    //! element, i.e. the relations of length up to 2r+1 visible in the ball.
    void check_homomorphism(CayleyBall const& ball) const {
      auto const&              entries = ball.entries();
      std::vector<Permutation> phis(entries.size());
      phis[0] = Permutation::identity(degree());
      for (std::size_t i = 1; i < entries.size(); ++i) {
        phis[i] = phis[entries[i].parent] * _images.at(entries[i].letter);
      }
      auto const& ctx = ball.context();
      for (std::size_t i = 0; i < entries.size(); ++i) {
        for (Letter a = 0; a < ctx.size(); ++a) {
          auto j = ball.find(entries[i].element * ctx.image(a));
          if (j && phis[*j] != phis[i] * _images[a]) {
            fail(ErrorCode::inconsistent_oracle, "generator images do not define a homomorphism");
          }
        }
      }
    }

    //! H is normalized by every generator image, hence by phi(Gamma).
    [[nodiscard]] bool is_normal() const {
      for (auto const& x : _images) {
        if (!normalizes(x)) {
          return false;
        }
      }
      return true;
    }

    [[nodiscard]] bool normalizes(Permutation const& x) const {
      Permutation xi = x.inverse();
      for (auto const& h : _subgroup) {
        if (!in_subgroup(xi * h * x)) {
          return false;
        }
      }
      return true;
    }

   private:
    FiniteQuotientOracle(std::vector<Permutation> images, std::vector<Permutation> subgroup)
        : _images(std::move(images)), _subgroup(std::move(subgroup)) {
      for (auto const& p : _images) {
        require(p.degree() == degree(), ErrorCode::malformed_input, "generator images have different degrees");
      }
      _image_group = permutation_closure(_images, degree());
      for (auto const& h : _subgroup) {
        require(std::binary_search(_image_group.begin(), _image_group.end(), h),
                ErrorCode::inconsistent_oracle,
                "subgroup is not contained in the image group");
      }
    }

    std::vector<Permutation> _images;
    std::vector<Permutation> _subgroup;
    std::vector<Permutation> _image_group;
  };

  ////////////////////////////////////////////////////////////////////////
  // CosetTable
  ////////////////////////////////////////////////////////////////////////

  //! Left cosets gN with the action s . gN = (sg)N. Label 0 is N itself.
  struct CosetTable {
    std::size_t                                                     index = 0;
    std::vector<ReducedWord>                                        words;
    std::vector<Permutation>                                        images;
    std::vector<std::vector<std::uint32_t>>                         action;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> labels;

    [[nodiscard]] std::uint32_t label(Permutation const& phi_g, FiniteQuotientOracle const& oracle) const {
      auto it = labels.find(oracle.coset_key(phi_g));
      require(it != labels.end(), ErrorCode::inconsistent_oracle, "element maps outside the image group");
      return it->second;
    }
  };

  inline CosetTable coset_table(GroupContext const&         ctx,
                                FiniteQuotientOracle const& oracle,
                                std::size_t                 homomorphism_check_radius = 4) {
    oracle.validate(ctx);
    if (homomorphism_check_radius > 0) {
      oracle.check_homomorphism(CayleyBall(ctx, homomorphism_check_radius));
    }
    auto const& S = ctx.generators();
    CosetTable  table;
    table.index = oracle.index();
    table.words.emplace_back();
    table.images.push_back(Permutation::identity(oracle.degree()));
    table.labels.emplace(oracle.coset_key(table.images[0]), 0);

    std::vector<std::uint32_t> layer{0};
    while (!layer.empty()) {
      struct Candidate {
        Word        word;
        Permutation image;
      };
      std::vector<Candidate> candidates;
      for (auto j : layer) {
        auto const& w = table.words[j].letters();
        for (Letter a = 0; a < S.size(); ++a) {
          if (!w.empty() && S.inverse(w.front()) == a) {
            continue;
          }
          Word sw;
          sw.letters.reserve(w.size() + 1);
          sw.letters.push_back(a);
          sw.letters.insert(sw.letters.end(), w.begin(), w.end());
          candidates.push_back({std::move(sw), oracle.image(a) * table.images[j]});
        }
      }
      std::sort(candidates.begin(), candidates.end(), [](Candidate const& x, Candidate const& y) {
        return presentation_less(x.word, y.word);
      });
      std::vector<std::uint32_t> next;
      for (auto& c : candidates) {
        auto key = oracle.coset_key(c.image);
        if (table.labels.contains(key)) {
          continue;
        }
        auto const label = static_cast<std::uint32_t>(table.words.size());
        table.labels.emplace(std::move(key), label);
        table.words.push_back(ReducedWord::from_reduced(std::move(c.word), S));
        table.images.push_back(std::move(c.image));
        next.push_back(label);
      }
      layer = std::move(next);
    }
    require(table.words.size() == table.index,
            ErrorCode::inconsistent_oracle,
            "breadth-first search reached " + std::to_string(table.words.size()) + " cosets, expected "
                + std::to_string(table.index));

    table.action.assign(S.size(), std::vector<std::uint32_t>(table.index));
    for (Letter a = 0; a < S.size(); ++a) {
      for (std::uint32_t j = 0; j < table.index; ++j) {
        table.action[a][j] = table.label(oracle.image(a) * table.images[j], oracle);
      }
    }
    return table;
  }

  ////////////////////////////////////////////////////////////////////////
  // Transversal
  ////////////////////////////////////////////////////////////////////////

  //! Coset representatives indexed by coset label; when `canonical` is set
  //! each is the least element of its coset in the alphabetical ordering.
  struct Transversal {
    std::size_t                index = 0;
    std::vector<CanonicalWord> representatives;
    std::vector<GroupElement>  elements;
    std::vector<Permutation>   images;
    bool                       canonical     = false;
    std::size_t                search_radius = 0;

    [[nodiscard]] std::size_t max_length() const {
      std::size_t m = 0;
      for (auto const& r : representatives) {
        m = std::max(m, r.length());
      }
      return m;
    }
  };

  //! Sweeps `ball` (extending it up to search_radius as needed) in canonical
  //! order; the first element met in each coset is its representative.
  inline Transversal canonical_transversal(CosetTable const&           table,
                                           FiniteQuotientOracle const& oracle,
                                           CayleyBall&                 ball,
                                           std::size_t                 search_radius) {
    require(search_radius >= table.index,
            ErrorCode::invalid_argument,
            "search radius " + std::to_string(search_radius) + " is below the index "
                + std::to_string(table.index));
    Transversal t;
    t.index         = table.index;
    t.search_radius = search_radius;
    t.representatives.resize(table.index);
    t.elements.resize(table.index);
    t.images.resize(table.index);
    std::vector<bool>        found(table.index, false);
    std::size_t              remaining = table.index;
    std::vector<Permutation> phis;
    std::size_t              i = 0;
    while (remaining > 0) {
      if (i == ball.size()) {
        if (ball.radius() >= search_radius) {
          fail(ErrorCode::search_exhausted,
               std::to_string(remaining) + " cosets have no representative within radius "
                   + std::to_string(search_radius));
        }
        ball.extend_to(ball.radius() + 1);
        continue;
      }
      auto const& e = ball.entries()[i];
      phis.push_back(i == 0 ? Permutation::identity(oracle.degree()) : phis[e.parent] * oracle.image(e.letter));
      auto label = table.label(phis[i], oracle);
      if (!found[label]) {
        found[label]              = true;
        t.representatives[label] = {e.word, true};
        t.elements[label]         = e.element;
        t.images[label]           = phis[i];
        --remaining;
      }
      ++i;
    }
    require(t.max_length() <= t.index,
            ErrorCode::search_exhausted,
            "a representative is longer than the index " + std::to_string(t.index));
    t.canonical = true;
    return t;
  }

  inline Transversal canonical_transversal(CosetTable const&           table,
                                           GroupContext const&         ctx,
                                           FiniteQuotientOracle const& oracle,
                                           std::size_t                 search_radius,
                                           std::size_t                 entry_cap = default_ball_entry_cap) {
    CayleyBall ball(ctx, 0, entry_cap);
    return canonical_transversal(table, oracle, ball, search_radius);
  }

  ////////////////////////////////////////////////////////////////////////
  // Schreier generators
  ////////////////////////////////////////////////////////////////////////

  struct SchreierEntry {
    ReducedWord  word;
    GroupElement element;
    std::size_t  coset     = 0;  // label of the representative t
    Letter       generator = 0;  // s
    std::size_t  length    = 0;  // length_S, or the reduced word length when not certified
    bool         length_exact = false;
  };

  //! Generators F(st)^-1 s t of N, one per (representative t, generator s)
  //! after dropping identities and merging equal elements.
  struct SchreierSet {
    std::vector<SchreierEntry> entries;
    //! lookup[t][s]: entry index for the pair, or npos when it is trivial.
    std::vector<std::vector<std::size_t>> lookup;
    std::size_t                           index          = 0;
    std::size_t                           num_generators = 0;
    std::size_t                           max_length     = 0;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    [[nodiscard]] std::size_t count_bound() const noexcept {
      return index * index * num_generators;
    }
    [[nodiscard]] std::size_t length_bound() const noexcept {
      return 2 * index + 1;
    }
    [[nodiscard]] bool bounds_hold() const noexcept {
      return entries.size() <= count_bound() && max_length <= length_bound();
    }
    [[nodiscard]] std::vector<GroupElement> elements() const {
      std::vector<GroupElement> out;
      out.reserve(entries.size());
      for (auto const& e : entries) {
        out.push_back(e.element);
      }
      return out;
    }
  };

  //! `length_ball`, when given, certifies exact canonical lengths of entries
  //! that fall inside it.
  inline SchreierSet schreier_generators(Transversal const&          trans,
                                         CosetTable const&           table,
                                         GroupContext const&         ctx,
                                         FiniteQuotientOracle const& oracle,
                                         CayleyBall const*           length_ball = nullptr) {
    require(trans.canonical, ErrorCode::invalid_argument, "Schreier generators need the canonical transversal");
    auto const& S = ctx.generators();
    SchreierSet set;
    set.index          = trans.index;
    set.num_generators = S.size();
    set.lookup.assign(trans.index, std::vector<std::size_t>(S.size(), SchreierSet::npos));
    std::unordered_map<GroupElement, std::size_t, ElementHash> seen;
    for (std::size_t j = 0; j < trans.index; ++j) {
      for (Letter a = 0; a < S.size(); ++a) {
        std::size_t const k = table.action[a][j];
        Word w = concat(concat(inverse_word(trans.representatives[k].word.word(), S), Word{a}),
                        trans.representatives[j].word.word());
        ReducedWord r = reduce(w, S);
        if (!oracle.contains(r.word())) {
          fail(ErrorCode::membership_violation,
               "Schreier entry for coset " + std::to_string(j) + " and generator " + std::to_string(a + 1)
                   + " is not in the subgroup");
        }
        GroupElement g = trans.elements[k].inverse() * ctx.image(a) * trans.elements[j];
        if (g.is_identity()) {
          continue;
        }
        if (auto it = seen.find(g); it != seen.end()) {
          auto& existing = set.entries[it->second];
          if (compare_presentations(r, existing.word) < 0) {
            existing.word = std::move(r);
          }
          set.lookup[j][a] = it->second;
          continue;
        }
        SchreierEntry entry;
        entry.word      = std::move(r);
        entry.element   = g;
        entry.coset     = j;
        entry.generator = a;
        seen.emplace(std::move(g), set.entries.size());
        set.lookup[j][a] = set.entries.size();
        set.entries.push_back(std::move(entry));
      }
    }
    for (auto& e : set.entries) {
      e.length = e.word.size();
      if (length_ball != nullptr) {
        if (auto len = word_length(*length_ball, e.element)) {
          e.length       = *len;
          e.length_exact = true;
        }
      }
      set.max_length = std::max(set.max_length, e.length);
    }
    return set;
  }

  struct GenerationReport {
    std::size_t radius          = 0;
    std::size_t ball_elements   = 0;
    std::size_t subgroup_in_ball = 0;
    std::size_t rewritten       = 0;
    bool        ok              = false;
  };

  //! Confirms <S-bar> meets the ball of `radius` exactly in N: every ball
  //! element in N is rebuilt as a product of Schreier entries (Reidemeister
  //! rewriting, checked by exact multiplication), and every entry lies in N.
  inline GenerationReport verify_generation(SchreierSet const&          set,
                                            CosetTable const&           table,
                                            GroupContext const&         ctx,
                                            FiniteQuotientOracle const& oracle,
                                            CayleyBall const&           ball,
                                            std::size_t                 radius) {
    require(ball.radius() >= radius, ErrorCode::invalid_argument, "ball is smaller than the verification radius");
    GenerationReport rep;
    rep.radius = radius;
    rep.ok     = true;
    for (auto const& e : set.entries) {
      rep.ok = rep.ok && oracle.contains(e.word.word());
    }
    std::size_t const limit = ball.count_within(radius);
    rep.ball_elements       = limit;
    for (std::size_t i = 0; i < limit; ++i) {
      auto const& entry   = ball.entries()[i];
      auto const& letters = entry.word.letters();
      bool const  member  = oracle.contains(entry.word.word());
      // Walk right to left: t_{k} = F(a_k ... a_m N); a_k t_{k+1} = t_k e(t_{k+1}, a_k).
      std::uint32_t t       = 0;
      GroupElement  product = ctx.identity();
      for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        std::size_t idx = set.lookup[t][*it];
        if (idx != SchreierSet::npos) {
          product = set.entries[idx].element * product;
        }
        t = table.action[*it][t];
      }
      if (member) {
        ++rep.subgroup_in_ball;
        if (t == 0 && product == entry.element) {
          ++rep.rewritten;
        } else {
          rep.ok = false;
        }
      } else if (t == 0) {
        rep.ok = false;
      }
    }
    rep.ok = rep.ok && rep.rewritten == rep.subgroup_in_ball;
    return rep;
  }

  ////////////////////////////////////////////////////////////////////////
  // Infix closure
  ////////////////////////////////////////////////////////////////////////

  struct InfixCounterexample {
    std::size_t coset = 0;
    std::size_t first = 0;
    std::size_t last  = 0;
  };

  struct PrefixClosureReport {
    bool                             pass    = true;
    std::size_t                      checked = 0;
    std::vector<InfixCounterexample> counterexamples;
  };

  //! Every contiguous infix of every representative's canonical word must
  //! itself be a representative. Requires N normal (NOT_NORMAL otherwise).
  inline PrefixClosureReport prefix_closure_check(Transversal const&          trans,
                                                  CosetTable const&           table,
                                                  GroupContext const&         ctx,
                                                  FiniteQuotientOracle const& oracle,
                                                  std::size_t                 max_counterexamples = 16) {
    bool normal = oracle.is_normal();
    for (auto const& img : trans.images) {
      normal = normal && oracle.normalizes(img);
    }
    if (!normal) {
      fail(ErrorCode::not_normal, "the subgroup is not normal");
    }
    PrefixClosureReport report;
    for (std::size_t j = 0; j < trans.index; ++j) {
      Word const& w = trans.representatives[j].word.word();
      for (std::size_t first = 0; first < w.size(); ++first) {
        for (std::size_t last = first + 1; last <= w.size(); ++last) {
          Word u     = infix(w, first, last);
          auto label = table.label(oracle.phi(u), oracle);
          ++report.checked;
          if (evaluate(u, ctx) != trans.elements[label]) {
            report.pass = false;
            if (report.counterexamples.size() < max_counterexamples) {
              report.counterexamples.push_back({j, first, last});
            }
          }
        }
      }
    }
    return report;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_SUBGROUPS_HPP_
