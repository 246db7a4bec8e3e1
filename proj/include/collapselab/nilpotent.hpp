#ifndef COLLAPSELAB_NILPOTENT_HPP_
#define COLLAPSELAB_NILPOTENT_HPP_

// Basic commutators, the lower central series, its refinement into a series
// with infinite cyclic factors, standard forms and nilpotency rank.
//
// Series levels are indexed from 0: N_0 = N, N_s = <B_s> with
// B_s = union of the basic commutator sets C_k(B), k >= s. Level s of the
// refinement interpolates N_{s-1} > N_s through the free part of
// A_s = N_{s-1} / N_s.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bigint.hpp"
#include "canonical.hpp"
#include "error.hpp"
#include "group.hpp"
#include "malcev.hpp"
#include "smith.hpp"
#include "words.hpp"

namespace collapselab {

  //! Generating context for the subgroup spanned by `elements`: identities
  //! dropped, an element is skipped when it or its inverse already appears.
  inline GroupContext generator_context(std::vector<GroupElement> const& elements) {
    std::vector<GroupElement>                         kept;
    std::unordered_map<GroupElement, bool, ElementHash> seen;
    for (auto const& g : elements) {
      if (g.is_identity() || seen.contains(g)) {
        continue;
      }
      seen.emplace(g, true);
      seen.emplace(g.inverse(), true);
      kept.push_back(g);
    }
    require(!kept.empty(), ErrorCode::invalid_argument, "subgroup generators are all trivial");
    return GroupContext::from_generators(kept);
  }

  /// Length of the basic commutator word of weight k: 3 * 2^k - 2.
  inline std::size_t commutator_word_bound(std::size_t k) {
    return 3 * (std::size_t{1} << k) - 2;
  }

  struct CommutatorEntry {
    ReducedWord  word;  // over the letters of the generating context
    GroupElement element;
    std::size_t  weight = 0;
  };

  struct BasicCommutatorSet {
    std::size_t                  weight = 0;
    std::vector<CommutatorEntry> entries;
  };

  //! C_0 = B; C_k = { [g, s] : g in C_{k-1}, s in B }, identities pruned and
  //! equal elements merged keeping the least word.
  inline BasicCommutatorSet next_commutators(BasicCommutatorSet const& prev, GroupContext const& B) {
    BasicCommutatorSet out;
    out.weight = prev.weight + 1;
    std::unordered_map<GroupElement, std::size_t, ElementHash> index;
    for (auto const& g : prev.entries) {
      for (Letter a = 0; a < B.size(); ++a) {
        GroupElement c = commutator(g.element, B.image(a));
        if (c.is_identity()) {
          continue;
        }
        ReducedWord w = commutator_word(g.word.word(), Word{a}, B.generators());
        if (auto it = index.find(c); it != index.end()) {
          if (compare_presentations(w, out.entries[it->second].word) < 0) {
            out.entries[it->second].word = std::move(w);
          }
          continue;
        }
        index.emplace(c, out.entries.size());
        out.entries.push_back({std::move(w), std::move(c), out.weight});
      }
    }
    std::sort(out.entries.begin(), out.entries.end(), [](CommutatorEntry const& x, CommutatorEntry const& y) {
      return compare_presentations(x.word, y.word) < 0;
    });
    return out;
  }

  inline BasicCommutatorSet generators_as_commutators(GroupContext const& B) {
    BasicCommutatorSet c0;
    for (Letter a = 0; a < B.size(); ++a) {
      c0.entries.push_back({ReducedWord::from_reduced(Word{a}, B.generators()), B.image(a), 0});
    }
    return c0;
  }

  inline BasicCommutatorSet basic_commutators(GroupContext const& B, std::size_t k) {
    BasicCommutatorSet c = generators_as_commutators(B);
    for (std::size_t i = 0; i < k && !c.entries.empty(); ++i) {
      c = next_commutators(c, B);
    }
    if (c.weight != k) {
      c.weight = k;
    }
    return c;
  }

  ////////////////////////////////////////////////////////////////////////
  // Lower central series
  ////////////////////////////////////////////////////////////////////////

  struct LowerCentralSeries {
    GroupContext                    B;
    std::size_t                     step = 0;
    std::vector<BasicCommutatorSet> weights;  // C_0 .. C_step (the last is empty)
    std::vector<MalcevBasis>        levels;   // N_0 .. N_step, unitriangular backend only

    //! B_s = union of C_k for k >= s, in weight order.
    [[nodiscard]] std::vector<CommutatorEntry> level_generators(std::size_t s) const {
      std::vector<CommutatorEntry> out;
      for (std::size_t k = s; k < weights.size(); ++k) {
        out.insert(out.end(), weights[k].entries.begin(), weights[k].entries.end());
      }
      return out;
    }

    [[nodiscard]] bool has_malcev() const noexcept {
      return !levels.empty();
    }
  };

  inline LowerCentralSeries lower_central_series(GroupContext const& B, std::size_t step_cap = 32) {
    LowerCentralSeries lcs;
    lcs.B = B;
    lcs.weights.push_back(generators_as_commutators(B));
    while (!lcs.weights.back().entries.empty()) {
      if (lcs.weights.size() > step_cap) {
        fail(ErrorCode::step_cap_exceeded,
             "commutators of weight " + std::to_string(step_cap) + " do not vanish");
      }
      lcs.weights.push_back(next_commutators(lcs.weights.back(), B));
    }
    lcs.step = lcs.weights.size() - 1;
    if (B.backend() == Backend::unitriangular) {
      std::size_t const n = B.dimension();
      require(lcs.step <= n - 1,
              ErrorCode::step_cap_exceeded,
              "step exceeds n - 1 for a unitriangular group");
      for (std::size_t s = 0; s <= lcs.step; ++s) {
        std::vector<GroupElement> gens;
        for (auto const& e : lcs.level_generators(s)) {
          gens.push_back(e.element);
        }
        lcs.levels.push_back(MalcevBasis::generate(gens, n));
      }
    }
    return lcs;
  }

  ////////////////////////////////////////////////////////////////////////
  // Abelianization of the series factors
  ////////////////////////////////////////////////////////////////////////

  //! A_s = N_{s-1} / N_s written as Z^t / L over the Mal'cev basis of N_{s-1}.
  struct LevelAbelianization {
    std::size_t     level        = 0;
    std::size_t     ambient_rank = 0;
    std::size_t     free_rank    = 0;
    IntVector       torsion;
    QuotientLattice lattice;
  };

  inline LevelAbelianization abelianization_coordinates(LowerCentralSeries const& lcs, std::size_t s) {
    require(lcs.B.backend() == Backend::unitriangular,
            ErrorCode::backend_unsupported,
            "abelianization coordinates need the unitriangular backend");
    require(s >= 1 && s <= lcs.step, ErrorCode::invalid_argument, "level out of range");
    MalcevBasis const& upper = lcs.levels[s - 1];
    MalcevBasis const& lower = lcs.levels[s];
    std::size_t const  t     = upper.size();
    IntMatrix          relations;
    // Conjugation relations of the collected presentation of N_{s-1}.
    for (std::size_t i = 0; i < t; ++i) {
      UnitriangularMatrix const yi  = upper[i];
      UnitriangularMatrix const yii = yi.inverse();
      for (std::size_t j = 0; j < t; ++j) {
        if (i == j) {
          continue;
        }
        auto c = upper.coordinates(yii * upper[j] * yi);
        require(c.has_value(), ErrorCode::decomposition_failed, "Mal'cev basis is not closed under conjugation");
        (*c)[j] -= 1;
        relations.push_back(std::move(*c));
      }
    }
    // The image of N_s.
    for (std::size_t i = 0; i < lower.size(); ++i) {
      auto c = upper.coordinates(lower[i]);
      require(c.has_value(), ErrorCode::decomposition_failed, "series member is not contained in its predecessor");
      relations.push_back(std::move(*c));
    }
    LevelAbelianization out;
    out.level        = s;
    out.ambient_rank = t;
    out.lattice      = quotient_lattice(relations, t);
    out.free_rank    = out.lattice.free_rank;
    out.torsion      = out.lattice.torsion;
    return out;
  }

  //! pr_s: free coordinates in A_s / Tor(A_s) of an element of N_{s-1}.
  inline std::optional<IntVector> project(LowerCentralSeries const&  lcs,
                                          LevelAbelianization const& ab,
                                          UnitriangularMatrix const& g) {
    auto c = lcs.levels[ab.level - 1].coordinates(g);
    if (!c) {
      return std::nullopt;
    }
    return ab.lattice.free_part(*c);
  }

  ////////////////////////////////////////////////////////////////////////
  // Refinement
  ////////////////////////////////////////////////////////////////////////

  struct GradedGenerator {
    std::size_t                level  = 0;  // s, from 1
    std::size_t                k      = 0;  // from 1
    std::size_t                weight = 0;  // commutator weight of the source entry
    ReducedWord                word;
    GroupElement               element;
    std::size_t                word_length = 0;  // certified upper bound on length_B
    std::optional<std::size_t> canonical_length;
    IntVector                  coordinates;  // free coordinates in A_s
  };

  struct PolycyclicRefinement {
    LowerCentralSeries               lcs;
    std::vector<LevelAbelianization> abelian;  // index s-1 for level s
    std::vector<GradedGenerator>     generators;
    std::vector<std::size_t>         counts;  // n_s
    std::size_t                      rank         = 0;
    std::size_t                      length_bound = 0;  // 3 * 2^step - 2
    bool                             lengths_certified = false;

    [[nodiscard]] std::size_t step() const noexcept {
      return lcs.step;
    }

    [[nodiscard]] std::vector<GradedGenerator const*> level(std::size_t s) const {
      std::vector<GradedGenerator const*> out;
      for (auto const& g : generators) {
        if (g.level == s) {
          out.push_back(&g);
        }
      }
      return out;
    }

    //! Number of factors of the refined normal series (an upper bound on
    //! the nilpotency length, never claimed minimal).
    [[nodiscard]] std::size_t series_length() const {
      std::size_t len = 0;
      for (std::size_t s = 0; s < counts.size(); ++s) {
        len += counts[s] + (abelian[s].torsion.empty() ? 0 : 1);
      }
      return len;
    }
  };

  //! Per level, scans B_{s-1} in presentation order of the words and keeps an
  //! entry when its free coordinates are independent of those kept so far.
  //! `canonical_entry_cap` bounds the ball used to certify exact lengths
  //! (0 disables the search).
  inline PolycyclicRefinement refine_lcs(LowerCentralSeries lcs, std::size_t canonical_entry_cap = 50'000) {
    require(lcs.B.backend() == Backend::unitriangular,
            ErrorCode::backend_unsupported,
            "refinement needs the unitriangular backend");
    PolycyclicRefinement ref;
    ref.length_bound      = commutator_word_bound(lcs.step);
    ref.lengths_certified = true;
    for (std::size_t s = 1; s <= lcs.step; ++s) {
      ref.abelian.push_back(abelianization_coordinates(lcs, s));
      auto const& ab         = ref.abelian.back();
      auto        candidates = lcs.level_generators(s - 1);
      std::stable_sort(candidates.begin(), candidates.end(), [](CommutatorEntry const& x, CommutatorEntry const& y) {
        return compare_presentations(x.word, y.word) < 0;
      });
      RationalSpan span(ab.free_rank);
      std::size_t  chosen = 0;
      for (auto const& c : candidates) {
        if (chosen == ab.free_rank) {
          break;
        }
        auto coords = project(lcs, ab, c.element.matrix());
        require(coords.has_value(), ErrorCode::selection_failed, "candidate outside its series member");
        if (!span.insert(*coords)) {
          continue;
        }
        ++chosen;
        GradedGenerator g;
        g.level       = s;
        g.k           = chosen;
        g.weight      = c.weight;
        g.word        = c.word;
        g.element     = c.element;
        g.word_length = c.word.size();
        g.coordinates = std::move(*coords);
        ref.generators.push_back(std::move(g));
      }
      if (chosen != ab.free_rank) {
        fail(ErrorCode::selection_failed,
             "level " + std::to_string(s) + ": found " + std::to_string(chosen) + " of "
                 + std::to_string(ab.free_rank) + " independent generators");
      }
      ref.counts.push_back(chosen);
      ref.rank += chosen;
    }
    for (auto& g : ref.generators) {
      if (g.word_length > ref.length_bound) {
        fail(ErrorCode::selection_failed,
             "graded generator word of length " + std::to_string(g.word_length) + " exceeds "
                 + std::to_string(ref.length_bound));
      }
      if (canonical_entry_cap > 0) {
        try {
          g.canonical_length = canonical_presentation(g.element, lcs.B, g.word_length, canonical_entry_cap).length();
        } catch (Error const& e) {
          if (e.code() != ErrorCode::ball_too_large) {
            throw;
          }
        }
      }
    }
    ref.lcs = std::move(lcs);
    return ref;
  }

  //! Each sigma_{s,k}^j, 1 <= j <= cap, projects outside the rational span of
  //! sigma_{s,1..k-1} in A_s / Tor(A_s), so it avoids N_{s,k-1}.
  inline bool factor_witnesses_hold(PolycyclicRefinement const& ref, std::size_t cap) {
    for (std::size_t s = 1; s <= ref.step(); ++s) {
      auto const&  ab = ref.abelian[s - 1];
      RationalSpan lower(ab.free_rank);
      for (auto const* sg : ref.level(s)) {
        GroupElement p = sg->element;
        for (std::size_t j = 1; j <= cap; ++j) {
          auto c = project(ref.lcs, ab, p.matrix());
          if (!c || lower.contains(*c)) {
            return false;
          }
          p = p * sg->element;
        }
        lower.insert(sg->coordinates);
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Derived invariants
  ////////////////////////////////////////////////////////////////////////

  //! Hirsch length of <sigma_{s,k}^{a_{s,k}}>, powers listed level-major.
  inline std::size_t rank_of_graded_subgroup(PolycyclicRefinement const& ref, std::vector<BigInt> const& powers) {
    require(powers.size() == ref.generators.size(),
            ErrorCode::invalid_argument,
            "one power per graded generator required");
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < powers.size(); ++i) {
      require(powers[i] >= 1, ErrorCode::invalid_argument, "powers must be positive");
      gens.push_back(power(ref.generators[i].element, powers[i]));
    }
    if (gens.empty()) {
      return 0;
    }
    return MalcevBasis::generate(gens, ref.lcs.B.dimension()).size();
  }

  struct StandardForm {
    std::vector<BigInt> exponents;  // b_{s,k}, 0 <= b < a, level-major
    //! The residual g_a as a product of powers sigma_i^{q * a_i}, in order.
    std::vector<std::pair<std::size_t, BigInt>> residual_factors;
    GroupElement                                prefix;
    GroupElement                                residual;
    BigInt                                      index_bound;
    bool                                        verified = false;
  };

  //! g = (prod sigma^{b}) * g_a with g_a in N_a = <sigma^{a}>. Level by level,
  //! the N_s part is conjugated past the N_a factor already split off, so
  //! g = u_1 ... u_c * (w_c ... w_1) with u_s = prod_k sigma_{s,k}^{b_{s,k}}
  //! and w_s = prod_k sigma_{s,k}^{q_{s,k} a_{s,k}}.
  inline StandardForm standard_form(GroupElement const&         g,
                                    PolycyclicRefinement const& ref,
                                    std::vector<BigInt> const&  powers) {
    require(powers.size() == ref.generators.size(),
            ErrorCode::invalid_argument,
            "one power per graded generator required");
    auto const&  lcs = ref.lcs;
    StandardForm out;
    out.index_bound = 1;
    for (auto const& a : powers) {
      require(a >= 1, ErrorCode::invalid_argument, "powers must be positive");
      out.index_bound *= a;
    }
    require(lcs.levels[0].contains(g.matrix()), ErrorCode::decomposition_failed, "element is not in the group");

    GroupElement prefix = lcs.B.identity();
    GroupElement suffix = lcs.B.identity();
    GroupElement cur    = g;
    std::size_t  offset = 0;
    std::vector<std::vector<std::pair<std::size_t, BigInt>>> w_factors(lcs.step);
    for (std::size_t s = 1; s <= lcs.step; ++s) {
      auto const& ab    = ref.abelian[s - 1];
      auto        sigma = ref.level(s);
      auto        x     = project(lcs, ab, cur.matrix());
      require(x.has_value(), ErrorCode::decomposition_failed, "element left the series member");
      IntMatrix basis;
      for (auto const* sg : sigma) {
        basis.push_back(sg->coordinates);
      }
      auto r = solve_rational(basis, *x);
      require(r.has_value(), ErrorCode::decomposition_failed, "projection outside the graded span");
      GroupElement u = lcs.B.identity();
      GroupElement w = lcs.B.identity();
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        require(denominator((*r)[k]) == 1,
                ErrorCode::decomposition_failed,
                "element is outside the subgroup generated by the graded generators");
        BigInt const  rk = numerator((*r)[k]);
        BigInt const& a  = powers[offset + k];
        BigInt        b  = mod_floor(rk, a);
        BigInt        q  = floor_div(rk, a);
        u                = u * power(sigma[k]->element, b);
        if (q != 0) {
          w = w * power(sigma[k]->element, q * a);
          w_factors[s - 1].emplace_back(offset + k, q * a);
        }
        out.exponents.push_back(std::move(b));
      }
      GroupElement rest = (u * w).inverse() * cur;
      require(lcs.levels[s].contains(rest.matrix()),
              ErrorCode::decomposition_failed,
              "torsion part of level " + std::to_string(s) + " is not covered by the refinement");
      prefix = prefix * u;
      cur    = w * rest * w.inverse();
      suffix = w * suffix;
      offset += sigma.size();
    }
    require(cur.is_identity(), ErrorCode::decomposition_failed, "residual did not reach the identity");
    for (std::size_t s = lcs.step; s-- > 0;) {
      out.residual_factors.insert(out.residual_factors.end(), w_factors[s].begin(), w_factors[s].end());
    }
    out.prefix   = prefix;
    out.residual = suffix;
    out.verified = (prefix * suffix == g);
    require(out.verified, ErrorCode::decomposition_failed, "reassembly does not reproduce the element");
    return out;
  }

  struct RankReport {
    std::size_t               rank         = 0;
    std::size_t               step         = 0;
    std::size_t               length_bound = 0;
    std::vector<std::size_t>  counts;
    std::vector<IntVector>    torsion;
  };

  inline RankReport rank_report(PolycyclicRefinement const& ref) {
    RankReport r;
    r.rank         = ref.rank;
    r.step         = ref.step();
    r.length_bound = ref.series_length();
    r.counts       = ref.counts;
    for (auto const& ab : ref.abelian) {
      r.torsion.push_back(ab.torsion);
    }
    return r;
  }

  //! Nilpotency rank of a group through a finite-index nilpotent subgroup;
  //! the coset table's index certifies finiteness.
  inline std::size_t almost_nilpotent_rank(PolycyclicRefinement const& subgroup_refinement, std::size_t index) {
    require(index >= 1, ErrorCode::invalid_argument, "index certificate must be positive");
    return subgroup_refinement.rank;
  }

  //! Rank of a group given directly: finite permutation groups have rank 0.
  inline std::size_t nilpotency_rank(GroupContext const& ctx) {
    if (ctx.backend() == Backend::permutation) {
      return 0;
    }
    return refine_lcs(lower_central_series(ctx), 0).rank;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_NILPOTENT_HPP_
