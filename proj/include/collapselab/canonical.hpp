#ifndef COLLAPSELAB_CANONICAL_HPP_
#define COLLAPSELAB_CANONICAL_HPP_

// Cayley-ball enumeration in presentation order and canonical presentations.

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "words.hpp"

namespace collapselab {

  inline constexpr std::size_t default_ball_entry_cap = 4'000'000;

  //! Incremental breadth-first sweep of the Cayley graph. Layer L is produced
  //! by extending the canonical words of layer L-1 by one letter, in
  //! (word, letter) order, which is presentation order on the extensions. A
  //! canonical word's prefixes are canonical, so the first extension reaching
  //! a new element is that element's canonical presentation.
  class CayleySweep {
   public:
    static constexpr std::size_t no_parent = static_cast<std::size_t>(-1);

    //! `word` is the parent's word followed by `letter`.
    struct Entry {
      GroupElement element;
      ReducedWord  word;
      std::size_t  parent = no_parent;
      Letter       letter = 0;
    };

    explicit CayleySweep(GroupContext const& ctx, std::size_t entry_cap = default_ball_entry_cap)
        : _ctx(ctx), _cap(entry_cap) {
      _entries.push_back({ctx.identity(), ReducedWord{}, no_parent, 0});
      _index.emplace(ctx.identity(), 0);
      _layer_begin = {0, 1};
    }

    [[nodiscard]] std::size_t radius() const noexcept {
      return _layer_begin.size() - 2;
    }

    [[nodiscard]] bool exhausted() const noexcept {
      return _layer_begin.back() == _layer_begin[_layer_begin.size() - 2];
    }

    //! Adds the next layer; returns the number of new elements.
    std::size_t advance() {
      std::size_t const begin = _layer_begin[_layer_begin.size() - 2];
      std::size_t const end   = _layer_begin.back();
      auto const&       S     = _ctx.generators();
      for (std::size_t i = begin; i < end; ++i) {
        for (Letter a = 0; a < S.size(); ++a) {
          auto const& w = _entries[i].word.letters();
          if (!w.empty() && S.inverse(w.back()) == a) {
            continue;
          }
          GroupElement g = _entries[i].element * _ctx.image(a);
          if (_index.contains(g)) {
            continue;
          }
          if (_entries.size() >= _cap) {
            fail(ErrorCode::ball_too_large,
                 "Cayley ball exceeds " + std::to_string(_cap) + " elements at radius "
                     + std::to_string(radius() + 1));
          }
          std::vector<Letter> letters = w;
          letters.push_back(a);
          _index.emplace(g, _entries.size());
          _entries.push_back({std::move(g), ReducedWord::from_reduced(Word(std::move(letters)), S), i, a});
        }
      }
      _layer_begin.push_back(_entries.size());
      return _entries.size() - end;
    }

    void advance_to(std::size_t r) {
      while (radius() < r) {
        advance();
      }
    }

    [[nodiscard]] std::optional<std::size_t> find(GroupElement const& g) const {
      auto it = _index.find(g);
      if (it == _index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    [[nodiscard]] std::vector<Entry> const& entries() const noexcept {
      return _entries;
    }

    [[nodiscard]] std::size_t size() const noexcept {
      return _entries.size();
    }

    //! Entries of length exactly r occupy [layer_begin(r), layer_begin(r+1)).
    [[nodiscard]] std::size_t layer_begin(std::size_t r) const {
      return _layer_begin.at(r);
    }

    //! Number of entries with length at most r (r <= radius()).
    [[nodiscard]] std::size_t count_within(std::size_t r) const {
      return _layer_begin.at(r + 1);
    }

    [[nodiscard]] GroupContext const& context() const noexcept {
      return _ctx;
    }

   private:
    GroupContext                                                _ctx;
    std::size_t                                                 _cap;
    std::vector<Entry>                                          _entries;
    std::unordered_map<GroupElement, std::size_t, ElementHash> _index;
    std::vector<std::size_t>                                    _layer_begin;
  };

  //! All elements of length at most `radius`, each with its canonical word.
  //! Entries are stored in presentation order of their words.
  class CayleyBall {
   public:
    CayleyBall(GroupContext const& ctx, std::size_t radius, std::size_t entry_cap = default_ball_entry_cap)
        : _sweep(ctx, entry_cap) {
      _sweep.advance_to(radius);
    }

    [[nodiscard]] std::size_t radius() const noexcept {
      return _sweep.radius();
    }
    [[nodiscard]] std::size_t size() const noexcept {
      return _sweep.size();
    }
    [[nodiscard]] std::vector<CayleySweep::Entry> const& entries() const noexcept {
      return _sweep.entries();
    }
    [[nodiscard]] std::optional<std::size_t> find(GroupElement const& g) const {
      return _sweep.find(g);
    }
    [[nodiscard]] bool contains(GroupElement const& g) const {
      return _sweep.find(g).has_value();
    }
    [[nodiscard]] std::size_t count_within(std::size_t r) const {
      return _sweep.count_within(r);
    }
    [[nodiscard]] GroupContext const& context() const noexcept {
      return _sweep.context();
    }

    void extend_to(std::size_t r) {
      _sweep.advance_to(r);
    }

   private:
    CayleySweep _sweep;
  };

  inline CayleyBall ball_enumerate(GroupContext const& ctx,
                                   std::size_t         radius,
                                   std::size_t         entry_cap = default_ball_entry_cap) {
    return CayleyBall(ctx, radius, entry_cap);
  }

  //! The canonical presentation of g, found by sweeping balls of growing
  //! radius up to radius_cap.
  inline CanonicalWord canonical_presentation(GroupElement const& g,
                                              GroupContext const& ctx,
                                              std::size_t         radius_cap,
                                              std::size_t         entry_cap = default_ball_entry_cap) {
    require(g.backend() == ctx.backend(), ErrorCode::backend_mismatch, "element and context backends differ");
    CayleySweep sweep(ctx, entry_cap);
    while (true) {
      if (auto idx = sweep.find(g)) {
        return {sweep.entries()[*idx].word, true};
      }
      if (sweep.radius() >= radius_cap || sweep.exhausted()) {
        fail(ErrorCode::not_found_within_cap,
             "element not reached within radius " + std::to_string(radius_cap));
      }
      sweep.advance();
    }
  }

  //! Convenience overload: canonical presentation of the element a word evaluates to.
  inline CanonicalWord canonical_presentation(Word const&         w,
                                              GroupContext const& ctx,
                                              std::size_t         radius_cap,
                                              std::size_t         entry_cap = default_ball_entry_cap) {
    return canonical_presentation(evaluate(w, ctx), ctx, radius_cap, entry_cap);
  }

  //! length_S(g) when g lies within the ball.
  inline std::optional<std::size_t> word_length(CayleyBall const& ball, GroupElement const& g) {
    if (auto idx = ball.find(g)) {
      return ball.entries()[*idx].word.size();
    }
    return std::nullopt;
  }

  //! The alphabetical ordering on group elements: compare canonical words.
  inline std::strong_ordering compare_elements(CayleyBall const& ball, GroupElement const& g, GroupElement const& h) {
    auto i = ball.find(g);
    auto j = ball.find(h);
    require(i && j, ErrorCode::not_found_within_cap, "element outside the enumerated ball");
    // Entries are stored in presentation order of their canonical words.
    return *i <=> *j;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_CANONICAL_HPP_
