#ifndef COLLAPSELAB_WORDS_HPP_
#define COLLAPSELAB_WORDS_HPP_

// Words over an ordered symmetric generating set S = (s_1, ..., s_d).
//
// Letters are stored 0-based internally; the external (file / CLI) form is
// 1-based, with -i accepted as shorthand for the inverse of generator i.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace collapselab {

  using Letter = std::uint32_t;

  //! An ordered symmetric generating set, described by its size and the
  //! involution pairing each generator with its inverse.
  class SymmetricGeneratingSet {
   public:
    SymmetricGeneratingSet() = default;

    explicit SymmetricGeneratingSet(std::vector<Letter> inverse_of)
        : _inverse(std::move(inverse_of)) {
      for (std::size_t i = 0; i < _inverse.size(); ++i) {
        require(_inverse[i] < _inverse.size(),
                ErrorCode::invalid_argument,
                "inverse pairing index out of range");
        require(_inverse[_inverse[i]] == i,
                ErrorCode::invalid_argument,
                "inverse pairing is not an involution");
      }
    }

    //! Generators listed as s_1, s_1^-1, s_2, s_2^-1, ...
    static SymmetricGeneratingSet alternating(std::size_t num_pairs) {
      std::vector<Letter> inv(2 * num_pairs);
      for (std::size_t i = 0; i < num_pairs; ++i) {
        inv[2 * i]     = static_cast<Letter>(2 * i + 1);
        inv[2 * i + 1] = static_cast<Letter>(2 * i);
      }
      return SymmetricGeneratingSet(std::move(inv));
    }

    [[nodiscard]] std::size_t size() const noexcept {
      return _inverse.size();
    }

    [[nodiscard]] Letter inverse(Letter a) const {
      check(a);
      return _inverse[a];
    }

    void check(Letter a) const {
      if (a >= _inverse.size()) {
        fail(ErrorCode::letter_out_of_range,
             "letter " + std::to_string(a + 1) + " not in 1.."
                 + std::to_string(_inverse.size()));
      }
    }

    [[nodiscard]] std::vector<Letter> const& pairing() const noexcept {
      return _inverse;
    }

    bool operator==(SymmetricGeneratingSet const&) const = default;

   private:
    std::vector<Letter> _inverse;
  };

  //! A presentation: any finite sequence of letters.
  struct Word {
    std::vector<Letter> letters;

    Word() = default;
    explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}
    Word(std::initializer_list<Letter> l) : letters(l) {}

    [[nodiscard]] std::size_t size() const noexcept {
      return letters.size();
    }
    [[nodiscard]] bool empty() const noexcept {
      return letters.empty();
    }
    bool operator==(Word const&) const = default;
  };

  //! A word containing no adjacent inverse pair. Only reduce() and
  //! ReducedWord::from_reduced() construct these.
  class ReducedWord {
   public:
    ReducedWord() = default;

    [[nodiscard]] std::vector<Letter> const& letters() const noexcept {
      return _word.letters;
    }
    [[nodiscard]] Word const& word() const noexcept {
      return _word;
    }
    [[nodiscard]] std::size_t size() const noexcept {
      return _word.size();
    }
    [[nodiscard]] bool empty() const noexcept {
      return _word.empty();
    }

    //! Throws invalid_argument if w is not reduced over S.
    static ReducedWord from_reduced(Word w, SymmetricGeneratingSet const& S) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        S.check(w.letters[i]);
        if (i > 0 && S.inverse(w.letters[i - 1]) == w.letters[i]) {
          fail(ErrorCode::invalid_argument, "word is not reduced");
        }
      }
      ReducedWord r;
      r._word = std::move(w);
      return r;
    }

    bool operator==(ReducedWord const&) const = default;

   private:
    friend ReducedWord reduce(Word const&, SymmetricGeneratingSet const&);
    Word _word;
  };

  //! A reduced word certified (by ball search) to be the canonical
  //! presentation of the element it evaluates to.
  struct CanonicalWord {
    ReducedWord word;
    bool        certified = false;

    [[nodiscard]] std::size_t length() const noexcept {
      return word.size();
    }
  };

  //! Cancels adjacent inverse pairs until none remain (single stack pass).
  inline ReducedWord reduce(Word const& w, SymmetricGeneratingSet const& S) {
    ReducedWord result;
    auto&       out = result._word.letters;
    out.reserve(w.size());
    for (Letter a : w.letters) {
      S.check(a);
      if (!out.empty() && S.inverse(out.back()) == a) {
        out.pop_back();
      } else {
        out.push_back(a);
      }
    }
    return result;
  }

  //! The presentation ordering: shorter first, then first-difference
  //! lexicographic on generator indices.
  inline std::strong_ordering compare_presentations(std::span<Letter const> lhs,
                                                    std::span<Letter const> rhs) {
    if (lhs.size() != rhs.size()) {
      return lhs.size() <=> rhs.size();
    }
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (lhs[i] != rhs[i]) {
        return lhs[i] <=> rhs[i];
      }
    }
    return std::strong_ordering::equal;
  }

  inline std::strong_ordering compare_presentations(ReducedWord const& lhs,
                                                    ReducedWord const& rhs) {
    return compare_presentations(std::span<Letter const>(lhs.letters()),
                                 std::span<Letter const>(rhs.letters()));
  }

  inline bool presentation_less(Word const& lhs, Word const& rhs) {
    return compare_presentations(std::span<Letter const>(lhs.letters),
                                 std::span<Letter const>(rhs.letters))
           < 0;
  }

  inline Word inverse_word(Word const& w, SymmetricGeneratingSet const& S) {
    Word out;
    out.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
      out.letters.push_back(S.inverse(*it));
    }
    return out;
  }

  inline Word concat(Word const& a, Word const& b) {
    Word out = a;
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
  }

  //! Contiguous sub-word [first, last).
  inline Word infix(Word const& w, std::size_t first, std::size_t last) {
    return Word(std::vector<Letter>(w.letters.begin() + first,
                                    w.letters.begin() + last));
  }

  //! Word for the commutator [u, v] = u^-1 v^-1 u v, reduced.
  inline ReducedWord commutator_word(Word const&                   u,
                                     Word const&                   v,
                                     SymmetricGeneratingSet const& S) {
    Word w = concat(concat(inverse_word(u, S), inverse_word(v, S)), concat(u, v));
    return reduce(w, S);
  }

  //! External integer form: 1-based indices, negative means inverse.
  inline Word parse_word(std::span<std::int64_t const> values,
                         SymmetricGeneratingSet const& S) {
    Word w;
    w.letters.reserve(values.size());
    for (std::int64_t v : values) {
      std::int64_t const mag = v < 0 ? -v : v;
      if (v == 0 || static_cast<std::uint64_t>(mag) > S.size()) {
        fail(ErrorCode::letter_out_of_range,
             "letter " + std::to_string(v) + " not in +-1.."
                 + std::to_string(S.size()));
      }
      Letter a = static_cast<Letter>(mag - 1);
      w.letters.push_back(v < 0 ? S.inverse(a) : a);
    }
    return w;
  }

  inline std::vector<std::int64_t> serialize_word(Word const& w) {
    std::vector<std::int64_t> out;
    out.reserve(w.size());
    for (Letter a : w.letters) {
      out.push_back(static_cast<std::int64_t>(a) + 1);
    }
    return out;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_WORDS_HPP_
