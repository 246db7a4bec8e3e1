#ifndef COLLAPSELAB_GROUP_HPP_
#define COLLAPSELAB_GROUP_HPP_

// Exact group-element backends: upper unitriangular integer matrices (for
// infinite nilpotent groups) and permutations (for finite groups).

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "words.hpp"

namespace collapselab {

  ////////////////////////////////////////////////////////////////////////
  // UnitriangularMatrix
  ////////////////////////////////////////////////////////////////////////

  //! n x n upper unitriangular integer matrix; only the strict upper triangle
  //! is stored.
  class UnitriangularMatrix {
   public:
    UnitriangularMatrix() = default;

    explicit UnitriangularMatrix(std::size_t n)
        : _n(n), _upper(n * (n - (n > 0 ? 1 : 0)) / 2) {}

    //! From a full square matrix; throws unless the shape is unitriangular.
    static UnitriangularMatrix from_rows(std::vector<std::vector<BigInt>> const& rows) {
      std::size_t const   n = rows.size();
      UnitriangularMatrix m(n);
      for (std::size_t i = 0; i < n; ++i) {
        require(rows[i].size() == n, ErrorCode::malformed_input, "matrix is not square");
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) {
            require(rows[i][j] == 1, ErrorCode::malformed_input, "diagonal entry is not 1");
          } else if (i > j) {
            require(rows[i][j] == 0, ErrorCode::malformed_input, "entry below diagonal is not 0");
          } else {
            m.at(i, j) = rows[i][j];
          }
        }
      }
      return m;
    }

    //! I + value * E_{ij}, i < j.
    static UnitriangularMatrix elementary(std::size_t n, std::size_t i, std::size_t j, BigInt value = 1) {
      require(i < j && j < n, ErrorCode::invalid_argument, "elementary matrix needs i < j < n");
      UnitriangularMatrix m(n);
      m.at(i, j) = std::move(value);
      return m;
    }

    [[nodiscard]] std::size_t dimension() const noexcept {
      return _n;
    }

    //! Entry (i, j) for i < j.
    [[nodiscard]] BigInt const& at(std::size_t i, std::size_t j) const {
      return _upper[index(i, j)];
    }
    BigInt& at(std::size_t i, std::size_t j) {
      return _upper[index(i, j)];
    }

    [[nodiscard]] BigInt entry(std::size_t i, std::size_t j) const {
      if (i == j) {
        return 1;
      }
      if (i > j) {
        return 0;
      }
      return at(i, j);
    }

    [[nodiscard]] bool is_identity() const {
      return std::all_of(_upper.begin(), _upper.end(), [](BigInt const& x) { return x == 0; });
    }

    //! Entries of the k-th superdiagonal (k >= 1): (i, i + k).
    [[nodiscard]] std::vector<BigInt> superdiagonal(std::size_t k) const {
      std::vector<BigInt> v;
      if (k == 0 || k >= _n) {
        return v;
      }
      v.reserve(_n - k);
      for (std::size_t i = 0; i + k < _n; ++i) {
        v.push_back(at(i, i + k));
      }
      return v;
    }

    //! Smallest k such that the k-th superdiagonal is non-zero; n if identity.
    [[nodiscard]] std::size_t depth() const {
      for (std::size_t k = 1; k < _n; ++k) {
        for (std::size_t i = 0; i + k < _n; ++i) {
          if (at(i, i + k) != 0) {
            return k;
          }
        }
      }
      return _n;
    }

    friend UnitriangularMatrix operator*(UnitriangularMatrix const& a, UnitriangularMatrix const& b) {
      require(a._n == b._n, ErrorCode::backend_mismatch, "matrix dimensions differ");
      std::size_t const   n = a._n;
      UnitriangularMatrix c(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          BigInt s = a.at(i, j) + b.at(i, j);
          for (std::size_t k = i + 1; k < j; ++k) {
            if (a.at(i, k) != 0 && b.at(k, j) != 0) {
              s += a.at(i, k) * b.at(k, j);
            }
          }
          c.at(i, j) = std::move(s);
        }
      }
      return c;
    }

    [[nodiscard]] UnitriangularMatrix inverse() const {
      // X = A^-1 satisfies X[i][j] = -A[i][j] - sum_{i<k<j} A[i][k] X[k][j].
      UnitriangularMatrix x(_n);
      for (std::size_t gap = 1; gap < _n; ++gap) {
        for (std::size_t i = 0; i + gap < _n; ++i) {
          std::size_t const j = i + gap;
          BigInt            s = -at(i, j);
          for (std::size_t k = i + 1; k < j; ++k) {
            if (at(i, k) != 0 && x.at(k, j) != 0) {
              s -= at(i, k) * x.at(k, j);
            }
          }
          x.at(i, j) = std::move(s);
        }
      }
      return x;
    }

    [[nodiscard]] std::size_t hash() const {
      std::size_t h = _n;
      for (auto const& e : _upper) {
        hash_combine(h, hash_bigint(e));
      }
      return h;
    }

    [[nodiscard]] std::vector<std::vector<BigInt>> rows() const {
      std::vector<std::vector<BigInt>> r(_n, std::vector<BigInt>(_n));
      for (std::size_t i = 0; i < _n; ++i) {
        for (std::size_t j = 0; j < _n; ++j) {
          r[i][j] = entry(i, j);
        }
      }
      return r;
    }

    bool operator==(UnitriangularMatrix const&) const = default;

   private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const {
      assert(i < j && j < _n);
      return i * _n - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t         _n = 0;
    std::vector<BigInt> _upper;
  };

  ////////////////////////////////////////////////////////////////////////
  // Permutation
  ////////////////////////////////////////////////////////////////////////

  //! Permutation of {0, ..., N-1}. Products compose as functions:
  //! (p * q)(x) = p(q(x)), so that a left action satisfies (gh)x = g(hx).
  class Permutation {
   public:
    Permutation() = default;

    explicit Permutation(std::vector<std::uint32_t> images) : _img(std::move(images)) {
      std::vector<bool> seen(_img.size(), false);
      for (auto v : _img) {
        require(v < _img.size() && !seen[v], ErrorCode::malformed_input, "permutation is not a bijection");
        seen[v] = true;
      }
    }

    static Permutation identity(std::size_t degree) {
      std::vector<std::uint32_t> img(degree);
      for (std::size_t i = 0; i < degree; ++i) {
        img[i] = static_cast<std::uint32_t>(i);
      }
      Permutation p;
      p._img = std::move(img);
      return p;
    }

    [[nodiscard]] std::size_t degree() const noexcept {
      return _img.size();
    }

    [[nodiscard]] std::uint32_t operator()(std::uint32_t x) const {
      return _img[x];
    }

    [[nodiscard]] std::vector<std::uint32_t> const& images() const noexcept {
      return _img;
    }

    [[nodiscard]] bool is_identity() const {
      for (std::size_t i = 0; i < _img.size(); ++i) {
        if (_img[i] != i) {
          return false;
        }
      }
      return true;
    }

    friend Permutation operator*(Permutation const& p, Permutation const& q) {
      require(p.degree() == q.degree(), ErrorCode::backend_mismatch, "permutation degrees differ");
      Permutation r;
      r._img.resize(p.degree());
      for (std::size_t x = 0; x < p.degree(); ++x) {
        r._img[x] = p._img[q._img[x]];
      }
      return r;
    }

    [[nodiscard]] Permutation inverse() const {
      Permutation r;
      r._img.resize(_img.size());
      for (std::size_t x = 0; x < _img.size(); ++x) {
        r._img[_img[x]] = static_cast<std::uint32_t>(x);
      }
      return r;
    }

    [[nodiscard]] std::size_t hash() const {
      std::size_t h = _img.size();
      for (auto v : _img) {
        hash_combine(h, v);
      }
      return h;
    }

    bool operator==(Permutation const&) const = default;
    auto operator<=>(Permutation const&) const = default;

   private:
    std::vector<std::uint32_t> _img;
  };

  ////////////////////////////////////////////////////////////////////////
  // GroupElement
  ////////////////////////////////////////////////////////////////////////

  enum class Backend { unitriangular, permutation };

  inline std::string_view to_string(Backend b) noexcept {
    return b == Backend::unitriangular ? "unitriangular" : "permutation";
  }

  class GroupElement {
   public:
    GroupElement() = default;
    GroupElement(UnitriangularMatrix m) : _value(std::move(m)) {}  // NOLINT
    GroupElement(Permutation p) : _value(std::move(p)) {}          // NOLINT

    [[nodiscard]] Backend backend() const noexcept {
      return std::holds_alternative<UnitriangularMatrix>(_value) ? Backend::unitriangular
                                                                 : Backend::permutation;
    }

    [[nodiscard]] UnitriangularMatrix const& matrix() const {
      auto const* m = std::get_if<UnitriangularMatrix>(&_value);
      require(m != nullptr, ErrorCode::backend_mismatch, "element is not a matrix");
      return *m;
    }

    [[nodiscard]] Permutation const& permutation() const {
      auto const* p = std::get_if<Permutation>(&_value);
      require(p != nullptr, ErrorCode::backend_mismatch, "element is not a permutation");
      return *p;
    }

    [[nodiscard]] bool is_identity() const {
      return std::visit([](auto const& v) { return v.is_identity(); }, _value);
    }

    [[nodiscard]] GroupElement inverse() const {
      return std::visit([](auto const& v) { return GroupElement(v.inverse()); }, _value);
    }

    //! The identity of the same backend and size.
    [[nodiscard]] GroupElement identity() const {
      if (auto const* m = std::get_if<UnitriangularMatrix>(&_value)) {
        return UnitriangularMatrix(m->dimension());
      }
      return Permutation::identity(std::get<Permutation>(_value).degree());
    }

    friend GroupElement operator*(GroupElement const& a, GroupElement const& b) {
      require(a._value.index() == b._value.index(), ErrorCode::backend_mismatch, "cannot multiply across backends");
      if (auto const* m = std::get_if<UnitriangularMatrix>(&a._value)) {
        return *m * std::get<UnitriangularMatrix>(b._value);
      }
      return std::get<Permutation>(a._value) * std::get<Permutation>(b._value);
    }

    [[nodiscard]] std::size_t hash() const {
      return std::visit([](auto const& v) { return v.hash(); }, _value);
    }

    bool operator==(GroupElement const&) const = default;

   private:
    std::variant<UnitriangularMatrix, Permutation> _value;
  };

  struct ElementHash {
    std::size_t operator()(GroupElement const& g) const {
      return g.hash();
    }
  };

  //! g^k for any integer k.
  inline GroupElement power(GroupElement const& g, BigInt k) {
    GroupElement base = k < 0 ? g.inverse() : g;
    if (k < 0) {
      k = -k;
    }
    GroupElement result = g.identity();
    while (k > 0) {
      if ((k & 1) != 0) {
        result = result * base;
      }
      k >>= 1;
      if (k > 0) {
        base = base * base;
      }
    }
    return result;
  }

  //! [g, h] = g^-1 h^-1 g h; identity when g and h commute.
  inline GroupElement commutator(GroupElement const& g, GroupElement const& h) {
    require(g.backend() == h.backend(), ErrorCode::backend_mismatch, "commutator across backends");
    return g.inverse() * h.inverse() * g * h;
  }

  ////////////////////////////////////////////////////////////////////////
  // GroupContext
  ////////////////////////////////////////////////////////////////////////

  //! A group Gamma = <S> given by images of an ordered symmetric generating
  //! set in one backend.
  class GroupContext {
   public:
    GroupContext() = default;

    GroupContext(SymmetricGeneratingSet S, std::vector<GroupElement> images)
        : _S(std::move(S)), _images(std::move(images)) {
      require(_S.size() == _images.size(), ErrorCode::invalid_argument, "one image per generator required");
      require(!_images.empty(), ErrorCode::invalid_argument, "generating set is empty");
      for (std::size_t i = 0; i < _images.size(); ++i) {
        require(_images[i].backend() == _images[0].backend(),
                ErrorCode::backend_mismatch,
                "generators use different backends");
        require(!_images[i].is_identity(),
                ErrorCode::invalid_argument,
                "generator " + std::to_string(i + 1) + " evaluates to the identity");
        require(_images[_S.inverse(static_cast<Letter>(i))] == _images[i].inverse(),
                ErrorCode::invalid_argument,
                "generator " + std::to_string(i + 1) + " does not respect the inverse pairing");
      }
      _identity = _images[0].identity();
    }

    //! Appends inverses: images (g_1, ..., g_k) become g_1, g_1^-1, g_2, ...
    //! Involutions (g == g^-1) are kept as a single self-paired generator.
    static GroupContext from_generators(std::vector<GroupElement> const& gens) {
      std::vector<GroupElement> images;
      std::vector<Letter>       inv;
      for (auto const& g : gens) {
        GroupElement gi = g.inverse();
        auto const   i  = static_cast<Letter>(images.size());
        if (gi == g) {
          images.push_back(g);
          inv.push_back(i);
        } else {
          images.push_back(g);
          images.push_back(std::move(gi));
          inv.push_back(i + 1);
          inv.push_back(i);
        }
      }
      return GroupContext(SymmetricGeneratingSet(std::move(inv)), std::move(images));
    }

    [[nodiscard]] SymmetricGeneratingSet const& generators() const noexcept {
      return _S;
    }
    [[nodiscard]] std::vector<GroupElement> const& images() const noexcept {
      return _images;
    }
    [[nodiscard]] GroupElement const& image(Letter a) const {
      _S.check(a);
      return _images[a];
    }
    [[nodiscard]] std::size_t size() const noexcept {
      return _S.size();
    }
    [[nodiscard]] Backend backend() const {
      return _images.at(0).backend();
    }
    [[nodiscard]] GroupElement const& identity() const noexcept {
      return _identity;
    }
    //! Matrix dimension or permutation degree.
    [[nodiscard]] std::size_t dimension() const {
      return backend() == Backend::unitriangular ? _images[0].matrix().dimension()
                                                 : _images[0].permutation().degree();
    }

   private:
    SymmetricGeneratingSet    _S;
    std::vector<GroupElement> _images;
    GroupElement              _identity;
  };

  //! Left-to-right product of generator images; the empty word is the identity.
  inline GroupElement evaluate(Word const& w, GroupContext const& ctx) {
    GroupElement g = ctx.identity();
    for (Letter a : w.letters) {
      g = g * ctx.image(a);
    }
    return g;
  }

  inline GroupElement evaluate(ReducedWord const& w, GroupContext const& ctx) {
    return evaluate(w.word(), ctx);
  }

  ////////////////////////////////////////////////////////////////////////
  // Standard fixtures
  ////////////////////////////////////////////////////////////////////////

  namespace groups {

    //! Z^n embedded in UT(n+1) along the first row; generators e_1, e_1^-1, ...
    inline GroupContext free_abelian(std::size_t n) {
      require(n >= 1, ErrorCode::invalid_argument, "free_abelian needs n >= 1");
      std::vector<GroupElement> gens;
      for (std::size_t i = 1; i <= n; ++i) {
        gens.emplace_back(UnitriangularMatrix::elementary(n + 1, 0, i));
      }
      return GroupContext::from_generators(gens);
    }

    //! The integer Heisenberg group, x = I + E_12, y = I + E_23.
    inline GroupContext heisenberg() {
      return GroupContext::from_generators(
          {UnitriangularMatrix::elementary(3, 0, 1), UnitriangularMatrix::elementary(3, 1, 2)});
    }

    //! UT(n, Z) generated by the elementary matrices I + E_{i,i+1}.
    inline GroupContext unitriangular(std::size_t n) {
      require(n >= 2, ErrorCode::invalid_argument, "unitriangular needs n >= 2");
      std::vector<GroupElement> gens;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        gens.emplace_back(UnitriangularMatrix::elementary(n, i, i + 1));
      }
      return GroupContext::from_generators(gens);
    }

  }  // namespace groups

}  // namespace collapselab

#endif  // COLLAPSELAB_GROUP_HPP_
