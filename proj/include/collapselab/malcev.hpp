#ifndef COLLAPSELAB_MALCEV_HPP_
#define COLLAPSELAB_MALCEV_HPP_

// Mal'cev bases of finitely generated subgroups of UT(n, Z).
//
// UT(n, Z) is filtered by depth: UT_k is the set of matrices whose first
// k-1 superdiagonals vanish. On UT_k the k-th superdiagonal is additive, so
// each layer UT_k / UT_{k+1} is a copy of Z^{n-k}. A basis is a sequence of
// subgroup elements ordered by (depth, pivot column) whose k-th superdiagonals
// are in integer row-echelon form within each depth. Every element of the
// subgroup is then a unique collected product y_1^{e_1} ... y_m^{e_m}.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "group.hpp"
#include "smith.hpp"

namespace collapselab {

  class MalcevBasis {
   public:
    struct Element {
      UnitriangularMatrix matrix;
      std::size_t         depth = 0;
      std::size_t         pivot = 0;  // column within the depth-th superdiagonal
      BigInt              lead;       // positive pivot entry
    };

    struct Sifted {
      IntVector           exponents;  // one per basis element
      UnitriangularMatrix remainder;
    };

    MalcevBasis() = default;

    explicit MalcevBasis(std::size_t dimension) : _n(dimension) {}

    //! Basis of <generators>; all generators must be n x n unitriangular.
    static MalcevBasis generate(std::vector<UnitriangularMatrix> const& generators, std::size_t dimension) {
      MalcevBasis b(dimension);
      for (auto const& g : generators) {
        require(g.dimension() == dimension, ErrorCode::backend_mismatch, "generator has the wrong dimension");
      }
      std::deque<UnitriangularMatrix> queue(generators.begin(), generators.end());
      b.absorb(queue);
      // Close under conjugation until every conjugate sifts to the identity.
      bool changed = true;
      while (changed) {
        changed = false;
        std::size_t const m = b._elems.size();
        for (std::size_t i = 0; i < m && !changed; ++i) {
          UnitriangularMatrix const yi  = b._elems[i].matrix;
          UnitriangularMatrix const yii = yi.inverse();
          for (std::size_t j = i + 1; j < m && !changed; ++j) {
            UnitriangularMatrix const& yj = b._elems[j].matrix;
            for (auto const* c : {&yi, &yii}) {
              UnitriangularMatrix ci = c == &yi ? yii : yi;
              UnitriangularMatrix conj = ci * yj * *c;
              if (!b.sift(conj).remainder.is_identity()) {
                queue.push_back(std::move(conj));
                changed = true;
              }
            }
          }
        }
        if (changed) {
          b.absorb(queue);
        }
      }
      return b;
    }

    static MalcevBasis generate(std::vector<GroupElement> const& generators, std::size_t dimension) {
      std::vector<UnitriangularMatrix> mats;
      mats.reserve(generators.size());
      for (auto const& g : generators) {
        mats.push_back(g.matrix());
      }
      return generate(mats, dimension);
    }

    [[nodiscard]] std::size_t dimension() const noexcept {
      return _n;
    }
    //! Hirsch length of the subgroup.
    [[nodiscard]] std::size_t size() const noexcept {
      return _elems.size();
    }
    [[nodiscard]] std::vector<Element> const& elements() const noexcept {
      return _elems;
    }
    [[nodiscard]] UnitriangularMatrix const& operator[](std::size_t i) const {
      return _elems.at(i).matrix;
    }

    //! Strips y_i^{e_i} from the left in basis order: g = y_1^{e_1} ... y_m^{e_m} r.
    [[nodiscard]] Sifted sift(UnitriangularMatrix g) const {
      Sifted out;
      out.exponents.assign(_elems.size(), 0);
      for (std::size_t i = 0; i < _elems.size(); ++i) {
        auto const&       y = _elems[i];
        std::size_t const d = g.depth();
        if (d < y.depth) {
          break;
        }
        if (d > y.depth) {
          continue;
        }
        BigInt const& c = g.at(y.pivot, y.pivot + y.depth);
        if (c == 0) {
          continue;
        }
        if (c % y.lead != 0) {
          break;
        }
        BigInt e = c / y.lead;
        g        = power(GroupElement(y.matrix), -e).matrix() * g;
        out.exponents[i] = std::move(e);
      }
      out.remainder = std::move(g);
      return out;
    }

    [[nodiscard]] bool contains(UnitriangularMatrix const& g) const {
      return sift(g).remainder.is_identity();
    }

    //! Exponents of g in the collected form; nullopt if g is not in the subgroup.
    [[nodiscard]] std::optional<IntVector> coordinates(UnitriangularMatrix const& g) const {
      auto s = sift(g);
      if (!s.remainder.is_identity()) {
        return std::nullopt;
      }
      return std::move(s.exponents);
    }

    [[nodiscard]] UnitriangularMatrix evaluate(IntVector const& exponents) const {
      GroupElement g = UnitriangularMatrix(_n);
      for (std::size_t i = 0; i < _elems.size(); ++i) {
        if (exponents.at(i) != 0) {
          g = g * power(GroupElement(_elems[i].matrix), exponents[i]);
        }
      }
      return g.matrix();
    }

   private:
    //! Sifts every queued element, inserting remainders. Displaced basis
    //! elements are re-queued so nothing generated is lost.
    void absorb(std::deque<UnitriangularMatrix>& queue) {
      while (!queue.empty()) {
        UnitriangularMatrix g = std::move(queue.front());
        queue.pop_front();
        UnitriangularMatrix r = sift(std::move(g)).remainder;
        if (r.is_identity()) {
          continue;
        }
        insert(std::move(r), queue);
      }
    }

    void insert(UnitriangularMatrix r, std::deque<UnitriangularMatrix>& queue) {
      std::size_t const d = r.depth();
      std::size_t       p = 0;
      while (r.at(p, p + d) == 0) {
        ++p;
      }
      auto pos = std::find_if(_elems.begin(), _elems.end(), [&](Element const& e) {
        return e.depth == d && e.pivot == p;
      });
      if (pos == _elems.end()) {
        if (r.at(p, p + d) < 0) {
          r = r.inverse();
        }
        Element e{r, d, p, r.at(p, p + d)};
        auto    where = std::find_if(_elems.begin(), _elems.end(), [&](Element const& x) {
          return x.depth > d || (x.depth == d && x.pivot > p);
        });
        _elems.insert(where, std::move(e));
        return;
      }
      // Same pivot, lead does not divide: replace by the gcd combination.
      BigInt const a = pos->lead;
      BigInt const c = r.at(p, p + d);
      BigInt       x, y;
      BigInt const g0 = extended_gcd(a, c, x, y);
      GroupElement b(pos->matrix), gr(r);
      GroupElement combined = power(b, x) * power(gr, y);
      GroupElement cleared  = power(b, -(c / g0)) * power(gr, a / g0);
      queue.push_back(pos->matrix);
      queue.push_back(r);
      queue.push_back(cleared.matrix());
      UnitriangularMatrix cm = combined.matrix();
      pos->lead              = cm.at(p, p + d);
      pos->matrix            = std::move(cm);
      if (pos->lead < 0) {
        pos->matrix = pos->matrix.inverse();
        pos->lead   = -pos->lead;
      }
    }

    std::size_t          _n = 0;
    std::vector<Element> _elems;
  };

}  // namespace collapselab

#endif  // COLLAPSELAB_MALCEV_HPP_
