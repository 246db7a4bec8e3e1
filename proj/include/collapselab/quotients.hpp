#ifndef COLLAPSELAB_QUOTIENTS_HPP_
#define COLLAPSELAB_QUOTIENTS_HPP_

// Finite quotients of the standard fixture groups, realised as regular
// permutation actions, for building membership oracles.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "subgroups.hpp"

namespace collapselab::quotients {

  //! Element of Z/m1 x ... x Z/mn, stored with components in [0, m_i).
  using AbelianVector = std::vector<std::int64_t>;

  inline std::size_t abelian_order(std::vector<std::int64_t> const& moduli) {
    std::size_t q = 1;
    for (auto m : moduli) {
      require(m >= 1, ErrorCode::invalid_argument, "moduli must be positive");
      q *= static_cast<std::size_t>(m);
    }
    return q;
  }

  inline std::size_t abelian_encode(AbelianVector const& v, std::vector<std::int64_t> const& moduli) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      std::int64_t c = ((v[i] % moduli[i]) + moduli[i]) % moduli[i];
      code           = code * static_cast<std::size_t>(moduli[i]) + static_cast<std::size_t>(c);
    }
    return code;
  }

  //! Translation by v acting on the points of the finite abelian group.
  inline Permutation abelian_translation(AbelianVector const& v, std::vector<std::int64_t> const& moduli) {
    std::size_t const          q = abelian_order(moduli);
    std::vector<std::uint32_t> img(q);
    AbelianVector              p(moduli.size(), 0);
    for (std::size_t code = 0; code < q; ++code) {
      std::size_t rest = code;
      for (std::size_t i = moduli.size(); i-- > 0;) {
        p[i] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(moduli[i]));
        rest /= static_cast<std::size_t>(moduli[i]);
      }
      AbelianVector s(moduli.size());
      for (std::size_t i = 0; i < moduli.size(); ++i) {
        s[i] = p[i] + v[i];
      }
      img[code] = static_cast<std::uint32_t>(abelian_encode(s, moduli));
    }
    return Permutation(std::move(img));
  }

  //! Z^n -> Z/m1 x ... x Z/mn, e_i -> generator_images[i], with H generated
  //! by `subgroup_generators`. Letters follow GroupContext::from_generators
  //! (e_1, e_1^-1, e_2, ...).
  inline FiniteQuotientOracle abelian_oracle(std::vector<std::int64_t> const&   moduli,
                                             std::vector<AbelianVector> const& generator_images,
                                             std::vector<AbelianVector> const& subgroup_generators) {
    std::vector<Permutation> images;
    for (auto const& v : generator_images) {
      require(v.size() == moduli.size(), ErrorCode::invalid_argument, "image vector has the wrong length");
      AbelianVector neg(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        neg[i] = -v[i];
      }
      images.push_back(abelian_translation(v, moduli));
      images.push_back(abelian_translation(neg, moduli));
    }
    std::vector<Permutation> H;
    for (auto const& v : subgroup_generators) {
      H.push_back(abelian_translation(v, moduli));
    }
    return FiniteQuotientOracle::from_subgroup_generators(std::move(images), H);
  }

  //! Element (a, b, c) of the Heisenberg group over Z/m, i.e. the matrix
  //! [[1, a, c], [0, 1, b], [0, 0, 1]] mod m.
  using HeisenbergTriple = std::array<std::int64_t, 3>;

  inline HeisenbergTriple heisenberg_multiply(HeisenbergTriple const& g, HeisenbergTriple const& h, std::int64_t m) {
    auto md = [m](std::int64_t x) { return ((x % m) + m) % m; };
    return {md(g[0] + h[0]), md(g[1] + h[1]), md(g[2] + h[2] + g[0] * h[1])};
  }

  inline HeisenbergTriple heisenberg_inverse(HeisenbergTriple const& g, std::int64_t m) {
    auto md = [m](std::int64_t x) { return ((x % m) + m) % m; };
    return {md(-g[0]), md(-g[1]), md(g[0] * g[1] - g[2])};
  }

  //! Left multiplication by g on the m^3 points of Heis(Z/m).
  inline Permutation heisenberg_left_multiplication(HeisenbergTriple const& g, std::int64_t m) {
    std::size_t const          q = static_cast<std::size_t>(m * m * m);
    std::vector<std::uint32_t> img(q);
    for (std::size_t code = 0; code < q; ++code) {
      HeisenbergTriple p{static_cast<std::int64_t>(code / static_cast<std::size_t>(m * m)),
                         static_cast<std::int64_t>((code / static_cast<std::size_t>(m)) % static_cast<std::size_t>(m)),
                         static_cast<std::int64_t>(code % static_cast<std::size_t>(m))};
      auto r    = heisenberg_multiply(g, p, m);
      img[code] = static_cast<std::uint32_t>((r[0] * m + r[1]) * m + r[2]);
    }
    return Permutation(std::move(img));
  }

  //! Heis(Z) -> Heis(Z/m), x -> X, y -> Y. Any choice of X, Y defines a
  //! homomorphism since the target is nilpotent of class 2 and Heis(Z) is
  //! free in that variety. Letters: x, x^-1, y, y^-1.
  inline FiniteQuotientOracle heisenberg_oracle(std::int64_t                         m,
                                                HeisenbergTriple const&              X,
                                                HeisenbergTriple const&              Y,
                                                std::vector<HeisenbergTriple> const& subgroup_generators) {
    require(m >= 1, ErrorCode::invalid_argument, "modulus must be positive");
    std::vector<Permutation> images{heisenberg_left_multiplication(X, m),
                                    heisenberg_left_multiplication(heisenberg_inverse(X, m), m),
                                    heisenberg_left_multiplication(Y, m),
                                    heisenberg_left_multiplication(heisenberg_inverse(Y, m), m)};
    std::vector<Permutation> H;
    for (auto const& h : subgroup_generators) {
      H.push_back(heisenberg_left_multiplication(h, m));
    }
    return FiniteQuotientOracle::from_subgroup_generators(std::move(images), H);
  }

  //! Heisenberg entries mod 2, H = image of the centre; index 4, normal.
  inline FiniteQuotientOracle heisenberg_mod2_center() {
    return heisenberg_oracle(2, {1, 0, 0}, {0, 1, 0}, {{0, 0, 1}});
  }

}  // namespace collapselab::quotients

#endif  // COLLAPSELAB_QUOTIENTS_HPP_
