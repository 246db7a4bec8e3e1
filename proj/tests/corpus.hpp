#ifndef COLLAPSELAB_TESTS_CORPUS_HPP_
#define COLLAPSELAB_TESTS_CORPUS_HPP_

// Randomized (group, finite-index subgroup) pairs shared by the subgroup
// unit tests and the acceptance driver.

#include <random>
#include <string>
#include <vector>

#include "collapselab/quotients.hpp"

namespace corpus {

  using namespace collapselab;

  struct OracleCase {
    std::string          group;  // "Z2", "Z3" or "Heisenberg"
    FiniteQuotientOracle oracle;
    std::size_t          index = 0;
  };

  inline GroupContext context_for(std::string const& group) {
    if (group == "Z2") {
      return groups::free_abelian(2);
    }
    if (group == "Z3") {
      return groups::free_abelian(3);
    }
    return groups::heisenberg();
  }

  inline OracleCase random_abelian_case(std::mt19937_64& rng, std::size_t n, std::size_t max_index) {
    std::uniform_int_distribution<std::int64_t> mod(1, n == 2 ? 6 : 4);
    std::uniform_int_distribution<int>          nsub(0, 2);
    while (true) {
      std::vector<std::int64_t> moduli(n);
      for (auto& m : moduli) {
        m = mod(rng);
      }
      auto pick = [&]() {
        quotients::AbelianVector v(n);
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = std::uniform_int_distribution<std::int64_t>(0, moduli[i] - 1)(rng);
        }
        return v;
      };
      std::vector<quotients::AbelianVector> images(n), sub;
      for (auto& v : images) {
        v = pick();
      }
      // Subgroup generators are combinations of the images, so H lies in the image group.
      for (int k = nsub(rng); k > 0; --k) {
        quotients::AbelianVector h(n, 0);
        for (auto const& v : images) {
          std::int64_t c = std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
          for (std::size_t i = 0; i < n; ++i) {
            h[i] += c * v[i];
          }
        }
        sub.push_back(h);
      }
      auto oracle = quotients::abelian_oracle(moduli, images, sub);
      if (oracle.index() <= max_index && oracle.index() >= 2) {
        return {n == 2 ? "Z2" : "Z3", oracle, oracle.index()};
      }
    }
  }

  inline OracleCase random_heisenberg_case(std::mt19937_64& rng, std::size_t max_index) {
    std::uniform_int_distribution<std::int64_t> modpick(2, 4);
    while (true) {
      std::int64_t const m    = modpick(rng);
      auto               pick = [&]() {
        std::uniform_int_distribution<std::int64_t> c(0, m - 1);
        return quotients::HeisenbergTriple{c(rng), c(rng), c(rng)};
      };
      auto X = pick(), Y = pick();
      // H is drawn from the image group so the oracle is well formed.
      std::vector<quotients::HeisenbergTriple> sub;
      int const                                k = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int i = 0; i < k; ++i) {
        // Words in X, Y of length up to 4 stay in the image group.
        quotients::HeisenbergTriple h{0, 0, 0};
        int const                   len = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int j = 0; j < len; ++j) {
          switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
            case 0: h = quotients::heisenberg_multiply(h, X, m); break;
            case 1: h = quotients::heisenberg_multiply(h, quotients::heisenberg_inverse(X, m), m); break;
            case 2: h = quotients::heisenberg_multiply(h, Y, m); break;
            default: h = quotients::heisenberg_multiply(h, quotients::heisenberg_inverse(Y, m), m); break;
          }
        }
        sub.push_back(h);
      }
      auto oracle = quotients::heisenberg_oracle(m, X, Y, sub);
      if (oracle.index() <= max_index && oracle.index() >= 2) {
        return {"Heisenberg", oracle, oracle.index()};
      }
    }
  }

  //! `count` cases cycling through Z^2, Z^3 and the Heisenberg group.
  inline std::vector<OracleCase> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_index = 12) {
    std::mt19937_64         rng(seed);
    std::vector<OracleCase> out;
    for (std::size_t i = 0; i < count; ++i) {
      switch (i % 3) {
        case 0: out.push_back(random_abelian_case(rng, 2, max_index)); break;
        case 1: out.push_back(random_abelian_case(rng, 3, max_index)); break;
        default: out.push_back(random_heisenberg_case(rng, max_index)); break;
      }
    }
    return out;
  }

}  // namespace corpus

#endif  // COLLAPSELAB_TESTS_CORPUS_HPP_
