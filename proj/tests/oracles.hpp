#ifndef COLLAPSELAB_TESTS_ORACLES_HPP_
#define COLLAPSELAB_TESTS_ORACLES_HPP_

// Independent reference implementations used only by the tests. They share
// no code paths with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

  using Mat = std::vector<std::vector<std::int64_t>>;

  inline Mat identity(std::size_t n) {
    Mat m(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      m[i][i] = 1;
    }
    return m;
  }

  inline Mat multiply(Mat const& a, Mat const& b) {
    std::size_t n = a.size();
    Mat         c(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          c[i][j] += a[i][k] * b[k][j];
        }
      }
    }
    return c;
  }

  //! Inverse of a unitriangular matrix via the finite Neumann series.
  inline Mat unitriangular_inverse(Mat const& a) {
    std::size_t n = a.size();
    Mat         nil = a;
    for (std::size_t i = 0; i < n; ++i) {
      nil[i][i] = 0;
    }
    Mat result = identity(n);
    Mat term   = identity(n);
    for (std::size_t k = 1; k < n; ++k) {
      term = multiply(term, nil);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          result[i][j] += (k % 2 == 1 ? -1 : 1) * term[i][j];
        }
      }
    }
    return result;
  }

  //! Evaluates a word given as generator indices into a list of matrices.
  inline Mat evaluate(std::vector<std::uint32_t> const& word, std::vector<Mat> const& gens) {
    Mat m = identity(gens.at(0).size());
    for (auto a : word) {
      m = multiply(m, gens.at(a));
    }
    return m;
  }

  //! Every product of at most r generators, with no reduction and no
  //! canonical ordering; counts distinct elements only.
  inline std::size_t product_ball_size(std::vector<Mat> const& gens, std::size_t r) {
    std::set<Mat> seen{identity(gens.at(0).size())};
    std::set<Mat> frontier = seen;
    for (std::size_t step = 0; step < r; ++step) {
      std::set<Mat> next;
      for (auto const& m : frontier) {
        for (auto const& g : gens) {
          Mat p = multiply(m, g);
          if (!seen.contains(p)) {
            next.insert(p);
          }
        }
      }
      seen.insert(next.begin(), next.end());
      frontier = std::move(next);
    }
    return seen.size();
  }

  //! Minimal-length, then lexicographically least word over `gens` reaching
  //! `target`, by exhaustive enumeration of all words of each length.
  inline std::vector<std::uint32_t> least_word(std::vector<Mat> const& gens, Mat const& target, std::size_t max_len) {
    std::size_t const d = gens.size();
    for (std::size_t len = 0; len <= max_len; ++len) {
      std::vector<std::uint32_t> w(len, 0);
      while (true) {
        if (evaluate(w, gens) == target || (len == 0 && identity(target.size()) == target)) {
          return w;
        }
        std::size_t i = len;
        while (i > 0 && w[i - 1] + 1 == d) {
          w[i - 1] = 0;
          --i;
        }
        if (i == 0) {
          break;
        }
        ++w[i - 1];
      }
    }
    return {std::numeric_limits<std::uint32_t>::max()};
  }

  ////////////////////////////////////////////////////////////////////////
  // Metric oracles
  ////////////////////////////////////////////////////////////////////////

  using Dist = std::vector<std::vector<double>>;

  //! Exact GH distance by enumerating every relation R subset of X x Y that
  //! projects onto both factors. Feasible only for |X|*|Y| <= 16 or so.
  inline double gh_brute_force(Dist const& X, Dist const& Y, int pinned_x = -1, int pinned_y = -1) {
    std::size_t const nx = X.size(), ny = Y.size();
    std::size_t const cells = nx * ny;
    double            best  = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
      std::vector<bool> cx(nx, false), cy(ny, false);
      std::vector<std::pair<std::size_t, std::size_t>> rel;
      for (std::size_t c = 0; c < cells; ++c) {
        if ((mask >> c) & 1U) {
          rel.emplace_back(c / ny, c % ny);
          cx[c / ny] = true;
          cy[c % ny] = true;
        }
      }
      if (std::find(cx.begin(), cx.end(), false) != cx.end() || std::find(cy.begin(), cy.end(), false) != cy.end()) {
        continue;
      }
      if (pinned_x >= 0
          && std::find(rel.begin(), rel.end(), std::pair<std::size_t, std::size_t>(pinned_x, pinned_y)) == rel.end()) {
        continue;
      }
      double dis = 0;
      for (auto const& [a, b] : rel) {
        for (auto const& [c, d] : rel) {
          dis = std::max(dis, std::abs(X[a][c] - Y[b][d]));
        }
      }
      best = std::min(best, dis / 2);
    }
    return best;
  }

  ////////////////////////////////////////////////////////////////////////
  // Integer linear algebra
  ////////////////////////////////////////////////////////////////////////

  //! Rank over Q by fraction-free Gaussian elimination on long double copies
  //! of small integer matrices.
  inline std::size_t rational_rank(std::vector<std::vector<std::int64_t>> rows) {
    std::vector<std::vector<long double>> m;
    for (auto const& r : rows) {
      m.emplace_back(r.begin(), r.end());
    }
    std::size_t rank = 0;
    if (m.empty()) {
      return 0;
    }
    std::size_t const cols = m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
      std::size_t piv = rank;
      for (std::size_t r = rank; r < m.size(); ++r) {
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) {
          piv = r;
        }
      }
      if (std::abs(m[piv][c]) < 1e-12L) {
        continue;
      }
      std::swap(m[piv], m[rank]);
      for (std::size_t r = 0; r < m.size(); ++r) {
        if (r != rank) {
          long double f = m[r][c] / m[rank][c];
          for (std::size_t k = 0; k < cols; ++k) {
            m[r][k] -= f * m[rank][k];
          }
        }
      }
      ++rank;
    }
    return rank;
  }

  //! Order of the torsion subgroup and free rank of Z^n / <rows>, via the
  //! determinantal-divisor characterisation on small matrices: the product
  //! of the invariant factors equals the gcd of maximal nonzero minors.
  inline std::int64_t gcd_of_maximal_minors(std::vector<std::vector<std::int64_t>> const& rows, std::size_t k) {
    std::size_t const         m = rows.size();
    std::size_t const         n = rows.empty() ? 0 : rows[0].size();
    std::int64_t              g = 0;
    std::function<std::int64_t(std::vector<std::vector<std::int64_t>>)> det =
        [&](std::vector<std::vector<std::int64_t>> a) -> std::int64_t {
      std::size_t s = a.size();
      if (s == 1) {
        return a[0][0];
      }
      std::int64_t total = 0;
      for (std::size_t c = 0; c < s; ++c) {
        std::vector<std::vector<std::int64_t>> sub;
        for (std::size_t r = 1; r < s; ++r) {
          std::vector<std::int64_t> row;
          for (std::size_t cc = 0; cc < s; ++cc) {
            if (cc != c) {
              row.push_back(a[r][cc]);
            }
          }
          sub.push_back(row);
        }
        total += (c % 2 == 0 ? 1 : -1) * a[0][c] * det(sub);
      }
      return total;
    };
    std::vector<bool> rsel(m, false), csel(n, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
      do {
        std::vector<std::vector<std::int64_t>> sub;
        for (std::size_t r = 0; r < m; ++r) {
          if (!rsel[r]) {
            continue;
          }
          std::vector<std::int64_t> row;
          for (std::size_t c = 0; c < n; ++c) {
            if (csel[c]) {
              row.push_back(rows[r][c]);
            }
          }
          sub.push_back(row);
        }
        g = std::gcd(g, det(sub));
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    return std::abs(g);
  }


  ////////////////////////////////////////////////////////////////////////
  // Rational Lie algebra of a unipotent group
  ////////////////////////////////////////////////////////////////////////

  struct Frac {
    std::int64_t p = 0, q = 1;
    Frac(std::int64_t a = 0, std::int64_t b = 1) : p(a), q(b) {
      if (q < 0) {
        p = -p;
        q = -q;
      }
      std::int64_t g = std::gcd(p < 0 ? -p : p, q);
      if (g > 1) {
        p /= g;
        q /= g;
      }
    }
    friend Frac operator+(Frac a, Frac b) { return {a.p * b.q + b.p * a.q, a.q * b.q}; }
    friend Frac operator-(Frac a, Frac b) { return {a.p * b.q - b.p * a.q, a.q * b.q}; }
    friend Frac operator*(Frac a, Frac b) { return {a.p * b.p, a.q * b.q}; }
    friend Frac operator/(Frac a, Frac b) { return {a.p * b.q, a.q * b.p}; }
    bool operator==(Frac const&) const = default;
  };

  using FMat = std::vector<std::vector<Frac>>;

  inline FMat fmul(FMat const& a, FMat const& b) {
    std::size_t n = a.size();
    FMat        c(n, std::vector<Frac>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          c[i][j] = c[i][j] + a[i][k] * b[k][j];
        }
      }
    }
    return c;
  }

  //! log(I + N) = N - N^2/2 + N^3/3 - ...
  inline FMat matrix_log(Mat const& g) {
    std::size_t n = g.size();
    FMat        nil(n, std::vector<Frac>(n)), out(n, std::vector<Frac>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        nil[i][j] = Frac(g[i][j] - (i == j ? 1 : 0));
      }
    }
    FMat term = nil;
    for (std::size_t k = 1; k < n; ++k) {
      Frac c(k % 2 == 1 ? 1 : -1, static_cast<std::int64_t>(k));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          out[i][j] = out[i][j] + c * term[i][j];
        }
      }
      term = fmul(term, nil);
    }
    return out;
  }

  //! Echelon basis of a span of matrices, flattened.
  struct FSpan {
    std::vector<std::vector<Frac>> rows;
    std::vector<std::size_t>       pivots;

    bool insert(FMat const& m) {
      std::vector<Frac> v;
      for (auto const& r : m) {
        v.insert(v.end(), r.begin(), r.end());
      }
      for (std::size_t k = 0; k < rows.size(); ++k) {
        Frac f = v[pivots[k]] / rows[k][pivots[k]];
        if (!(f == Frac(0))) {
          for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = v[i] - f * rows[k][i];
          }
        }
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] == Frac(0))) {
          rows.push_back(v);
          pivots.push_back(i);
          return true;
        }
      }
      return false;
    }
  };

  //! Dimensions of the lower central series g = L_1 > L_2 > ... of the Lie
  //! algebra spanned by the logs of `gens` (the trailing zero omitted).
  inline std::vector<std::size_t> lie_lcs_dimensions(std::vector<Mat> const& gens) {
    auto bracket = [](FMat const& a, FMat const& b) {
      FMat ab = fmul(a, b), ba = fmul(b, a);
      for (std::size_t i = 0; i < ab.size(); ++i) {
        for (std::size_t j = 0; j < ab.size(); ++j) {
          ab[i][j] = ab[i][j] - ba[i][j];
        }
      }
      return ab;
    };
    // Close the span of the logs under brackets.
    FSpan             lie;
    std::vector<FMat> basis;
    for (auto const& g : gens) {
      FMat l = matrix_log(g);
      if (lie.insert(l)) {
        basis.push_back(l);
      }
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        FMat b = bracket(basis[i], basis[j]);
        if (lie.insert(b)) {
          basis.push_back(b);
        }
      }
    }
    std::vector<std::size_t> dims;
    std::vector<FMat>        level = basis;
    while (!level.empty()) {
      dims.push_back(level.size());
      FSpan             next;
      std::vector<FMat> next_basis;
      for (auto const& x : basis) {
        for (auto const& y : level) {
          FMat b = bracket(x, y);
          if (next.insert(b)) {
            next_basis.push_back(b);
          }
        }
      }
      level = std::move(next_basis);
    }
    return dims;
  }

}  // namespace oracle

#endif  // COLLAPSELAB_TESTS_ORACLES_HPP_
