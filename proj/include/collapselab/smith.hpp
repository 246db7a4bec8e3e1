#ifndef COLLAPSELAB_SMITH_HPP_
#define COLLAPSELAB_SMITH_HPP_

// Exact integer and rational linear algebra on small dense matrices.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"

namespace collapselab {

  using IntVector   = std::vector<BigInt>;
  using IntMatrix   = std::vector<IntVector>;
  using RatVector   = std::vector<Rational>;

  inline IntMatrix identity_matrix(std::size_t n) {
    IntMatrix m(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      m[i][i] = 1;
    }
    return m;
  }

  inline IntMatrix matmul(IntMatrix const& a, IntMatrix const& b) {
    std::size_t const inner = b.size();
    std::size_t const cols  = inner == 0 ? 0 : b[0].size();
    IntMatrix         c(a.size(), IntVector(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t k = 0; k < inner; ++k) {
        if (a[i][k] == 0) {
          continue;
        }
        for (std::size_t j = 0; j < cols; ++j) {
          c[i][j] += a[i][k] * b[k][j];
        }
      }
    }
    return c;
  }

  //! Row vector times matrix.
  inline IntVector vecmul(IntVector const& x, IntMatrix const& m) {
    std::size_t const cols = m.empty() ? 0 : m[0].size();
    IntVector         y(cols, 0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == 0) {
        continue;
      }
      for (std::size_t j = 0; j < cols; ++j) {
        y[j] += x[k] * m[k][j];
      }
    }
    return y;
  }

  //! U * A * V = D with U, V unimodular and D diagonal, d_0 | d_1 | ... > 0.
  struct SmithForm {
    IntMatrix   U, V, D;
    IntVector   divisors;  // the nonzero diagonal entries
    std::size_t rank = 0;
  };

  inline SmithForm smith_normal_form(IntMatrix const& A, std::size_t cols) {
    std::size_t const m = A.size();
    std::size_t const n = cols;
    for (auto const& row : A) {
      require(row.size() == n, ErrorCode::invalid_argument, "ragged matrix");
    }
    SmithForm out;
    out.D = A;
    out.U = identity_matrix(m);
    out.V = identity_matrix(n);
    auto& D = out.D;
    auto& U = out.U;
    auto& V = out.V;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
      std::swap(D[i], D[j]);
      std::swap(U[i], U[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
      for (auto& row : D) {
        std::swap(row[i], row[j]);
      }
      for (auto& row : V) {
        std::swap(row[i], row[j]);
      }
    };
    // row_j -= q * row_i
    auto row_op = [&](std::size_t j, std::size_t i, BigInt const& q) {
      for (std::size_t c = 0; c < n; ++c) {
        D[j][c] -= q * D[i][c];
      }
      for (std::size_t c = 0; c < m; ++c) {
        U[j][c] -= q * U[i][c];
      }
    };
    // col_j -= q * col_i
    auto col_op = [&](std::size_t j, std::size_t i, BigInt const& q) {
      for (std::size_t r = 0; r < m; ++r) {
        D[r][j] -= q * D[r][i];
      }
      for (std::size_t r = 0; r < n; ++r) {
        V[r][j] -= q * V[r][i];
      }
    };

    std::size_t t = 0;
    while (t < m && t < n) {
      // Pivot: smallest nonzero magnitude in the trailing block.
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (D[i][j] != 0 && (!piv || abs(D[i][j]) < abs(D[piv->first][piv->second]))) {
            piv = {i, j};
          }
        }
      }
      if (!piv) {
        break;
      }
      swap_rows(t, piv->first);
      swap_cols(t, piv->second);
      bool clean = false;
      while (!clean) {
        clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (D[i][t] != 0) {
            row_op(i, t, D[i][t] / D[t][t]);
            if (D[i][t] != 0) {
              swap_rows(t, i);
              clean = false;
            }
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (D[t][j] != 0) {
            col_op(j, t, D[t][j] / D[t][t]);
            if (D[t][j] != 0) {
              swap_cols(t, j);
              clean = false;
            }
          }
        }
        if (clean) {
          // Divisibility of the trailing block by the pivot.
          for (std::size_t i = t + 1; i < m && clean; ++i) {
            for (std::size_t j = t + 1; j < n; ++j) {
              if (D[i][j] % D[t][t] != 0) {
                for (std::size_t c = 0; c < n; ++c) {
                  D[t][c] += D[i][c];
                }
                for (std::size_t c = 0; c < m; ++c) {
                  U[t][c] += U[i][c];
                }
                clean = false;
                break;
              }
            }
          }
        }
      }
      if (D[t][t] < 0) {
        for (std::size_t c = 0; c < n; ++c) {
          D[t][c] = -D[t][c];
        }
        for (std::size_t c = 0; c < m; ++c) {
          U[t][c] = -U[t][c];
        }
      }
      out.divisors.push_back(D[t][t]);
      ++t;
    }
    out.rank = t;
    return out;
  }

  //! Z^cols / (row span of relations): free rank, torsion divisors (> 1) and
  //! the coordinate change V (x -> xV puts the lattice in diagonal form).
  struct QuotientLattice {
    std::size_t ambient_rank = 0;
    std::size_t free_rank    = 0;
    IntVector   torsion;
    IntMatrix   V;
    std::size_t relation_rank = 0;

    //! Free coordinates of x (length free_rank).
    [[nodiscard]] IntVector free_part(IntVector const& x) const {
      IntVector y = vecmul(x, V);
      return IntVector(y.begin() + static_cast<std::ptrdiff_t>(relation_rank), y.end());
    }
  };

  inline QuotientLattice quotient_lattice(IntMatrix const& relations, std::size_t cols) {
    QuotientLattice q;
    q.ambient_rank = cols;
    auto snf       = smith_normal_form(relations, cols);
    q.V            = std::move(snf.V);
    q.relation_rank = snf.rank;
    q.free_rank     = cols - snf.rank;
    for (auto const& d : snf.divisors) {
      if (d > 1) {
        q.torsion.push_back(d);
      }
    }
    return q;
  }

  ////////////////////////////////////////////////////////////////////////
  // Rational elimination
  ////////////////////////////////////////////////////////////////////////

  //! Incremental row-echelon basis over Q for independence tests and solves.
  class RationalSpan {
   public:
    explicit RationalSpan(std::size_t dim) : _dim(dim) {}

    [[nodiscard]] std::size_t rank() const noexcept {
      return _rows.size();
    }

    //! Adds v if independent of the span; returns whether it was added.
    bool insert(IntVector const& v) {
      RatVector r = reduce(to_rational(v));
      auto      p = pivot(r);
      if (!p) {
        return false;
      }
      _rows.push_back(std::move(r));
      _pivots.push_back(*p);
      return true;
    }

    [[nodiscard]] bool contains(IntVector const& v) const {
      return !pivot(reduce(to_rational(v)));
    }

   private:
    [[nodiscard]] RatVector to_rational(IntVector const& v) const {
      require(v.size() == _dim, ErrorCode::invalid_argument, "vector has the wrong dimension");
      RatVector r(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        r[i] = Rational(v[i]);
      }
      return r;
    }

    [[nodiscard]] RatVector reduce(RatVector r) const {
      for (std::size_t k = 0; k < _rows.size(); ++k) {
        Rational const f = r[_pivots[k]] / _rows[k][_pivots[k]];
        if (f != 0) {
          for (std::size_t i = 0; i < _dim; ++i) {
            r[i] -= f * _rows[k][i];
          }
        }
      }
      return r;
    }

    [[nodiscard]] static std::optional<std::size_t> pivot(RatVector const& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] != 0) {
          return i;
        }
      }
      return std::nullopt;
    }

    std::size_t              _dim;
    std::vector<RatVector>   _rows;
    std::vector<std::size_t> _pivots;
  };

  inline std::size_t rational_rank(IntMatrix const& rows, std::size_t cols) {
    RationalSpan span(cols);
    for (auto const& r : rows) {
      span.insert(r);
    }
    return span.rank();
  }

  //! Coefficients c with sum_k c_k basis[k] = target, if a solution exists.
  //! `basis` must be linearly independent.
  inline std::optional<RatVector> solve_rational(IntMatrix const& basis, IntVector const& target) {
    std::size_t const k   = basis.size();
    std::size_t const dim = target.size();
    // Augmented system: columns are basis vectors.
    std::vector<RatVector> a(dim, RatVector(k + 1));
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        a[i][j] = Rational(basis[j].at(i));
      }
      a[i][k] = Rational(target[i]);
    }
    std::size_t              row = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < k && row < dim; ++col) {
      std::size_t p = row;
      while (p < dim && a[p][col] == 0) {
        ++p;
      }
      if (p == dim) {
        continue;
      }
      std::swap(a[p], a[row]);
      for (std::size_t i = 0; i < dim; ++i) {
        if (i != row && a[i][col] != 0) {
          Rational f = a[i][col] / a[row][col];
          for (std::size_t j = col; j <= k; ++j) {
            a[i][j] -= f * a[row][j];
          }
        }
      }
      pivot_col.push_back(col);
      ++row;
    }
    for (std::size_t i = row; i < dim; ++i) {
      if (a[i][k] != 0) {
        return std::nullopt;
      }
    }
    RatVector c(k, Rational(0));
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
      c[pivot_col[r]] = a[r][k] / a[r][pivot_col[r]];
    }
    return c;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_SMITH_HPP_
