#ifndef COLLAPSELAB_METRIC_HPP_
#define COLLAPSELAB_METRIC_HPP_

// Finite pointed metric spaces, correspondences and Gromov-Hausdorff
// distance: an exact search for small spaces and a seeded heuristic with
// certified lower and upper bounds for larger ones.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace collapselab {

  inline double as_double(double x) {
    return x;
  }
  inline double as_double(Rational const& x) {
    return x.convert_to<double>();
  }

  template <class T>
  T abs_diff(T const& a, T const& b) {
    return a < b ? T(b - a) : T(a - b);
  }

  template <class T>
  class BasicMetricSpace {
   public:
    using value_type = T;

    BasicMetricSpace() = default;

    //! Full n x n matrix, row-major.
    BasicMetricSpace(std::size_t n, std::vector<T> distances, std::optional<std::size_t> basepoint = std::nullopt)
        : _n(n), _d(std::move(distances)), _base(basepoint) {
      require(_d.size() == n * n, ErrorCode::malformed_input, "distance matrix has the wrong size");
      require(!basepoint || *basepoint < n, ErrorCode::malformed_input, "basepoint out of range");
    }

    //! From the row-major strict upper triangle.
    static BasicMetricSpace from_upper_triangle(std::size_t n,
                                                std::vector<T> const& upper,
                                                std::optional<std::size_t> basepoint = std::nullopt) {
      require(upper.size() == n * (n - (n > 0 ? 1 : 0)) / 2,
              ErrorCode::malformed_input,
              "upper-triangle array has the wrong length");
      std::vector<T> d(n * n, T(0));
      std::size_t    k = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          d[i * n + j] = upper[k];
          d[j * n + i] = upper[k];
          ++k;
        }
      }
      return BasicMetricSpace(n, std::move(d), basepoint);
    }

    [[nodiscard]] std::size_t size() const noexcept {
      return _n;
    }
    [[nodiscard]] T const& operator()(std::size_t i, std::size_t j) const {
      return _d[i * _n + j];
    }
    [[nodiscard]] T& at(std::size_t i, std::size_t j) {
      return _d[i * _n + j];
    }
    [[nodiscard]] std::vector<T> const& matrix() const noexcept {
      return _d;
    }
    [[nodiscard]] std::vector<T> upper_triangle() const {
      std::vector<T> out;
      for (std::size_t i = 0; i < _n; ++i) {
        for (std::size_t j = i + 1; j < _n; ++j) {
          out.push_back((*this)(i, j));
        }
      }
      return out;
    }
    [[nodiscard]] std::optional<std::size_t> basepoint() const noexcept {
      return _base;
    }
    void set_basepoint(std::optional<std::size_t> p) {
      require(!p || *p < _n, ErrorCode::invalid_argument, "basepoint out of range");
      _base = p;
    }
    [[nodiscard]] std::vector<std::vector<double>> const& coordinates() const noexcept {
      return _coords;
    }
    void set_coordinates(std::vector<std::vector<double>> c) {
      require(c.empty() || c.size() == _n, ErrorCode::invalid_argument, "one coordinate row per point");
      _coords = std::move(c);
    }

    [[nodiscard]] T diameter() const {
      T best(0);
      for (auto const& x : _d) {
        if (best < x) {
          best = x;
        }
      }
      return best;
    }

    //! Indices within the open ball B_r(center).
    [[nodiscard]] std::vector<std::size_t> ball(std::size_t center, double r) const {
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < _n; ++i) {
        if (as_double((*this)(center, i)) < r) {
          out.push_back(i);
        }
      }
      return out;
    }

    [[nodiscard]] BasicMetricSpace<double> to_double() const {
      std::vector<double> d;
      d.reserve(_d.size());
      for (auto const& x : _d) {
        d.push_back(as_double(x));
      }
      BasicMetricSpace<double> out(_n, std::move(d), _base);
      out.set_coordinates(_coords);
      return out;
    }

    //! Subspace on the given indices (basepoint kept when selected).
    [[nodiscard]] BasicMetricSpace subspace(std::vector<std::size_t> const& idx) const {
      std::vector<T>             d(idx.size() * idx.size());
      std::optional<std::size_t> base;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        if (_base && idx[a] == *_base) {
          base = a;
        }
        for (std::size_t b = 0; b < idx.size(); ++b) {
          d[a * idx.size() + b] = (*this)(idx[a], idx[b]);
        }
      }
      BasicMetricSpace out(idx.size(), std::move(d), base);
      if (!_coords.empty()) {
        std::vector<std::vector<double>> c;
        for (auto i : idx) {
          c.push_back(_coords[i]);
        }
        out.set_coordinates(std::move(c));
      }
      return out;
    }

   private:
    std::size_t                      _n = 0;
    std::vector<T>                   _d;
    std::optional<std::size_t>       _base;
    std::vector<std::vector<double>> _coords;
  };

  using MetricSpace      = BasicMetricSpace<double>;
  using ExactMetricSpace = BasicMetricSpace<Rational>;

  inline constexpr double default_metric_tolerance = 1e-9;

  struct MetricReport {
    bool                                  pass        = true;
    bool                                  symmetric   = true;
    bool                                  zero_diagonal = true;
    bool                                  nonnegative = true;
    double                                worst_violation = 0;  // max d(i,k) - d(i,j) - d(j,k)
    std::optional<std::array<std::size_t, 3>> worst_triple;     // (i, j, k) with j the midpoint
  };

  template <class T>
  MetricReport validate_metric(BasicMetricSpace<T> const& X, double tol = default_metric_tolerance) {
    MetricReport      r;
    std::size_t const n = X.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (as_double(abs_diff(X(i, i), T(0))) > tol) {
        r.zero_diagonal = false;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (as_double(X(i, j)) < -tol) {
          r.nonnegative = false;
        }
        if (as_double(abs_diff(X(i, j), X(j, i))) > tol) {
          r.symmetric = false;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          double v = as_double(X(i, k)) - as_double(X(i, j)) - as_double(X(j, k));
          if (v > r.worst_violation) {
            r.worst_violation = v;
            r.worst_triple    = std::array<std::size_t, 3>{i, j, k};
          }
        }
      }
    }
    r.pass = r.symmetric && r.zero_diagonal && r.nonnegative && r.worst_violation <= tol;
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Correspondences
  ////////////////////////////////////////////////////////////////////////

  struct Correspondence {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    [[nodiscard]] bool surjective(std::size_t nx, std::size_t ny) const {
      std::vector<bool> cx(nx, false), cy(ny, false);
      for (auto const& [x, y] : pairs) {
        if (x >= nx || y >= ny) {
          return false;
        }
        cx[x] = true;
        cy[y] = true;
      }
      return std::all_of(cx.begin(), cx.end(), [](bool b) { return b; })
          && std::all_of(cy.begin(), cy.end(), [](bool b) { return b; });
    }
  };

  template <class T>
  T distortion(Correspondence const& R, BasicMetricSpace<T> const& X, BasicMetricSpace<T> const& Y) {
    require(R.surjective(X.size(), Y.size()), ErrorCode::invalid_argument, "correspondence is not surjective");
    T best(0);
    for (auto const& [x, y] : R.pairs) {
      for (auto const& [x2, y2] : R.pairs) {
        T d = abs_diff(X(x, x2), Y(y, y2));
        if (best < d) {
          best = d;
        }
      }
    }
    return best;
  }

  template <class T>
  struct GHExact {
    T              value;  // half the least distortion
    Correspondence witness;
  };

  namespace detail {

    //! Is there a covering set of pairwise compatible pairs? `compat` is the
    //! |X||Y| square compatibility matrix at a fixed threshold.
    inline bool find_cover(std::size_t                    nx,
                           std::size_t                    ny,
                           std::vector<char> const&       compat,
                           std::vector<std::size_t>&      chosen,
                           std::vector<char>              allowed,
                           std::vector<int>&              cover_x,
                           std::vector<int>&              cover_y) {
      std::size_t const P = nx * ny;
      // Most constrained uncovered point.
      std::size_t best_count = std::numeric_limits<std::size_t>::max();
      bool        best_is_x  = true;
      std::size_t best_point = 0;
      for (std::size_t x = 0; x < nx; ++x) {
        if (cover_x[x] > 0) {
          continue;
        }
        std::size_t c = 0;
        for (std::size_t y = 0; y < ny; ++y) {
          c += allowed[x * ny + y] ? 1 : 0;
        }
        if (c < best_count) {
          best_count = c;
          best_is_x  = true;
          best_point = x;
        }
      }
      for (std::size_t y = 0; y < ny; ++y) {
        if (cover_y[y] > 0) {
          continue;
        }
        std::size_t c = 0;
        for (std::size_t x = 0; x < nx; ++x) {
          c += allowed[x * ny + y] ? 1 : 0;
        }
        if (c < best_count) {
          best_count = c;
          best_is_x  = false;
          best_point = y;
        }
      }
      if (best_count == std::numeric_limits<std::size_t>::max()) {
        return true;  // everything covered
      }
      if (best_count == 0) {
        return false;
      }
      std::size_t const other = best_is_x ? ny : nx;
      for (std::size_t o = 0; o < other; ++o) {
        std::size_t const p = best_is_x ? best_point * ny + o : o * ny + best_point;
        if (!allowed[p]) {
          continue;
        }
        std::vector<char> next(P);
        for (std::size_t q = 0; q < P; ++q) {
          next[q] = static_cast<char>(allowed[q] && compat[p * P + q]);
        }
        chosen.push_back(p);
        ++cover_x[p / ny];
        ++cover_y[p % ny];
        if (find_cover(nx, ny, compat, chosen, std::move(next), cover_x, cover_y)) {
          return true;
        }
        chosen.pop_back();
        --cover_x[p / ny];
        --cover_y[p % ny];
      }
      return false;
    }

    template <class T>
    std::optional<Correspondence> cover_at(BasicMetricSpace<T> const&                       X,
                                           BasicMetricSpace<T> const&                       Y,
                                           T const&                                         t,
                                           std::optional<std::pair<std::size_t, std::size_t>> pinned) {
      std::size_t const nx = X.size(), ny = Y.size(), P = nx * ny;
      std::vector<char> compat(P * P);
      for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t q = 0; q < P; ++q) {
          compat[p * P + q] = static_cast<char>(!(t < abs_diff(X(p / ny, q / ny), Y(p % ny, q % ny))));
        }
      }
      std::vector<char>        allowed(P, 1);
      std::vector<std::size_t> chosen;
      std::vector<int>         cx(nx, 0), cy(ny, 0);
      if (pinned) {
        std::size_t const p = pinned->first * ny + pinned->second;
        for (std::size_t q = 0; q < P; ++q) {
          allowed[q] = compat[p * P + q];
        }
        chosen.push_back(p);
        ++cx[pinned->first];
        ++cy[pinned->second];
      }
      if (!find_cover(nx, ny, compat, chosen, std::move(allowed), cx, cy)) {
        return std::nullopt;
      }
      Correspondence R;
      for (auto p : chosen) {
        R.pairs.emplace_back(p / ny, p % ny);
      }
      std::sort(R.pairs.begin(), R.pairs.end());
      return R;
    }

  }  // namespace detail

  //! Exact GH distance of two small spaces: the least distortion is one of the
  //! values |d_X(a,b) - d_Y(c,d)|, found by bisection over them. With
  //! `pointed`, the basepoints are forced to correspond.
  template <class T>
  GHExact<T> gh_exact_small(BasicMetricSpace<T> const& X,
                            BasicMetricSpace<T> const& Y,
                            std::size_t                size_cap = 6,
                            bool                       pointed  = false) {
    require(X.size() > 0 && Y.size() > 0, ErrorCode::invalid_argument, "spaces must be nonempty");
    if (X.size() > size_cap || Y.size() > size_cap) {
      fail(ErrorCode::cap_exceeded,
           "exact GH search is limited to " + std::to_string(size_cap) + " points per space");
    }
    std::optional<std::pair<std::size_t, std::size_t>> pinned;
    if (pointed) {
      require(X.basepoint() && Y.basepoint(), ErrorCode::invalid_argument, "pointed GH needs basepoints");
      pinned = std::pair{*X.basepoint(), *Y.basepoint()};
    }
    std::vector<T> values{T(0)};
    for (auto const& a : X.matrix()) {
      for (auto const& b : Y.matrix()) {
        values.push_back(abs_diff(a, b));
      }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::size_t lo = 0, hi = values.size() - 1;
    auto        best = detail::cover_at(X, Y, values[hi], pinned);
    require(best.has_value(), ErrorCode::invalid_argument, "no correspondence at the maximal threshold");
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (auto R = detail::cover_at(X, Y, values[mid], pinned)) {
        hi   = mid;
        best = std::move(R);
      } else {
        lo = mid + 1;
      }
    }
    GHExact<T> out{values[hi] / T(2), std::move(*best)};
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Heuristic bounds
  ////////////////////////////////////////////////////////////////////////

  struct GHBound {
    double         lower = 0;
    double         upper = 0;
    Correspondence witness;
  };

  namespace detail {

    //! Hausdorff distance between two sorted multisets of reals, by a
    //! linear merge.
    inline double sorted_hausdorff(std::vector<double> const& a, std::vector<double> const& b) {
      auto one_sided = [](std::vector<double> const& u, std::vector<double> const& v) {
        if (v.empty()) {
          return u.empty() ? 0.0 : std::numeric_limits<double>::infinity();
        }
        double      worst = 0;
        std::size_t j     = 0;
        for (double x : u) {
          while (j + 1 < v.size() && v[j + 1] <= x) {
            ++j;
          }
          double best = std::abs(x - v[j]);
          if (j + 1 < v.size()) {
            best = std::min(best, std::abs(v[j + 1] - x));
          }
          worst = std::max(worst, best);
        }
        return worst;
      };
      return std::max(one_sided(a, b), one_sided(b, a));
    }

    inline std::vector<std::vector<double>> sorted_rows(MetricSpace const& X) {
      std::vector<std::vector<double>> rows(X.size());
      for (std::size_t i = 0; i < X.size(); ++i) {
        rows[i].assign(X.matrix().begin() + static_cast<std::ptrdiff_t>(i * X.size()),
                       X.matrix().begin() + static_cast<std::ptrdiff_t>((i + 1) * X.size()));
        std::sort(rows[i].begin(), rows[i].end());
      }
      return rows;
    }

    //! Distortion of the relation graph(f) + transpose(graph(g)).
    inline double map_pair_distortion(MetricSpace const&              X,
                                      MetricSpace const&              Y,
                                      std::vector<std::size_t> const& f,
                                      std::vector<std::size_t> const& g) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t x = 0; x < f.size(); ++x) {
        pairs.emplace_back(x, f[x]);
      }
      for (std::size_t y = 0; y < g.size(); ++y) {
        pairs.emplace_back(g[y], y);
      }
      double best = 0;
      for (auto const& [a, b] : pairs) {
        for (auto const& [c, d] : pairs) {
          best = std::max(best, std::abs(X(a, c) - Y(b, d)));
        }
      }
      return best;
    }

  }  // namespace detail

  //! Lower bound: for related (x, y) the distance sets from x and from y lie
  //! within the distortion of each other in Hausdorff distance, so half of
  //! max_x min_y H(D_x, D_y) (and symmetrically) bounds d_GH from below.
  //! Upper bound: greedy matching of distance profiles refined by seeded
  //! single-partner moves; upper = distortion / 2 of the returned witness.
  template <class T>
  GHBound gh_upper_heuristic(BasicMetricSpace<T> const& Xin,
                             BasicMetricSpace<T> const& Yin,
                             std::uint64_t              seed,
                             std::size_t                iterations = 2000) {
    MetricSpace const X  = Xin.to_double();
    MetricSpace const Y  = Yin.to_double();
    std::size_t const nx = X.size(), ny = Y.size();
    require(nx > 0 && ny > 0, ErrorCode::invalid_argument, "spaces must be nonempty");
    auto const rx = detail::sorted_rows(X);
    auto const ry = detail::sorted_rows(Y);

    std::vector<double> H(nx * ny);
    parallel_for(nx, [&](std::size_t x) {
      for (std::size_t y = 0; y < ny; ++y) {
        H[x * ny + y] = detail::sorted_hausdorff(rx[x], ry[y]);
      }
    });

    GHBound                  out;
    std::vector<std::size_t> f(nx), g(ny);
    double                   lower = std::abs(X.diameter() - Y.diameter()) / 2;
    for (std::size_t x = 0; x < nx; ++x) {
      std::size_t arg = 0;
      for (std::size_t y = 1; y < ny; ++y) {
        if (H[x * ny + y] < H[x * ny + arg]) {
          arg = y;
        }
      }
      f[x]  = arg;
      lower = std::max(lower, H[x * ny + arg] / 2);
    }
    for (std::size_t y = 0; y < ny; ++y) {
      std::size_t arg = 0;
      for (std::size_t x = 1; x < nx; ++x) {
        if (H[x * ny + y] < H[arg * ny + y]) {
          arg = x;
        }
      }
      g[y]  = arg;
      lower = std::max(lower, H[arg * ny + y] / 2);
    }
    double current = detail::map_pair_distortion(X, Y, f, g);
    // Identical matrices: the identity is optimal.
    if (nx == ny && X.matrix() == Y.matrix()) {
      std::vector<std::size_t> id(nx);
      for (std::size_t i = 0; i < nx; ++i) {
        id[i] = i;
      }
      f = g   = id;
      current = 0;
    }

    std::mt19937_64                             rng(seed);
    std::uniform_int_distribution<std::size_t> side(0, 1);
    std::vector<std::size_t>                    best_f = f, best_g = g;
    double                                      best   = current;
    for (std::size_t it = 0; it < iterations && best > 0; ++it) {
      bool const  on_x  = side(rng) == 0;
      std::size_t point = std::uniform_int_distribution<std::size_t>(0, (on_x ? nx : ny) - 1)(rng);
      std::size_t partner = std::uniform_int_distribution<std::size_t>(0, (on_x ? ny : nx) - 1)(rng);
      auto&       map     = on_x ? f : g;
      std::size_t old     = map[point];
      if (old == partner) {
        continue;
      }
      map[point]      = partner;
      double const d  = detail::map_pair_distortion(X, Y, f, g);
      if (d <= current) {
        current = d;
        if (d < best) {
          best   = d;
          best_f = f;
          best_g = g;
        }
      } else {
        map[point] = old;
      }
    }
    for (std::size_t x = 0; x < nx; ++x) {
      out.witness.pairs.emplace_back(x, best_f[x]);
    }
    for (std::size_t y = 0; y < ny; ++y) {
      out.witness.pairs.emplace_back(best_g[y], y);
    }
    std::sort(out.witness.pairs.begin(), out.witness.pairs.end());
    out.witness.pairs.erase(std::unique(out.witness.pairs.begin(), out.witness.pairs.end()), out.witness.pairs.end());
    out.upper = best / 2;
    out.lower = std::min(lower, out.upper);
    return out;
  }

  namespace detail {

    inline double correspondence_distortion(MetricSpace const& X, MetricSpace const& Y, Correspondence const& R) {
      std::vector<double> worst(R.pairs.size(), 0.0);
      parallel_for(R.pairs.size(), [&](std::size_t i) {
        auto const [a, b] = R.pairs[i];
        double     w      = 0;
        for (auto const& [c, d] : R.pairs) {
          w = std::max(w, std::abs(X(a, c) - Y(b, d)));
        }
        worst[i] = w;
      });
      return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
    }

    //! argmin over targets of the worst anchor discrepancy; ties go to the
    //! lowest index.
    inline std::vector<std::size_t> anchor_assign(MetricSpace const&              X,
                                                  MetricSpace const&              Y,
                                                  std::vector<std::size_t> const& ax,
                                                  std::vector<std::size_t> const& ay) {
      std::vector<std::size_t> f(X.size());
      parallel_for(X.size(), [&](std::size_t x) {
        double      best = std::numeric_limits<double>::infinity();
        std::size_t arg  = 0;
        for (std::size_t y = 0; y < Y.size(); ++y) {
          double w = 0;
          for (std::size_t i = 0; i < ax.size() && w < best; ++i) {
            w = std::max(w, std::abs(X(x, ax[i]) - Y(y, ay[i])));
          }
          if (w < best) {
            best = w;
            arg  = y;
          }
        }
        f[x] = arg;
      });
      return f;
    }

  }  // namespace detail

  //! Lower bound on d_GH from distance profiles; with `pointed` the
  //! basepoint profiles are compared as well, bounding the pointed distance.
  template <class T>
  double gh_lower_bound(BasicMetricSpace<T> const& Xin, BasicMetricSpace<T> const& Yin, bool pointed = false) {
    MetricSpace const X  = Xin.to_double();
    MetricSpace const Y  = Yin.to_double();
    std::size_t const nx = X.size(), ny = Y.size();
    require(nx > 0 && ny > 0, ErrorCode::invalid_argument, "spaces must be nonempty");
    auto const          rx = detail::sorted_rows(X);
    auto const          ry = detail::sorted_rows(Y);
    std::vector<double> row_min(nx, std::numeric_limits<double>::infinity());
    std::vector<double> H(nx * ny);
    parallel_for(nx, [&](std::size_t x) {
      for (std::size_t y = 0; y < ny; ++y) {
        H[x * ny + y] = detail::sorted_hausdorff(rx[x], ry[y]);
        row_min[x]    = std::min(row_min[x], H[x * ny + y]);
      }
    });
    double lower = std::abs(X.diameter() - Y.diameter()) / 2;
    for (double v : row_min) {
      lower = std::max(lower, v / 2);
    }
    for (std::size_t y = 0; y < ny; ++y) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < nx; ++x) {
        m = std::min(m, H[x * ny + y]);
      }
      lower = std::max(lower, m / 2);
    }
    if (pointed) {
      require(X.basepoint() && Y.basepoint(), ErrorCode::invalid_argument, "pointed bound needs basepoints");
      lower = std::max(lower, H[*X.basepoint() * ny + *Y.basepoint()] / 2);
    }
    return lower;
  }

  //! Cheap pointed lower bound: diameters and basepoint profiles only.
  inline double gh_quick_lower_bound(MetricSpace const& X, MetricSpace const& Y) {
    require(X.basepoint() && Y.basepoint(), ErrorCode::invalid_argument, "pointed bound needs basepoints");
    auto profile = [](MetricSpace const& Z) {
      std::vector<double> r;
      for (std::size_t i = 0; i < Z.size(); ++i) {
        r.push_back(Z(*Z.basepoint(), i));
      }
      std::sort(r.begin(), r.end());
      return r;
    };
    return std::max(std::abs(X.diameter() - Y.diameter()), detail::sorted_hausdorff(profile(X), profile(Y))) / 2;
  }

  namespace detail {

    //! Profile distances H(D_x, D_y) for one x against every y, memoized.
    class ProfileCache {
     public:
      ProfileCache(MetricSpace const& X, MetricSpace const& Y)
          : _rx(sorted_rows(X)), _ry(sorted_rows(Y)), _rows(X.size()) {}

      std::vector<double> const& row(std::size_t x) {
        if (_rows[x].empty()) {
          _rows[x].resize(_ry.size());
          for (std::size_t y = 0; y < _ry.size(); ++y) {
            _rows[x][y] = sorted_hausdorff(_rx[x], _ry[y]);
          }
        }
        return _rows[x];
      }

     private:
      std::vector<std::vector<double>> _rx, _ry;
      std::vector<std::vector<double>> _rows;
    };

    //! Costs of pairing x with each y: worst anchor discrepancy and profile
    //! distance, both lower bounds on the distortion.
    inline std::vector<double> anchor_costs(MetricSpace const&              X,
                                            MetricSpace const&              Y,
                                            ProfileCache&                   profiles,
                                            std::vector<std::size_t> const& ax,
                                            std::vector<std::size_t> const& ay,
                                            std::size_t                     x) {
      std::vector<double> c = profiles.row(x);
      for (std::size_t y = 0; y < Y.size(); ++y) {
        for (std::size_t i = 0; i < ax.size(); ++i) {
          c[y] = std::max(c[y], std::abs(X(x, ax[i]) - Y(y, ay[i])));
        }
      }
      return c;
    }

  }  // namespace detail

  //! Pointed upper bound by landmark matching. Anchors grow by
  //! farthest-point sampling from the basepoint; each is paired with the
  //! target of least discrepancy (anchor distances and distance profiles,
  //! both lower bounds on the distortion of any correspondence containing
  //! the pair), and every point then follows its anchor distances. Rounds
  //! try the `restarts` cheapest partners of the first anchor, skipping
  //! partners whose discrepancy already exceeds the best distortion; two
  //! seeded rounds start from a random first anchor. Rounds stop once the
  //! bound reaches `good_enough`. upper = distortion / 2 of a
  //! correspondence containing (p, q).
  template <class T>
  GHBound gh_pointed_upper(BasicMetricSpace<T> const& Xin,
                           BasicMetricSpace<T> const& Yin,
                           std::uint64_t              seed,
                           std::size_t                restarts    = 24,
                           std::size_t                landmarks   = 8,
                           double                     good_enough = 0) {
    MetricSpace const X = Xin.to_double();
    MetricSpace const Y = Yin.to_double();
    require(X.size() > 0 && Y.size() > 0, ErrorCode::invalid_argument, "spaces must be nonempty");
    require(X.basepoint() && Y.basepoint(), ErrorCode::invalid_argument, "pointed bound needs basepoints");
    require(restarts >= 1 && landmarks >= 1, ErrorCode::invalid_argument, "need a restart and a landmark");
    std::size_t const    p = *X.basepoint(), q = *Y.basepoint();
    detail::ProfileCache profiles(X, Y);

    GHBound best;
    best.upper = std::numeric_limits<double>::infinity();

    // Completes a matching from the anchors (p, q), (x1, y1).
    auto run = [&](std::size_t x1, std::size_t y1) {
      std::vector<std::size_t> ax{p}, ay{q};
      std::vector<double>      reach(X.size());
      for (std::size_t x = 0; x < X.size(); ++x) {
        reach[x] = X(x, p);
      }
      std::size_t next = x1, partner = y1;
      while (ax.size() < landmarks && reach[next] > 0) {
        ax.push_back(next);
        ay.push_back(partner);
        for (std::size_t x = 0; x < X.size(); ++x) {
          reach[x] = std::min(reach[x], X(x, next));
        }
        next         = static_cast<std::size_t>(std::max_element(reach.begin(), reach.end()) - reach.begin());
        auto const c = detail::anchor_costs(X, Y, profiles, ax, ay, next);
        partner      = static_cast<std::size_t>(std::min_element(c.begin(), c.end()) - c.begin());
      }
      auto f = detail::anchor_assign(X, Y, ax, ay);
      auto g = detail::anchor_assign(Y, X, ay, ax);
      f[p]   = q;
      g[q]   = p;
      Correspondence R;
      for (std::size_t x = 0; x < f.size(); ++x) {
        R.pairs.emplace_back(x, f[x]);
      }
      for (std::size_t y = 0; y < g.size(); ++y) {
        R.pairs.emplace_back(g[y], y);
      }
      std::sort(R.pairs.begin(), R.pairs.end());
      R.pairs.erase(std::unique(R.pairs.begin(), R.pairs.end()), R.pairs.end());
      double const up = detail::correspondence_distortion(X, Y, R) / 2;
      if (up < best.upper) {
        best.upper   = up;
        best.witness = std::move(R);
      }
    };

    auto partners = [&](std::size_t x1) {
      auto const                                  cost = detail::anchor_costs(X, Y, profiles, {p}, {q}, x1);
      std::vector<std::pair<double, std::size_t>> c;
      for (std::size_t y = 0; y < Y.size(); ++y) {
        c.emplace_back(cost[y], y);
      }
      std::sort(c.begin(), c.end());
      return c;
    };

    std::size_t x1 = 0;
    for (std::size_t x = 0; x < X.size(); ++x) {
      if (X(x, p) > X(x1, p)) {
        x1 = x;
      }
    }
    if (X(x1, p) == 0) {
      run(x1, q);
    } else {
      auto const c = partners(x1);
      for (std::size_t i = 0; i < std::min(restarts, c.size()) && best.upper > good_enough; ++i) {
        if (c[i].first >= 2 * best.upper) {
          break;
        }
        run(x1, c[i].second);
      }
      std::mt19937_64 rng(seed);
      for (int round = 0; round < 2 && best.upper > good_enough; ++round) {
        std::size_t const x = std::uniform_int_distribution<std::size_t>(0, X.size() - 1)(rng);
        if (X(x, p) > 0) {
          run(x, partners(x).front().second);
        }
      }
    }
    best.lower = std::min(gh_quick_lower_bound(X, Y), best.upper);
    return best;
  }

  ////////////////////////////////////////////////////////////////////////
  // Pointed epsilon-approximations
  ////////////////////////////////////////////////////////////////////////

  struct GHAReport {
    bool                                               pass          = false;
    bool                                               basepoint_ok  = false;
    bool                                               defined_on_ball = true;
    double                                             isometric_defect = 0;
    std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
    double                                             onto_defect = 0;  // max over the target ball of the gap to the image
    std::optional<std::size_t>                         worst_target;
    std::size_t                                        domain_size = 0;
  };

  //! Checks f : B_{1/eps}(p) -> (Y, q) against both approximation conditions
  //! with open balls. `f[x]` may be empty outside the domain ball.
  template <class T>
  GHAReport eps_gha_check(std::vector<std::optional<std::size_t>> const& f,
                          BasicMetricSpace<T> const&                     X,
                          BasicMetricSpace<T> const&                     Y,
                          double                                         eps) {
    require(eps > 0, ErrorCode::invalid_argument, "epsilon must be positive");
    require(X.basepoint() && Y.basepoint(), ErrorCode::invalid_argument, "approximations are pointed");
    require(f.size() == X.size(), ErrorCode::invalid_argument, "map must list one entry per point");
    GHAReport         r;
    std::size_t const p      = *X.basepoint();
    std::size_t const q      = *Y.basepoint();
    auto const        domain = X.ball(p, 1 / eps);
    r.domain_size            = domain.size();
    for (auto x : domain) {
      if (!f[x] || *f[x] >= Y.size()) {
        r.defined_on_ball = false;
      }
    }
    r.basepoint_ok = f[p] && *f[p] == q;
    if (!r.defined_on_ball) {
      return r;
    }
    for (auto a : domain) {
      for (auto b : domain) {
        double d = std::abs(as_double(X(a, b)) - as_double(Y(*f[a], *f[b])));
        if (d > r.isometric_defect) {
          r.isometric_defect = d;
          r.worst_pair       = std::pair{a, b};
        }
      }
    }
    bool onto = true;
    for (auto y : Y.ball(q, 1 / eps)) {
      double gap = std::numeric_limits<double>::infinity();
      for (auto x : domain) {
        gap = std::min(gap, as_double(Y(y, *f[x])));
      }
      if (!(gap < eps)) {
        onto = false;
      }
      if (gap > r.onto_defect || !r.worst_target) {
        r.onto_defect  = gap;
        r.worst_target = y;
      }
    }
    r.pass = r.basepoint_ok && onto && r.isometric_defect < eps;
    return r;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_METRIC_HPP_
