#ifndef COLLAPSELAB_STRATIFY_HPP_
#define COLLAPSELAB_STRATIFY_HPP_

// Stratification probes on finite pointed spaces: two-scale
// self-similarity at dyadic scales, discrete lines, cone splitting,
// almost-Pythagorean factor extraction and the noncollapsing radius.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "error.hpp"
#include "fixtures.hpp"
#include "metric.hpp"
#include "parallel.hpp"

namespace collapselab {

  namespace detail {

    //! lambda * B_r(x), pointed at x.
    inline MetricSpace scaled_ball(MetricSpace const& X, std::size_t x, double r, double lambda) {
      auto const          idx = X.ball(x, r);
      std::size_t const   m   = idx.size();
      std::vector<double> d(m * m);
      std::size_t         base = 0;
      for (std::size_t a = 0; a < m; ++a) {
        if (idx[a] == x) {
          base = a;
        }
        for (std::size_t b = 0; b < m; ++b) {
          d[a * m + b] = lambda * X(idx[a], idx[b]);
        }
      }
      return MetricSpace(m, std::move(d), base);
    }

    //! Point of least eccentricity (lowest index on ties).
    inline std::size_t metric_center(MetricSpace const& X) {
      std::size_t best = 0;
      double      ecc  = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < X.size(); ++i) {
        double e = 0;
        for (std::size_t j = 0; j < X.size(); ++j) {
          e = std::max(e, X(i, j));
        }
        if (e < ecc) {
          ecc  = e;
          best = i;
        }
      }
      return best;
    }

    //! Farthest-point order from `start`, truncated to `count` points.
    inline std::vector<std::size_t> farthest_point_sample(MetricSpace const& X, std::size_t start, std::size_t count) {
      std::vector<std::size_t> out{start};
      std::vector<double>      reach(X.size());
      for (std::size_t i = 0; i < X.size(); ++i) {
        reach[i] = X(start, i);
      }
      while (out.size() < std::min(count, X.size())) {
        auto next = static_cast<std::size_t>(std::max_element(reach.begin(), reach.end()) - reach.begin());
        if (reach[next] <= 0) {
          break;
        }
        out.push_back(next);
        for (std::size_t i = 0; i < X.size(); ++i) {
          reach[i] = std::min(reach[i], X(next, i));
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    }

  }  // namespace detail

  ////////////////////////////////////////////////////////////////////////
  // Dyadic scales
  ////////////////////////////////////////////////////////////////////////

  struct SelfSimilarity {
    double      upper = 0;  // pointed GH upper bound
    double      lower = 0;  // certified lower bound
    std::size_t outer_size = 0;
    std::size_t inner_size = 0;
  };

  //! Compares (1/r) B_r(x) with (2/r) B_{r/2}(x), both pointed at x.
  inline SelfSimilarity self_similarity(MetricSpace const& X, std::size_t x, double r, std::uint64_t seed, std::size_t restarts = 24) {
    require(x < X.size(), ErrorCode::invalid_argument, "center out of range");
    require(r > 0, ErrorCode::invalid_argument, "scale must be positive");
    auto const     A = detail::scaled_ball(X, x, r, 1 / r);
    auto const     B = detail::scaled_ball(X, x, r / 2, 2 / r);
    auto const     h = gh_pointed_upper(A, B, seed, restarts);
    SelfSimilarity s{h.upper, h.lower, A.size(), B.size()};
    return s;
  }

  struct ScaleVerdict {
    std::size_t alpha = 0;
    double      radius = 0;
    double      score = 0;
    double      lower = 0;
    bool        good = false;
    bool        skipped = false;
    std::size_t outer_size = 0;
    std::size_t inner_size = 0;
  };

  struct ScaleClassification {
    std::size_t               basepoint = 0;
    double                    epsilon = 0;
    std::vector<ScaleVerdict> scales;
    std::vector<std::string>  warnings;

    [[nodiscard]] std::size_t bad_count() const {
      return static_cast<std::size_t>(
          std::count_if(scales.begin(), scales.end(), [](auto const& v) { return !v.skipped && !v.good; }));
    }
  };

  struct ScaleOptions {
    std::uint64_t seed = 0;
    std::size_t   restarts = 24;
    std::size_t   min_points = 1;  // scales whose inner ball is smaller are skipped
  };

  //! Score at r_alpha = 2^{-alpha} is the self-similarity upper bound; a
  //! scale is good when the score is below eps.
  inline ScaleClassification good_bad_scales(MetricSpace const& X,
                                             std::size_t        x,
                                             double             eps,
                                             std::size_t        alpha_max,
                                             ScaleOptions const& opt = {}) {
    require(x < X.size(), ErrorCode::invalid_argument, "basepoint out of range");
    require(eps > 0, ErrorCode::invalid_argument, "epsilon must be positive");
    ScaleClassification out;
    out.basepoint = x;
    out.epsilon   = eps;
    out.scales.resize(alpha_max + 1);
    parallel_for(alpha_max + 1, [&](std::size_t alpha) {
      double const  r = std::ldexp(1.0, -static_cast<int>(alpha));
      ScaleVerdict& v = out.scales[alpha];
      v.alpha         = alpha;
      v.radius        = r;
      v.inner_size    = X.ball(x, r / 2).size();
      if (v.inner_size < opt.min_points) {
        v.skipped = true;
        return;
      }
      auto const s = self_similarity(X, x, r, opt.seed, opt.restarts);
      v.score      = s.upper;
      v.lower      = s.lower;
      v.outer_size = s.outer_size;
      v.good       = s.upper < eps;
    });
    for (auto const& v : out.scales) {
      if (v.skipped) {
        out.warnings.push_back("scale " + std::to_string(v.alpha) + " skipped: inner ball below the point minimum");
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Discrete lines
  ////////////////////////////////////////////////////////////////////////

  struct EpsLine {
    std::vector<std::size_t> points;  // x_0 .. x_m in order
    double                   span = 0;
    double                   excess = 0;  // path length minus span
    bool                     through_basepoint = false;
  };

  struct LineOptions {
    std::size_t pair_cap = 32;
    std::size_t max_lines = 16;
  };

  namespace detail {

    //! Shortest a -> b path through points of the excess ellipse with hops
    //! below `hop`. Returns the path when one exists.
    inline std::optional<std::vector<std::size_t>> discrete_geodesic(MetricSpace const& X,
                                                                     std::size_t        a,
                                                                     std::size_t        b,
                                                                     double             hop,
                                                                     double             slack) {
      double const             D = X(a, b);
      std::vector<std::size_t> nodes;
      for (std::size_t x = 0; x < X.size(); ++x) {
        if (X(a, x) + X(x, b) - D < slack || x == a || x == b) {
          nodes.push_back(x);
        }
      }
      std::size_t const   m = nodes.size();
      std::vector<double> dist(m, std::numeric_limits<double>::infinity());
      std::vector<std::size_t> prev(m, m);
      std::vector<bool>        done(m, false);
      auto const               ia = static_cast<std::size_t>(std::find(nodes.begin(), nodes.end(), a) - nodes.begin());
      auto const               ib = static_cast<std::size_t>(std::find(nodes.begin(), nodes.end(), b) - nodes.begin());
      dist[ia]                    = 0;
      for (std::size_t round = 0; round < m; ++round) {
        std::size_t u = m;
        for (std::size_t i = 0; i < m; ++i) {
          if (!done[i] && dist[i] < std::numeric_limits<double>::infinity() && (u == m || dist[i] < dist[u])) {
            u = i;
          }
        }
        if (u == m || u == ib) {
          break;
        }
        done[u] = true;
        for (std::size_t v = 0; v < m; ++v) {
          double const w = X(nodes[u], nodes[v]);
          if (!done[v] && w < hop && dist[u] + w < dist[v]) {
            dist[v] = dist[u] + w;
            prev[v] = u;
          }
        }
      }
      if (!(dist[ib] < std::numeric_limits<double>::infinity())) {
        return std::nullopt;
      }
      std::vector<std::size_t> path;
      for (std::size_t v = ib; v != m; v = prev[v]) {
        path.push_back(nodes[v]);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }

    inline double path_length(MetricSpace const& X, std::vector<std::size_t> const& path) {
      double s = 0;
      for (std::size_t i = 1; i < path.size(); ++i) {
        s += X(path[i - 1], path[i]);
      }
      return s;
    }

  }  // namespace detail

  //! eps-lines: chains with consecutive gaps below eps * span and
  //! |d(x_i, x_j) - sum of gaps| < eps * span for all i < j. Shortest
  //! paths make the pairwise condition equivalent to total excess below
  //! eps * span. Lines through the basepoint come first, then by span.
  inline std::vector<EpsLine> line_detect(MetricSpace const&         X,
                                          double                     eps,
                                          std::optional<std::size_t> basepoint = std::nullopt,
                                          LineOptions const&         opt = {}) {
    require(eps > 0, ErrorCode::invalid_argument, "epsilon must be positive");
    std::size_t const n = X.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (X(a, b) > 0) {
          pairs.emplace_back(a, b);
        }
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [&](auto const& u, auto const& v) { return X(u.first, u.second) > X(v.first, v.second); });

    auto build = [&](std::size_t a, std::size_t b, std::optional<std::size_t> via) -> std::optional<EpsLine> {
      double const D = X(a, b);
      std::vector<std::size_t> path;
      if (via) {
        auto left  = detail::discrete_geodesic(X, a, *via, eps * D, eps * D);
        auto right = detail::discrete_geodesic(X, *via, b, eps * D, eps * D);
        if (!left || !right) {
          return std::nullopt;
        }
        path = *left;
        path.insert(path.end(), right->begin() + 1, right->end());
      } else {
        auto p = detail::discrete_geodesic(X, a, b, eps * D, eps * D);
        if (!p) {
          return std::nullopt;
        }
        path = std::move(*p);
      }
      EpsLine line;
      line.excess = detail::path_length(X, path) - D;
      if (!(line.excess < eps * D)) {
        return std::nullopt;
      }
      line.span              = D;
      line.through_basepoint = basepoint && std::find(path.begin(), path.end(), *basepoint) != path.end();
      line.points            = std::move(path);
      return line;
    };

    std::vector<EpsLine> through, others;
    if (basepoint) {
      require(*basepoint < n, ErrorCode::invalid_argument, "basepoint out of range");
      std::size_t const p = *basepoint;
      for (auto const& [a, b] : pairs) {
        if (through.size() >= opt.pair_cap) {
          break;
        }
        if (X(a, p) + X(p, b) - X(a, b) < eps * X(a, b)) {
          if (auto l = build(a, b, a == p || b == p ? std::nullopt : std::optional{p})) {
            l->through_basepoint = true;
            through.push_back(std::move(*l));
          }
        }
      }
    }
    std::size_t tried = 0;
    for (auto const& [a, b] : pairs) {
      if (tried++ >= opt.pair_cap) {
        break;
      }
      if (auto l = build(a, b, std::nullopt)) {
        if (!l->through_basepoint) {
          others.push_back(std::move(*l));
        }
      }
    }
    through.insert(through.end(), others.begin(), others.end());
    if (through.size() > opt.max_lines) {
      through.resize(opt.max_lines);
    }
    return through;
  }

  ////////////////////////////////////////////////////////////////////////
  // Splitting
  ////////////////////////////////////////////////////////////////////////

  struct SplitFactor {
    std::size_t         a = 0, b = 0;  // near-line endpoints
    double              span = 0;
    double              excess = 0;  // d(a, p) + d(p, b) - d(a, b) in the current residual
    double              defect = 0;  // max |q - d_res^2| on the sample
    std::vector<double> coordinate;  // h, normalized so h(p) = 0
  };

  struct CandidateScore {
    std::size_t index = 0;
    double      score = 0;
    double      lower = 0;
    bool        good = false;
  };

  struct SplittingReport {
    std::size_t                 k = 0;
    std::size_t                 k_cap = 0;
    double                      epsilon = 0;
    std::size_t                 basepoint = 0;
    double                      diameter = 0;
    std::vector<SplitFactor>    factors;
    std::optional<SplitFactor>  rejected;  // first factor that failed a test
    std::vector<std::size_t>    residual_sample;
    MetricSpace                 residual;
    std::vector<CandidateScore> candidates;
  };

  struct SplitOptions {
    std::size_t defect_sample = 400;
  };

  namespace detail {

    //! Coordinate h(x) = (rho(a,x)^2 - rho(b,x)^2) / (2 rho(a,b)) shifted so
    //! h(p) = 0; q = rho^2 - (dh)^2 is the Pythagorean residual. The defect
    //! compares q with the square of the shortest-path closure of sqrt(q+)
    //! on the sample, which vanishes exactly on Euclidean products.
    inline SplitFactor pythagorean_factor(std::vector<double> const&      rho2,
                                          std::size_t                     n,
                                          std::size_t                     a,
                                          std::size_t                     b,
                                          std::size_t                     p,
                                          std::vector<std::size_t> const& sample) {
      SplitFactor f;
      f.a    = a;
      f.b    = b;
      f.span = std::sqrt(rho2[a * n + b]);
      f.excess = std::sqrt(rho2[a * n + p]) + std::sqrt(rho2[p * n + b]) - f.span;
      f.coordinate.resize(n);
      for (std::size_t x = 0; x < n; ++x) {
        f.coordinate[x] = (rho2[a * n + x] - rho2[b * n + x]) / (2 * f.span);
      }
      double const hp = f.coordinate[p];
      for (auto& h : f.coordinate) {
        h -= hp;
      }
      std::size_t const   m = sample.size();
      std::vector<double> q(m * m), c(m * m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          double const dh = f.coordinate[sample[i]] - f.coordinate[sample[j]];
          q[i * m + j]    = rho2[sample[i] * n + sample[j]] - dh * dh;
          c[i * m + j]    = std::sqrt(std::max(0.0, q[i * m + j]));
        }
      }
      for (std::size_t k = 0; k < m; ++k) {
        parallel_for(m, [&](std::size_t i) {
          double const cik = c[i * m + k];
          for (std::size_t j = 0; j < m; ++j) {
            c[i * m + j] = std::min(c[i * m + j], cik + c[k * m + j]);
          }
        });
      }
      for (std::size_t i = 0; i < m * m; ++i) {
        f.defect = std::max(f.defect, std::abs(q[i] - c[i] * c[i]));
      }
      return f;
    }

    inline void remove_factor(std::vector<double>& rho2, std::size_t n, std::vector<double> const& h) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          double const dh = h[x] - h[y];
          rho2[x * n + y] = std::max(0.0, rho2[x * n + y] - dh * dh);
        }
      }
    }

    inline MetricSpace residual_space(std::vector<double> const& rho2, std::size_t n, std::optional<std::size_t> base) {
      std::vector<double> d(rho2.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = std::sqrt(rho2[i]);
      }
      return MetricSpace(n, std::move(d), base);
    }

    inline std::vector<std::size_t> slice(std::vector<SplitFactor> const& factors, std::size_t n, double tol) {
      std::vector<std::size_t> out;
      for (std::size_t x = 0; x < n; ++x) {
        bool in = true;
        for (auto const& f : factors) {
          in = in && std::abs(f.coordinate[x]) < tol;
        }
        if (in) {
          out.push_back(x);
        }
      }
      return out;
    }

  }  // namespace detail

  //! Greedy extraction of almost-Pythagorean R-factors. Each round takes,
  //! among pairs with both ends at least half the residual radius from p,
  //! the one maximizing span - 2 * excess; the choice does not depend on
  //! eps. A factor is accepted when its span is at least diam / 2, its
  //! excess is below eps * diam and its defect below eps * diam^2; the first
  //! rejection stops the search, so k is monotone in eps.
  inline SplittingReport splitting_detect(MetricSpace const& X, std::size_t k_cap, double eps, SplitOptions const& opt = {}) {
    require(eps > 0, ErrorCode::invalid_argument, "epsilon must be positive");
    SplittingReport r;
    r.k_cap   = k_cap;
    r.epsilon = eps;
    std::size_t const n = X.size();
    if (n == 0) {
      return r;
    }
    std::size_t const p = X.basepoint() ? *X.basepoint() : detail::metric_center(X);
    r.basepoint         = p;
    r.diameter          = X.diameter();
    std::vector<double> rho2(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
      rho2[i] = X.matrix()[i] * X.matrix()[i];
    }
    auto const sample = detail::farthest_point_sample(X, p, opt.defect_sample);

    while (r.factors.size() < k_cap && r.diameter > 0) {
      double R = 0;
      for (std::size_t x = 0; x < n; ++x) {
        R = std::max(R, std::sqrt(rho2[p * n + x]));
      }
      std::vector<std::size_t> far;
      for (std::size_t x = 0; x < n; ++x) {
        if (std::sqrt(rho2[p * n + x]) >= R / 2) {
          far.push_back(x);
        }
      }
      double      best = -std::numeric_limits<double>::infinity();
      std::size_t ba = n, bb = n;
      for (std::size_t i = 0; i < far.size(); ++i) {
        for (std::size_t j = i + 1; j < far.size(); ++j) {
          std::size_t const a = far[i], b = far[j];
          double const      d = std::sqrt(rho2[a * n + b]);
          double const      e = std::sqrt(rho2[a * n + p]) + std::sqrt(rho2[p * n + b]) - d;
          if (d - 2 * e > best) {
            best = d - 2 * e;
            ba   = a;
            bb   = b;
          }
        }
      }
      if (ba == n || !(std::sqrt(rho2[ba * n + bb]) >= r.diameter / 2)) {
        break;
      }
      auto f = detail::pythagorean_factor(rho2, n, ba, bb, p, sample);
      if (!(f.excess < eps * r.diameter && f.defect < eps * r.diameter * r.diameter)) {
        r.rejected = std::move(f);
        break;
      }
      detail::remove_factor(rho2, n, f.coordinate);
      r.factors.push_back(std::move(f));
    }
    r.k               = r.factors.size();
    r.residual        = detail::residual_space(rho2, n, p);
    r.residual_sample = detail::slice(r.factors, n, eps * r.diameter);
    return r;
  }

  struct ConeSplitOptions {
    double        epsilon = 0.05;
    double        radius = 1;  // scale of the apex test
    std::size_t   k_cap = 8;
    std::uint64_t seed = 0;
    std::size_t   restarts = 24;
    SplitOptions  split;
  };

  //! Scores every candidate by self-similarity at `radius`. Among good
  //! candidates the farthest pair in the current residual, when farther
  //! apart than eps * radius, contributes an R-factor along its near-line;
  //! the residual then loses that coordinate and the search repeats.
  inline SplittingReport cone_split_check(MetricSpace const&              X,
                                          std::vector<std::size_t> const& candidates,
                                          ConeSplitOptions const&         opt = {}) {
    require(!candidates.empty(), ErrorCode::invalid_argument, "need at least one apex candidate");
    require(opt.epsilon > 0 && opt.radius > 0, ErrorCode::invalid_argument, "epsilon and radius must be positive");
    std::size_t const n = X.size();
    SplittingReport   r;
    r.k_cap     = opt.k_cap;
    r.epsilon   = opt.epsilon;
    r.basepoint = candidates.front();
    r.diameter  = X.diameter();
    r.candidates.resize(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i) {
      require(candidates[i] < n, ErrorCode::invalid_argument, "apex candidate out of range");
      auto const s    = self_similarity(X, candidates[i], opt.radius, opt.seed + i, opt.restarts);
      r.candidates[i] = CandidateScore{candidates[i], s.upper, s.lower, s.upper < opt.epsilon};
    });
    std::vector<std::size_t> good;
    for (auto const& c : r.candidates) {
      if (c.good) {
        good.push_back(c.index);
      }
    }
    std::vector<double> rho2(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
      rho2[i] = X.matrix()[i] * X.matrix()[i];
    }
    std::size_t const p = good.empty() ? candidates.front() : good.front();
    r.basepoint         = p;
    auto const sample   = detail::farthest_point_sample(X, p, opt.split.defect_sample);
    while (r.factors.size() < opt.k_cap) {
      double      best = 0;
      std::size_t ba = n, bb = n;
      for (std::size_t i = 0; i < good.size(); ++i) {
        for (std::size_t j = i + 1; j < good.size(); ++j) {
          double const d = std::sqrt(rho2[good[i] * n + good[j]]);
          if (d > best) {
            best = d;
            ba   = good[i];
            bb   = good[j];
          }
        }
      }
      if (ba == n || !(best > opt.epsilon * opt.radius)) {
        break;
      }
      auto f = detail::pythagorean_factor(rho2, n, ba, bb, ba, sample);
      detail::remove_factor(rho2, n, f.coordinate);
      r.factors.push_back(std::move(f));
    }
    r.k               = r.factors.size();
    r.residual        = detail::residual_space(rho2, n, p);
    r.residual_sample = detail::slice(r.factors, n, opt.epsilon * opt.radius);
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Noncollapsing radius
  ////////////////////////////////////////////////////////////////////////

  inline constexpr double noncollapse_threshold = 1e-6;

  struct NoncollapseGrid {
    std::vector<double>                     radii;
    double                                  spacing = 0.1;  // reference lattice spacing
    std::optional<std::vector<std::size_t>> centers;        // default: B_1(z)
    std::uint64_t                           seed = 0;
  };

  struct NoncollapseRadius {
    double                     value = 0;
    std::optional<std::size_t> witness;
    double                     witness_radius = 0;
    double                     witness_bound = 0;
    double                     best_ratio = std::numeric_limits<double>::infinity();  // min upper / r over balls passing the cheap lower bound
    std::optional<std::string> note;
  };

  //! Largest grid radius r with a center z' in B_1(z) whose pointed ball
  //! B_r(z') has GH upper bound below 1e-6 r to the reference lattice ball
  //! of dimension l. With no certified ball the value is 0 and the note
  //! reports the best ratio reached.
  inline NoncollapseRadius noncollapse_radius(MetricSpace const& X, std::size_t z, std::size_t l, NoncollapseGrid const& grid) {
    require(z < X.size(), ErrorCode::invalid_argument, "center out of range");
    require(l >= 1 && grid.spacing > 0, ErrorCode::invalid_argument, "need a dimension and a lattice spacing");
    auto const centers = grid.centers ? *grid.centers : X.ball(z, 1.0);
    auto       radii   = grid.radii;
    std::sort(radii.rbegin(), radii.rend());
    NoncollapseRadius                             out;
    std::vector<std::pair<double, std::size_t>> closest;  // least cheap bound per radius
    for (double r : radii) {
      require(r > 0, ErrorCode::invalid_argument, "grid radii must be positive");
      auto const          ref = fixtures::lattice_ball(l, r, grid.spacing);
      std::vector<double> bound(centers.size(), std::numeric_limits<double>::infinity());
      std::vector<double> cheap(centers.size());
      parallel_for(centers.size(), [&](std::size_t i) {
        require(centers[i] < X.size(), ErrorCode::invalid_argument, "grid center out of range");
        auto const B = detail::scaled_ball(X, centers[i], r, 1.0);
        cheap[i]     = gh_quick_lower_bound(B, ref);
        if (cheap[i] < noncollapse_threshold * r) {
          bound[i] = gh_pointed_upper(B, ref, grid.seed + i, 24, 8, noncollapse_threshold * r / 2).upper;
        }
      });
      if (!centers.empty()) {
        closest.emplace_back(r, centers[static_cast<std::size_t>(std::min_element(cheap.begin(), cheap.end()) - cheap.begin())]);
      }
      for (std::size_t i = 0; i < centers.size(); ++i) {
        out.best_ratio = std::min(out.best_ratio, bound[i] / r);
        if (!out.witness && bound[i] < noncollapse_threshold * r) {
          out.value          = r;
          out.witness        = centers[i];
          out.witness_radius = r;
          out.witness_bound  = bound[i];
        }
      }
      if (out.witness) {
        return out;
      }
    }
    // Nothing certified: bound the ball that came closest at each radius.
    for (auto const& [r, c] : closest) {
      auto const B   = detail::scaled_ball(X, c, r, 1.0);
      out.best_ratio = std::min(out.best_ratio, gh_pointed_upper(B, fixtures::lattice_ball(l, r, grid.spacing), grid.seed).upper / r);
    }
    if (!radii.empty()) {
      out.note = "no grid ball certified below 1e-6 r; best achievable ratio " + std::to_string(out.best_ratio);
    }
    return out;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_STRATIFY_HPP_
