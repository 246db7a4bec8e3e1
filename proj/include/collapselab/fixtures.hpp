#ifndef COLLAPSELAB_FIXTURES_HPP_
#define COLLAPSELAB_FIXTURES_HPP_

// Deterministic sampled model spaces. Each sample is pointed at point 0
// (origin, torus origin or cone tip) and keeps its coordinates.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "error.hpp"
#include "metric.hpp"

namespace collapselab::fixtures {

  namespace detail {

    inline MetricSpace from_points(std::vector<std::vector<double>> const& pts, auto&& dist) {
      std::size_t const   n = pts.size();
      std::vector<double> d(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          d[i * n + j] = d[j * n + i] = dist(pts[i], pts[j]);
        }
      }
      MetricSpace X(n, std::move(d), 0);
      X.set_coordinates(pts);
      return X;
    }

    inline double euclidean(std::vector<double> const& a, std::vector<double> const& b) {
      double s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
      }
      return std::sqrt(s);
    }

  }  // namespace detail

  //! Origin plus count - 1 uniform points of the open Euclidean ball B_r in R^k.
  inline MetricSpace euclidean_ball_sample(std::size_t k, double r, std::size_t count, std::uint64_t seed) {
    require(k >= 1 && count >= 1 && r > 0, ErrorCode::invalid_argument, "ball sample needs k, count, r > 0");
    std::mt19937_64                        rng(seed);
    std::uniform_real_distribution<double> u(-r, r);
    std::vector<std::vector<double>>       pts{std::vector<double>(k, 0.0)};
    while (pts.size() < count) {
      std::vector<double> p(k);
      for (auto& c : p) {
        c = u(rng);
      }
      if (detail::euclidean(p, pts[0]) < r) {
        pts.push_back(std::move(p));
      }
    }
    return detail::from_points(pts, detail::euclidean);
  }

  //! Distance on R^k / (L_1 Z x ... x L_k Z); the nearest deck translate of
  //! fundamental-domain points lies in the window {-1, 0, 1}^k.
  inline double torus_distance(std::vector<double> const& a, std::vector<double> const& b, std::vector<double> const& sides) {
    double s = 0;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int shift = -1; shift <= 1; ++shift) {
        best = std::min(best, std::abs(a[i] - b[i] + shift * sides[i]));
      }
      s += best * best;
    }
    return std::sqrt(s);
  }

  inline MetricSpace flat_torus_sample(std::vector<double> const& sides, std::size_t count, std::uint64_t seed) {
    require(!sides.empty() && count >= 1, ErrorCode::invalid_argument, "torus sample needs sides and count");
    for (double L : sides) {
      require(L > 0, ErrorCode::invalid_argument, "torus side lengths must be positive");
    }
    std::mt19937_64                  rng(seed);
    std::vector<std::vector<double>> pts{std::vector<double>(sides.size(), 0.0)};
    while (pts.size() < count) {
      std::vector<double> p;
      for (double L : sides) {
        p.push_back(std::uniform_real_distribution<double>(0.0, L)(rng));
      }
      pts.push_back(std::move(p));
    }
    return detail::from_points(pts, [&](auto const& a, auto const& b) { return torus_distance(a, b, sides); });
  }

  //! Regular grid on the torus, `per_side` points per direction.
  inline MetricSpace flat_torus_grid(std::vector<double> const& sides, std::size_t per_side) {
    require(!sides.empty() && per_side >= 1, ErrorCode::invalid_argument, "torus grid needs sides and points");
    std::vector<std::vector<double>> pts;
    std::size_t                      total = 1;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      total *= per_side;
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<double> p;
      std::size_t         rest = idx;
      for (double L : sides) {
        p.push_back(L * static_cast<double>(rest % per_side) / static_cast<double>(per_side));
        rest /= per_side;
      }
      pts.push_back(std::move(p));
    }
    return detail::from_points(pts, [&](auto const& a, auto const& b) { return torus_distance(a, b, sides); });
  }

  //! Cone metric over a base at radii s, t with base distance theta:
  //! law of cosines when theta < pi, otherwise through the tip.
  inline double cone_distance(double s, double t, double theta) {
    if (theta >= std::numbers::pi) {
      return s + t;
    }
    return std::sqrt(std::max(0.0, s * s + t * t - 2 * s * t * std::cos(theta)));
  }

  //! Two-dimensional cone of total angle `angle` truncated at radius r; the
  //! coordinates are polar (rho, phi) with phi in [0, angle).
  inline MetricSpace cone_sample(double angle, double r, std::size_t count, std::uint64_t seed) {
    require(angle > 0 && r > 0 && count >= 1, ErrorCode::invalid_argument, "cone sample needs angle, r, count > 0");
    std::mt19937_64                        rng(seed);
    std::uniform_real_distribution<double> rho(0.0, r), phi(0.0, angle);
    std::vector<std::vector<double>>       pts{{0.0, 0.0}};
    while (pts.size() < count) {
      pts.push_back({rho(rng), phi(rng)});
    }
    return detail::from_points(pts, [angle](auto const& a, auto const& b) {
      double dphi = std::abs(a[1] - b[1]);
      dphi        = std::min(dphi, angle - dphi);
      return cone_distance(a[0], b[0], dphi);
    });
  }

  //! Cone over a finite base truncated to the given radii; point 0 is the tip,
  //! then (radius, base point) pairs in radius-major order.
  inline MetricSpace cone_over(MetricSpace const& base, std::vector<double> const& radii) {
    std::vector<std::vector<double>> pts{{0.0, -1.0}};
    for (double s : radii) {
      require(s > 0, ErrorCode::invalid_argument, "cone radii must be positive");
      for (std::size_t y = 0; y < base.size(); ++y) {
        pts.push_back({s, static_cast<double>(y)});
      }
    }
    return detail::from_points(pts, [&](auto const& a, auto const& b) {
      if (a[1] < 0 || b[1] < 0) {
        return a[0] + b[0];
      }
      return cone_distance(a[0], b[0], base(static_cast<std::size_t>(a[1]), static_cast<std::size_t>(b[1])));
    });
  }

  //! n equally spaced points on a circle of the given length, intrinsic metric.
  inline MetricSpace circle_net(std::size_t n, double length) {
    require(n >= 1 && length > 0, ErrorCode::invalid_argument, "circle net needs n, length > 0");
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({length * static_cast<double>(i) / static_cast<double>(n)});
    }
    return detail::from_points(pts, [length](auto const& a, auto const& b) {
      double d = std::abs(a[0] - b[0]);
      return std::min(d, length - d);
    });
  }

  //! R x tripod: t in the given line samples, a tripod point at distance s
  //! along leg l; the tripod is three unit-speed rays glued at a vertex.
  inline MetricSpace line_times_tripod(std::vector<double> const& line, std::vector<double> const& leg) {
    std::vector<std::vector<double>> pts;
    for (double t : line) {
      pts.push_back({t, 0.0, 0.0});
      for (int l = 0; l < 3; ++l) {
        for (double s : leg) {
          if (s > 0) {
            pts.push_back({t, static_cast<double>(l), s});
          }
        }
      }
    }
    // Base the sample at (0, vertex) when present.
    auto X = detail::from_points(pts, [](auto const& a, auto const& b) {
      double const dt = a[0] - b[0];
      double const ds = (a[1] == b[1] || a[2] == 0 || b[2] == 0) ? std::abs(a[2] - b[2]) : a[2] + b[2];
      return std::hypot(dt, ds);
    });
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i][0] == 0 && pts[i][2] == 0) {
        X.set_basepoint(i);
      }
    }
    return X;
  }

  //! l^2 product; point (i, j) has index i * |Y| + j and the basepoint pair
  //! is the product basepoint.
  template <class T>
  BasicMetricSpace<double> product(BasicMetricSpace<T> const& X, BasicMetricSpace<T> const& Y) {
    std::size_t const   nx = X.size(), ny = Y.size(), n = nx * ny;
    std::vector<double> d(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        double dx = as_double(X(a / ny, b / ny));
        double dy = as_double(Y(a % ny, b % ny));
        d[a * n + b] = std::hypot(dx, dy);
      }
    }
    std::optional<std::size_t> base;
    if (X.basepoint() && Y.basepoint()) {
      base = *X.basepoint() * ny + *Y.basepoint();
    }
    return BasicMetricSpace<double>(n, std::move(d), base);
  }

  template <class T, class S>
  BasicMetricSpace<T> rescale(BasicMetricSpace<T> const& X, S const& lambda) {
    require(lambda > 0, ErrorCode::invalid_argument, "scale factor must be positive");
    std::vector<T> d = X.matrix();
    for (auto& x : d) {
      x = T(x * lambda);
    }
    BasicMetricSpace<T> out(X.size(), std::move(d), X.basepoint());
    out.set_coordinates(X.coordinates());
    return out;
  }

  //! n equally spaced points on [0, length], pointed at the middle index.
  inline MetricSpace segment_net(std::size_t n, double length) {
    require(n >= 2 && length > 0, ErrorCode::invalid_argument, "segment net needs n >= 2, length > 0");
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({length * static_cast<double>(i) / static_cast<double>(n - 1)});
    }
    auto X = detail::from_points(pts, [](auto const& a, auto const& b) { return std::abs(a[0] - b[0]); });
    X.set_basepoint(n / 2);
    return X;
  }

  //! Radii 2^{-(j + 1/2)/m} for j = 0 .. m * octaves - 1: closed under
  //! doubling up to the ends and away from every dyadic ball radius, so
  //! open-ball membership is insensitive to rounding.
  inline std::vector<double> dyadic_radii(std::size_t per_octave, std::size_t octaves) {
    require(per_octave >= 1 && octaves >= 1, ErrorCode::invalid_argument, "need radii per octave and octaves");
    std::vector<double> out;
    for (std::size_t j = 0; j < per_octave * octaves; ++j) {
      out.push_back(std::exp2(-(static_cast<double>(j) + 0.5) / static_cast<double>(per_octave)));
    }
    return out;
  }

  //! Log-polar grid on the cone of total angle `angle` about its tip,
  //! radius below 1; invariant under doubling away from the deepest shell.
  //! Coordinates (rho, phi).
  inline MetricSpace log_polar_cone(double angle, std::size_t per_octave, std::size_t octaves, std::size_t per_turn) {
    require(angle > 0 && per_turn >= 1, ErrorCode::invalid_argument, "cone grid needs angle and directions");
    std::vector<std::vector<double>> pts{{0.0, 0.0}};
    for (double rho : dyadic_radii(per_octave, octaves)) {
      for (std::size_t k = 0; k < per_turn; ++k) {
        pts.push_back({rho, angle * static_cast<double>(k) / static_cast<double>(per_turn)});
      }
    }
    return detail::from_points(pts, [angle](auto const& a, auto const& b) {
      double dphi = std::abs(a[1] - b[1]);
      dphi        = std::min(dphi, angle - dphi);
      return cone_distance(a[0], b[0], dphi);
    });
  }

  //! Log-polar grid of radius `extent` about `center` on the flat 2-torus
  //! with the given sides; Cartesian coordinates reduced into [0, L).
  inline MetricSpace log_polar_torus(std::vector<double> const& sides,
                                     std::vector<double> const& center,
                                     double                     extent,
                                     std::size_t                per_octave,
                                     std::size_t                octaves,
                                     std::size_t                per_turn) {
    require(sides.size() == 2 && center.size() == 2, ErrorCode::invalid_argument, "torus grid is two-dimensional");
    require(extent > 0 && per_turn >= 1, ErrorCode::invalid_argument, "torus grid needs extent and directions");
    auto wrap = [](double v, double L) { return v - L * std::floor(v / L); };
    std::vector<std::vector<double>> pts{{wrap(center[0], sides[0]), wrap(center[1], sides[1])}};
    for (double rho : dyadic_radii(per_octave, octaves)) {
      for (std::size_t k = 0; k < per_turn; ++k) {
        double const phi = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(per_turn);
        pts.push_back({wrap(center[0] + extent * rho * std::cos(phi), sides[0]),
                       wrap(center[1] + extent * rho * std::sin(phi), sides[1])});
      }
    }
    return detail::from_points(pts, [&](auto const& a, auto const& b) { return torus_distance(a, b, sides); });
  }

  //! Union of planar log-polar grids of radius `extent` about each center;
  //! grids stay disjoint when centers are more than 2 * extent apart.
  //! Point 0 is the first center; `apexes` receives each center's index.
  inline MetricSpace plane_apex_union(std::vector<std::vector<double>> const& centers,
                                      double                                  extent,
                                      std::size_t                             per_octave,
                                      std::size_t                             octaves,
                                      std::size_t                             per_turn,
                                      std::vector<std::size_t>*               apexes = nullptr) {
    require(!centers.empty() && extent > 0 && per_turn >= 1, ErrorCode::invalid_argument, "apex union needs centers");
    std::vector<std::vector<double>> pts;
    for (auto const& c : centers) {
      require(c.size() == 2, ErrorCode::invalid_argument, "apex centers are planar");
      if (apexes) {
        apexes->push_back(pts.size());
      }
      pts.push_back(c);
      for (double rho : dyadic_radii(per_octave, octaves)) {
        for (std::size_t k = 0; k < per_turn; ++k) {
          double const phi = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(per_turn);
          pts.push_back({c[0] + extent * rho * std::cos(phi), c[1] + extent * rho * std::sin(phi)});
        }
      }
    }
    return detail::from_points(pts, detail::euclidean);
  }

  //! Distance on R x tripod for points (t, leg, s).
  inline double line_tripod_distance(std::vector<double> const& a, std::vector<double> const& b) {
    double const dt = a[0] - b[0];
    double const ds = (a[1] == b[1] || a[2] == 0 || b[2] == 0) ? std::abs(a[2] - b[2]) : a[2] + b[2];
    return std::hypot(dt, ds);
  }

  //! R x tripod sampled by log-polar grids about the apexes (t_i, vertex):
  //! the unit sphere there is three half-circles joined at the two line
  //! directions, with `per_arc` interior directions per leg. Coordinates
  //! (t, leg, s); point 0 is the first apex.
  inline MetricSpace line_tripod_apex_union(std::vector<double> const& line_positions,
                                            double                     extent,
                                            std::size_t                per_octave,
                                            std::size_t                octaves,
                                            std::size_t                per_arc,
                                            std::vector<std::size_t>*  apexes = nullptr) {
    require(!line_positions.empty() && extent > 0, ErrorCode::invalid_argument, "apex union needs line positions");
    std::vector<std::vector<double>> pts;
    for (double t0 : line_positions) {
      if (apexes) {
        apexes->push_back(pts.size());
      }
      pts.push_back({t0, 0.0, 0.0});
      for (double rho : dyadic_radii(per_octave, octaves)) {
        double const r = extent * rho;
        pts.push_back({t0 + r, 0.0, 0.0});
        pts.push_back({t0 - r, 0.0, 0.0});
        for (int leg = 0; leg < 3; ++leg) {
          for (std::size_t k = 1; k <= per_arc; ++k) {
            double const psi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(per_arc + 1);
            pts.push_back({t0 + r * std::cos(psi), static_cast<double>(leg), r * std::sin(psi)});
          }
        }
      }
    }
    return detail::from_points(pts, line_tripod_distance);
  }

  //! Lattice points of spacing h in the open Euclidean l-ball of radius r,
  //! pointed at the origin.
  inline MetricSpace lattice_ball(std::size_t l, double r, double h) {
    require(l >= 1 && r > 0 && h > 0, ErrorCode::invalid_argument, "lattice ball needs l, r, h > 0");
    auto const                       m = static_cast<long>(std::floor(r / h));
    std::vector<std::vector<double>> pts{std::vector<double>(l, 0.0)};
    std::vector<long>                idx(l, -m);
    while (true) {
      std::vector<double> p;
      double              s = 0;
      bool                origin = true;
      for (long v : idx) {
        p.push_back(h * static_cast<double>(v));
        s += p.back() * p.back();
        origin = origin && v == 0;
      }
      if (!origin && std::sqrt(s) < r) {
        pts.push_back(std::move(p));
      }
      std::size_t k = 0;
      while (k < l && idx[k] == m) {
        idx[k++] = -m;
      }
      if (k == l) {
        break;
      }
      ++idx[k];
    }
    return detail::from_points(pts, detail::euclidean);
  }

  //! Cone of angle q * pi / 2 built from q lattice quadrants of spacing h
  //! glued cyclically; the square lattice is invariant under the gluing, so
  //! balls avoiding the tip are lattice balls. Coordinates (rho, phi), tip
  //! first.
  inline MetricSpace quadrant_cone_lattice(std::size_t quadrants, double h, double radius) {
    require(quadrants >= 1 && h > 0 && radius > 0, ErrorCode::invalid_argument, "cone lattice needs quadrants, h, radius");
    double const                     angle = static_cast<double>(quadrants) * std::numbers::pi / 2;
    auto const                       m     = static_cast<long>(std::floor(radius / h));
    std::vector<std::vector<double>> pts{{0.0, 0.0}};
    for (std::size_t q = 0; q < quadrants; ++q) {
      for (long a = 1; a <= m; ++a) {
        for (long b = 0; b <= m; ++b) {
          double const rho = h * std::hypot(static_cast<double>(a), static_cast<double>(b));
          if (rho < radius) {
            pts.push_back({rho, std::atan2(static_cast<double>(b), static_cast<double>(a)) +
                                    static_cast<double>(q) * std::numbers::pi / 2});
          }
        }
      }
    }
    return detail::from_points(pts, [angle](auto const& a, auto const& b) {
      double dphi = std::abs(a[1] - b[1]);
      dphi        = std::min(dphi, angle - dphi);
      return cone_distance(a[0], b[0], dphi);
    });
  }

}  // namespace collapselab::fixtures

#endif  // COLLAPSELAB_FIXTURES_HPP_
