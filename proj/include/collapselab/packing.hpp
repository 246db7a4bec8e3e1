#ifndef COLLAPSELAB_PACKING_HPP_
#define COLLAPSELAB_PACKING_HPP_

// Hyperbolic ball volumes and the packing counts of the pigeonhole power
// argument: N_0 = V(10R) / V(eps/2), M_0 = 2 N_0, k_0 = V(10R) / V(eps/40)
// and N_1 = M_0^{k_0}.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bigint.hpp"
#include "error.hpp"

namespace collapselab {

  //! Area of the unit sphere S^{n-1} in R^n.
  inline long double unit_sphere_area(std::size_t n) {
    long double const h = static_cast<long double>(n) / 2;
    return 2 * std::pow(std::numbers::pi_v<long double>, h) / std::tgamma(h);
  }

  //! Volume of a radius-r ball in hyperbolic n-space of curvature -1,
  //! by adaptive Gauss-Kronrod quadrature of sinh^{n-1}.
  inline long double hyperbolic_ball_volume(std::size_t n, long double r) {
    require(n >= 1, ErrorCode::invalid_argument, "dimension must be positive");
    require(r >= 0, ErrorCode::invalid_argument, "radius must be nonnegative");
    require(static_cast<long double>(n - 1) * r < 11000.0L,
            ErrorCode::invalid_argument,
            "ball volume exceeds the extended floating range");
    if (r == 0) {
      return 0;
    }
    auto f = [n](long double t) { return std::pow(std::sinh(t), static_cast<long double>(n - 1)); };
    long double error = 0;
    long double integral =
        boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(f, 0.0L, r, 20, 1e-14L, &error);
    return unit_sphere_area(n) * integral;
  }

  struct PackingBound {
    std::size_t           n = 0;
    double                epsilon = 0;
    double                R = 0;
    long double           outer_volume = 0;  // V(10R)
    long double           inner_volume = 0;  // V(eps/2)
    long double           net_volume   = 0;  // V(eps/40)
    BigInt                N0, M0, k0;
    double                log10_N1 = 0;
    std::optional<BigInt> N1;  // present when it has at most exact_digit_cap digits
  };

  inline constexpr double exact_digit_cap = 4096;

  inline BigInt ceil_to_bigint(long double x) {
    return BigInt(std::ceil(x));
  }

  inline PackingBound packing_power_bound(std::size_t n, double epsilon, double R) {
    require(n >= 2, ErrorCode::invalid_argument, "packing bound needs n >= 2");
    require(epsilon > 0 && epsilon <= 0.1, ErrorCode::invalid_argument, "packing bound needs 0 < eps <= 1/10");
    require(R >= 1, ErrorCode::invalid_argument, "packing bound needs R >= 1");
    PackingBound b;
    b.n            = n;
    b.epsilon      = epsilon;
    b.R            = R;
    b.outer_volume = hyperbolic_ball_volume(n, 10.0L * R);
    b.inner_volume = hyperbolic_ball_volume(n, epsilon / 2.0L);
    b.net_volume   = hyperbolic_ball_volume(n, epsilon / 40.0L);
    b.N0           = ceil_to_bigint(b.outer_volume / b.inner_volume);
    b.M0           = 2 * b.N0;
    // An eps/20-separated set in B_{10R} has disjoint eps/40-balls.
    b.k0       = ceil_to_bigint(b.outer_volume / b.net_volume);
    b.log10_N1 = static_cast<double>(b.k0.convert_to<long double>() * std::log10(b.M0.convert_to<long double>()));
    if (b.log10_N1 <= exact_digit_cap) {
      b.N1 = boost::multiprecision::pow(b.M0, b.k0.convert_to<unsigned>());
    }
    return b;
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_PACKING_HPP_
