#ifndef COLLAPSELAB_BIGINT_HPP_
#define COLLAPSELAB_BIGINT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace collapselab {

  using BigInt   = boost::multiprecision::cpp_int;
  using Rational = boost::multiprecision::cpp_rational;

  inline void hash_combine(std::size_t& seed, std::size_t value) noexcept {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }

  inline std::size_t hash_bigint(BigInt const& x) {
    // Small values dominate in practice; avoid the generic limb walk for them.
    if (x >= std::numeric_limits<std::int64_t>::min()
        && x <= std::numeric_limits<std::int64_t>::max()) {
      return std::hash<std::int64_t>{}(static_cast<std::int64_t>(x));
    }
    return std::hash<std::string>{}(x.str());
  }

  inline BigInt floor_div(BigInt const& a, BigInt const& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
      --q;
    }
    return q;
  }

  //! Non-negative remainder of a modulo b (b > 0).
  inline BigInt mod_floor(BigInt const& a, BigInt const& b) {
    BigInt r = a % b;
    if (r < 0) {
      r += b;
    }
    return r;
  }

  //! Extended Euclid: returns g = gcd(a, b) >= 0 with x*a + y*b = g.
  inline BigInt extended_gcd(BigInt const& a, BigInt const& b, BigInt& x, BigInt& y) {
    BigInt old_r = a, r = b;
    BigInt old_s = 1, s = 0;
    BigInt old_t = 0, t = 1;
    while (r != 0) {
      BigInt q   = old_r / r;
      BigInt tmp = old_r - q * r;
      old_r      = r;
      r          = tmp;
      tmp        = old_s - q * s;
      old_s      = s;
      s          = tmp;
      tmp        = old_t - q * t;
      old_t      = t;
      t          = tmp;
    }
    if (old_r < 0) {
      old_r = -old_r;
      old_s = -old_s;
      old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
  }

  inline Rational parse_rational(std::string const& num, std::string const& den) {
    return Rational(BigInt(num), BigInt(den));
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_BIGINT_HPP_
