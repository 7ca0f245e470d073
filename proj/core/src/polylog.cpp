#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "coldgas/ideal_gas.hpp"

namespace coldgas::ideal_gas {

namespace {

constexpr int kExpansionTerms = 40;

// zeta(s - k), k = 0..kExpansionTerms-1, for the expansion around z = 1.
struct ZetaTable {
  std::array<double, kExpansionTerms> values{};
  double gamma_one_minus_s = 0.0;

  explicit ZetaTable(double s) {
    for (int k = 0; k < kExpansionTerms; ++k) {
      values[k] = boost::math::zeta(s - static_cast<double>(k));
    }
    gamma_one_minus_s = boost::math::tgamma(1.0 - s);
  }
};

const ZetaTable& table_for(double s) {
  static const ZetaTable t32(1.5);
  static const ZetaTable t52(2.5);
  if (s == 1.5) return t32;
  return t52;
}

double direct_series(double s, double z) {
  double sum = 0.0;
  double zk = z;
  for (int k = 1; k < 200 && zk > 1e-18 * sum; ++k) {
    sum += zk / std::pow(static_cast<double>(k), s);
    zk *= z;
  }
  return sum;
}

// g_s(e^{-alpha}) = Gamma(1-s) alpha^{s-1} + sum_k zeta(s-k) (-alpha)^k / k!
// valid for 0 <= alpha < 2 pi; used here for alpha <= ln 2.
double expansion_near_one(double s, double alpha, const ZetaTable& tab) {
  double sum = alpha > 0.0 ? tab.gamma_one_minus_s * std::pow(alpha, s - 1.0) : 0.0;
  double coeff = 1.0;  // (-alpha)^k / k!
  for (int k = 0; k < kExpansionTerms; ++k) {
    const double term = tab.values[k] * coeff;
    sum += term;
    if (k > 2 && std::abs(term) < 1e-18) break;
    coeff *= -alpha / static_cast<double>(k + 1);
  }
  return sum;
}

}  // namespace

double polylog(double s, double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw DomainError("ideal_gas", "polylog: fugacity must lie in [0, 1]");
  }
  if (!(s > 1.0) || s == std::floor(s)) {
    throw DomainError("ideal_gas", "polylog: exponent must be a non-integer > 1");
  }
  if (z == 0.0) return 0.0;
  if (z <= 0.5) return direct_series(s, z);
  const double alpha = -std::log(z);
  if (s == 1.5 || s == 2.5) return expansion_near_one(s, alpha, table_for(s));
  return expansion_near_one(s, alpha, ZetaTable(s));
}

double zeta_3_2() {
  static const double v = boost::math::zeta(1.5);
  return v;
}

double zeta_5_2() {
  static const double v = boost::math::zeta(2.5);
  return v;
}

}  // namespace coldgas::ideal_gas
