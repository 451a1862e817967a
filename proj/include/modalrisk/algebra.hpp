#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modalrisk {

class ValueError : public std::runtime_error {
 public:
  explicit ValueError(const std::string& what) : std::runtime_error(what) {}
};

// Tolerance the algebraic law checks run at. Exact identities (boundary
// conditions, double negation) hold to rounding; product residuation needs
// the slack.
inline constexpr double kLawTolerance = 1e-12;

inline bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

// Truth degree in [0,1]. Construction rejects NaN and out-of-range values;
// everything downstream may assume validity.
class Degree {
 public:
  Degree() = default;
  explicit Degree(double v) : v_(v) {
    if (!in_unit_interval(v))
      throw ValueError("degree out of [0,1]: " + std::to_string(v));
  }
  double value() const { return v_; }
  operator double() const { return v_; }

 private:
  double v_ = 0.0;
};

enum class TNorm { Godel, Product, Lukasiewicz };

// A t-norm with its residuum. Negation is 1-x for every package; the t-norm
// enters only the possibility operator and the residuum only the necessity
// operator, so And/Or stay min/max throughout.
struct AlgebraPackage {
  TNorm tnorm = TNorm::Godel;

  static AlgebraPackage godel() { return {TNorm::Godel}; }
  static AlgebraPackage product() { return {TNorm::Product}; }
  static AlgebraPackage lukasiewicz() { return {TNorm::Lukasiewicz}; }

  static AlgebraPackage from_name(std::string_view name) {
    if (name == "godel" || name == "godel-min" || name == "min") return godel();
    if (name == "product") return product();
    if (name == "lukasiewicz") return lukasiewicz();
    throw ValueError("unknown algebra package: " + std::string(name));
  }

  std::string name() const {
    switch (tnorm) {
      case TNorm::Godel: return "godel";
      case TNorm::Product: return "product";
      case TNorm::Lukasiewicz: return "lukasiewicz";
    }
    return "godel";
  }
};

inline double tnorm(const AlgebraPackage& pkg, double a, double b) {
  switch (pkg.tnorm) {
    case TNorm::Godel: return std::min(a, b);
    case TNorm::Product: return a * b;
    case TNorm::Lukasiewicz: return std::max(0.0, a + b - 1.0);
  }
  return std::min(a, b);
}

// Residuum of the t-norm: largest c with tnorm(a, c) <= b.
inline double implies(const AlgebraPackage& pkg, double a, double b) {
  if (a <= b) return 1.0;
  switch (pkg.tnorm) {
    case TNorm::Godel: return b;
    case TNorm::Product: return b / a;  // a > b >= 0 here, so a > 0
    case TNorm::Lukasiewicz: return 1.0 - a + b;
  }
  return b;
}

inline double negate(double a) { return 1.0 - a; }
inline double meet(double a, double b) { return std::min(a, b); }
inline double join(double a, double b) { return std::max(a, b); }

// Structural uncertainty of a single degree: distance into the interior of
// the unit interval. Zero exactly on crisp values.
inline double structural_uncertainty(double a) { return std::min(a, 1.0 - a); }

}  // namespace modalrisk
