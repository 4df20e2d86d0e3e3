#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fsps {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-2", "1/3", "0.25", "2.5e-1" exactly. Throws ConfigError.
Rational parse_rational(std::string_view text);
double to_double(const Rational& x);
std::string to_string(const Rational& x);

/// Lebesgue exponent in [1, inf], held as its reciprocal so inf is exact.
class Exponent {
 public:
  static Exponent finite(const Rational& value);
  static Exponent infinity() { return Exponent(Rational(0)); }
  static Exponent from_reciprocal(const Rational& inv) { return Exponent(inv); }

  const Rational& reciprocal() const noexcept { return inv_; }
  bool is_infinite() const { return inv_ == 0; }
  double value() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  explicit Exponent(Rational inv) : inv_(std::move(inv)) {}
  Rational inv_;
};

/// Hoelder conjugate: 1/p + 1/p' = 1.
Exponent conjugate(const Exponent& p);

/// 2/q = n/2 - n/r with q, r in [2, inf]; n = 1 allows r = inf, n = 2 needs
/// r < inf, n >= 3 needs r <= 2n/(n-2). Out-of-range q or r give false.
/// Throws ConfigError for n <= 0.
bool is_admissible(const Exponent& q, const Exponent& r, int n);
/// Floating variant; infinity is accepted, the relation is checked to 1e-12.
bool is_admissible(double q, double r, int n);

struct Interval {
  Rational lo;
  Rational hi;
  bool lo_open = false;
  bool hi_open = false;

  bool is_point() const { return lo == hi; }
  bool contains(const Rational& r, double tol = 0.0) const;
};

struct DerivedExponents {
  Exponent r_t = Exponent::infinity();   // r~'
  Exponent q_t = Exponent::infinity();   // q~'
  Exponent r_t1 = Exponent::infinity();  // r~1'
  Exponent q_t1 = Exponent::infinity();  // q~1'
  Exponent q = Exponent::infinity();     // partner of r in the working pair
  std::pair<Exponent, Exponent> dual_pair = {Exponent::infinity(), Exponent::infinity()};
  std::pair<Exponent, Exponent> dual_pair1 = {Exponent::infinity(), Exponent::infinity()};
  /// Hoelder time exponents of the cubic and power terms.
  Rational time_exponent = 0;
  Rational time_exponent1 = 0;
  bool duals_admissible = false;
  /// 1/q~' = (1+sigma)/2 + 3/q and 1/q~1' = (5-gamma)/4 + gamma/q both hold.
  bool consistent = false;
};

struct ExponentReport {
  Rational sigma = 0;
  Rational gamma = 0;
  std::optional<Interval> interval;  // absent when empty
  bool feasible = false;
  std::optional<Rational> sample_r;
  std::optional<DerivedExponents> derived;
};

/// (2, 2/sigma) cap [3/(1+sigma), 6/(1+2 sigma)] cap [gamma, 2 gamma], exactly.
/// Requires sigma in (0,1) and gamma in (1,5]; throws DomainError otherwise.
ExponentReport working_interval(const Rational& sigma, const Rational& gamma);
/// Floating inputs: endpoints closer than 1e-12 (relative) are treated as equal.
ExponentReport working_interval(double sigma, double gamma);

/// Throws PreconditionError unless r lies in the working interval.
DerivedExponents derived_exponents(const Rational& r, const Rational& sigma, const Rational& gamma);
DerivedExponents derived_exponents(double r, double sigma, double gamma);

enum class Criticality { subcritical, critical, supercritical };
const char* to_string(Criticality c) noexcept;
/// Throws DomainError for gamma <= 1.
Criticality classify(double gamma);

struct ScalingPath {
  std::optional<double> sigma;  // 2(3-gamma)/(gamma-1) when inside (0,1)
  double amplitude_exponent;    // 2/(1-gamma)
};
ScalingPath scaling_sigma(double gamma);

struct RegionRaster {
  std::vector<Rational> sigmas;
  std::vector<Rational> gammas;
  std::vector<ExponentReport> cells;  // row-major, one row per gamma

  const ExponentReport& at(std::size_t gamma_index, std::size_t sigma_index) const {
    return cells[gamma_index * sigmas.size() + sigma_index];
  }
};

/// Rows are evaluated on up to `workers` threads.
RegionRaster region_raster(const std::vector<Rational>& sigma_grid,
                           const std::vector<Rational>& gamma_grid, std::size_t workers = 1);

struct MonotonicityBreak {
  Rational gamma;
  Rational infeasible_sigma;
  Rational feasible_sigma;
};
/// Rows where a feasible cell follows an infeasible one as sigma increases.
std::vector<MonotonicityBreak> monotonicity_breaks(const RegionRaster& raster);

/// "lo:hi:step" (inclusive, exact) or a comma list such as "0.1,1/3,0.5".
std::vector<Rational> parse_grid_spec(std::string_view spec);

}  // namespace fsps
