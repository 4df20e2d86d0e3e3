#include "fsps/region.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <regex>
#include <thread>

#include "fsps/error.hpp"

namespace fsps {

namespace {

using boost::multiprecision::cpp_int;

constexpr double kEndpointTol = 1e-12;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text) {
  static const std::regex pattern(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d{1,3}))?$)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, pattern) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw ConfigError("not a rational number: '" + s + "'");
  }
  std::string digits = m[2].str() + m[3].str();
  // cpp_int reads a leading zero as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{cpp_int(digits)};
  int exponent = m[4].matched ? std::stoi(m[4].str()) : 0;
  exponent -= static_cast<int>(m[3].length());
  const cpp_int scale = boost::multiprecision::pow(cpp_int(10), std::abs(exponent));
  value = exponent >= 0 ? value * Rational(scale) : value / Rational(scale);
  return m[1].str() == "-" ? Rational(-value) : value;
}

// Three-way comparison; within tol (relative) counts as equal.
int compare(const Rational& a, const Rational& b, double tol) {
  if (tol > 0.0) {
    const double da = to_double(a);
    const double db = to_double(b);
    if (std::abs(da - db) <= tol * std::max({1.0, std::abs(da), std::abs(db)})) return 0;
  }
  return a < b ? -1 : (a > b ? 1 : 0);
}

struct Bound {
  Rational value;
  bool open;
};

Bound tighter_lower(const Bound& a, const Bound& b, double tol) {
  const int c = compare(a.value, b.value, tol);
  if (c == 0) return {a.open ? a.value : b.value, a.open || b.open};
  return c > 0 ? a : b;
}

Bound tighter_upper(const Bound& a, const Bound& b, double tol) {
  const int c = compare(a.value, b.value, tol);
  if (c == 0) return {a.open ? a.value : b.value, a.open || b.open};
  return c < 0 ? a : b;
}

void check_domain(const Rational& sigma, const Rational& gamma) {
  if (!(sigma > 0 && sigma < 1)) {
    throw DomainError("sigma must lie strictly inside (0,1), got " + to_string(sigma));
  }
  if (!(gamma > 1)) throw DomainError("gamma must exceed 1, got " + to_string(gamma));
  if (gamma > 5) throw DomainError("gamma must lie in (1,5], got " + to_string(gamma));
}

ExponentReport build_report(const Rational& sigma, const Rational& gamma, double tol) {
  check_domain(sigma, gamma);
  ExponentReport rep;
  rep.sigma = sigma;
  rep.gamma = gamma;
  Bound lo{Rational(2), true};
  Bound hi{Rational(2) / sigma, true};
  lo = tighter_lower(lo, {Rational(3) / (1 + sigma), false}, tol);
  hi = tighter_upper(hi, {Rational(6) / (1 + 2 * sigma), false}, tol);
  lo = tighter_lower(lo, {gamma, false}, tol);
  hi = tighter_upper(hi, {2 * gamma, false}, tol);

  const int c = compare(lo.value, hi.value, tol);
  if (c < 0) {
    rep.interval = Interval{lo.value, hi.value, lo.open, hi.open};
    rep.sample_r = (lo.value + hi.value) / 2;
  } else if (c == 0 && !lo.open && !hi.open) {
    rep.interval = Interval{lo.value, lo.value, false, false};
    rep.sample_r = lo.value;
  }
  rep.feasible = rep.interval.has_value();
  return rep;
}

DerivedExponents derive(const Rational& r_in, const Rational& sigma, const Rational& gamma,
                        double tol) {
  const auto rep = build_report(sigma, gamma, tol);
  if (!rep.interval || !rep.interval->contains(r_in, tol)) {
    throw PreconditionError("derived_exponents: r=" + to_string(r_in) +
                            " is outside the working interval for sigma=" + to_string(sigma) +
                            ", gamma=" + to_string(gamma));
  }
  const Rational r = std::clamp(r_in, rep.interval->lo, rep.interval->hi);
  const Rational inv_r = 1 / r;
  const Rational quarter(1, 4);
  const Rational five_quarters(5, 4);

  DerivedExponents d;
  d.r_t = Exponent::from_reciprocal(3 * inv_r - sigma);
  d.q_t = Exponent::from_reciprocal(five_quarters - d.r_t.reciprocal() / 2);
  d.r_t1 = Exponent::from_reciprocal(gamma * inv_r);
  d.q_t1 = Exponent::from_reciprocal(five_quarters - gamma * inv_r / 2);
  d.q = Exponent::from_reciprocal(quarter - inv_r / 2);
  d.dual_pair = {conjugate(d.q_t), conjugate(d.r_t)};
  d.dual_pair1 = {conjugate(d.q_t1), conjugate(d.r_t1)};
  d.duals_admissible = is_admissible(d.dual_pair.first, d.dual_pair.second, 1) &&
                       is_admissible(d.dual_pair1.first, d.dual_pair1.second, 1);
  d.time_exponent = d.q_t.reciprocal() - 3 * d.q.reciprocal();
  d.time_exponent1 = d.q_t1.reciprocal() - gamma * d.q.reciprocal();
  d.consistent = d.time_exponent == (1 + sigma) / 2 && d.time_exponent1 == (5 - gamma) / 4;
  return d;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  const Rational num = parse_decimal(trim(s.substr(0, slash)));
  const Rational den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0) throw ConfigError("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(const Rational& x) { return x.str(); }

Exponent Exponent::finite(const Rational& value) {
  if (!(value > 0)) throw DomainError("exponent must be positive, got " + to_string(value));
  return Exponent(1 / value);
}

double Exponent::value() const {
  return is_infinite() ? std::numeric_limits<double>::infinity() : to_double(1 / inv_);
}

Exponent conjugate(const Exponent& p) {
  if (p.reciprocal() < 0 || p.reciprocal() > 1) {
    throw DomainError("conjugate: exponent must lie in [1, inf], reciprocal " +
                      to_string(p.reciprocal()));
  }
  return Exponent::from_reciprocal(1 - p.reciprocal());
}

bool is_admissible(const Exponent& q, const Exponent& r, int n) {
  if (n <= 0) throw ConfigError("dimension n must be positive, got " + std::to_string(n));
  const Rational half(1, 2);
  const auto& iq = q.reciprocal();
  const auto& ir = r.reciprocal();
  if (iq < 0 || iq > half || ir < 0 || ir > half) return false;
  if (2 * iq != Rational(n) / 2 - n * ir) return false;
  if (n == 2) return ir > 0;
  if (n >= 3) return ir >= Rational(n - 2, 2 * n);
  return true;
}

bool is_admissible(double q, double r, int n) {
  if (n <= 0) throw ConfigError("dimension n must be positive, got " + std::to_string(n));
  if (!(q >= 2.0) || !(r >= 2.0)) return false;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ir = std::isinf(r) ? 0.0 : 1.0 / r;
  const double nd = static_cast<double>(n);
  if (std::abs(2.0 * iq - (0.5 * nd - nd * ir)) > kEndpointTol) return false;
  if (n == 2) return std::isfinite(r);
  if (n >= 3) return r <= 2.0 * nd / (nd - 2.0) * (1.0 + kEndpointTol);
  return true;
}

bool Interval::contains(const Rational& r, double tol) const {
  const int c_lo = compare(r, lo, tol);
  const int c_hi = compare(r, hi, tol);
  const bool above = lo_open ? c_lo > 0 : c_lo >= 0;
  const bool below = hi_open ? c_hi < 0 : c_hi <= 0;
  return above && below;
}

ExponentReport working_interval(const Rational& sigma, const Rational& gamma) {
  return build_report(sigma, gamma, 0.0);
}

ExponentReport working_interval(double sigma, double gamma) {
  if (!std::isfinite(sigma) || !std::isfinite(gamma)) {
    throw DomainError("sigma and gamma must be finite");
  }
  return build_report(Rational(sigma), Rational(gamma), kEndpointTol);
}

DerivedExponents derived_exponents(const Rational& r, const Rational& sigma,
                                   const Rational& gamma) {
  return derive(r, sigma, gamma, 0.0);
}

DerivedExponents derived_exponents(double r, double sigma, double gamma) {
  if (!std::isfinite(r) || !std::isfinite(sigma) || !std::isfinite(gamma)) {
    throw PreconditionError("derived_exponents: inputs must be finite");
  }
  return derive(Rational(r), Rational(sigma), Rational(gamma), kEndpointTol);
}

const char* to_string(Criticality c) noexcept {
  switch (c) {
    case Criticality::subcritical:
      return "subcritical";
    case Criticality::critical:
      return "critical";
    case Criticality::supercritical:
      return "supercritical";
  }
  return "unknown";
}

Criticality classify(double gamma) {
  if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1, got " + std::to_string(gamma));
  if (gamma < 5.0) return Criticality::subcritical;
  return gamma == 5.0 ? Criticality::critical : Criticality::supercritical;
}

ScalingPath scaling_sigma(double gamma) {
  ScalingPath path{std::nullopt, 2.0 / (1.0 - gamma)};
  const double s = 2.0 * (3.0 - gamma) / (gamma - 1.0);
  if (s > 0.0 && s < 1.0) path.sigma = s;
  return path;
}

RegionRaster region_raster(const std::vector<Rational>& sigma_grid,
                           const std::vector<Rational>& gamma_grid, std::size_t workers) {
  RegionRaster raster{sigma_grid, gamma_grid, {}};
  raster.cells.resize(sigma_grid.size() * gamma_grid.size());
  std::atomic<std::size_t> next_row{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t row = next_row++; row < gamma_grid.size(); row = next_row++) {
      try {
        for (std::size_t j = 0; j < sigma_grid.size(); ++j) {
          auto& cell = raster.cells[row * sigma_grid.size() + j];
          cell = working_interval(sigma_grid[j], gamma_grid[row]);
          if (cell.sample_r) {
            cell.derived = derived_exponents(*cell.sample_r, cell.sigma, cell.gamma);
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(workers, 1, gamma_grid.size() + 1);
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return raster;
}

std::vector<MonotonicityBreak> monotonicity_breaks(const RegionRaster& raster) {
  std::vector<std::size_t> order(raster.sigmas.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return raster.sigmas[a] < raster.sigmas[b]; });
  std::vector<MonotonicityBreak> breaks;
  for (std::size_t i = 0; i < raster.gammas.size(); ++i) {
    std::optional<std::size_t> last_infeasible;
    for (const auto j : order) {
      if (!raster.at(i, j).feasible) {
        last_infeasible = j;
      } else if (last_infeasible) {
        breaks.push_back({raster.gammas[i], raster.sigmas[*last_infeasible], raster.sigmas[j]});
      }
    }
  }
  return breaks;
}

std::vector<Rational> parse_grid_spec(std::string_view spec) {
  const auto s = trim(spec);
  std::vector<Rational> out;
  if (s.find(':') != std::string_view::npos) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw ConfigError("grid spec must be lo:hi:step, got '" + std::string(s) + "'");
    }
    const Rational lo = parse_rational(s.substr(0, c1));
    const Rational hi = parse_rational(s.substr(c1 + 1, c2 - c1 - 1));
    const Rational step = parse_rational(s.substr(c2 + 1));
    if (!(step > 0)) throw ConfigError("grid spec step must be positive");
    if (hi < lo) throw ConfigError("grid spec needs lo <= hi");
    if ((hi - lo) / step > 1000000) throw ConfigError("grid spec has more than 1e6 points");
    for (Rational v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
    out.push_back(parse_rational(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace fsps
