#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fsps/error.hpp"
#include "fsps/riesz.hpp"
#include "fsps/spectral.hpp"
#include "oracles.hpp"

using namespace fsps;

namespace {

WaveField real_field(const Grid1D& g, double (*fn)(double)) {
  return WaveField::sample(g, [fn](double x) { return Complex{fn(x), 0.0}; });
}

double gauss2(double x) { return std::exp(-2.0 * x * x); }

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (a[j] - b[j]) * (a[j] - b[j]);
    den += b[j] * b[j];
  }
  return std::sqrt(num / den);
}

// Mean-free comparison restricted to |x| < window.
double central_mismatch(double half_length, std::size_t n, double sigma, double window) {
  const auto g = make_grid(half_length, n);
  const auto d = real_field(g, gauss2);
  const auto spec = solve_poisson_spectral(d, RieszOrder(sigma));
  const auto quad = solve_poisson_quadrature(d, RieszOrder(sigma));
  std::vector<double> a, b;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(g.position(j)) < window) {
      a.push_back(spec.values[j]);
      b.push_back(quad.raw.values[j]);
    }
  }
  auto demean = [](std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (auto& x : v) x -= m;
  };
  demean(a);
  demean(b);
  return rel_l2(a, b);
}

}  // namespace

TEST(RieszOrder, RejectsBoundaryAndOutside) {
  for (const double s : {0.0, 1.0, -0.2, 1.5}) {
    try {
      RieszOrder{s};
      FAIL() << s;
    } catch (const DomainError& e) {
      EXPECT_NE(std::string(e.what()).find("sigma must lie strictly inside (0,1)"),
                std::string::npos);
    }
  }
}

TEST(RieszConstants, MatchHighPrecisionValues) {
  for (const auto& f : oracle::kFrozenRiesz) {
    const auto c = riesz_constants(RieszOrder(f.sigma));
    EXPECT_NEAR(c.fourier_c, f.fourier_c, 1e-13 * f.fourier_c) << f.sigma;
    EXPECT_NEAR(c.kernel_c, f.kernel_c, 1e-13 * f.kernel_c) << f.sigma;
  }
}

TEST(RieszConstants, HalfOrderSymmetry) {
  const auto c = riesz_constants(RieszOrder(0.5));
  EXPECT_NEAR(c.fourier_c, std::sqrt(2.0 * std::numbers::pi), 1e-14);
  EXPECT_NEAR(c.kernel_c, 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
}

TEST(RieszConstants, PaperConstantIsTwoPiKernelConstant) {
  for (double s = 0.05; s < 1.0; s += 0.05) {
    const auto c = riesz_constants(RieszOrder(s));
    EXPECT_GT(c.kernel_c, 0.0);
    EXPECT_NEAR(c.fourier_c, 2.0 * std::numbers::pi * c.kernel_c, 1e-13 * c.fourier_c) << s;
  }
}

TEST(FractionalLaplacian, PlaneWaveEigenfunction) {
  const auto g = make_grid(std::numbers::pi, 32);
  const RieszOrder sigma(0.3);
  const auto f = WaveField::sample(g, [](double x) { return std::polar(1.0, 3.0 * x); });
  const auto out = fractional_laplacian(f, sigma, FractionalPower::positive);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(std::abs(out.field.values[j] - std::pow(3.0, 0.3) * f.values[j]), 0.0, 1e-13);
  }
}

TEST(FractionalLaplacian, NegativeThenPositiveIsIdentityOnMeanFree) {
  const auto g = make_grid(8.0, 256);
  std::mt19937_64 rng(4);
  WaveField f(g, oracle::random_band_limited(rng, 256, 8.0));
  Complex mean{};
  for (const auto& v : f.values) mean += v;
  mean /= 256.0;
  for (auto& v : f.values) v -= mean;
  const RieszOrder sigma(1.0 / 3.0);
  const auto neg = fractional_laplacian(f, sigma, FractionalPower::negative);
  EXPECT_FALSE(neg.zero_mode_dropped);
  const auto back = fractional_laplacian(neg.field, sigma, FractionalPower::positive);
  EXPECT_LT(relative_l2_error(back.field, f), 1e-10);
}

TEST(FractionalLaplacian, FlagsDroppedZeroMode) {
  const auto g = make_grid(4.0, 64);
  const auto f = real_field(g, gauss2);
  EXPECT_TRUE(fractional_laplacian(f, RieszOrder(0.5), FractionalPower::negative).zero_mode_dropped);
}

TEST(FractionalLaplacian, UnitFrequencyCosineUnchanged) {
  const auto g = make_grid(std::numbers::pi, 64);
  const auto f = WaveField::sample(g, [](double x) { return Complex{std::cos(x), 0.0}; });
  const auto out = fractional_laplacian(f, RieszOrder(0.5), FractionalPower::positive);
  EXPECT_LT(relative_l2_error(out.field, f), 1e-13);
}

TEST(SpectralPoisson, ZeroDensity) {
  const auto g = make_grid(5.0, 64);
  const auto p = solve_poisson_spectral(WaveField(g), RieszOrder(0.4));
  for (const double v : p.values) EXPECT_EQ(v, 0.0);
}

TEST(SpectralPoisson, CosineSquaredSingleMode) {
  const auto g = make_grid(std::numbers::pi, 64);
  for (const double s : {0.1, 1.0 / 3.0, 0.5, 0.9}) {
    const auto d = WaveField::sample(g, [](double x) { return Complex{std::cos(x) * std::cos(x), 0.0}; });
    const auto p = solve_poisson_spectral(d, RieszOrder(s));
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_NEAR(p.values[j], std::pow(2.0, -s - 1.0) * std::cos(2.0 * g.position(j)), 1e-14);
    }
  }
}

TEST(SpectralPoisson, MeanFreeAndHomogeneous) {
  const auto g = make_grid(20.0, 512);
  const auto d = real_field(g, gauss2);
  const auto p = solve_poisson_spectral(d, RieszOrder(1.0 / 3.0));
  double mean = 0.0;
  for (const double v : p.values) mean += v;
  EXPECT_NEAR(mean / 512.0, 0.0, 1e-15);
  WaveField d3 = d;
  for (auto& v : d3.values) v *= 3.0;
  const auto p3 = solve_poisson_spectral(d3, RieszOrder(1.0 / 3.0));
  for (std::size_t j = 0; j < 512; ++j) EXPECT_NEAR(p3.values[j], 3.0 * p.values[j], 1e-14);
}

TEST(SpectralPoisson, RejectsComplexDensity) {
  const auto g = make_grid(5.0, 64);
  auto d = real_field(g, gauss2);
  d.values[10] += Complex{0.0, 0.1};
  EXPECT_THROW(solve_poisson_spectral(d, RieszOrder(0.5)), InputError);
  auto tiny = real_field(g, gauss2);
  tiny.values[10] += Complex{0.0, 1e-12};
  EXPECT_NO_THROW(solve_poisson_spectral(tiny, RieszOrder(0.5)));
}

TEST(QuadraturePoisson, ZeroDensity) {
  const auto g = make_grid(5.0, 64);
  const auto p = solve_poisson_quadrature(WaveField(g), RieszOrder(0.4));
  for (const double v : p.raw.values) EXPECT_EQ(v, 0.0);
  for (const double v : p.mean_free.values) EXPECT_EQ(v, 0.0);
}

TEST(QuadraturePoisson, MatchesDirectSum) {
  const auto g = make_grid(6.0, 256);
  for (const auto& f : oracle::kFrozenRiesz) {
    std::vector<double> d(256);
    for (std::size_t j = 0; j < 256; ++j) d[j] = gauss2(g.position(j));
    const auto p = solve_poisson_quadrature(g, d, RieszOrder(f.sigma));
    const auto ref = oracle::direct_riesz_sum(d, g.dx(), f.sigma, f.kernel_c);
    EXPECT_LT(rel_l2(p.raw.values, ref), 1e-12) << f.sigma;
  }
}

TEST(QuadraturePoisson, PointMassReproducesKernel) {
  const auto g = make_grid(10.0, 512);
  const double s = 0.5;
  std::vector<double> d(512, 0.0);
  d[256] = 1.0 / g.dx();
  const auto p = solve_poisson_quadrature(g, d, RieszOrder(s));
  const double c = riesz_constants(RieszOrder(s)).kernel_c;
  for (std::size_t j = 300; j < 500; j += 20) {
    const double r = std::abs(g.position(j) - g.position(256));
    EXPECT_NEAR(p.raw.values[j], c * std::pow(r, s - 1.0), 1e-3 * c * std::pow(r, s - 1.0));
  }
}

TEST(QuadraturePoisson, PositiveForNonnegativeDensity) {
  const auto g = make_grid(20.0, 512);
  std::vector<double> d(512);
  for (std::size_t j = 0; j < 512; ++j) d[j] = gauss2(g.position(j) - 3.0);
  for (const double s : {0.1, 0.5, 0.9}) {
    const auto p = solve_poisson_quadrature(g, d, RieszOrder(s));
    for (const double v : p.raw.values) EXPECT_GT(v, 0.0);
  }
}

TEST(QuadraturePoisson, HomogeneousAndMeanFreeOutput) {
  const auto g = make_grid(20.0, 512);
  std::vector<double> d(512), d2(512);
  for (std::size_t j = 0; j < 512; ++j) {
    d[j] = gauss2(g.position(j));
    d2[j] = 2.5 * d[j];
  }
  const auto a = solve_poisson_quadrature(g, d, RieszOrder(0.3));
  const auto b = solve_poisson_quadrature(g, d2, RieszOrder(0.3));
  double mean = 0.0;
  for (std::size_t j = 0; j < 512; ++j) {
    EXPECT_NEAR(b.raw.values[j], 2.5 * a.raw.values[j], 1e-13 * b.raw.values[j]);
    mean += a.mean_free.values[j];
  }
  EXPECT_NEAR(mean / 512.0, 0.0, 1e-15);
}

TEST(BackendComparison, CentralWindowAgreesAndImprovesWithDomain) {
  for (const double s : {0.1, 1.0 / 3.0, 0.5}) {
    const double e20 = central_mismatch(20.0, 2048, s, 5.0);
    const double e40 = central_mismatch(40.0, 4096, s, 5.0);
    EXPECT_LT(e20, 5e-3) << s;
    EXPECT_LT(e40, e20) << s;
  }
}

TEST(Hls, ExponentRelation) {
  const auto g = make_grid(20.0, 512);
  const auto f = real_field(g, gauss2);
  EXPECT_NO_THROW(hls_ratio(f, 2.0 / 3.0, 2.0, 6.0 / 5.0));
  EXPECT_THROW(hls_ratio(f, 2.0 / 3.0, 2.5, 6.0 / 5.0), ConfigError);
  EXPECT_THROW(hls_ratio(f, 1.2, 2.0, 6.0 / 5.0), ConfigError);
}

TEST(Hls, StableUnderRefinementAndHomogeneous) {
  const auto coarse = make_grid(20.0, 1024);
  const auto fine = make_grid(20.0, 2048);
  const double a = hls_ratio(real_field(coarse, gauss2), 2.0 / 3.0, 2.0, 1.2);
  const double b = hls_ratio(real_field(fine, gauss2), 2.0 / 3.0, 2.0, 1.2);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_NEAR(a, b, 0.02 * b);
  auto f2 = real_field(coarse, gauss2);
  for (auto& v : f2.values) v *= 2.0;
  EXPECT_NEAR(hls_ratio(f2, 2.0 / 3.0, 2.0, 1.2), a, 1e-12 * a);
}

TEST(Hls, RandomEnsembleBounded) {
  double max_coarse = 0.0, max_fine = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 r1(seed), r2(seed);
    const auto gc = make_grid(16.0, 512);
    const auto gf = make_grid(16.0, 1024);
    max_coarse = std::max(max_coarse,
                          hls_ratio(WaveField(gc, oracle::random_band_limited(r1, 512, 16.0)),
                                    0.5, 4.0, 4.0 / 3.0));
    max_fine = std::max(max_fine,
                        hls_ratio(WaveField(gf, oracle::random_band_limited(r2, 1024, 16.0)), 0.5,
                                  4.0, 4.0 / 3.0));
  }
  RecordProperty("hls_max_ratio", std::to_string(max_fine));
  EXPECT_TRUE(std::isfinite(max_fine));
  EXPECT_NEAR(max_fine, max_coarse, 0.05 * max_coarse);
}
