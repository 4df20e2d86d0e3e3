#include "fsps/gronwall.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "fsps/error.hpp"

namespace fsps {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kCellCap = 0.45;

using OverflowToInf = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>>;

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double holder_dual_ratio(double p, double q) { return std::isinf(p) ? 1.0 : p / (p - q); }

bool within(double lhs, double rhs) { return lhs <= rhs * (1.0 + kSlack); }

// Smallest root of the increasing-at-infinity function f on [0, inf) by bisection.
double solve_nonnegative(const std::function<double(double)>& f) {
  if (f(0.0) >= 0.0) return 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e150) throw NumericError("gronwall instance construction diverged", 0);
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

// Prefix accumulator of ||f||_{L^p(0, t_k)}^p (or the running max at p = inf).
struct PowerSum {
  double p;
  double h;
  double acc = 0.0;

  double with(double x) const { return std::isinf(p) ? std::max(acc, x) : acc + std::pow(x, p) * h; }
  void add(double x) { acc = with(x); }
  static double norm_of(double p, double s) { return std::isinf(p) ? s : std::pow(s, 1.0 / p); }
  double norm() const { return norm_of(p, acc); }
};

std::mt19937_64 make_rng(std::uint64_t seed, std::size_t index, std::size_t cells, int lemma) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(cells),
                    static_cast<std::uint32_t>(lemma)};
  return std::mt19937_64(seq);
}

struct RandomExponents {
  double p;
  double q;
};

RandomExponents draw_exponents(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double q = 1.0 + unit(rng);
  const double p = unit(rng) < 0.25 ? std::numeric_limits<double>::infinity()
                                    : q + 0.5 + 3.5 * unit(rng);
  return {p, q};
}

// Random nonnegative profile scaled to the target norm, each cell capped at cap.
std::vector<double> random_profile(std::mt19937_64& rng, std::size_t cells, double norm_exp,
                                   double h, double target, double cap) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double omega = 2.0 * std::numbers::pi * (1.0 + 3.0 * unit(rng));
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  std::vector<double> f(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(cells);
    f[j] = (1.0 + 0.5 * std::sin(omega * t + phase)) * (0.25 + unit(rng));
  }
  const double n = discrete_norm(f, norm_exp, h, 0, cells);
  const double peak = *std::max_element(f.begin(), f.end());
  const double scale = std::min(target / n, cap / peak);
  for (auto& x : f) x *= scale;
  return f;
}

}  // namespace

BoundValue gamma_bound(double c1, double rho, double a_norm) {
  if (!(c1 > 0.0)) throw DomainError("gamma_bound: C1 must be positive");
  if (!(rho >= 1.0)) throw DomainError("gamma_bound: rho must be >= 1");
  if (!(a_norm >= 0.0)) throw DomainError("gamma_bound: a_norm must be >= 0");
  const double x = 2.0 + std::pow(2.0 * a_norm, rho);
  const double g = std::isfinite(x) ? boost::math::tgamma(x, OverflowToInf()) : x;
  const double value = 2.0 * c1 * g;
  return {value, !std::isfinite(value)};
}

BoundValue exp_bound(double c2, double p, double q, double a_norm) {
  if (!(c2 > 0.0)) throw DomainError("exp_bound: C2 must be positive");
  if (!(q >= 1.0) || !(q < p)) throw DomainError("exp_bound: requires 1 <= q < p");
  if (!(a_norm >= 0.0)) throw DomainError("exp_bound: a_norm must be >= 0");
  double value = 0.0;
  if (std::isinf(p)) {
    value = std::pow(c2, 1.0 / q) * std::exp(a_norm / q);
  } else {
    const double ap = p / (p - q);
    const double exponent = std::pow(p / q, ap) * std::pow(a_norm, ap) / p;
    value = std::pow(ap, 1.0 / p) * std::pow(c2, 1.0 / q) * std::exp(exponent);
  }
  return {value, !std::isfinite(value)};
}

double discrete_norm(const std::vector<double>& f, double p, double h, std::size_t begin,
                     std::size_t end) {
  PowerSum s{p, h};
  for (std::size_t j = begin; j < end; ++j) s.add(f[j]);
  return s.norm();
}

void check_instance(const GronwallInstance& inst) {
  if (inst.v.empty() || inst.v.size() != inst.a.size()) {
    throw DomainError("gronwall instance: v and a must be nonempty and of equal length");
  }
  if (!(inst.horizon > 0.0)) throw DomainError("gronwall instance: horizon must be positive");
  if (!(inst.constant > 0.0)) throw DomainError("gronwall instance: constant must be positive");
  if (!(inst.q >= 1.0) || !(inst.q < inst.p)) {
    throw DomainError("gronwall instance: requires 1 <= q < p");
  }
  if (std::abs(1.0 / inst.rho - (1.0 / inst.q - inv(inst.p))) > kSlack) {
    throw DomainError("gronwall instance: 1/rho must equal 1/q - 1/p");
  }
  auto bad = [](double x) { return !(x >= 0.0) || !std::isfinite(x); };
  if (std::any_of(inst.v.begin(), inst.v.end(), bad) ||
      std::any_of(inst.a.begin(), inst.a.end(), bad)) {
    throw DomainError("gronwall instance: samples must be finite and nonnegative");
  }
}

LemmaReport verify_gamma_lemma(const GronwallInstance& inst) {
  check_instance(inst);
  const double h = inst.step();
  LemmaReport rep;
  rep.prefixes = inst.cells();
  PowerSum v_sum{inst.p, h};
  PowerSum av_sum{inst.q, h};
  PowerSum a_sum{inst.rho, h};
  for (std::size_t k = 0; k < inst.cells(); ++k) {
    v_sum.add(inst.v[k]);
    av_sum.add(inst.a[k] * inst.v[k]);
    a_sum.add(inst.a[k]);
    const double lhs = v_sum.norm();
    if (!within(lhs, inst.constant + av_sum.norm())) break;
    rep.hypothesis_run = k + 1;
    const auto bound = gamma_bound(inst.constant, inst.rho, a_sum.norm());
    if (bound.infinite) continue;
    rep.worst_ratio = std::max(rep.worst_ratio, lhs / bound.value);
    if (!within(lhs, bound.value)) rep.violations.push_back({h * double(k + 1), lhs, bound.value});
  }
  rep.vacuous = rep.hypothesis_run == 0;
  return rep;
}

LemmaReport verify_exp_lemma(const GronwallInstance& inst) {
  check_instance(inst);
  const double h = inst.step();
  const auto k1 = static_cast<std::size_t>(std::llround(1.0 / h));
  if (k1 == 0 || k1 > inst.cells() || std::abs(double(k1) * h - 1.0) > kSlack) {
    throw PreconditionError("verify_exp_lemma: the mesh needs a node at t = 1 inside (0, T]");
  }
  const double ap = holder_dual_ratio(inst.p, inst.q);
  LemmaReport rep;
  rep.prefixes = inst.cells() - k1 + 1;
  PowerSum v_sum{inst.p, h};
  for (std::size_t j = 0; j < k1; ++j) v_sum.add(inst.v[j]);
  auto check_bound = [&](double t, double a_norm) {
    const double lhs = v_sum.norm();
    const auto bound = exp_bound(inst.constant, inst.p, inst.q, a_norm);
    if (bound.infinite) return;
    rep.worst_ratio = std::max(rep.worst_ratio, lhs / bound.value);
    if (!within(lhs, bound.value)) rep.violations.push_back({t, lhs, bound.value});
  };
  if (!within(std::pow(v_sum.norm(), inst.q), inst.constant)) {
    rep.vacuous = true;
    return rep;
  }
  rep.hypothesis_run = 1;
  check_bound(1.0, 0.0);
  PowerSum a_sum{ap, h};
  double integral = 0.0;
  for (std::size_t k = k1; k < inst.cells(); ++k) {
    v_sum.add(inst.v[k]);
    a_sum.add(inst.a[k]);
    integral += inst.a[k] * std::pow(inst.v[k], inst.q) * h;
    if (!within(std::pow(v_sum.norm(), inst.q), inst.constant + integral)) break;
    rep.hypothesis_run += 1;
    check_bound(h * double(k + 1), a_sum.norm());
  }
  return rep;
}

GronwallInstance make_gamma_instance(std::vector<double> a, double horizon, double p, double q,
                                     double c1) {
  GronwallInstance inst;
  inst.horizon = horizon;
  inst.p = p;
  inst.q = q;
  inst.rho = 1.0 / (1.0 / q - inv(p));
  inst.constant = c1;
  inst.a = std::move(a);
  inst.v.assign(inst.a.size(), 0.0);
  const double h = inst.step();
  PowerSum v_sum{p, h};
  PowerSum av_sum{q, h};
  for (std::size_t k = 0; k < inst.cells(); ++k) {
    const double ak = inst.a[k];
    // For p = inf the sup is reached at the start of the cell, so the hypothesis is imposed there.
    const double vk = std::isinf(p) ? c1 + av_sum.norm() : solve_nonnegative([&](double x) {
      return PowerSum::norm_of(p, v_sum.with(x)) - c1 - PowerSum::norm_of(q, av_sum.with(ak * x));
    });
    inst.v[k] = vk;
    v_sum.add(vk);
    av_sum.add(ak * vk);
  }
  check_instance(inst);
  return inst;
}

GronwallInstance make_exp_instance(std::vector<double> v_initial, std::vector<double> a,
                                   double horizon, double p, double q, double c2) {
  GronwallInstance inst;
  inst.horizon = horizon;
  inst.p = p;
  inst.q = q;
  inst.rho = 1.0 / (1.0 / q - inv(p));
  inst.constant = c2;
  inst.a = std::move(a);
  inst.v = std::move(v_initial);
  const std::size_t k1 = inst.v.size();
  inst.v.resize(inst.a.size(), 0.0);
  const double h = inst.step();
  PowerSum v_sum{p, h};
  for (std::size_t j = 0; j < k1; ++j) v_sum.add(inst.v[j]);
  double integral = 0.0;
  for (std::size_t k = k1; k < inst.cells(); ++k) {
    const double ak = inst.a[k];
    const double vk =
        std::isinf(p) ? std::max(v_sum.norm(), std::pow(c2 + integral, 1.0 / q))
                      : solve_nonnegative([&](double x) {
                          return std::pow(PowerSum::norm_of(p, v_sum.with(x)), q) - c2 - integral -
                                 ak * std::pow(x, q) * h;
                        });
    inst.v[k] = vk;
    v_sum.add(vk);
    integral += ak * std::pow(vk, q) * h;
  }
  check_instance(inst);
  return inst;
}

GronwallInstance random_gamma_instance(std::uint64_t seed, std::size_t index, std::size_t cells) {
  auto rng = make_rng(seed, index, cells, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto [p, q] = draw_exponents(rng);
  const double rho = 1.0 / (1.0 / q - inv(p));
  const double horizon = 0.5 + 3.5 * unit(rng);
  const double c1 = 0.5 + 1.5 * unit(rng);
  const double target = 0.05 + 2.95 * unit(rng);
  const double h = horizon / static_cast<double>(cells);
  auto a = random_profile(rng, cells, rho, h, target, kCellCap * std::pow(h, -1.0 / rho));
  return make_gamma_instance(std::move(a), horizon, p, q, c1);
}

GronwallInstance random_exp_instance(std::uint64_t seed, std::size_t index, std::size_t cells) {
  auto rng = make_rng(seed, index, cells, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto [p, q] = draw_exponents(rng);
  const double horizon = unit(rng) < 0.5 ? 2.0 : 4.0;
  const double c2 = 0.5 + 1.5 * unit(rng);
  const double h = horizon / static_cast<double>(cells);
  const auto k1 = static_cast<std::size_t>(std::llround(1.0 / h));
  const double ap = holder_dual_ratio(p, q);
  auto a = random_profile(rng, cells, ap, h, 0.05 + 2.95 * unit(rng),
                          kCellCap * std::pow(h, -1.0 / ap));
  // ||v||_{L^p(0,1)}^q = s C2 with s in [1/2, 1]
  const double target_v = std::pow((0.5 + 0.5 * unit(rng)) * c2, 1.0 / q);
  auto v0 = random_profile(rng, k1, p, h, target_v, std::numeric_limits<double>::infinity());
  return make_exp_instance(std::move(v0), std::move(a), horizon, p, q, c2);
}

std::vector<EnsembleRow> run_ensembles(const EnsembleSpec& spec) {
  struct Job {
    bool gamma;
    std::size_t cells;
  };
  std::vector<Job> jobs;
  for (const auto cells : spec.mesh_sizes) jobs.push_back({true, cells});
  for (const auto cells : spec.mesh_sizes) jobs.push_back({false, cells});
  std::vector<EnsembleRow> rows(jobs.size());
  std::vector<LemmaReport> reports(jobs.size() * spec.count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < reports.size(); i = next++) {
      const auto& job = jobs[i / spec.count];
      const std::size_t index = i % spec.count;
      reports[i] = job.gamma
                       ? verify_gamma_lemma(random_gamma_instance(spec.seed, index, job.cells))
                       : verify_exp_lemma(random_exp_instance(spec.seed, index, job.cells));
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, spec.workers);
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& row = rows[j];
    row.lemma = jobs[j].gamma ? "gamma" : "exp";
    row.cells = jobs[j].cells;
    row.instances = spec.count;
    for (std::size_t i = 0; i < spec.count; ++i) {
      const auto& r = reports[j * spec.count + i];
      row.vacuous += r.vacuous ? 1 : 0;
      row.violations += r.violations.size();
      row.worst_ratio = std::max(row.worst_ratio, r.worst_ratio);
    }
  }
  return rows;
}

CrossoverStudy crossover_study(double a_level, double p, double q, double t_max,
                               std::size_t samples) {
  if (!(t_max > 1.0) || samples < 2) {
    throw DomainError("crossover_study: needs t_max > 1 and at least two samples");
  }
  const double rho = 1.0 / (1.0 / q - inv(p));
  const double ap = holder_dual_ratio(p, q);
  CrossoverStudy study{a_level, p, q, {}, -1.0};
  const double t_min = 1.0 + 1e-3 * (t_max - 1.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double t = 1.0 + (t_min - 1.0) * std::pow((t_max - 1.0) / (t_min - 1.0), frac);
    const auto g = gamma_bound(1.0, rho, a_level * std::pow(t, 1.0 / rho));
    const auto e = exp_bound(1.0, p, q, a_level * std::pow(t - 1.0, 1.0 / ap));
    study.samples.push_back({t, g.value, e.value, g.infinite});
  }
  std::size_t first = samples;
  for (std::size_t i = samples; i-- > 0;) {
    const auto& s = study.samples[i];
    if (!(s.exp_value < s.gamma_value)) break;
    first = i;
  }
  if (first < samples) study.crossover_t = study.samples[first].t;
  return study;
}

}  // namespace fsps
