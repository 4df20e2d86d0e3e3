#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fsps {

/// Bound value; `infinite` is set when the evaluation overflows a double.
struct BoundValue {
  double value = 0.0;
  bool infinite = false;
};

/// 2 C1 Gamma(2 + 2^rho a_norm^rho). Requires C1 > 0, rho >= 1, a_norm >= 0.
BoundValue gamma_bound(double c1, double rho, double a_norm);

/// (p/(p-q))^(1/p) C2^(1/q) exp((1/p) (p/q)^(p/(p-q)) a_norm^(p/(p-q))), with
/// a_norm measured in L^(p/(p-q))(1,t). For p = inf this is C2^(1/q) exp(a_norm/q)
/// with a_norm in L^1(1,t). Throws DomainError unless 1 <= q < p.
BoundValue exp_bound(double c2, double p, double q, double a_norm);

/// Piecewise-constant data on the uniform mesh t_j = j T / M, j = 0..M-1.
/// Norms over (0, t_k) are left-endpoint sums over the first k cells.
struct GronwallInstance {
  double horizon = 1.0;
  std::vector<double> v;
  std::vector<double> a;
  double p = 2.0;  // may be +inf
  double q = 1.0;
  double rho = 2.0;
  double constant = 1.0;  // C1 or C2

  std::size_t cells() const noexcept { return v.size(); }
  double step() const noexcept { return horizon / static_cast<double>(v.size()); }
};

/// ||f||_{L^p} over cells [begin, end) of width h; p may be +inf.
double discrete_norm(const std::vector<double>& f, double p, double h, std::size_t begin,
                     std::size_t end);

/// Throws DomainError for inconsistent exponents or negative samples.
void check_instance(const GronwallInstance& inst);

struct GronwallViolation {
  double t;
  double lhs;
  double bound;
};

/// The bound is checked at every mesh time of the leading run of prefixes on
/// which the hypothesis holds; later prefixes are outside the lemma.
struct LemmaReport {
  std::size_t prefixes = 0;
  std::size_t hypothesis_run = 0;
  bool vacuous = false;
  std::vector<GronwallViolation> violations;
  double worst_ratio = 0.0;  // max lhs / bound over checked prefixes

  bool passed() const noexcept { return !vacuous && violations.empty(); }
};

LemmaReport verify_gamma_lemma(const GronwallInstance& inst);

/// Mesh must put a node at t = 1 (horizon * k / M == 1 for some k).
LemmaReport verify_exp_lemma(const GronwallInstance& inst);

/// v solving the hypothesis with equality at every node, for given a.
GronwallInstance make_gamma_instance(std::vector<double> a, double horizon, double p, double q,
                                     double c1);
GronwallInstance make_exp_instance(std::vector<double> v_initial, std::vector<double> a,
                                   double horizon, double p, double q, double c2);

/// Random constructed instances; deterministic in (seed, index, cells).
GronwallInstance random_gamma_instance(std::uint64_t seed, std::size_t index, std::size_t cells);
GronwallInstance random_exp_instance(std::uint64_t seed, std::size_t index, std::size_t cells);

struct EnsembleSpec {
  std::size_t count = 100;
  std::vector<std::size_t> mesh_sizes{128, 256, 512};
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

struct EnsembleRow {
  std::string lemma;
  std::size_t cells = 0;
  std::size_t instances = 0;
  std::size_t vacuous = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
};

std::vector<EnsembleRow> run_ensembles(const EnsembleSpec& spec);

struct CrossoverSample {
  double t;
  double gamma_value;
  double exp_value;
  bool gamma_infinite;
};

struct CrossoverStudy {
  double a_level;
  double p;
  double q;
  std::vector<CrossoverSample> samples;
  /// Smallest sampled t from which exp_bound stays below gamma_bound; negative if never.
  double crossover_t = -1.0;
};

/// a = a_level on (0, t), C1 = C2^(1/q) = 1, t on a geometric grid in (1, t_max].
CrossoverStudy crossover_study(double a_level, double p, double q, double t_max,
                               std::size_t samples);

}  // namespace fsps
