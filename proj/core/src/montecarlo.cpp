#include "g0/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "g0/error.hpp"
#include "g0/kstest.hpp"

namespace g0::mc {

namespace {

enum class Status { valid, nonconvergent, censored };

template <class R>
struct Outcome {
  Status status = Status::nonconvergent;
  R value{};
};

// Evaluates replication indices 0,1,2,... in parallel batches and keeps the
// first `need` valid outcomes in index order. Validity of index k depends
// only on (master_seed, k), so the result is independent of the worker
// count. Invalid indices scanned before the cut are counted by reason.
template <class R, class Eval>
void run_replications(std::size_t need, unsigned workers, const Eval& eval,
                      std::vector<R>& valid, std::size_t& censored,
                      std::size_t& nonconvergent) {
  valid.clear();
  valid.reserve(need);
  censored = 0;
  nonconvergent = 0;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  const std::size_t hard_cap = 50 * need + 1000;
  std::size_t next_index = 0;
  while (valid.size() < need && next_index < hard_cap) {
    const std::size_t deficit = need - valid.size();
    const std::size_t batch = std::max<std::size_t>(deficit + deficit / 8, 32);
    const std::size_t lo = next_index;
    const std::size_t hi = std::min(lo + batch, hard_cap);
    std::vector<Outcome<R>> outcomes(hi - lo);
    std::atomic<std::size_t> cursor{lo};
    auto work = [&]() {
      for (;;) {
        const std::size_t k = cursor.fetch_add(1);
        if (k >= hi) return;
        outcomes[k - lo] = eval(k);
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (const auto& o : outcomes) {
      if (valid.size() >= need) break;
      switch (o.status) {
        case Status::valid: valid.push_back(o.value); break;
        case Status::censored: ++censored; break;
        case Status::nonconvergent: ++nonconvergent; break;
      }
    }
    next_index = hi;
  }
}

bool reject(double p_value, double level) {
  if (level >= 1.0) return true;
  if (level <= 0.0) return false;  // level-0 test never rejects
  return p_value <= level;
}

struct TestPValues {
  std::vector<double> p_values;  // one per requested test
};

MCReport run_test_study(const ScenarioSpec& spec,
                        const std::vector<DistanceKind>& tests,
                        std::uint64_t master_seed, unsigned workers) {
  spec.validate();
  if (tests.empty()) throw std::invalid_argument("test study: no tests requested");
  const G0Params p1 = spec.first();
  const G0Params p2 = spec.second();
  const FitOptions fit_opts{};

  auto eval = [&](std::size_t index) {
    Outcome<TestPValues> out;
    Philox gen(master_seed, index);
    const Sample s1 = contaminated_sample(p1, spec.contamination, spec.sample_size, gen);
    const Sample s2 = contaminated_sample(p2, spec.contamination, spec.sample_size, gen);
    const FitResult f1 = fit_ml(s1, spec.looks, fit_opts);
    const FitResult f2 = fit_ml(s2, spec.looks, fit_opts);
    if (!f1.converged || !f2.converged) return out;
    out.value.p_values.reserve(tests.size());
    try {
      for (DistanceKind kind : tests) {
        if (kind == DistanceKind::KolmogorovSmirnov) {
          out.value.p_values.push_back(ks_two_sample(s1, s2).p_value);
        } else {
          out.value.p_values.push_back(
              test_statistic(kind, f1.params, f2.params, spec.sample_size,
                             spec.sample_size)
                  .p_value);
        }
      }
    } catch (const NumericalError&) {
      return out;  // counted as non-convergent and redrawn
    }
    out.status = Status::valid;
    return out;
  };

  MCReport report;
  report.spec = spec;
  report.master_seed = master_seed;
  report.tests = tests;
  std::vector<TestPValues> valid;
  run_replications(spec.replications, workers, eval, valid, report.censored,
                   report.nonconvergent);
  report.valid_replications = valid.size();

  report.rejection_rates.assign(tests.size(),
                                std::vector<double>(spec.nominal_levels.size(), 0.0));
  for (const TestPValues& r : valid) {
    for (std::size_t t = 0; t < tests.size(); ++t) {
      for (std::size_t l = 0; l < spec.nominal_levels.size(); ++l) {
        if (reject(r.p_values[t], spec.nominal_levels[l])) {
          report.rejection_rates[t][l] += 1.0;
        }
      }
    }
  }
  if (!valid.empty()) {
    for (auto& row : report.rejection_rates) {
      for (double& cell : row) cell /= static_cast<double>(valid.size());
    }
  }
  report.dbar = spec.scenario_class == ScenarioClass::i
                    ? 0.0
                    : mean_discrepancy(p1, p2);
  return report;
}

ParamStats summarize(const std::vector<double>& estimates, double truth) {
  const double n = static_cast<double>(estimates.size());
  double mean_hat = 0.0;
  for (double e : estimates) mean_hat += e;
  mean_hat /= n;
  double var = 0.0;
  double mse = 0.0;
  for (double e : estimates) {
    var += (e - mean_hat) * (e - mean_hat);
    mse += (e - truth) * (e - truth);
  }
  var /= (n - 1.0);
  mse /= n;
  ParamStats out;
  out.bias = mean_hat - truth;
  out.cv_percent = 100.0 * std::sqrt(var) / std::abs(mean_hat);
  out.mse = mse;
  return out;
}

}  // namespace

void ContaminationSpec::validate() const {
  if (!(epsilon >= 0.0) || !(epsilon <= 1.0) || !(scale_factor > 0.0) ||
      !std::isfinite(scale_factor)) {
    throw std::invalid_argument("ContaminationSpec: need 0 <= epsilon <= 1 and scale_factor > 0");
  }
}

std::string to_string(ScenarioClass c) {
  switch (c) {
    case ScenarioClass::i: return "i";
    case ScenarioClass::ii: return "ii";
    case ScenarioClass::iii: return "iii";
    case ScenarioClass::iv: return "iv";
    case ScenarioClass::v: return "v";
  }
  throw std::invalid_argument("to_string: unknown ScenarioClass");
}

void ScenarioSpec::validate() const {
  first().validate();
  second().validate();
  contamination.validate();
  if (sample_size < 2) throw std::invalid_argument("ScenarioSpec: sample_size must be >= 2");
  if (replications < 1) throw std::invalid_argument("ScenarioSpec: replications must be >= 1");
  for (double level : nominal_levels) {
    if (!(level >= 0.0) || !(level <= 1.0)) {
      throw std::invalid_argument("ScenarioSpec: nominal levels must lie in [0,1]");
    }
  }
}

ScenarioClass classify_scenario(const G0Params& p, const G0Params& q) {
  p.validate();
  q.validate();
  const double mu1 = mean(p);
  const double mu2 = mean(q);
  const bool alpha_eq = p.alpha == q.alpha;
  const bool mu_eq = mu1 == mu2;  // +inf == +inf for two urban-like laws
  if (alpha_eq) return mu_eq ? ScenarioClass::i : ScenarioClass::ii;
  if (mu_eq) return ScenarioClass::v;
  // Roughness and brightness change in the same direction -> (iii), opposite
  // -> (iv); stated for alpha1 > alpha2 in the source grid, mirrored pairs
  // classify the same way.
  return ((p.alpha > q.alpha) == (mu1 > mu2)) ? ScenarioClass::iii
                                              : ScenarioClass::iv;
}

Sample contaminated_sample(const G0Params& p, const ContaminationSpec& c,
                           std::size_t n, Philox& gen) {
  p.validate();
  c.validate();
  if (n < 1) throw std::invalid_argument("contaminated_sample: n must be >= 1");
  if (c.epsilon == 0.0) return sample(p, n, gen);
  const G0Params scaled{p.alpha, c.scale_factor * p.gamma, p.looks};
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool outlier = gen.next_double() < c.epsilon;
    values.push_back(sample_one(outlier ? scaled : p, gen));
  }
  return Sample(std::move(values));
}

MCReport empirical_size(const ScenarioSpec& spec,
                        const std::vector<DistanceKind>& tests,
                        std::uint64_t master_seed, unsigned workers) {
  if (spec.alpha1 != spec.alpha2 || spec.gamma1 != spec.gamma2) {
    throw std::invalid_argument("empirical_size: scenario (i) requires equal parameters");
  }
  ScenarioSpec s = spec;
  s.scenario_class = ScenarioClass::i;
  return run_test_study(s, tests, master_seed, workers);
}

MCReport empirical_power(const ScenarioSpec& spec,
                         const std::vector<DistanceKind>& tests,
                         std::uint64_t master_seed, unsigned workers) {
  ScenarioSpec s = spec;
  s.scenario_class = classify_scenario(spec.first(), spec.second());
  if (s.scenario_class == ScenarioClass::i) {
    throw std::invalid_argument("empirical_power: laws are identical; use empirical_size");
  }
  return run_test_study(s, tests, master_seed, workers);
}

MCReport estimator_study(const G0Params& p, const ContaminationSpec& c,
                         std::size_t sample_size, std::size_t replications,
                         std::uint64_t master_seed, unsigned workers) {
  p.validate();
  c.validate();
  if (sample_size < 2) throw std::invalid_argument("estimator_study: sample_size must be >= 2");
  const FitOptions fit_opts{};
  const double lo = 10.0 * p.alpha;    // alpha < 0: lower bound
  const double hi = p.alpha / 20.0;    // upper bound (closer to zero)

  struct Estimates {
    double alpha_hat;
    double gamma_hat;
  };
  auto eval = [&](std::size_t index) {
    Outcome<Estimates> out;
    Philox gen(master_seed, index);
    const Sample s = contaminated_sample(p, c, sample_size, gen);
    const FitResult fit = fit_ml(s, p.looks, fit_opts);
    if (!fit.converged) return out;
    if (fit.params.alpha < lo || fit.params.alpha > hi) {
      out.status = Status::censored;
      return out;
    }
    out.status = Status::valid;
    out.value = Estimates{fit.params.alpha, fit.params.gamma};
    return out;
  };

  MCReport report;
  report.spec = ScenarioSpec{p.alpha, p.alpha, p.gamma, p.gamma, p.looks,
                             sample_size, c, replications, {}, ScenarioClass::i};
  report.master_seed = master_seed;
  std::vector<Estimates> valid;
  run_replications(replications, workers, eval, valid, report.censored,
                   report.nonconvergent);
  report.valid_replications = valid.size();
  if (valid.size() >= 2) {
    std::vector<double> alphas, gammas;
    alphas.reserve(valid.size());
    gammas.reserve(valid.size());
    for (const Estimates& e : valid) {
      alphas.push_back(e.alpha_hat);
      gammas.push_back(e.gamma_hat);
    }
    report.alpha_stats = summarize(alphas, p.alpha);
    report.gamma_stats = summarize(gammas, p.gamma);
  }
  return report;
}

std::vector<ScenarioSpec> scenario_grid(GridKind kind) {
  const std::vector<double> alphas = {-1.5, -3.0, -5.0};
  const std::vector<double> mus = {1.0, 2.0, 5.0};
  const std::vector<double> looks_grid = {1.0, 8.0};
  const std::vector<std::size_t> sizes = {49, 81, 121};
  const std::vector<double> epsilons = {0.0, 1e-4, 5e-3};
  auto gamma_of = [](double alpha, double mu) { return -mu * (1.0 + alpha); };

  std::vector<ScenarioSpec> grid;
  if (kind == GridKind::size || kind == GridKind::estimator) {
    for (double eps : epsilons) {
      for (std::size_t n : sizes) {
        for (double looks : looks_grid) {
          for (double alpha : alphas) {
            for (double mu : mus) {
              ScenarioSpec s{};
              s.alpha1 = s.alpha2 = alpha;
              s.gamma1 = s.gamma2 = gamma_of(alpha, mu);
              s.looks = looks;
              s.sample_size = n;
              s.contamination = ContaminationSpec{eps, 100.0};
              s.scenario_class = ScenarioClass::i;
              grid.push_back(s);
            }
          }
        }
      }
    }
    return grid;
  }
  // Power grid: scenario (ii) uses equal roughness with the mean-ratio pairs
  // of the source tables; (iii)-(v) pair the three roughness levels with
  // greater/equal/smaller brightness.
  const std::vector<std::pair<double, double>> mu_ratio_pairs = {
      {1.0, 2.0}, {2.0, 5.0}, {1.0, 5.0}};
  for (std::size_t n : sizes) {
    for (double looks : looks_grid) {
      for (double alpha : alphas) {
        for (const auto& [mu1, mu2] : mu_ratio_pairs) {
          ScenarioSpec s{};
          s.alpha1 = s.alpha2 = alpha;
          s.gamma1 = gamma_of(alpha, mu1);
          s.gamma2 = gamma_of(alpha, mu2);
          s.looks = looks;
          s.sample_size = n;
          s.scenario_class = ScenarioClass::ii;
          grid.push_back(s);
        }
      }
    }
  }
  const std::vector<std::pair<double, double>> alpha_pairs = {
      {-1.5, -3.0}, {-1.5, -5.0}, {-3.0, -5.0}};
  for (std::size_t n : sizes) {
    for (double looks : looks_grid) {
      for (const auto& [a1, a2] : alpha_pairs) {
        for (double mu1 : mus) {
          for (double mu2 : mus) {
            ScenarioSpec s{};
            s.alpha1 = a1;
            s.alpha2 = a2;
            s.gamma1 = gamma_of(a1, mu1);
            s.gamma2 = gamma_of(a2, mu2);
            s.looks = looks;
            s.sample_size = n;
            s.scenario_class = classify_scenario(s.first(), s.second());
            grid.push_back(s);
          }
        }
      }
    }
  }
  return grid;
}

}  // namespace g0::mc
