#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "g0/error.hpp"
#include "g0/estimation.hpp"
#include "g0/kstest.hpp"
#include "g0/montecarlo.hpp"

namespace g0kit {

namespace {

using nlohmann::json;

[[noreturn]] void usage_error(const std::string& what) {
  throw std::invalid_argument(what);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool is_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  return in && magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5');
}

struct LoadedSample {
  std::vector<double> values;
  std::optional<double> looks;
};

LoadedSample load_values(const std::string& path,
                         const std::optional<g0::io::RegionSelector>& region) {
  LoadedSample out;
  if (is_pgm(path)) {
    const g0::io::PgmImage img = g0::io::read_pgm(path);
    out.looks = img.looks;
    std::vector<double> raw =
        region ? img.region(*region) : img.intensities;
    // quantized zero pixels carry no intensity information
    for (double v : raw) {
      if (v > 0.0) out.values.push_back(v);
    }
  } else {
    if (region) usage_error(path + ": --region applies to PGM inputs only");
    const g0::io::SampleFile file = g0::io::read_sample_csv(path);
    out.looks = file.looks;
    out.values = file.values;
  }
  if (out.values.empty()) usage_error(path + ": no positive observations");
  for (double v : out.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      usage_error(path + ": observations must be positive and finite");
    }
  }
  return out;
}

double resolve_looks(const std::optional<double>& flag,
                     const std::optional<double>& metadata,
                     const std::string& context) {
  if (flag) return *flag;
  if (metadata) return *metadata;
  usage_error(context + ": number of looks is required (flag or file metadata)");
}

json fit_report(const g0::Sample& s, double looks, int bins) {
  const g0::FitResult fit = g0::fit_ml(s, looks);
  json out;
  out["alpha_hat"] = fit.params.alpha;
  out["gamma_hat"] = fit.params.gamma;
  const double mu = g0::mean(fit.params);
  if (std::isinf(mu)) {
    out["mean_hat"] = "inf";
  } else {
    out["mean_hat"] = mu;
  }
  out["converged"] = fit.converged;
  out["iterations"] = fit.iterations;
  out["log_likelihood"] = fit.log_likelihood;
  out["n"] = s.size();
  out["looks"] = looks;
  if (!fit.note.empty()) out["note"] = fit.note;
  out["sse_g0"] = g0::sse_fit(
      s, [&](double z) { return g0::density(fit.params, z); }, bins);
  try {
    const g0::GammaFit gfit = g0::fit_gamma_ml(s);
    out["gamma_fit"] = {{"shape", gfit.shape}, {"mean", gfit.mean}};
    out["sse_gamma"] = g0::sse_fit(
        s, [&](double z) { return std::exp(g0::gamma_log_density(gfit, z)); },
        bins);
  } catch (const std::invalid_argument& e) {
    out["sse_gamma"] = nullptr;
    out["gamma_fit_error"] = e.what();
  }
  return out;
}

std::vector<g0::DistanceKind> parse_tests(const std::vector<std::string>& names) {
  std::vector<g0::DistanceKind> kinds;
  for (const std::string& name : names) {
    kinds.push_back(g0::distance_kind_from_string(name));
  }
  if (kinds.empty()) usage_error("no tests requested");
  return kinds;
}

// ---- mc config handling ----------------------------------------------------

g0::mc::ScenarioSpec scenario_from_json(const json& j, const std::string& mode) {
  g0::mc::ScenarioSpec s{};
  try {
    if (mode == "estimator") {
      s.alpha1 = s.alpha2 = j.at("alpha").get<double>();
      s.gamma1 = s.gamma2 = j.at("gamma").get<double>();
    } else {
      s.alpha1 = j.at("alpha1").get<double>();
      s.alpha2 = j.at("alpha2").get<double>();
      s.gamma1 = j.at("gamma1").get<double>();
      s.gamma2 = j.at("gamma2").get<double>();
    }
    s.looks = j.at("looks").get<double>();
    s.sample_size = j.at("sample_size").get<std::size_t>();
    s.contamination.epsilon = j.value("epsilon", 0.0);
    s.contamination.scale_factor = j.value("scale_factor", 100.0);
    s.replications = j.value("replications", std::size_t{1000});
    if (j.contains("levels")) {
      s.nominal_levels = j.at("levels").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    usage_error(std::string("scenario entry: ") + e.what());
  }
  return s;
}

json scenario_to_json(const g0::mc::ScenarioSpec& s, const std::string& mode) {
  json j;
  if (mode == "estimator") {
    j["alpha"] = s.alpha1;
    j["gamma"] = s.gamma1;
  } else {
    j["alpha1"] = s.alpha1;
    j["alpha2"] = s.alpha2;
    j["gamma1"] = s.gamma1;
    j["gamma2"] = s.gamma2;
    j["class"] = g0::mc::to_string(s.scenario_class);
  }
  j["looks"] = s.looks;
  j["sample_size"] = s.sample_size;
  j["epsilon"] = s.contamination.epsilon;
  j["scale_factor"] = s.contamination.scale_factor;
  j["replications"] = s.replications;
  j["levels"] = s.nominal_levels;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) usage_error(path + ": cannot open for writing");
  out << text;
  if (!out) usage_error(path + ": write error");
}

std::string csv_quote(double v) { return g0::io::format_double(v); }

int run_mc_tests(const std::string& mode, const json& config, std::uint64_t seed,
                 const std::string& out_path, unsigned workers,
                 std::optional<std::size_t> rep_override) {
  if (!config.contains("scenarios") || !config.at("scenarios").is_array()) {
    usage_error("config: missing 'scenarios' array");
  }
  std::ostringstream csv;
  csv << "scenario_id,alpha1,alpha2,gamma1,gamma2,looks,n,epsilon,test,level,"
         "rejection_rate,replications,censored,dbar,nonconvergent,class\n";
  json doc;
  doc["mode"] = mode;
  doc["master_seed"] = seed;
  doc["scenarios"] = json::array();

  std::size_t id = 0;
  for (const json& entry : config.at("scenarios")) {
    g0::mc::ScenarioSpec spec = scenario_from_json(entry, mode);
    if (rep_override) spec.replications = *rep_override;
    std::vector<std::string> test_names = {"kl", "t", "b", "ag", "ks"};
    if (entry.contains("tests")) {
      test_names = entry.at("tests").get<std::vector<std::string>>();
    }
    const std::vector<g0::DistanceKind> tests = parse_tests(test_names);
    const std::uint64_t scenario_seed = splitmix64(seed ^ (0x70F0D0B0A0908070ull + id));
    const g0::mc::MCReport report =
        mode == "size"
            ? g0::mc::empirical_size(spec, tests, scenario_seed, workers)
            : g0::mc::empirical_power(spec, tests, scenario_seed, workers);

    json jres = scenario_to_json(report.spec, mode);
    jres["scenario_id"] = id;
    jres["master_seed"] = scenario_seed;
    jres["censored"] = report.censored;
    jres["nonconvergent"] = report.nonconvergent;
    jres["valid_replications"] = report.valid_replications;
    jres["dbar"] = report.dbar;
    jres["rates"] = json::object();
    for (std::size_t t = 0; t < tests.size(); ++t) {
      json per_level = json::object();
      for (std::size_t l = 0; l < spec.nominal_levels.size(); ++l) {
        per_level[g0::io::format_double(spec.nominal_levels[l])] =
            report.rejection_rates[t][l];
        csv << id << ',' << csv_quote(spec.alpha1) << ',' << csv_quote(spec.alpha2)
            << ',' << csv_quote(spec.gamma1) << ',' << csv_quote(spec.gamma2) << ','
            << csv_quote(spec.looks) << ',' << spec.sample_size << ','
            << csv_quote(spec.contamination.epsilon) << ','
            << g0::to_string(tests[t]) << ','
            << csv_quote(spec.nominal_levels[l]) << ','
            << csv_quote(report.rejection_rates[t][l]) << ','
            << report.valid_replications << ',' << report.censored << ','
            << csv_quote(report.dbar) << ',' << report.nonconvergent << ','
            << g0::mc::to_string(report.spec.scenario_class) << '\n';
      }
      jres["rates"][g0::to_string(tests[t])] = per_level;
    }
    doc["scenarios"].push_back(jres);
    ++id;
  }
  write_text(out_path, csv.str());
  std::filesystem::path json_path(out_path);
  json_path.replace_extension(".json");
  write_text(json_path.string(), doc.dump(2) + "\n");
  return kExitOk;
}

int run_mc_estimator(const json& config, std::uint64_t seed,
                     const std::string& out_path, unsigned workers,
                     std::optional<std::size_t> rep_override) {
  if (!config.contains("scenarios") || !config.at("scenarios").is_array()) {
    usage_error("config: missing 'scenarios' array");
  }
  std::ostringstream csv;
  csv << "scenario_id,alpha,gamma,looks,n,epsilon,parameter,bias,cv_percent,mse,"
         "replications,censored,nonconvergent\n";
  json doc;
  doc["mode"] = "estimator";
  doc["master_seed"] = seed;
  doc["scenarios"] = json::array();

  std::size_t id = 0;
  for (const json& entry : config.at("scenarios")) {
    g0::mc::ScenarioSpec spec = scenario_from_json(entry, "estimator");
    if (rep_override) spec.replications = *rep_override;
    const std::uint64_t scenario_seed = splitmix64(seed ^ (0x70F0D0B0A0908070ull + id));
    const g0::mc::MCReport report = g0::mc::estimator_study(
        spec.first(), spec.contamination, spec.sample_size, spec.replications,
        scenario_seed, workers);

    json jres = scenario_to_json(spec, "estimator");
    jres["scenario_id"] = id;
    jres["master_seed"] = scenario_seed;
    jres["censored"] = report.censored;
    jres["nonconvergent"] = report.nonconvergent;
    jres["valid_replications"] = report.valid_replications;
    const struct {
      const char* name;
      double truth;
      const std::optional<g0::mc::ParamStats>& stats;
    } rows[] = {{"alpha", spec.alpha1, report.alpha_stats},
                {"gamma", spec.gamma1, report.gamma_stats}};
    for (const auto& row : rows) {
      if (!row.stats) continue;
      csv << id << ',' << csv_quote(spec.alpha1) << ',' << csv_quote(spec.gamma1)
          << ',' << csv_quote(spec.looks) << ',' << spec.sample_size << ','
          << csv_quote(spec.contamination.epsilon) << ',' << row.name << ','
          << csv_quote(row.stats->bias) << ',' << csv_quote(row.stats->cv_percent)
          << ',' << csv_quote(row.stats->mse) << ',' << report.valid_replications
          << ',' << report.censored << ',' << report.nonconvergent << '\n';
      jres[row.name] = {{"bias", row.stats->bias},
                        {"cv_percent", row.stats->cv_percent},
                        {"mse", row.stats->mse}};
    }
    doc["scenarios"].push_back(jres);
    ++id;
  }
  write_text(out_path, csv.str());
  std::filesystem::path json_path(out_path);
  json_path.replace_extension(".json");
  write_text(json_path.string(), doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int cmd_sample(const SampleArgs& args) {
  if (args.gamma.has_value() == args.mean.has_value()) {
    usage_error("sample: give exactly one of --gamma / --mean");
  }
  double gamma;
  if (args.gamma) {
    gamma = *args.gamma;
  } else {
    if (!(args.alpha < -1.0)) {
      usage_error("sample: --mean requires alpha < -1 (the mean is infinite otherwise)");
    }
    gamma = -*args.mean * (1.0 + args.alpha);
  }
  const g0::G0Params p{args.alpha, gamma, args.looks};
  p.validate();
  const g0::mc::ContaminationSpec contamination{args.epsilon, args.scale_factor};
  contamination.validate();

  const bool image = args.width.has_value() || args.height.has_value();
  std::size_t count;
  if (image) {
    if (!args.width || !args.height || *args.width == 0 || *args.height == 0) {
      usage_error("sample: --width and --height must both be positive for PGM output");
    }
    if (args.n) usage_error("sample: give either --n or --width/--height, not both");
    count = *args.width * *args.height;
  } else {
    if (!args.n || *args.n == 0) usage_error("sample: --n must be positive");
    count = *args.n;
  }

  g0::Philox gen(args.seed, 0);
  const g0::Sample s = g0::mc::contaminated_sample(p, contamination, count, gen);
  if (image) {
    g0::io::write_pgm(args.out_path, s.values(), *args.width, *args.height,
                      args.looks);
  } else {
    g0::io::write_sample_csv(args.out_path, s.values(), args.looks);
  }
  return kExitOk;
}

int cmd_fit(const FitArgs& args) {
  const LoadedSample loaded = load_values(args.in_path, args.region);
  const double looks = resolve_looks(args.looks, loaded.looks, "fit");
  const g0::Sample s{loaded.values};
  const json report = fit_report(s, looks, args.bins);
  if (args.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else if (args.format == "csv") {
    std::cout << "alpha_hat,gamma_hat,mean_hat,converged,log_likelihood,n,"
                 "sse_g0,sse_gamma\n";
    std::cout << csv_quote(report.at("alpha_hat").get<double>()) << ','
              << csv_quote(report.at("gamma_hat").get<double>()) << ','
              << (report.at("mean_hat").is_string()
                      ? report.at("mean_hat").get<std::string>()
                      : csv_quote(report.at("mean_hat").get<double>()))
              << ',' << (report.at("converged").get<bool>() ? 1 : 0) << ','
              << csv_quote(report.at("log_likelihood").get<double>()) << ','
              << report.at("n").get<std::size_t>() << ','
              << csv_quote(report.at("sse_g0").get<double>()) << ','
              << (report.at("sse_gamma").is_null()
                      ? std::string("nan")
                      : csv_quote(report.at("sse_gamma").get<double>()))
              << '\n';
  } else {
    usage_error("fit: --format must be json or csv");
  }
  return kExitOk;
}

int cmd_contrast(const ContrastArgs& args) {
  const LoadedSample a = load_values(args.a_path, std::nullopt);
  const LoadedSample b = load_values(args.b_path, std::nullopt);
  if (a.looks && b.looks && *a.looks != *b.looks) {
    usage_error("contrast: the two inputs declare different looks (" +
                g0::io::format_double(*a.looks) + " vs " +
                g0::io::format_double(*b.looks) + ")");
  }
  const std::optional<double> metadata = a.looks ? a.looks : b.looks;
  const double looks = resolve_looks(args.looks, metadata, "contrast");
  if (!(args.level > 0.0) || !(args.level < 1.0)) {
    usage_error("contrast: --level must lie in (0,1)");
  }
  const std::vector<g0::DistanceKind> tests = parse_tests(args.tests);
  const g0::Sample sa{a.values};
  const g0::Sample sb{b.values};

  const g0::FitResult fa = g0::fit_ml(sa, looks);
  const g0::FitResult fb = g0::fit_ml(sb, looks);

  json out = json::array();
  for (g0::DistanceKind kind : tests) {
    json entry;
    entry["test"] = g0::to_string(kind);
    if (kind == g0::DistanceKind::KolmogorovSmirnov) {
      const g0::TestResult r = g0::ks_two_sample(sa, sb);
      entry["distance"] = r.distance;
      entry["statistic"] = r.statistic;
      entry["p_value"] = r.p_value;
      entry["reject"] = r.p_value <= args.level;
      entry["law"] = "kolmogorov";
    } else if (!fa.converged || !fb.converged) {
      entry["error"] = std::string("ML fit did not converge for ") +
                       (!fa.converged ? "first" : "second") + " sample";
    } else {
      try {
        const g0::TestResult r =
            g0::test_statistic(kind, fa.params, fb.params, sa.size(), sb.size());
        entry["distance"] = r.distance;
        entry["statistic"] = r.statistic;
        entry["p_value"] = r.p_value;
        entry["reject"] = r.p_value <= args.level;
        entry["law"] = "chi-square";
        entry["dof"] = r.dof;
      } catch (const g0::NumericalError& e) {
        entry["error"] = e.what();
      }
    }
    out.push_back(entry);
  }
  json doc;
  doc["looks"] = looks;
  doc["level"] = args.level;
  doc["m"] = sa.size();
  doc["n"] = sb.size();
  doc["fit_a"] = {{"alpha_hat", fa.params.alpha},
                  {"gamma_hat", fa.params.gamma},
                  {"converged", fa.converged}};
  doc["fit_b"] = {{"alpha_hat", fb.params.alpha},
                  {"gamma_hat", fb.params.gamma},
                  {"converged", fb.converged}};
  doc["tests"] = out;
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_mc(const McArgs& args) {
  if (args.mode == "grid") {
    if (args.out_path.empty()) usage_error("mc: --out is required");
    g0::mc::GridKind kind;
    if (args.grid_kind == "size") kind = g0::mc::GridKind::size;
    else if (args.grid_kind == "power") kind = g0::mc::GridKind::power;
    else if (args.grid_kind == "estimator") kind = g0::mc::GridKind::estimator;
    else usage_error("mc: --kind must be size, power or estimator");
    json doc;
    doc["mode"] = args.grid_kind;
    doc["scenarios"] = json::array();
    for (const g0::mc::ScenarioSpec& s : g0::mc::scenario_grid(kind)) {
      doc["scenarios"].push_back(scenario_to_json(s, args.grid_kind));
    }
    write_text(args.out_path, doc.dump(2) + "\n");
    return kExitOk;
  }
  if (args.mode != "size" && args.mode != "power" && args.mode != "estimator") {
    usage_error("mc: --mode must be size, power, estimator or grid");
  }
  if (args.config_path.empty()) usage_error("mc: --config is required");
  if (args.out_path.empty()) usage_error("mc: --out is required");
  std::ifstream in(args.config_path);
  if (!in) usage_error(args.config_path + ": cannot open config");
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    usage_error(args.config_path + ": " + e.what());
  }
  if (args.mode == "estimator") {
    return run_mc_estimator(config, args.seed, args.out_path, args.workers,
                            args.replications);
  }
  return run_mc_tests(args.mode, config, args.seed, args.out_path, args.workers,
                      args.replications);
}

int cmd_gof(const GofArgs& args) {
  const LoadedSample loaded = load_values(args.in_path, args.region);
  const double looks = resolve_looks(args.looks, loaded.looks, "gof");
  if (args.bins < 2) usage_error("gof: --bins must be >= 2");
  const g0::Sample s{loaded.values};
  const json report = fit_report(s, looks, args.bins);
  std::cout << report.dump(2) << "\n";

  if (!args.hist_out.empty()) {
    const double zmax = *std::max_element(s.values().begin(), s.values().end());
    const double width = zmax / args.bins;
    std::vector<double> counts(static_cast<std::size_t>(args.bins), 0.0);
    for (double z : s.values()) {
      auto idx = static_cast<std::size_t>(z / width);
      if (idx >= counts.size()) idx = counts.size() - 1;
      counts[idx] += 1.0;
    }
    const g0::G0Params fitted{report.at("alpha_hat").get<double>(),
                              report.at("gamma_hat").get<double>(), looks};
    std::optional<g0::GammaFit> gfit;
    if (report.contains("gamma_fit")) {
      gfit = g0::GammaFit{report.at("gamma_fit").at("shape").get<double>(),
                          report.at("gamma_fit").at("mean").get<double>()};
    }
    std::ostringstream csv;
    csv << "bin_left,bin_right,midpoint,count,density,g0_density,gamma_density\n";
    const double n = static_cast<double>(s.size());
    for (int i = 0; i < args.bins; ++i) {
      const double left = i * width;
      const double right = (i + 1) * width;
      const double mid = 0.5 * (left + right);
      csv << csv_quote(left) << ',' << csv_quote(right) << ',' << csv_quote(mid)
          << ',' << static_cast<long long>(counts[static_cast<std::size_t>(i)])
          << ',' << csv_quote(counts[static_cast<std::size_t>(i)] / (n * width))
          << ',' << csv_quote(g0::density(fitted, mid)) << ','
          << (gfit ? csv_quote(std::exp(g0::gamma_log_density(*gfit, mid)))
                   : std::string("nan"))
          << '\n';
    }
    write_text(args.hist_out, csv.str());
  }
  return kExitOk;
}

}  // namespace g0kit
