// g0kit: contrast analysis for speckled intensity data under the G0 law.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "g0/error.hpp"
#include "g0/io.hpp"

namespace {

std::optional<g0::io::RegionSelector> to_region(const std::vector<std::size_t>& v) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 4) {
    throw std::invalid_argument("--region expects x,y,width,height");
  }
  return g0::io::RegionSelector{v[0], v[1], v[2], v[3]};
}

unsigned default_workers() {
  if (const char* env = std::getenv("G0KIT_WORKERS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 0;  // harness picks the hardware concurrency
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrast analysis of speckled (SAR-like) intensity data under the G0 distribution"};
  app.require_subcommand(1);

  // ---- sample --------------------------------------------------------------
  g0kit::SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw synthetic G0 intensities");
  sample->add_option("--alpha", sample_args.alpha, "Roughness (< 0)")->required();
  auto* opt_gamma = sample->add_option("--gamma", sample_args.gamma, "Scale (> 0)");
  sample->add_option("--mean", sample_args.mean, "Mean brightness (needs alpha < -1)")
      ->excludes(opt_gamma);
  sample->add_option("--looks", sample_args.looks, "Number of looks (>= 1)")->required();
  sample->add_option("--n", sample_args.n, "Observation count (CSV output)");
  sample->add_option("--width", sample_args.width, "Image width (PGM output)");
  sample->add_option("--height", sample_args.height, "Image height (PGM output)");
  sample->add_option("--epsilon", sample_args.epsilon, "Contamination rate");
  sample->add_option("--scale-factor", sample_args.scale_factor,
                     "Contamination scale multiplier");
  sample->add_option("--seed", sample_args.seed, "RNG seed")->required();
  sample->add_option("--out", sample_args.out_path, "Output path")->required();

  // ---- fit -----------------------------------------------------------------
  g0kit::FitArgs fit_args;
  std::vector<std::size_t> fit_region;
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of (alpha, gamma)");
  fit->add_option("--in", fit_args.in_path, "Sample file (CSV or PGM)")->required();
  fit->add_option("--looks", fit_args.looks, "Number of looks");
  fit->add_option("--format", fit_args.format, "Report format: json|csv");
  fit->add_option("--region", fit_region, "PGM region x,y,w,h")->delimiter(',');
  fit->add_option("--bins", fit_args.bins, "Histogram bins for the SSE report");

  // ---- contrast ------------------------------------------------------------
  g0kit::ContrastArgs contrast_args;
  auto* contrast = app.add_subcommand("contrast", "Pairwise region contrast tests");
  contrast->add_option("--a", contrast_args.a_path, "First sample file")->required();
  contrast->add_option("--b", contrast_args.b_path, "Second sample file")->required();
  contrast->add_option("--looks", contrast_args.looks, "Number of looks");
  contrast->add_option("--tests", contrast_args.tests,
                       "Subset of kl,t,b,ag,ks")->delimiter(',');
  contrast->add_option("--level", contrast_args.level, "Nominal level");

  // ---- mc ------------------------------------------------------------------
  g0kit::McArgs mc_args;
  mc_args.workers = default_workers();
  auto* mc = app.add_subcommand("mc", "Monte Carlo size/power/estimator campaigns");
  mc->add_option("--mode", mc_args.mode, "size|power|estimator|grid")->required();
  mc->add_option("--config", mc_args.config_path, "Scenario config (JSON)");
  mc->add_option("--kind", mc_args.grid_kind, "Grid kind for --mode grid");
  mc->add_option("--seed", mc_args.seed, "Master seed");
  mc->add_option("--out", mc_args.out_path, "Output CSV path (JSON written beside it)");
  mc->add_option("--workers", mc_args.workers, "Worker threads (0 = hardware)");
  mc->add_option("--replications", mc_args.replications,
                 "Override per-scenario replication counts");

  // ---- gof -----------------------------------------------------------------
  g0kit::GofArgs gof_args;
  std::vector<std::size_t> gof_region;
  auto* gof = app.add_subcommand("gof", "Goodness of fit: SSE against G0 and gamma");
  gof->add_option("--in", gof_args.in_path, "Sample file (CSV or PGM)")->required();
  gof->add_option("--looks", gof_args.looks, "Number of looks");
  gof->add_option("--bins", gof_args.bins, "Histogram bins");
  gof->add_option("--region", gof_region, "PGM region x,y,w,h")->delimiter(',');
  gof->add_option("--hist-out", gof_args.hist_out, "Plot-ready histogram CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? g0kit::kExitOk : g0kit::kExitUsage;
  }

  try {
    if (*sample) return g0kit::cmd_sample(sample_args);
    if (*fit) {
      fit_args.region = to_region(fit_region);
      return g0kit::cmd_fit(fit_args);
    }
    if (*contrast) return g0kit::cmd_contrast(contrast_args);
    if (*mc) return g0kit::cmd_mc(mc_args);
    if (*gof) {
      gof_args.region = to_region(gof_region);
      return g0kit::cmd_gof(gof_args);
    }
  } catch (const g0::NumericalError& e) {
    std::cerr << "g0kit: numerical failure: " << e.what() << "\n";
    return g0kit::kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "g0kit: " << e.what() << "\n";
    return g0kit::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "g0kit: " << e.what() << "\n";
    return g0kit::kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "g0kit: " << e.what() << "\n";
    return g0kit::kExitUsage;
  }
  return g0kit::kExitUsage;
}
