// Copyright 2026 The ksdm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <ostream>

#include "CLI11.hpp"
#include "ksdm/errors.hpp"
#include "ksdm/parallel.hpp"
#include "ksdm_cli/commands.hpp"

namespace ksdm::cli {

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  std::string samples;
};

void add_common(CLI::App* sub, Flags& f, bool needs_samples) {
  sub->add_option("--config", f.config, "JSON experiment config");
  sub->add_option("--seed", f.seed, "overrides the config seed");
  sub->add_option("--out", f.out, "output directory (overrides output.dir)");
  sub->add_option("--threads", f.threads, "worker threads, 0 = hardware")->check(CLI::NonNegativeNumber);
  if (needs_samples) {
    sub->add_option("--samples", f.samples, "sample file written by 'ksdm sample'")->required();
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel Stein discrepancy tools for Stiefel, Grassmann and SPD manifolds", "ksdm"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* sample = app.add_subcommand("sample", "draw samples and write a sample file");
  CLI::App* ksd = app.add_subcommand("ksd", "U and V statistics of a sample file");
  CLI::App* mksde = app.add_subcommand("mksde", "minimum-KSD estimate from a sample file");
  CLI::App* gof = app.add_subcommand("gof", "composite goodness-of-fit test");
  CLI::App* exp_mle = app.add_subcommand("experiment-mle-vs-mksde", "estimator comparison on V_2(3)");
  CLI::App* exp_gof = app.add_subcommand("experiment-gof", "goodness-of-fit p-value table on V_2(3)");
  CLI::App* selftest = app.add_subcommand("selftest", "closed form vs brute force vs finite differences");
  add_common(sample, f, false);
  add_common(ksd, f, true);
  add_common(mksde, f, true);
  add_common(gof, f, true);
  add_common(exp_mle, f, false);
  add_common(exp_gof, f, false);
  add_common(selftest, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  RunOptions opts;
  if (chosen->count("--seed") > 0) opts.seed = f.seed;
  opts.out_dir = f.out;
  opts.samples_path = f.samples;
  opts.threads = f.threads;
  if (f.threads > 0) set_default_threads(f.threads);

  try {
    if (chosen == selftest) {
      return cmd_selftest(out, opts.seed ? *opts.seed : 20240601) ? 0 : 2;
    }
    const ExperimentConfig cfg = f.config.empty() ? parse_config("{}") : load_config(f.config);
    if (chosen == sample) {
      const SampleReport rep = cmd_sample(cfg, opts);
      out << "wrote " << rep.file.points.size() << " points to " << rep.path;
      if (rep.file.method == "rejection" || rep.file.method == "mh") {
        out << " (acceptance rate " << rep.acceptance_rate << ")";
      }
      out << '\n';
    } else if (chosen == ksd) {
      out << cmd_ksd(cfg, opts).json << '\n';
    } else if (chosen == mksde) {
      out << cmd_mksde(cfg, opts).json << '\n';
    } else if (chosen == gof) {
      out << cmd_gof(cfg, opts).json << '\n';
    } else if (chosen == exp_mle) {
      const auto rows = cmd_experiment_mle_vs_mksde(cfg, opts);
      out << "wrote " << rows.size() << " rows to " << effective_out_dir(cfg, opts) << "/mle_vs_mksde.csv\n";
    } else if (chosen == exp_gof) {
      const auto rows = cmd_experiment_gof(cfg, opts);
      out << "wrote " << rows.size() << " rows to " << effective_out_dir(cfg, opts) << "/gof_pvalues.csv\n";
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ksdm::Error& e) {
    err << "numeric error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ksdm::cli
