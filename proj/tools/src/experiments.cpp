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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ksdm/errors.hpp"
#include "ksdm/parallel.hpp"
#include "ksdm/rng.hpp"
#include "ksdm_cli/commands.hpp"

namespace ksdm::cli {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path out_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  const std::filesystem::path dir = effective_out_dir(cfg, opts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  os << text;
}

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) != cfg.output.formats.end();
}

const Manifold kV23 = Manifold::stiefel(3, 2);

}  // namespace

Mat e1_matrix() {
  Mat e = Mat::Zero(3, 2);
  e.col(0).setOnes();
  return e;
}

Mat e2_matrix() { return Mat::Ones(3, 2); }

MleVsMksdeSettings default_mle_vs_mksde_settings() {
  MleVsMksdeSettings s;
  s.labels = {"0.3E1", "E1", "5E1", "0.3E2", "E2", "5E2"};
  s.f0 = {0.3 * e1_matrix(), e1_matrix(), 5.0 * e1_matrix(), 0.3 * e2_matrix(), e2_matrix(), 5.0 * e2_matrix()};
  s.n_values = {50, 100, 200, 300, 500};
  s.replicates = 20;
  s.seed = 0;
  return s;
}

std::vector<EstimateRow> run_mle_vs_mksde(const MleVsMksdeSettings& s) {
  if (s.labels.size() != s.f0.size()) {
    throw DimensionError("run_mle_vs_mksde: labels and f0 differ in length");
  }
  const ExponentialFamily spec(FamilyKind::MatrixFisher, kV23);
  const std::size_t nn = s.n_values.size();
  const std::size_t reps = static_cast<std::size_t>(s.replicates);
  const std::size_t cells = s.f0.size() * nn * reps;
  std::vector<std::string> names = {"mle_numeric", "mle_small_f"};
  if (s.run_u) names.push_back("mksde_u");
  names.push_back("mksde_v");
  std::vector<std::vector<double>> errs(cells, std::vector<double>(names.size(), std::nan("")));

  parallel_for(
      cells,
      [&](std::size_t c) {
        const std::size_t li = c / (nn * reps);
        const std::size_t ni = (c / reps) % nn;
        const Mat& f0 = s.f0[li];
        const auto n = static_cast<std::size_t>(s.n_values[ni]);
        const std::vector<Mat> pts = sample_rejection_mf(kV23, f0, n, derive_seed(s.seed, c));
        std::vector<double>& e = errs[c];
        std::size_t slot = 0;
        if (s.run_numeric_mle) {
          try {
            e[slot] = (mle_numeric_mf(pts, kV23, s.mle) - f0).norm();
          } catch (const ConvergenceError&) {
          }
        }
        ++slot;
        e[slot++] = (mle_small_f(pts, kV23) - f0).norm();
        const WeightedSample ws = unweighted(pts);
        if (s.run_u) {
          const MksdeSolution su = solve(assemble(spec, s.kernel, ws, StatKind::U, 1), 1e-12, true);
          e[slot++] = (spec.f_of(su.theta) - f0).norm();
        }
        const MksdeSolution sv = solve(assemble(spec, s.kernel, ws, StatKind::V, 1));
        e[slot] = (spec.f_of(sv.theta) - f0).norm();
      },
      s.threads);

  std::vector<EstimateRow> rows;
  rows.reserve(cells * names.size());
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t li = c / (nn * reps);
    const std::size_t ni = (c / reps) % nn;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (k == 0 && !s.run_numeric_mle) continue;
      rows.push_back({s.labels[li], s.n_values[ni], static_cast<int>(c % reps), names[k], errs[c][k]});
    }
  }
  return rows;
}

std::vector<EstimateRow> cmd_experiment_mle_vs_mksde(const ExperimentConfig& cfg, const RunOptions& opts) {
  MleVsMksdeSettings s = default_mle_vs_mksde_settings();
  if (!cfg.sweep.n_values.empty()) s.n_values = cfg.sweep.n_values;
  s.replicates = cfg.sweep.replicates;
  s.seed = effective_seed(cfg, opts);
  s.kernel = make_kernel(cfg);
  s.mle.pool_size = cfg.mle.pool_size;
  s.mle.max_iter = cfg.mle.max_iter;
  s.threads = opts.threads;
  const std::vector<EstimateRow> rows = run_mle_vs_mksde(s);

  const std::filesystem::path dir = out_dir(cfg, opts);
  std::ostringstream raw;
  raw << "F0_label,n,replicate,estimator,frob_error\n";
  for (const EstimateRow& r : rows) {
    raw << r.f0_label << ',' << r.n << ',' << r.replicate << ',' << r.estimator << ',' << fmt(r.frob_error) << '\n';
  }
  write_text(dir / "mle_vs_mksde.csv", raw.str());

  // Summary keeps first-seen order of (label, n, estimator).
  std::vector<std::string> keys;
  std::vector<std::vector<double>> vals;
  std::vector<EstimateRow> heads;
  for (const EstimateRow& r : rows) {
    const std::string key = r.f0_label + "|" + std::to_string(r.n) + "|" + r.estimator;
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      vals.emplace_back();
      heads.push_back(r);
      it = keys.end() - 1;
    }
    vals[static_cast<std::size_t>(it - keys.begin())].push_back(r.frob_error);
  }
  std::ostringstream sum;
  std::ostringstream plot;
  sum << "F0_label,n,estimator,median,q25,q75,finite\n";
  plot << "# F0_label n estimator median q25 q75\n";
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto finite = std::count_if(vals[k].begin(), vals[k].end(), [](double v) { return !std::isnan(v); });
    const double med = median(vals[k]);
    const double q25 = quantile(vals[k], 0.25);
    const double q75 = quantile(vals[k], 0.75);
    sum << heads[k].f0_label << ',' << heads[k].n << ',' << heads[k].estimator << ',' << fmt(med) << ',' << fmt(q25)
        << ',' << fmt(q75) << ',' << finite << '\n';
    plot << heads[k].f0_label << ' ' << heads[k].n << ' ' << heads[k].estimator << ' ' << fmt(med) << ' '
         << fmt(q25) << ' ' << fmt(q75) << '\n';
  }
  write_text(dir / "mle_vs_mksde_summary.csv", sum.str());
  if (wants(cfg, "plot")) {
    write_text(dir / "mle_vs_mksde.dat", plot.str());
  }
  const nlohmann::json meta = {{"experiment", "mle_vs_mksde"}, {"seed", s.seed},
                               {"replicates", s.replicates}, {"n_values", s.n_values},
                               {"labels", s.labels},         {"kernel", nlohmann::json::parse(kernel_json(cfg))},
                               {"mle_pool_size", s.mle.pool_size}};
  write_text(dir / "mle_vs_mksde_meta.json", meta.dump(2) + "\n");
  return rows;
}

GofStudySettings default_gof_study_settings() {
  GofStudySettings s;
  s.labels = {"0.3E1", "E1", "5E1"};
  s.f = {0.3 * e1_matrix(), e1_matrix(), 5.0 * e1_matrix()};
  s.n_values = {100, 150, 200, 250, 300};
  return s;
}

std::vector<GofRow> run_gof_study(const GofStudySettings& s) {
  if (s.labels.size() != s.f.size()) {
    throw DimensionError("run_gof_study: labels and f differ in length");
  }
  const ExponentialFamily spec = expfam_for(s.tested, kV23);
  const std::size_t nn = s.n_values.size();
  const std::size_t nk = s.kinds.size();
  const std::size_t reps = static_cast<std::size_t>(s.replicates);
  const std::size_t cells = s.f.size() * nn * reps;
  std::vector<GofRow> rows(cells * nk);

  parallel_for(
      cells,
      [&](std::size_t c) {
        const std::size_t fi = c / (nn * reps);
        const std::size_t ni = (c / reps) % nn;
        const std::uint64_t cell_seed = derive_seed(s.seed, c);
        const auto n = static_cast<std::size_t>(s.n_values[ni]);
        const WeightedSample ws = unweighted(sample_rejection_mf(kV23, s.f[fi], n, cell_seed));
        for (std::size_t k = 0; k < nk; ++k) {
          GofOptions go;
          go.kind = s.kinds[k];
          go.beta = s.beta;
          go.n_sim = s.n_sim;
          go.seed = derive_seed(cell_seed, 1 + k);
          go.allow_nonconvex = true;
          go.threads = 1;
          const GofResult r = gof_test(spec, s.kernel, ws, go);
          // Row order: F, kind, n, replicate.
          const std::size_t idx = ((fi * nk + k) * nn + ni) * reps + c % reps;
          rows[idx] = {s.labels[fi], s.n_values[ni], s.kinds[k], static_cast<int>(c % reps), r.statistic, r.p_value,
                       r.reject};
        }
      },
      s.threads);
  return rows;
}

std::vector<GofRow> cmd_experiment_gof(const ExperimentConfig& cfg, const RunOptions& opts) {
  GofStudySettings s = default_gof_study_settings();
  if (!cfg.sweep.n_values.empty()) s.n_values = cfg.sweep.n_values;
  s.replicates = cfg.sweep.replicates;
  s.beta = cfg.gof.beta;
  s.n_sim = cfg.gof.n_sim;
  s.seed = effective_seed(cfg, opts);
  s.kernel = make_kernel(cfg);
  if (cfg.has("family.kind")) {
    s.tested = family_kind(cfg);
  }
  if (cfg.has("estimator.kind")) {
    s.kinds = {estimator_kind(cfg)};
  }
  s.threads = opts.threads;
  try {
    (void)expfam_for(s.tested, kV23);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const std::vector<GofRow> rows = run_gof_study(s);

  const std::filesystem::path dir = out_dir(cfg, opts);
  std::ostringstream raw;
  raw << "F_label,n,kind,replicate,statistic,p_value,decision\n";
  for (const GofRow& r : rows) {
    raw << r.f_label << ',' << r.n << ',' << to_string(r.kind) << ',' << r.replicate << ',' << fmt(r.statistic)
        << ',' << fmt(r.p_value) << ',' << (r.reject ? "reject" : "accept") << '\n';
  }
  write_text(dir / "gof_pvalues.csv", raw.str());

  std::ostringstream table;
  table << "F_label,kind";
  for (int n : s.n_values) table << ",n" << n;
  table << '\n';
  const std::size_t reps = static_cast<std::size_t>(s.replicates);
  std::size_t pos = 0;
  for (const std::string& label : s.labels) {
    for (StatKind kind : s.kinds) {
      table << label << ',' << to_string(kind);
      for (std::size_t ni = 0; ni < s.n_values.size(); ++ni) {
        std::vector<double> p;
        for (std::size_t r = 0; r < reps; ++r) p.push_back(rows[pos++].p_value);
        table << ',' << fmt(median(p));
      }
      table << '\n';
    }
  }
  write_text(dir / "gof_table.csv", table.str());
  const nlohmann::json meta = {{"experiment", "gof"},
                               {"seed", s.seed},
                               {"replicates", s.replicates},
                               {"n_values", s.n_values},
                               {"labels", s.labels},
                               {"tested_family", to_string(s.tested)},
                               {"beta", s.beta},
                               {"n_sim", s.n_sim},
                               {"kernel", nlohmann::json::parse(kernel_json(cfg))}};
  write_text(dir / "gof_meta.json", meta.dump(2) + "\n");
  return rows;
}

}  // namespace ksdm::cli
