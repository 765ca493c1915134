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
#include "ksdm_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "ksdm/errors.hpp"
#include "ksdm/ksdstats.hpp"
#include "ksdm/sampling.hpp"
#include "ksdm/steinkernel.hpp"

namespace ksdm::cli {

using nlohmann::json;

std::uint64_t effective_seed(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.seed ? *opts.seed : cfg.seed;
}

std::string effective_out_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.out_dir.empty() ? cfg.output.dir : opts.out_dir;
}

namespace {

std::string prepare_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  const std::string dir = effective_out_dir(cfg, opts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  }
  return dir;
}

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) != cfg.output.formats.end();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write '" + path + "'");
  }
  os << text;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json matrix_json(const Mat& m) { return json::parse(matrix_to_json(m)); }

SampleFile load_samples(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (opts.samples_path.empty()) {
    throw ConfigError("--samples is required for this command");
  }
  if (!std::filesystem::exists(opts.samples_path)) {
    throw ConfigError("sample file '" + opts.samples_path + "' does not exist");
  }
  SampleFile file = read_samples_file(opts.samples_path);
  if (file.points.empty()) {
    throw ConfigError("sample file '" + opts.samples_path + "' holds no points");
  }
  if (cfg.has("manifold.kind") || cfg.has("manifold.N") || cfg.has("manifold.r")) {
    if (!(make_manifold(cfg) == file.manifold())) {
      throw ConfigError("config manifold " + make_manifold(cfg).name() + " differs from sample file manifold " +
                        file.manifold().name());
    }
  }
  return file;
}

ExponentialFamily family_for(FamilyKind fk, const Manifold& m) {
  try {
    return expfam_for(fk, m);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

SampleReport cmd_sample(const ExperimentConfig& cfg, const RunOptions& opts) {
  const Manifold m = make_manifold(cfg);
  const std::uint64_t seed = effective_seed(cfg, opts);
  const std::size_t n = static_cast<std::size_t>(cfg.sampler.n);
  SampleReport rep;
  rep.file.kind = m.kind();
  rep.file.n = m.n();
  rep.file.r = m.r();
  rep.file.seed = seed;
  rep.file.method = cfg.sampler.method;
  rep.file.family = cfg.family.kind;
  rep.file.params_json = family_params_json(cfg);

  if (cfg.sampler.method == "uniform") {
    rep.file.family = "uniform";
    rep.file.params_json = "{}";
    rep.file.points = sample_uniform(m, n, seed, opts.threads);
  } else if (cfg.sampler.method == "rejection") {
    if (cfg.family.kind != "mf" || !cfg.family.f) {
      throw ConfigError("config: rejection sampling needs family.kind = mf with family.F");
    }
    RejectionStats stats;
    rep.file.points = sample_rejection_mf(m, *cfg.family.f, n, seed, &stats);
    rep.acceptance_rate = stats.rate();
  } else if (cfg.sampler.method == "mh") {
    const ScoreModel model = make_model(cfg, m);
    MhConfig mh = default_mh_config(m.kind());
    if (cfg.sampler.step > 0.0) mh.step = cfg.sampler.step;
    mh.burn_in = cfg.sampler.burn_in;
    mh.thin = cfg.sampler.thin;
    MhStats stats;
    rep.file.points = sample_mh(model, n, mh, seed, nullptr, &stats);
    rep.acceptance_rate = stats.rate();
  } else {
    if (m.kind() != ManifoldKind::Spd) {
      throw ConfigError("config: wishart sampling needs manifold.kind = spd");
    }
    const Mat v = cfg.family.v ? *cfg.family.v : Mat::Identity(m.n(), m.n());
    double dof = cfg.sampler.dof;
    if (dof <= 0.0) {
      if (cfg.family.kind != "wishart") {
        throw ConfigError("config: wishart sampling needs sampler.dof or a wishart family block");
      }
      dof = wishart_bartlett_dof(m.n(), cfg.family.dof);
    }
    rep.file.points = sample_wishart(v, dof, n, seed);
  }

  const std::string dir = prepare_dir(cfg, opts);
  rep.path = (std::filesystem::path(dir) / "samples.jsonl").string();
  write_samples_file(rep.path, rep.file);
  return rep;
}

KsdReport cmd_ksd(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SampleFile file = load_samples(cfg, opts);
  const Manifold m = file.manifold();
  const SteinKernel ev(make_model(cfg, m), make_kernel(cfg));
  const Mat gram = stein_gram(ev, file.points, opts.threads);
  const Vec w = Vec::Ones(gram.rows());
  const std::uint64_t seed = effective_seed(cfg, opts);

  KsdReport rep;
  rep.n = gram.rows();
  rep.v = v_stat_from_gram(gram, w);
  json out = {{"n", rep.n}, {"V", rep.v}, {"family", cfg.family.kind}, {"kernel", json::parse(kernel_json(cfg))},
              {"manifold", m.name()}, {"seed", seed}, {"bootstrap", cfg.ksd.bootstrap}};
  if (rep.n >= 2) {
    rep.u = u_stat_from_gram(gram, w);
    const BootstrapSe se = bootstrap_se(gram, w, cfg.ksd.bootstrap, seed);
    rep.u_se = se.u_se;
    rep.v_se = se.v_se;
    out["U"] = rep.u;
    out["U_se"] = rep.u_se;
    out["V_se"] = rep.v_se;
  } else {
    out["U"] = nullptr;
  }
  rep.json = out.dump(2);
  const std::string dir = prepare_dir(cfg, opts);
  write_text((std::filesystem::path(dir) / "ksd.json").string(), rep.json + "\n");
  return rep;
}

MksdeReport cmd_mksde(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SampleFile file = load_samples(cfg, opts);
  const Manifold m = file.manifold();
  const FamilyKind fk = family_kind(cfg);
  const ExponentialFamily spec = family_for(fk, m);
  const StatKind kind = estimator_kind(cfg);
  const MksdeSystem sys = assemble(spec, make_kernel(cfg), unweighted(file.points), kind, opts.threads);

  MksdeReport rep;
  rep.n = sys.n;
  rep.solution = solve(sys, cfg.estimator.rank_tol, cfg.estimator.allow_nonconvex);
  const Vec& th = rep.solution.theta;
  json params = json::object();
  if (fk == FamilyKind::MatrixFisher || fk == FamilyKind::MatrixFisherBingham) params["F"] = matrix_json(spec.f_of(th));
  if (fk == FamilyKind::MatrixBingham || fk == FamilyKind::MatrixFisherBingham) params["A"] = matrix_json(spec.a_of(th));
  json out = {{"theta_star", std::vector<double>(th.data(), th.data() + th.size())},
              {"params", params},
              {"null_space_rank", rep.solution.null_space_rank},
              {"objective", rep.solution.objective},
              {"min_eigenvalue", rep.solution.min_eigenvalue},
              {"convex", rep.solution.convex},
              {"n", rep.n},
              {"statistic_kind", to_string(kind)},
              {"family", to_string(fk)},
              {"manifold", m.name()},
              {"kernel", json::parse(kernel_json(cfg))},
              {"seed", effective_seed(cfg, opts)}};
  if (cfg.estimator.compare_mle && fk == FamilyKind::MatrixFisher && m.kind() == ManifoldKind::Stiefel) {
    out["mle_small_f"] = matrix_json(mle_small_f(file.points, m));
    MleOptions mo;
    mo.pool_size = cfg.mle.pool_size;
    mo.max_iter = cfg.mle.max_iter;
    try {
      out["mle_numeric"] = matrix_json(mle_numeric_mf(file.points, m, mo));
    } catch (const ConvergenceError& e) {
      out["mle_numeric"] = nullptr;
      out["mle_numeric_error"] = e.what();
    }
  }
  rep.json = out.dump(2);
  const std::string dir = prepare_dir(cfg, opts);
  write_text((std::filesystem::path(dir) / "mksde.json").string(), rep.json + "\n");
  return rep;
}

GofReport cmd_gof(const ExperimentConfig& cfg, const RunOptions& opts) {
  const SampleFile file = load_samples(cfg, opts);
  const Manifold m = file.manifold();
  const FamilyKind fk = family_kind(cfg);
  const ExponentialFamily spec = family_for(fk, m);
  GofOptions go;
  go.kind = estimator_kind(cfg);
  go.beta = cfg.gof.beta;
  go.n_sim = cfg.gof.n_sim;
  go.seed = effective_seed(cfg, opts);
  go.rank_tol = cfg.estimator.rank_tol;
  go.allow_nonconvex = cfg.estimator.allow_nonconvex;
  go.threads = opts.threads;
  if (cfg.gof.fixed_theta) {
    go.fixed_theta = spec.pack(make_model(cfg, m));
  }

  GofReport rep;
  rep.result = gof_test(spec, make_kernel(cfg), unweighted(file.points), go);
  const GofResult& r = rep.result;
  const std::string decision = r.reject ? "reject" : "accept";
  json out = {{"n", file.points.size()},
              {"family", to_string(fk)},
              {"kernel", json::parse(kernel_json(cfg))},
              {"kind", to_string(r.kind)},
              {"beta", r.beta},
              {"statistic", r.statistic},
              {"quantile", r.quantile},
              {"p_value", r.p_value},
              {"decision", decision},
              {"seed", r.seed},
              {"n_sim", r.n_sim},
              {"exceedances", r.exceedances},
              {"clipped_negative_eigenvalues", r.clipped_negative},
              {"theta_hat", std::vector<double>(r.theta_hat.data(), r.theta_hat.data() + r.theta_hat.size())}};
  rep.json = out.dump(2);
  rep.csv_row = std::to_string(file.points.size()) + "," + to_string(fk) + "," + cfg.kernel.family + "," +
                to_string(r.kind) + "," + fmt(r.beta) + "," + fmt(r.statistic) + "," + fmt(r.quantile) + "," +
                fmt(r.p_value) + "," + decision + "," + std::to_string(r.seed) + "," + std::to_string(r.n_sim);
  const std::string dir = prepare_dir(cfg, opts);
  if (wants(cfg, "json")) {
    write_text((std::filesystem::path(dir) / "gof.json").string(), rep.json + "\n");
  }
  if (wants(cfg, "csv")) {
    write_text((std::filesystem::path(dir) / "gof.csv").string(),
               "n,family,kernel,kind,beta,statistic,quantile,p_value,decision,seed,n_sim\n" + rep.csv_row + "\n");
  }
  return rep;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  if (v.empty()) {
    return std::nan("");
  }
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace ksdm::cli
