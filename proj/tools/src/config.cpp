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
#include "ksdm_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ksdm/errors.hpp"
#include "ksdm/io.hpp"

namespace ksdm::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

class Reader {
 public:
  explicit Reader(std::vector<std::string>& present) : present_(present) {}

  void keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
      throw ConfigError("config: '" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
      if (!ok) {
        throw ConfigError("config: unknown key '" + join(path, it.key()) + "'");
      }
      present_.push_back(join(path, it.key()));
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    if (!v.is_number()) {
      throw ConfigError("config: '" + join(path, key) + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw ConfigError("config: '" + join(path, key) + "' must be finite");
    }
    return d;
  }

  long long integer(const json& obj, const std::string& path, const char* key, long long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    if (!v.is_number_integer()) {
      throw ConfigError("config: '" + join(path, key) + "' must be an integer");
    }
    return v.get<long long>();
  }

  std::string string(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    if (!v.is_string()) {
      throw ConfigError("config: '" + join(path, key) + "' must be a string");
    }
    return v.get<std::string>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    if (!v.is_boolean()) {
      throw ConfigError("config: '" + join(path, key) + "' must be true or false");
    }
    return v.get<bool>();
  }

  std::optional<Mat> matrix(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    try {
      return matrix_from_json(obj[key].dump());
    } catch (const ksdm::Error& e) {
      throw ConfigError("config: '" + join(path, key) + "' must be a matrix given as an array of rows");
    }
  }

 private:
  std::vector<std::string>& present_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("config: " + msg);
}

}  // namespace

bool ExperimentConfig::has(const std::string& key) const {
  return std::find(present.begin(), present.end(), key) != present.end();
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Reader rd(cfg.present);
  rd.keys(doc, "",
          {"manifold", "kernel", "family", "sampler", "estimator", "gof", "ksd", "sweep", "mle", "seed", "output"});

  if (doc.contains("manifold")) {
    const json& m = doc["manifold"];
    rd.keys(m, "manifold", {"kind", "N", "r"});
    cfg.manifold.kind = rd.string(m, "manifold", "kind", cfg.manifold.kind);
    cfg.manifold.n = rd.integer(m, "manifold", "N", cfg.manifold.n);
    cfg.manifold.r = rd.integer(m, "manifold", "r", cfg.manifold.kind == "spd" ? cfg.manifold.n : cfg.manifold.r);
  }
  require(cfg.manifold.kind == "stiefel" || cfg.manifold.kind == "grassmann" || cfg.manifold.kind == "spd",
          "'manifold.kind' must be stiefel, grassmann or spd");
  require(cfg.manifold.n >= 1 && cfg.manifold.n <= 64, "'manifold.N' must lie in [1, 64]");
  if (cfg.manifold.kind == "spd") {
    cfg.manifold.r = cfg.manifold.n;
  }
  require(cfg.manifold.r >= 1 && cfg.manifold.r <= cfg.manifold.n, "'manifold.r' must lie in [1, N]");

  if (doc.contains("kernel")) {
    const json& k = doc["kernel"];
    rd.keys(k, "kernel", {"family", "tau", "beta", "gamma"});
    cfg.kernel.family = rd.string(k, "kernel", "family", cfg.kernel.family);
    cfg.kernel.tau = rd.number(k, "kernel", "tau", cfg.kernel.tau);
    cfg.kernel.beta = rd.number(k, "kernel", "beta", cfg.kernel.beta);
    cfg.kernel.gamma = rd.number(k, "kernel", "gamma", cfg.kernel.gamma);
  }
  require(cfg.kernel.family == "gaussian" || cfg.kernel.family == "inverse_quadratic",
          "'kernel.family' must be gaussian or inverse_quadratic");
  require(cfg.kernel.tau > 0.0, "'kernel.tau' must be positive");
  require(cfg.kernel.beta > 0.0, "'kernel.beta' must be positive");
  require(cfg.kernel.gamma > 0.0, "'kernel.gamma' must be positive");

  if (doc.contains("family")) {
    const json& f = doc["family"];
    rd.keys(f, "family", {"kind", "F", "A", "Xbar", "sigma", "V", "dof"});
    cfg.family.kind = rd.string(f, "family", "kind", cfg.family.kind);
    cfg.family.f = rd.matrix(f, "family", "F");
    cfg.family.a = rd.matrix(f, "family", "A");
    cfg.family.xbar = rd.matrix(f, "family", "Xbar");
    cfg.family.v = rd.matrix(f, "family", "V");
    cfg.family.sigma = rd.number(f, "family", "sigma", cfg.family.sigma);
    cfg.family.dof = rd.number(f, "family", "dof", cfg.family.dof);
  }
  try {
    (void)family_kind_from_string(cfg.family.kind);
  } catch (const ksdm::Error&) {
    throw ConfigError("config: 'family.kind' must be one of uniform, mf, mb, mfb, rg, wishart");
  }
  require(cfg.family.sigma > 0.0, "'family.sigma' must be positive");

  if (doc.contains("sampler")) {
    const json& s = doc["sampler"];
    rd.keys(s, "sampler", {"method", "n", "step", "burn_in", "thin", "dof"});
    cfg.sampler.method = rd.string(s, "sampler", "method", cfg.sampler.method);
    cfg.sampler.n = static_cast<int>(rd.integer(s, "sampler", "n", cfg.sampler.n));
    cfg.sampler.step = rd.number(s, "sampler", "step", cfg.sampler.step);
    cfg.sampler.burn_in = static_cast<int>(rd.integer(s, "sampler", "burn_in", cfg.sampler.burn_in));
    cfg.sampler.thin = static_cast<int>(rd.integer(s, "sampler", "thin", cfg.sampler.thin));
    cfg.sampler.dof = rd.number(s, "sampler", "dof", cfg.sampler.dof);
  }
  require(cfg.sampler.method == "uniform" || cfg.sampler.method == "rejection" || cfg.sampler.method == "mh" ||
              cfg.sampler.method == "wishart",
          "'sampler.method' must be uniform, rejection, mh or wishart");
  require(cfg.sampler.n >= 1 && cfg.sampler.n <= 10000000, "'sampler.n' must be positive");
  require(cfg.sampler.step >= 0.0, "'sampler.step' must be non-negative");
  require(cfg.sampler.burn_in >= 0, "'sampler.burn_in' must be non-negative");
  require(cfg.sampler.thin >= 0, "'sampler.thin' must be non-negative");
  require(cfg.sampler.dof >= 0.0, "'sampler.dof' must be non-negative");

  if (doc.contains("estimator")) {
    const json& e = doc["estimator"];
    rd.keys(e, "estimator", {"kind", "rank_tol", "compare_mle", "allow_nonconvex"});
    cfg.estimator.kind = rd.string(e, "estimator", "kind", cfg.estimator.kind);
    cfg.estimator.rank_tol = rd.number(e, "estimator", "rank_tol", cfg.estimator.rank_tol);
    cfg.estimator.compare_mle = rd.boolean(e, "estimator", "compare_mle", cfg.estimator.compare_mle);
    cfg.estimator.allow_nonconvex = rd.boolean(e, "estimator", "allow_nonconvex", cfg.estimator.allow_nonconvex);
  }
  require(cfg.estimator.kind == "U" || cfg.estimator.kind == "V", "'estimator.kind' must be U or V");
  require(cfg.estimator.rank_tol > 0.0 && cfg.estimator.rank_tol < 1.0, "'estimator.rank_tol' must lie in (0, 1)");

  if (doc.contains("gof")) {
    const json& g = doc["gof"];
    rd.keys(g, "gof", {"beta", "n_sim", "fixed_theta"});
    cfg.gof.beta = rd.number(g, "gof", "beta", cfg.gof.beta);
    cfg.gof.n_sim = static_cast<int>(rd.integer(g, "gof", "n_sim", cfg.gof.n_sim));
    cfg.gof.fixed_theta = rd.boolean(g, "gof", "fixed_theta", cfg.gof.fixed_theta);
  }
  require(cfg.gof.beta > 0.0 && cfg.gof.beta < 1.0, "'gof.beta' must lie in (0, 1)");
  require(cfg.gof.n_sim >= 100 && cfg.gof.n_sim <= 10000000, "'gof.n_sim' must be at least 100");

  if (doc.contains("ksd")) {
    const json& k = doc["ksd"];
    rd.keys(k, "ksd", {"bootstrap"});
    cfg.ksd.bootstrap = static_cast<int>(rd.integer(k, "ksd", "bootstrap", cfg.ksd.bootstrap));
  }
  require(cfg.ksd.bootstrap >= 2, "'ksd.bootstrap' must be at least 2");

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    rd.keys(s, "sweep", {"n_values", "replicates"});
    if (s.contains("n_values")) {
      const json& nv = s["n_values"];
      require(nv.is_array() && !nv.empty(), "'sweep.n_values' must be a non-empty array of integers");
      for (const auto& v : nv) {
        require(v.is_number_integer() && v.get<long long>() >= 5 && v.get<long long>() <= 100000,
                "'sweep.n_values' entries must be integers in [5, 100000]");
        cfg.sweep.n_values.push_back(v.get<int>());
      }
    }
    cfg.sweep.replicates = static_cast<int>(rd.integer(s, "sweep", "replicates", cfg.sweep.replicates));
  }
  require(cfg.sweep.replicates >= 1 && cfg.sweep.replicates <= 100000, "'sweep.replicates' must be positive");

  if (doc.contains("mle")) {
    const json& m = doc["mle"];
    rd.keys(m, "mle", {"pool_size", "max_iter"});
    cfg.mle.pool_size = static_cast<int>(rd.integer(m, "mle", "pool_size", cfg.mle.pool_size));
    cfg.mle.max_iter = static_cast<int>(rd.integer(m, "mle", "max_iter", cfg.mle.max_iter));
  }
  require(cfg.mle.pool_size >= 100, "'mle.pool_size' must be at least 100");
  require(cfg.mle.max_iter >= 1, "'mle.max_iter' must be positive");

  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    require(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0),
            "'seed' must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    rd.keys(o, "output", {"dir", "formats"});
    cfg.output.dir = rd.string(o, "output", "dir", cfg.output.dir);
    if (o.contains("formats")) {
      const json& f = o["formats"];
      require(f.is_array(), "'output.formats' must be an array");
      cfg.output.formats.clear();
      for (const auto& v : f) {
        require(v.is_string() && (v == "json" || v == "csv" || v == "plot"),
                "'output.formats' entries must be json, csv or plot");
        cfg.output.formats.push_back(v.get<std::string>());
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

Manifold make_manifold(const ExperimentConfig& cfg) {
  return Manifold(manifold_kind_from_string(cfg.manifold.kind), cfg.manifold.n, cfg.manifold.r);
}

RadialKernel make_kernel(const ExperimentConfig& cfg) {
  if (cfg.kernel.family == "gaussian") {
    return RadialKernel::gaussian(cfg.kernel.tau);
  }
  return RadialKernel::inverse_quadratic(cfg.kernel.beta, cfg.kernel.gamma);
}

FamilyKind family_kind(const ExperimentConfig& cfg) { return family_kind_from_string(cfg.family.kind); }

StatKind estimator_kind(const ExperimentConfig& cfg) { return stat_kind_from_string(cfg.estimator.kind); }

ScoreModel make_model(const ExperimentConfig& cfg, const Manifold& m) {
  const FamilyBlock& f = cfg.family;
  auto need = [&](const std::optional<Mat>& p, const char* key) -> const Mat& {
    if (!p) {
      throw ConfigError(std::string("config: family '") + f.kind + "' needs 'family." + key + "'");
    }
    return *p;
  };
  try {
    switch (family_kind(cfg)) {
      case FamilyKind::Uniform:
        return ScoreModel::uniform(m);
      case FamilyKind::MatrixFisher:
        return ScoreModel::matrix_fisher(m, need(f.f, "F"));
      case FamilyKind::MatrixBingham:
        return ScoreModel::matrix_bingham(m, need(f.a, "A"));
      case FamilyKind::MatrixFisherBingham:
        return ScoreModel::matrix_fisher_bingham(m, need(f.a, "A"), need(f.f, "F"));
      case FamilyKind::RiemannianGaussian:
        return ScoreModel::riemannian_gaussian(m, need(f.xbar, "Xbar"), f.sigma);
      case FamilyKind::Wishart:
        return ScoreModel::wishart(m, need(f.v, "V"), f.dof);
    }
  } catch (const ksdm::Error& e) {
    throw ConfigError(std::string("config: family block: ") + e.what());
  }
  throw ConfigError("config: unsupported family");
}

std::string family_params_json(const ExperimentConfig& cfg) {
  json p = json::object();
  auto put = [&](const char* key, const std::optional<Mat>& m) {
    if (m) p[key] = json::parse(matrix_to_json(*m));
  };
  put("F", cfg.family.f);
  put("A", cfg.family.a);
  put("Xbar", cfg.family.xbar);
  put("V", cfg.family.v);
  if (cfg.family.kind == "rg") p["sigma"] = cfg.family.sigma;
  if (cfg.family.kind == "wishart") p["dof"] = cfg.family.dof;
  return p.dump();
}

std::string kernel_json(const ExperimentConfig& cfg) {
  json k = {{"family", cfg.kernel.family}};
  if (cfg.kernel.family == "gaussian") {
    k["tau"] = cfg.kernel.tau;
  } else {
    k["beta"] = cfg.kernel.beta;
    k["gamma"] = cfg.kernel.gamma;
  }
  return k.dump();
}

}  // namespace ksdm::cli
