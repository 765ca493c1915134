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
#include "ksdm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ksdm/errors.hpp"

namespace ksdm {

using nlohmann::json;

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Mat matrix_from(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw DomainError("matrix must be a non-empty array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = j[0].is_array() ? static_cast<Index>(j[0].size()) : 0;
  if (cols == 0) {
    throw DomainError("matrix rows must be non-empty arrays");
  }
  Mat a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw DomainError("matrix rows have unequal lengths");
    }
    for (Index k = 0; k < cols; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) {
        throw DomainError("matrix entries must be numbers");
      }
      a(i, k) = v.get<double>();
    }
  }
  return a;
}

}  // namespace

std::string matrix_to_json(const Mat& a) {
  std::string s = "[";
  for (Index i = 0; i < a.rows(); ++i) {
    s += i == 0 ? "[" : ",[";
    for (Index k = 0; k < a.cols(); ++k) {
      if (k > 0) s += ",";
      s += number(a(i, k));
    }
    s += "]";
  }
  s += "]";
  return s;
}

Mat matrix_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("matrix JSON: ") + e.what());
  }
  return matrix_from(j);
}

void write_samples(std::ostream& os, const SampleFile& file) {
  json params;
  try {
    params = json::parse(file.params_json);
  } catch (const json::exception&) {
    throw DomainError("sample header params are not valid JSON");
  }
  json header = {
      {"format", "ksdm-samples"},
      {"manifold", {{"kind", to_string(file.kind)}, {"N", file.n}, {"r", file.r}}},
      {"family", file.family},
      {"params", params},
      {"seed", file.seed},
      {"method", file.method},
      {"n", file.points.size()},
  };
  os << header.dump() << "\n";
  for (const auto& p : file.points) {
    os << matrix_to_json(p) << "\n";
  }
}

SampleFile read_samples(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw DomainError("sample file is empty");
  }
  SampleFile file;
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "ksdm-samples") {
      throw DomainError("sample file header lacks format tag");
    }
    const json& m = header.at("manifold");
    file.kind = manifold_kind_from_string(m.at("kind").get<std::string>());
    file.n = m.at("N").get<Index>();
    file.r = m.at("r").get<Index>();
    file.family = header.value("family", "unknown");
    file.params_json = header.contains("params") ? header["params"].dump() : "{}";
    file.seed = header.value("seed", std::uint64_t{0});
    file.method = header.value("method", "unknown");
  } catch (const json::exception& e) {
    throw DomainError(std::string("sample file header: ") + e.what());
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      file.points.push_back(matrix_from(json::parse(line)));
    } catch (const json::exception& e) {
      throw DomainError("sample file line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("sample file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return file;
}

void write_samples_file(const std::string& path, const SampleFile& file) {
  std::ofstream os(path);
  if (!os) {
    throw Error("cannot open '" + path + "' for writing");
  }
  write_samples(os, file);
}

SampleFile read_samples_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw Error("cannot open '" + path + "'");
  }
  SampleFile file = read_samples(is);
  const Manifold m = file.manifold();
  for (std::size_t i = 0; i < file.points.size(); ++i) {
    try {
      m.validate(file.points[i]);
    } catch (const Error& e) {
      throw DomainError("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  return file;
}

}  // namespace ksdm
