// Copyright 2026 The qite_mis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <toml.hpp>

#include "qite_mis/runner.hpp"

namespace qite_mis {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void check_keys(const toml::table& tbl, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, node] : tbl) {
    if (!allowed.contains(std::string(key.str()))) {
      fail("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

const toml::table* subtable(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (n == nullptr) return nullptr;
  const toml::table* t = n->as_table();
  if (t == nullptr) fail(std::string("[") + name + "] must be a table");
  return t;
}

template <typename T>
void read(const toml::table& tbl, const char* key, T& dst) {
  const toml::node* n = tbl.get(key);
  if (n == nullptr) return;
  if constexpr (std::is_same_v<T, double>) {
    const auto v = n->value<double>();
    if (!v) fail(std::string("'") + key + "' must be a number");
    dst = *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    const auto v = n->value_exact<bool>();
    if (!v) fail(std::string("'") + key + "' must be a boolean");
    dst = *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    const auto v = n->value_exact<std::string>();
    if (!v) fail(std::string("'") + key + "' must be a string");
    dst = *v;
  } else {
    const auto v = n->value_exact<std::int64_t>();
    if (!v) fail(std::string("'") + key + "' must be an integer");
    if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (*v < 0) fail(std::string("'") + key + "' must be >= 0");
      dst = static_cast<std::uint64_t>(*v);
    } else {
      if (*v < std::numeric_limits<T>::min() || *v > std::numeric_limits<T>::max()) {
        fail(std::string("'") + key + "' is out of range");
      }
      dst = static_cast<T>(*v);
    }
  }
}

const toml::array* array_of(const toml::table& tbl, const char* key) {
  const toml::node* n = tbl.get(key);
  if (n == nullptr) return nullptr;
  const toml::array* a = n->as_array();
  if (a == nullptr) fail(std::string("'") + key + "' must be an array");
  return a;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view toml_text,
                                         const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    fail(msg.str());
  }
  check_keys(root, "the top level",
             {"name", "output", "seed", "jobs", "repetitions", "instance", "hamiltonian",
              "qite", "failure"});
  ExperimentConfig cfg;
  read(root, "name", cfg.name);
  std::string output;
  read(root, "output", output);
  if (!output.empty()) cfg.output_dir = base_dir / output;
  read(root, "seed", cfg.seed);
  read(root, "jobs", cfg.jobs);
  read(root, "repetitions", cfg.repetitions);

  if (const toml::table* t = subtable(root, "instance")) {
    check_keys(*t, "[instance]", {"source", "file", "count", "n", "box_side"});
    std::string source;
    read(*t, "source", source);
    if (!source.empty()) cfg.source = parse_instance_source(source);
    std::string file;
    read(*t, "file", file);
    if (!file.empty()) cfg.graph_file = base_dir / file;
    read(*t, "count", cfg.count);
    read(*t, "n", cfg.n_vertices);
    read(*t, "box_side", cfg.box_side);
  }
  if (const toml::table* t = subtable(root, "hamiltonian")) {
    check_keys(*t, "[hamiltonian]", {"u"});
    read(*t, "u", cfg.u);
  }
  if (const toml::table* t = subtable(root, "qite")) {
    check_keys(*t, "[qite]",
               {"tau", "n_max", "domains", "reference_domains", "lambda", "record_every",
                "domain_cap", "real_block_reduction"});
    read(*t, "tau", cfg.qite.tau);
    read(*t, "n_max", cfg.qite.n_max);
    read(*t, "reference_domains", cfg.reference_domains);
    read(*t, "lambda", cfg.qite.regularization_lambda);
    read(*t, "record_every", cfg.qite.record_every);
    read(*t, "domain_cap", cfg.qite.domain_cap);
    read(*t, "real_block_reduction", cfg.qite.real_block_reduction);
    if (const toml::array* a = array_of(*t, "domains")) {
      cfg.domains.clear();
      for (const toml::node& n : *a) {
        const auto s = n.value_exact<std::string>();
        if (!s) fail("'domains' entries must be strings");
        cfg.domains.push_back(parse_domain_kind(*s));
      }
    }
  }
  if (const toml::table* t = subtable(root, "failure")) {
    check_keys(*t, "[failure]", {"delta_e", "shots"});
    if (const toml::array* a = array_of(*t, "delta_e")) {
      cfg.delta_e.clear();
      for (const toml::node& n : *a) {
        if (const auto s = n.value_exact<std::string>()) {
          cfg.delta_e.push_back(DeltaE::parse(*s));
        } else if (const auto v = n.value<double>()) {
          if (!(*v >= 0.0)) fail("'delta_e' entries must be >= 0");
          cfg.delta_e.push_back(DeltaE::fixed(*v));
        } else {
          fail("'delta_e' entries must be numbers or \"gap\"");
        }
      }
    }
    if (const toml::array* a = array_of(*t, "shots")) {
      cfg.shots.clear();
      for (const toml::node& n : *a) {
        const auto v = n.value_exact<std::int64_t>();
        if (!v || *v < 1 || *v > 1'000'000'000) fail("'shots' entries must be positive integers");
        cfg.shots.push_back(static_cast<int>(*v));
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path.parent_path());
}

}  // namespace qite_mis
