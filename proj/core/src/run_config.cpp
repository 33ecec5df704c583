/*
 Copyright 2026 The enoc authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "enoc/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "enoc/errors.hpp"

namespace enoc {

namespace {

using nlohmann::json;

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (known.find(item.key()) == known.end()) {
      throw ValidationError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double need_number(const json& v, const std::string& field) {
  if (!v.is_number()) {
    throw ValidationError("config field '" + field + "' must be a number");
  }
  return v.get<double>();
}

std::int64_t need_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) {
    throw ValidationError("config field '" + field + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::uint64_t need_unsigned(const json& v, const std::string& field) {
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ValidationError("config field '" + field +
                          "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string need_string(const json& v, const std::string& field) {
  if (!v.is_string()) {
    throw ValidationError("config field '" + field + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::size_t> parse_schedule(const json& v) {
  if (!v.is_object()) {
    throw ValidationError(
        "config field 'schedule' must be an object with k_min/k_max or list");
  }
  reject_unknown_keys(v, {"k_min", "k_max", "list"}, "schedule");
  if (v.contains("list")) {
    if (v.contains("k_min") || v.contains("k_max")) {
      throw ValidationError(
          "schedule: give either k_min/k_max or list, not both");
    }
    if (!v["list"].is_array() || v["list"].empty()) {
      throw ValidationError("schedule list must be a non-empty array");
    }
    std::vector<std::size_t> sizes;
    for (const auto& item : v["list"]) {
      const std::int64_t k = need_integer(item, "schedule.list entry");
      if (k < 1) {
        throw ValidationError("schedule list entries must be >= 1");
      }
      sizes.push_back(static_cast<std::size_t>(k));
    }
    return sizes;
  }
  std::int64_t k_min = 2;
  std::int64_t k_max = 26;
  if (v.contains("k_min")) k_min = need_integer(v["k_min"], "schedule.k_min");
  if (v.contains("k_max")) k_max = need_integer(v["k_max"], "schedule.k_max");
  if (k_min < 1) {
    throw ValidationError("schedule.k_min must be >= 1");
  }
  if (k_max < k_min) {
    throw ValidationError("schedule.k_max must be >= k_min");
  }
  std::vector<std::size_t> sizes;
  sizes.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    sizes.push_back(static_cast<std::size_t>(k));
  }
  return sizes;
}

SolverOptions parse_solver(const json& v, int grid_n) {
  if (!v.is_object()) {
    throw ValidationError("config field 'solver' must be an object");
  }
  reject_unknown_keys(v,
                      {"max_inner_iters", "eta0", "backtrack", "armijo_c",
                       "max_backtracks", "tol_inner", "eps_sing", "delta_den"},
                      "solver");
  SolverOptions opts;
  opts.grid_n = grid_n;
  if (v.contains("max_inner_iters")) {
    opts.max_inner_iters = static_cast<int>(
        need_integer(v["max_inner_iters"], "solver.max_inner_iters"));
  }
  if (v.contains("eta0")) opts.eta0 = need_number(v["eta0"], "solver.eta0");
  if (v.contains("backtrack")) {
    opts.backtrack = need_number(v["backtrack"], "solver.backtrack");
  }
  if (v.contains("armijo_c")) {
    opts.armijo_c = need_number(v["armijo_c"], "solver.armijo_c");
  }
  if (v.contains("max_backtracks")) {
    opts.max_backtracks = static_cast<int>(
        need_integer(v["max_backtracks"], "solver.max_backtracks"));
  }
  if (v.contains("tol_inner")) {
    opts.tol_inner = need_number(v["tol_inner"], "solver.tol_inner");
  }
  if (v.contains("eps_sing")) {
    opts.eps_sing_rel = need_number(v["eps_sing"], "solver.eps_sing");
  }
  if (v.contains("delta_den")) {
    opts.delta_den_rel = need_number(v["delta_den"], "solver.delta_den");
  }
  opts.validate();
  return opts;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    const auto [line, col] = line_col(text, err.byte);
    std::ostringstream msg;
    msg << origin << ": parse error at line " << line << ", column " << col
        << ": " << err.what();
    throw ValidationError(msg.str());
  }
  if (!doc.is_object()) {
    throw ValidationError(origin + ": config root must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"model", "params", "grid_n", "u_min", "u_max",
                       "schedule", "seed", "tol_J", "tol_u", "solver",
                       "out_dir"},
                      "config");

  RunConfig config;
  if (doc.contains("model")) config.model = need_string(doc["model"], "model");
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) {
      throw ValidationError("config field 'params' must be an object");
    }
    for (const auto& item : doc["params"].items()) {
      config.params[item.key()] =
          need_number(item.value(), "params." + item.key());
    }
  }
  if (doc.contains("grid_n")) {
    const std::int64_t n = need_integer(doc["grid_n"], "grid_n");
    if (n < 1) throw ValidationError("config field 'grid_n' must be >= 1");
    config.grid_n = static_cast<int>(n);
  }
  if (doc.contains("u_min")) {
    config.u_min = need_number(doc["u_min"], "u_min");
  }
  if (doc.contains("u_max")) {
    config.u_max = need_number(doc["u_max"], "u_max");
  }
  config.schedule = doc.contains("schedule") ? parse_schedule(doc["schedule"])
                                             : parse_schedule(json::object());
  if (doc.contains("seed")) config.seed = need_unsigned(doc["seed"], "seed");
  if (doc.contains("tol_J")) {
    config.tol_J = need_number(doc["tol_J"], "tol_J");
    if (config.tol_J < 0.0) {
      throw ValidationError("config field 'tol_J' must be non-negative");
    }
  }
  if (doc.contains("tol_u")) {
    config.tol_u = need_number(doc["tol_u"], "tol_u");
    if (config.tol_u < 0.0) {
      throw ValidationError("config field 'tol_u' must be non-negative");
    }
  }
  config.solver = parse_solver(
      doc.contains("solver") ? doc["solver"] : json::object(), config.grid_n);
  if (doc.contains("out_dir")) {
    config.out_dir = need_string(doc["out_dir"], "out_dir");
    if (config.out_dir.empty()) {
      throw ValidationError("config field 'out_dir' must not be empty");
    }
  }

  // Schedule sanity shared by both spellings.
  SaaSchedule schedule;
  schedule.sizes = config.schedule;
  schedule.base_seed = config.seed;
  schedule.tol_J = config.tol_J;
  schedule.tol_u = config.tol_u;
  schedule.validate();
  return config;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("config file not found: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string normalize_config(const RunConfig& config) {
  json doc;
  doc["model"] = config.model;
  doc["params"] = json::object();
  for (const auto& [key, value] : config.params) {
    doc["params"][key] = value;
  }
  doc["grid_n"] = config.grid_n;
  if (config.u_min) doc["u_min"] = *config.u_min;
  if (config.u_max) doc["u_max"] = *config.u_max;
  doc["schedule"]["list"] = config.schedule;
  doc["seed"] = config.seed;
  doc["tol_J"] = config.tol_J;
  doc["tol_u"] = config.tol_u;
  doc["solver"] = {{"max_inner_iters", config.solver.max_inner_iters},
                   {"eta0", config.solver.eta0},
                   {"backtrack", config.solver.backtrack},
                   {"armijo_c", config.solver.armijo_c},
                   {"max_backtracks", config.solver.max_backtracks},
                   {"tol_inner", config.solver.tol_inner},
                   {"eps_sing", config.solver.eps_sing_rel},
                   {"delta_den", config.solver.delta_den_rel}};
  doc["out_dir"] = config.out_dir;
  return doc.dump(2) + "\n";
}

}  // namespace enoc
