// Copyright 2026 The tnroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "tnroute/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace tnroute {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string child(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path,
                    const std::string& key) {
  const json* v = find(obj, key);
  if (!v) throw SchemaError(child(path, key), "required field is missing");
  return *v;
}

void expect_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
}

void expect_array(const json& v, const std::string& path,
                  std::optional<std::size_t> size = {}) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  if (size && v.size() != *size) {
    throw SchemaError(path, "expected " + std::to_string(*size) +
                                " entries, found " + std::to_string(v.size()));
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

long long as_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 9e15) {
      return static_cast<long long>(d);
    }
  }
  throw SchemaError(path, "expected an integer");
}

std::size_t as_count(const json& v, const std::string& path) {
  const long long n = as_integer(v, path);
  if (n < 0) throw SchemaError(path, "expected a nonnegative integer");
  return static_cast<std::size_t>(n);
}

int as_node(const json& v, const std::string& path, std::size_t n_nodes) {
  const long long n = as_integer(v, path);
  if (n < 0 || static_cast<std::size_t>(n) >= n_nodes) {
    throw SchemaError(path, "node id out of range [0, " +
                                std::to_string(n_nodes) + ")");
  }
  return static_cast<int>(n);
}

std::size_t as_step(const json& v, const std::string& path,
                    std::size_t n_steps) {
  const std::size_t t = as_count(v, path);
  if (t >= n_steps) throw SchemaError(path, "step out of range");
  return t;
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw SchemaError(path, "expected true or false");
  return v.get<bool>();
}

std::vector<double> number_vector(const json& v, const std::string& path,
                                  std::size_t size) {
  expect_array(v, path, size);
  std::vector<double> out;
  for (std::size_t k = 0; k < size; ++k) {
    out.push_back(as_number(v[k], child(path, k)));
  }
  return out;
}

// Row-major flattening of a rectangular nested array.
void flatten(const json& v, const std::string& path,
             const std::vector<std::size_t>& shape, std::size_t level,
             std::vector<double>& out) {
  if (level == shape.size()) {
    out.push_back(as_number(v, path));
    return;
  }
  expect_array(v, path, shape[level]);
  for (std::size_t k = 0; k < shape[level]; ++k) {
    flatten(v[k], child(path, k), shape, level + 1, out);
  }
}

std::vector<double> nested(const json& v, const std::string& path,
                           const std::vector<std::size_t>& shape) {
  std::vector<double> out;
  flatten(v, path, shape, 0, out);
  return out;
}

void check_integral(const std::vector<double>& values, const std::string& path,
                    std::size_t row) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != std::floor(values[k])) {
      throw SchemaError(child(child(path, k / row), k % row),
                        "bottleneck costs must be integers");
    }
  }
}

CostModel parse_costs(const json& doc, const std::string& path,
                      const TourProblem& p) {
  expect_object(doc, path);
  for (const auto& [key, value] : doc.items()) {
    static const char* kKnown[] = {"step",   "per_step",         "linear",
                                   "forbidden", "linear_forbidden", "pinned",
                                   "memory"};
    if (std::find(std::begin(kKnown), std::end(kKnown), key) ==
        std::end(kKnown)) {
      throw SchemaError(child(path, key), "unknown field");
    }
  }
  const std::size_t n = p.n_nodes;
  const std::size_t t_count = p.n_steps;
  const json* step = find(doc, "step");
  const json* per_step = find(doc, "per_step");
  const json* linear = find(doc, "linear");
  const json* memory = find(doc, "memory");
  if (step && per_step) {
    throw SchemaError(child(path, "per_step"),
                      "give either step or per_step, not both");
  }
  const bool bottleneck = is_bottleneck_variant(p.variant);

  CostModel model;
  if (step) {
    auto values = nested(*step, child(path, "step"), {n, n});
    if (bottleneck) check_integral(values, child(path, "step"), n);
    model = CostModel::constant(n, t_count, std::move(values));
  } else if (per_step) {
    auto values = nested(*per_step, child(path, "per_step"), {t_count, n, n});
    if (bottleneck) check_integral(values, child(path, "per_step"), n);
    model = CostModel::per_step(n, t_count, std::move(values));
  } else if (memory) {
    std::vector<std::size_t> shape{t_count};
    for (std::size_t k = 0; k <= p.memory_depth; ++k) shape.push_back(n);
    if (p.memory_depth == 0) {
      throw SchemaError("memory_depth", "memory costs need memory_depth >= 1");
    }
    model = CostModel::memory_only(
        n, t_count, p.memory_depth, nested(*memory, child(path, "memory"), shape));
    memory = nullptr;
  } else if (linear) {
    model = CostModel::linear_only(
        n, t_count, nested(*linear, child(path, "linear"), {t_count, n}));
    linear = nullptr;
  } else {
    throw SchemaError(child(path, "step"),
                      "one of step, per_step, linear or memory is required");
  }
  if (linear) {
    model.set_linear(nested(*linear, child(path, "linear"), {t_count, n}));
  }
  if (memory) {
    throw SchemaError(child(path, "memory"),
                      "memory costs cannot be combined with step costs");
  }

  if (const json* f = find(doc, "forbidden")) {
    const std::string fp = child(path, "forbidden");
    expect_array(*f, fp);
    for (std::size_t k = 0; k < f->size(); ++k) {
      const json& e = (*f)[k];
      const std::string ep = child(fp, k);
      expect_array(e, ep);
      if (e.size() == 2) {
        model.forbid_edge(as_node(e[0], child(ep, 0), n),
                          as_node(e[1], child(ep, 1), n));
      } else if (e.size() == 3) {
        model.forbid_step(as_step(e[0], child(ep, 0), t_count),
                          as_node(e[1], child(ep, 1), n),
                          as_node(e[2], child(ep, 2), n));
      } else {
        throw SchemaError(ep, "expected [i, j] or [t, i, j]");
      }
    }
  }
  if (const json* f = find(doc, "linear_forbidden")) {
    const std::string fp = child(path, "linear_forbidden");
    expect_array(*f, fp);
    for (std::size_t k = 0; k < f->size(); ++k) {
      const std::string ep = child(fp, k);
      expect_array((*f)[k], ep, 2);
      model.forbid_node(as_step((*f)[k][0], child(ep, 0), t_count),
                        as_node((*f)[k][1], child(ep, 1), n));
    }
  }
  if (const json* f = find(doc, "pinned")) {
    const std::string fp = child(path, "pinned");
    expect_array(*f, fp);
    for (std::size_t k = 0; k < f->size(); ++k) {
      const std::string ep = child(fp, k);
      expect_array((*f)[k], ep, 2);
      model.pin(as_step((*f)[k][0], child(ep, 0), t_count),
                as_node((*f)[k][1], child(ep, 1), n));
    }
  }
  return model;
}

json nested_step_matrix(const CostModel& c, std::size_t t, std::size_t n) {
  json m = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(c.step(t, static_cast<int>(i), static_cast<int>(j)));
    }
    m.push_back(std::move(row));
  }
  return m;
}

json memory_block(const CostModel& c, std::size_t t, std::size_t n,
                  std::vector<int>& index, std::size_t level) {
  const std::size_t depth = c.memory_depth();
  if (level == depth + 1) {
    return c.memory(t, index[0],
                    std::span<const int>(index.data() + 1, depth));
  }
  json out = json::array();
  for (std::size_t a = 0; a < n; ++a) {
    index[level] = static_cast<int>(a);
    out.push_back(memory_block(c, t, n, index, level + 1));
  }
  return out;
}

}  // namespace

TourProblem problem_from_json(const json& doc) {
  expect_object(doc, "");
  static const char* kKnown[] = {
      "n_nodes",   "n_steps", "variant", "returning",  "fixed_start",
      "fixed_end", "costs",   "bounds",  "groups",     "precedence",
      "memory_depth", "name", "comment"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) ==
        std::end(kKnown)) {
      throw SchemaError(key, "unknown field");
    }
  }

  TourProblem p;
  p.n_nodes = as_count(require(doc, "", "n_nodes"), "n_nodes");
  if (p.n_nodes == 0) throw SchemaError("n_nodes", "must be positive");
  if (const json* v = find(doc, "variant")) {
    if (!v->is_string()) throw SchemaError("variant", "expected a string");
    try {
      p.variant = parse_variant(v->get<std::string>());
    } catch (const InputError& e) {
      throw SchemaError("variant", e.what());
    }
  }
  p.returning = p.variant != Variant::kLinearOnly && p.variant != Variant::kNmtsp;
  if (const json* v = find(doc, "returning")) p.returning = as_bool(*v, "returning");
  if (const json* v = find(doc, "memory_depth")) {
    p.memory_depth = as_count(*v, "memory_depth");
  }

  if (const json* v = find(doc, "groups")) {
    expect_array(*v, "groups");
    for (std::size_t g = 0; g < v->size(); ++g) {
      const std::string gp = child("groups", g);
      expect_array((*v)[g], gp);
      std::vector<int> members;
      for (std::size_t k = 0; k < (*v)[g].size(); ++k) {
        members.push_back(as_node((*v)[g][k], child(gp, k), p.n_nodes));
      }
      p.groups.push_back(std::move(members));
    }
  }

  if (const json* v = find(doc, "n_steps")) {
    p.n_steps = as_count(*v, "n_steps");
    if (p.n_steps == 0) throw SchemaError("n_steps", "must be positive");
  } else {
    p.n_steps = p.variant == Variant::kPtsp ? p.groups.size() : p.n_nodes;
  }
  if (const json* v = find(doc, "fixed_start")) {
    p.fixed_start = as_node(*v, "fixed_start", p.n_nodes);
  }
  if (const json* v = find(doc, "fixed_end")) {
    p.fixed_end = as_node(*v, "fixed_end", p.n_nodes);
  }

  if (const json* v = find(doc, "bounds")) {
    expect_array(*v, "bounds", p.n_nodes);
    for (std::size_t a = 0; a < p.n_nodes; ++a) {
      const json& b = (*v)[a];
      const std::string bp = child("bounds", a);
      VisitBounds vb;
      if (b.is_object()) {
        vb.min_visits = static_cast<int>(as_count(require(b, bp, "min"), child(bp, "min")));
        vb.max_visits = static_cast<int>(as_count(require(b, bp, "max"), child(bp, "max")));
      } else {
        expect_array(b, bp, 2);
        vb.min_visits = static_cast<int>(as_count(b[0], child(bp, 0)));
        vb.max_visits = static_cast<int>(as_count(b[1], child(bp, 1)));
      }
      if (vb.min_visits > vb.max_visits) throw SchemaError(bp, "min exceeds max");
      p.visit_bounds.push_back(vb);
    }
  }
  if (const json* v = find(doc, "precedence")) {
    expect_array(*v, "precedence");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const std::string pp = child("precedence", k);
      expect_array((*v)[k], pp, 2);
      p.precedence.push_back({as_node((*v)[k][0], child(pp, 0), p.n_nodes),
                              as_node((*v)[k][1], child(pp, 1), p.n_nodes)});
    }
  }

  p.costs = parse_costs(require(doc, "", "costs"), "costs", p);
  try {
    p.validate();
  } catch (const ModelError& e) {
    throw SchemaError("", e.what());
  }
  return p;
}

json problem_to_json(const TourProblem& p) {
  json doc;
  doc["n_nodes"] = p.n_nodes;
  doc["n_steps"] = p.n_steps;
  doc["variant"] = std::string(to_string(p.variant));
  doc["returning"] = p.returning;
  if (p.fixed_start) doc["fixed_start"] = *p.fixed_start;
  if (p.fixed_end) doc["fixed_end"] = *p.fixed_end;
  const CostModel& c = p.costs;
  const std::size_t n = p.n_nodes;
  json costs = json::object();
  if (c.has_step_costs()) {
    if (c.time_constant()) {
      costs["step"] = nested_step_matrix(c, 0, n);
    } else {
      json all = json::array();
      for (std::size_t t = 0; t < p.n_steps; ++t) {
        all.push_back(nested_step_matrix(c, t, n));
      }
      costs["per_step"] = std::move(all);
    }
    json forbidden = json::array();
    for (std::size_t t = 0; t < p.n_steps; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto a = static_cast<int>(i);
          const auto b = static_cast<int>(j);
          if (!c.step_forbidden(t, a, b)) continue;
          if (c.time_constant()) {
            if (t == 0) forbidden.push_back({a, b});
          } else {
            forbidden.push_back({t, a, b});
          }
        }
      }
    }
    if (!forbidden.empty()) costs["forbidden"] = std::move(forbidden);
  }
  if (c.has_linear()) {
    json lin = json::array();
    json lf = json::array();
    for (std::size_t t = 0; t < p.n_steps; ++t) {
      json row = json::array();
      for (std::size_t a = 0; a < n; ++a) {
        row.push_back(c.linear(t, static_cast<int>(a)));
        if (c.linear_forbidden(t, static_cast<int>(a))) lf.push_back({t, a});
      }
      lin.push_back(std::move(row));
    }
    costs["linear"] = std::move(lin);
    if (!lf.empty()) costs["linear_forbidden"] = std::move(lf);
  }
  if (!c.pins().empty()) {
    json pins = json::array();
    for (const auto& [t, a] : c.pins()) pins.push_back({t, a});
    costs["pinned"] = std::move(pins);
  }
  if (c.has_memory()) {
    json mem = json::array();
    std::vector<int> index(c.memory_depth() + 1, 0);
    for (std::size_t t = 0; t < p.n_steps; ++t) {
      mem.push_back(memory_block(c, t, n, index, 0));
    }
    costs["memory"] = std::move(mem);
    doc["memory_depth"] = p.memory_depth;
  }
  doc["costs"] = std::move(costs);
  if (!p.visit_bounds.empty()) {
    json b = json::array();
    for (const auto& vb : p.visit_bounds) b.push_back({vb.min_visits, vb.max_visits});
    doc["bounds"] = std::move(b);
  }
  if (!p.groups.empty()) doc["groups"] = p.groups;
  if (!p.precedence.empty()) {
    json pr = json::array();
    for (const auto& rule : p.precedence) pr.push_back({rule.before, rule.after});
    doc["precedence"] = std::move(pr);
  }
  return doc;
}

json solution_to_json(const TourProblem& problem, const Solution& s,
                      const SolutionFormat& format) {
  json doc;
  doc["variant"] = std::string(to_string(problem.variant));
  doc["route"] = s.route;
  doc["cost"] = s.cost ? json(*s.cost) : json(nullptr);
  doc["feasible"] = s.feasible;
  json violations = json::array();
  for (const Violation& v : s.violations) {
    violations.push_back({{"kind", std::string(to_string(v.kind))},
                          {"nodes", v.nodes},
                          {"detail", v.detail}});
  }
  doc["violations"] = std::move(violations);
  doc["tie_counts"] = s.tie_counts;
  doc["degenerate_choices"] = s.degenerate_choices;
  doc["tau"] = s.tau_used;
  doc["tau_trace"] = s.tau_trace;
  doc["tau_unconverged"] = s.tau_unconverged;
  doc["peak_w_elements"] = s.peak_w_elements;
  doc["multiply_adds"] = s.multiply_adds;
  json iterations = json::array();
  for (const IterationStats& it : s.iterations) {
    json row = {{"multiply_adds", it.multiply_adds},
                {"peak_w_elements", it.peak_w_elements},
                {"tie_count", it.tie_count},
                {"active_layers", it.active_layers}};
    if (format.timings) row["seconds"] = it.seconds;
    iterations.push_back(std::move(row));
  }
  doc["iterations"] = std::move(iterations);
  if (!s.active_layers.empty()) doc["active_layer_keys"] = s.active_layers;
  if (s.truncation_error > 0) doc["truncation_error"] = s.truncation_error;
  return doc;
}

JrpInstance jrp_from_json(const json& doc) {
  expect_object(doc, "");
  JrpInstance inst;
  inst.workers = as_count(require(doc, "", "workers"), "workers");
  inst.vacancies = as_count(require(doc, "", "vacancies"), "vacancies");
  const json& q = require(doc, "", "qualities");
  expect_object(q, "qualities");
  inst.current_quality = number_vector(require(q, "qualities", "current"),
                                       "qualities.current", inst.workers);
  inst.vacancy_quality = number_vector(require(q, "qualities", "vacancy"),
                                       "qualities.vacancy", inst.vacancies);
  const json& a = require(doc, "", "affinities");
  expect_object(a, "affinities");
  inst.current_affinity = number_vector(require(a, "affinities", "current"),
                                        "affinities.current", inst.workers);
  const json& av = require(a, "affinities", "vacancy");
  expect_array(av, "affinities.vacancy", inst.vacancies);
  for (std::size_t v = 0; v < inst.vacancies; ++v) {
    inst.vacancy_affinity.push_back(
        number_vector(av[v], child("affinities.vacancy", v), inst.workers));
  }
  if (const json* f = find(doc, "factors")) {
    expect_object(*f, "factors");
    if (const json* v = find(*f, "quality")) {
      inst.quality_factor = as_number(*v, "factors.quality");
    }
    if (const json* v = find(*f, "affinity")) {
      inst.affinity_factor = as_number(*v, "factors.affinity");
    }
  }
  try {
    inst.validate();
  } catch (const ModelError& e) {
    throw SchemaError("", e.what());
  }
  return inst;
}

json jrp_to_json(const JrpInstance& inst) {
  return {{"workers", inst.workers},
          {"vacancies", inst.vacancies},
          {"qualities",
           {{"current", inst.current_quality}, {"vacancy", inst.vacancy_quality}}},
          {"affinities",
           {{"current", inst.current_affinity},
            {"vacancy", inst.vacancy_affinity}}},
          {"factors",
           {{"quality", inst.quality_factor},
            {"affinity", inst.affinity_factor}}}};
}

json assignment_to_json(const JrpAssignment& a) {
  return {{"x", a.x},
          {"cost", a.cost},
          {"delta_quality", a.delta_quality},
          {"delta_affinity", a.delta_affinity},
          {"tie_counts", a.tie_counts},
          {"degenerate_choices", a.degenerate_choices},
          {"swapped", a.swapped}};
}

json read_json_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin),
                std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace tnroute
