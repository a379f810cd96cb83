// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Experiment configuration: a nested JSON document with one experiment per
// run.  Parsing validates eagerly and names the offending path; serialization
// is canonical (all fields, sorted keys), so parse-then-serialize is a fixed
// point and a config hash identifies a run.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwave/damping.hpp"
#include "fracwave/errors.hpp"
#include "fracwave/grid.hpp"

namespace fracwave {

using json = nlohmann::json;

namespace cfg_detail {

inline const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw config_error("config: missing key '" + path + "'");
  return j.at(key);
}

inline double num(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) throw config_error("config: '" + path + "' must be a number");
  return v.get<double>();
}

inline double num_or(const json& j, const std::string& key, double dflt) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  if (!j.at(key).is_number()) throw config_error("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

inline std::string str(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_string()) throw config_error("config: '" + path + "' must be a string");
  return v.get<std::string>();
}

}  // namespace cfg_detail

struct GridSpec {
  int d = 1;
  std::size_t n = 256;
  double box_len = 16.0;

  static GridSpec from_json(const json& j) {
    GridSpec g;
    g.d = static_cast<int>(cfg_detail::num(j, "d", "grid.d"));
    const double n = cfg_detail::num(j, "n", "grid.n");
    if (n < 1.0 || n != std::floor(n)) throw config_error("config: 'grid.n' must be an integer");
    g.n = static_cast<std::size_t>(n);
    g.box_len = cfg_detail::num(j, "box_len", "grid.box_len");
    return g;
  }
  json to_json() const { return {{"d", d}, {"n", n}, {"box_len", box_len}}; }
  GridPtr make() const { return make_grid(d, n, box_len); }
};

struct DampingSpec {
  std::string family = "uniform";
  double level = 1.0;                          // uniform
  double period = 2.0, duty = 0.5;             // stripes
  double width = 1.0;                          // compact-support
  double height = 1.0;                         // stripes / compact-support / bumps
  std::vector<std::array<double, 2>> centers;  // bumps
  double sigma = 1.0;                          // bumps
  std::string csv;                             // custom

  static DampingSpec from_json(const json& j) {
    DampingSpec d;
    d.family = cfg_detail::str(j, "family", "damping.family");
    if (d.family == "uniform") {
      d.level = cfg_detail::num(j, "level", "damping.level");
    } else if (d.family == "stripes") {
      d.period = cfg_detail::num(j, "period", "damping.period");
      d.duty = cfg_detail::num(j, "duty", "damping.duty");
      d.height = cfg_detail::num(j, "height", "damping.height");
    } else if (d.family == "compact-support") {
      d.width = cfg_detail::num(j, "width", "damping.width");
      d.height = cfg_detail::num(j, "height", "damping.height");
    } else if (d.family == "bumps") {
      d.sigma = cfg_detail::num(j, "sigma", "damping.sigma");
      d.height = cfg_detail::num(j, "height", "damping.height");
      const json& cs = cfg_detail::member(j, "centers", "damping.centers");
      if (!cs.is_array() || cs.empty())
        throw config_error("config: 'damping.centers' must be a nonempty array");
      for (const auto& c : cs) {
        if (c.is_number())
          d.centers.push_back({c.get<double>(), 0.0});
        else if (c.is_array() && c.size() == 2)
          d.centers.push_back({c[0].get<double>(), c[1].get<double>()});
        else
          throw config_error("config: 'damping.centers' entries must be numbers or pairs");
      }
    } else if (d.family == "custom") {
      d.csv = cfg_detail::str(j, "csv", "damping.csv");
    } else {
      throw config_error("config: 'damping.family' unknown: " + d.family);
    }
    return d;
  }

  json to_json() const {
    json j{{"family", family}};
    if (family == "uniform") j["level"] = level;
    if (family == "stripes") {
      j["period"] = period;
      j["duty"] = duty;
      j["height"] = height;
    }
    if (family == "compact-support") {
      j["width"] = width;
      j["height"] = height;
    }
    if (family == "bumps") {
      j["sigma"] = sigma;
      j["height"] = height;
      json cs = json::array();
      for (const auto& c : centers) cs.push_back({c[0], c[1]});
      j["centers"] = cs;
    }
    if (family == "custom") j["csv"] = csv;
    return j;
  }

  DampingProfile make(GridPtr grid) const {
    if (family == "uniform") return make_uniform(std::move(grid), level);
    if (family == "stripes") return make_stripes(std::move(grid), period, duty, height);
    if (family == "compact-support") return make_compact_support(std::move(grid), width, height);
    if (family == "bumps") return make_bumps(std::move(grid), centers, sigma, height);
    std::ifstream is(csv);
    if (!is) throw config_error("config: damping csv not readable: " + csv);
    return read_damping_csv(std::move(grid), is);
  }
};

struct DataSpec {
  std::string kind = "broadband";  // broadband | wave-packet | mode
  double band_frac = 0.5;
  double center = 0.0, carrier = 4.0, width = 2.0;
  std::size_t mode_index = 1;

  static DataSpec from_json(const json& j) {
    DataSpec d;
    d.kind = cfg_detail::str(j, "kind", "experiment.data.kind");
    if (d.kind == "broadband") {
      d.band_frac = cfg_detail::num_or(j, "band_frac", 0.5);
    } else if (d.kind == "wave-packet") {
      d.center = cfg_detail::num(j, "center", "experiment.data.center");
      d.carrier = cfg_detail::num(j, "carrier", "experiment.data.carrier");
      d.width = cfg_detail::num(j, "width", "experiment.data.width");
    } else if (d.kind == "mode") {
      d.mode_index = static_cast<std::size_t>(
          cfg_detail::num(j, "index", "experiment.data.index"));
    } else {
      throw config_error("config: 'experiment.data.kind' unknown: " + d.kind);
    }
    return d;
  }

  json to_json() const {
    json j{{"kind", kind}};
    if (kind == "broadband") j["band_frac"] = band_frac;
    if (kind == "wave-packet") {
      j["center"] = center;
      j["carrier"] = carrier;
      j["width"] = width;
    }
    if (kind == "mode") j["index"] = mode_index;
    return j;
  }
};

struct ExperimentSpec {
  std::string type;  // simulate | resolvent-sweep | spectral-constant |
                     // uncertainty-sweep | thickness | fit
  // simulate
  double T = 40.0, dt = 0.0, dt_out = 0.1;
  DataSpec data;
  int smooth_k = 0;
  std::optional<std::array<double, 2>> window;
  // sweeps
  double lambda_min = -20.0, lambda_max = 20.0;
  std::size_t points = 81;
  double tol = 1e-9;
  int refine = 1;
  double order = 0.0;  // uncertainty-sweep: 0 means "use s"
  std::vector<double> radii;
  // set geometry
  double eps = 0.5;
  double cube_len = 2.0;
  std::optional<double> gcc_window;
  // fit
  std::string trace;

  static ExperimentSpec from_json(const json& j);
  json to_json() const;
};

struct RunConfig {
  GridSpec grid;
  double s = 2.0;
  DampingSpec damping;
  ExperimentSpec experiment;
  std::uint64_t seed = 1;

  static RunConfig from_json(const json& j) {
    RunConfig c;
    c.grid = GridSpec::from_json(cfg_detail::member(j, "grid", "grid"));
    c.s = cfg_detail::num(j, "s", "s");
    c.damping = DampingSpec::from_json(cfg_detail::member(j, "damping", "damping"));
    c.experiment = ExperimentSpec::from_json(cfg_detail::member(j, "experiment", "experiment"));
    c.seed = static_cast<std::uint64_t>(cfg_detail::num_or(j, "seed", 1.0));
    return c;
  }

  json to_json() const {
    return {{"grid", grid.to_json()},
            {"s", s},
            {"damping", damping.to_json()},
            {"experiment", experiment.to_json()},
            {"seed", seed}};
  }

  static RunConfig load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("config: cannot open " + path);
    json j;
    try {
      is >> j;
    } catch (const std::exception& e) {
      throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    return from_json(j);
  }
};

inline ExperimentSpec ExperimentSpec::from_json(const json& j) {
  ExperimentSpec e;
  e.type = cfg_detail::str(j, "type", "experiment.type");
  if (e.type == "simulate") {
    e.T = cfg_detail::num(j, "T", "experiment.T");
    e.dt = cfg_detail::num_or(j, "dt", 0.0);
    e.dt_out = cfg_detail::num(j, "dt_out", "experiment.dt_out");
    e.data = DataSpec::from_json(cfg_detail::member(j, "data", "experiment.data"));
    e.smooth_k = static_cast<int>(cfg_detail::num_or(j, "smooth_k", 0.0));
    if (j.contains("window")) {
      const auto& w = j.at("window");
      if (!w.is_array() || w.size() != 2)
        throw config_error("config: 'experiment.window' must be [lo, hi]");
      e.window = {{w[0].get<double>(), w[1].get<double>()}};
    }
  } else if (e.type == "resolvent-sweep") {
    e.lambda_min = cfg_detail::num(j, "lambda_min", "experiment.lambda_min");
    e.lambda_max = cfg_detail::num(j, "lambda_max", "experiment.lambda_max");
    e.points = static_cast<std::size_t>(cfg_detail::num_or(j, "points", 81.0));
    e.tol = cfg_detail::num_or(j, "tol", 1e-9);
    e.refine = static_cast<int>(cfg_detail::num_or(j, "refine", 1.0));
    e.eps = cfg_detail::num_or(j, "eps", 0.5);
    e.cube_len = cfg_detail::num_or(j, "cube_len", 2.0);
  } else if (e.type == "spectral-constant") {
    const json& r = cfg_detail::member(j, "radii", "experiment.radii");
    if (!r.is_array() || r.empty())
      throw config_error("config: 'experiment.radii' must be a nonempty array");
    for (const auto& v : r) e.radii.push_back(v.get<double>());
    e.eps = cfg_detail::num_or(j, "eps", 0.5);
    e.tol = cfg_detail::num_or(j, "tol", 1e-11);
  } else if (e.type == "uncertainty-sweep") {
    e.lambda_min = cfg_detail::num(j, "lambda_min", "experiment.lambda_min");
    e.lambda_max = cfg_detail::num(j, "lambda_max", "experiment.lambda_max");
    e.points = static_cast<std::size_t>(cfg_detail::num_or(j, "points", 31.0));
    e.tol = cfg_detail::num_or(j, "tol", 1e-8);
    e.eps = cfg_detail::num_or(j, "eps", 0.5);
    e.order = cfg_detail::num_or(j, "order", 0.0);
  } else if (e.type == "thickness") {
    e.eps = cfg_detail::num(j, "eps", "experiment.eps");
    e.cube_len = cfg_detail::num(j, "cube_len", "experiment.cube_len");
    if (j.contains("gcc_window")) e.gcc_window = j.at("gcc_window").get<double>();
  } else if (e.type == "fit") {
    e.trace = cfg_detail::str(j, "trace", "experiment.trace");
    if (j.contains("window")) {
      const auto& w = j.at("window");
      if (!w.is_array() || w.size() != 2)
        throw config_error("config: 'experiment.window' must be [lo, hi]");
      e.window = {{w[0].get<double>(), w[1].get<double>()}};
    }
  } else {
    throw config_error("config: 'experiment.type' unknown: " + e.type);
  }
  return e;
}

inline json ExperimentSpec::to_json() const {
  json j{{"type", type}};
  if (type == "simulate") {
    j["T"] = T;
    j["dt"] = dt;
    j["dt_out"] = dt_out;
    j["data"] = data.to_json();
    j["smooth_k"] = smooth_k;
    if (window) j["window"] = {(*window)[0], (*window)[1]};
  } else if (type == "resolvent-sweep") {
    j["lambda_min"] = lambda_min;
    j["lambda_max"] = lambda_max;
    j["points"] = points;
    j["tol"] = tol;
    j["refine"] = refine;
    j["eps"] = eps;
    j["cube_len"] = cube_len;
  } else if (type == "spectral-constant") {
    j["radii"] = radii;
    j["eps"] = eps;
    j["tol"] = tol;
  } else if (type == "uncertainty-sweep") {
    j["lambda_min"] = lambda_min;
    j["lambda_max"] = lambda_max;
    j["points"] = points;
    j["tol"] = tol;
    j["eps"] = eps;
    j["order"] = order;
  } else if (type == "thickness") {
    j["eps"] = eps;
    j["cube_len"] = cube_len;
    if (gcc_window) j["gcc_window"] = *gcc_window;
  } else if (type == "fit") {
    j["trace"] = trace;
    if (window) j["window"] = {(*window)[0], (*window)[1]};
  }
  return j;
}

// FNV-1a over the canonical dump; identifies a run in reports.
inline std::string config_hash(const RunConfig& c) {
  const std::string s = c.to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fracwave
