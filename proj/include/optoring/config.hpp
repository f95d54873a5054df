// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "optoring/errors.hpp"
#include "optoring/model.hpp"

namespace optoring {

using nlohmann::json;

struct GridAxis {
  std::string name;  ///< delta_tilde | J_over_gamma_c | phi | nbar | g
  double min = 0.0;
  double max = 0.0;
  int steps = 1;
};

struct GridSpec {
  std::optional<GridAxis> axis1;
  std::optional<GridAxis> axis2;
  /// Parameter couplings applied after the axis values, from a fixed
  /// vocabulary (see apply_constraint in sweep.hpp).
  std::vector<std::string> constraints;
};

struct RunSettings {
  std::string out = "out";
  bool svg = false;
  int threads = 0;  ///< 0 resolves to the hardware concurrency
};

/// Two-tone drive block for the squeezing command. Magnitudes are
/// site-independent; phases are either derived from the phase-matching rule
/// or given explicitly per site.
struct SqueezeSettings {
  bool present = false;
  double G_plus = 0.0;
  double G_minus = 0.0;
  double nu = 0.0;
  bool phase_matched = true;
  std::vector<double> theta;
  std::vector<double> varphi;
};

struct Config {
  ModelParams params;
  GridSpec grid;
  RunSettings run;
  SqueezeSettings squeeze;
  // True when the detuning was given dressed and inverted to a bare value.
  bool delta_tilde_input = false;
};

struct LoadedConfig {
  Config config;
  std::string snapshot;  ///< raw file contents, embedded in the manifest
};

namespace detail {

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw config_error("unknown key \"" + it.key() + "\" in " + where, path);
  }
}

inline double number_field(const json& obj, const char* key, const std::string& where,
                           const std::string& path) {
  if (!obj.contains(key)) throw config_error(std::string(where) + " is missing \"" + key + "\"", path);
  const json& v = obj.at(key);
  if (!v.is_number()) throw config_error("\"" + std::string(key) + "\" in " + where + " must be a number", path);
  return v.get<double>();
}

inline Eigen::VectorXd vector_field(const json& obj, const char* key, int L,
                                    const std::string& where, const std::string& path) {
  if (!obj.contains(key)) throw config_error(std::string(where) + " is missing \"" + key + "\"", path);
  const json& v = obj.at(key);
  if (v.is_number()) return Eigen::VectorXd::Constant(L, v.get<double>());
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != L)
      throw config_error("\"" + std::string(key) + "\" must have length L", path);
    Eigen::VectorXd out(L);
    for (int i = 0; i < L; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number())
        throw config_error("\"" + std::string(key) + "\" entries must be numbers", path);
      out[i] = v[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
  }
  throw config_error("\"" + std::string(key) + "\" must be a number or an array", path);
}

inline GridAxis parse_axis(const json& j, const std::string& where, const std::string& path) {
  if (!j.is_object()) throw config_error(where + " must be an object", path);
  check_keys(j, {"name", "min", "max", "steps"}, where, path);
  GridAxis ax;
  if (!j.contains("name") || !j.at("name").is_string())
    throw config_error(where + " needs a string \"name\"", path);
  ax.name = j.at("name").get<std::string>();
  static const char* names[] = {"delta_tilde", "J_over_gamma_c", "phi", "nbar", "g"};
  bool known = false;
  for (const char* n : names) known = known || ax.name == n;
  if (!known) throw config_error("unknown grid axis \"" + ax.name + "\"", path);
  ax.min = number_field(j, "min", where, path);
  ax.max = number_field(j, "max", where, path);
  if (!j.contains("steps") || !j.at("steps").is_number_integer())
    throw config_error(where + " needs an integer \"steps\"", path);
  ax.steps = j.at("steps").get<int>();
  if (ax.steps < 1) throw config_error(where + ": steps must be >= 1", path);
  return ax;
}

}  // namespace detail

/// Strict parse of the full configuration object. Unknown keys, wrong
/// types, contradictory fields and physically invalid values all fail
/// closed with a config_error naming the offender.
inline Config parse_config(const json& root, const std::string& path) {
  using detail::check_keys;
  using detail::number_field;
  using detail::vector_field;
  if (!root.is_object()) throw config_error("configuration root must be an object", path);
  check_keys(root, {"lattice", "params", "drive", "grid", "run", "squeeze"}, "configuration", path);
  for (const char* req : {"lattice", "params", "drive"})
    if (!root.contains(req))
      throw config_error(std::string("configuration is missing \"") + req + "\"", path);

  Config cfg;

  const json& jl = root.at("lattice");
  if (!jl.is_object()) throw config_error("\"lattice\" must be an object", path);
  check_keys(jl, {"topology", "L", "adjacency"}, "\"lattice\"", path);
  if (!jl.contains("topology") || !jl.at("topology").is_string())
    throw config_error("\"lattice\" needs a string \"topology\"", path);
  if (!jl.contains("L") || !jl.at("L").is_number_integer())
    throw config_error("\"lattice\" needs an integer \"L\"", path);
  const std::string topo = jl.at("topology").get<std::string>();
  const int L = jl.at("L").get<int>();
  if (L < 1) throw config_error("\"lattice\": L must be >= 1", path);
  if (topo == "ring") {
    if (jl.contains("adjacency"))
      throw config_error("\"adjacency\" is only accepted for custom topology", path);
    cfg.params.lattice = build_ring(L);
  } else if (topo == "open_chain") {
    if (jl.contains("adjacency"))
      throw config_error("\"adjacency\" is only accepted for custom topology", path);
    cfg.params.lattice = build_chain(L);
  } else if (topo == "custom") {
    if (!jl.contains("adjacency") || !jl.at("adjacency").is_array())
      throw config_error("custom topology needs an \"adjacency\" array", path);
    const json& ja = jl.at("adjacency");
    if (static_cast<int>(ja.size()) != L)
      throw config_error("\"adjacency\" must have L rows", path);
    cfg.params.lattice.L = L;
    cfg.params.lattice.topology_tag = Topology::custom;
    cfg.params.lattice.adjacency = Eigen::MatrixXi::Zero(L, L);
    for (int i = 0; i < L; ++i) {
      const json& row = ja[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != L)
        throw config_error("\"adjacency\" rows must have length L", path);
      for (int j = 0; j < L; ++j) {
        const json& e = row[static_cast<std::size_t>(j)];
        if (!e.is_number_integer())
          throw config_error("\"adjacency\" entries must be integers", path);
        cfg.params.lattice.adjacency(i, j) = e.get<int>();
      }
    }
  } else {
    throw config_error("unknown topology \"" + topo + "\"", path);
  }

  const json& jd = root.at("drive");
  if (!jd.is_object()) throw config_error("\"drive\" must be an object", path);
  check_keys(jd, {"mode", "alpha_magnitude", "F_magnitude", "phase_gradient", "phase_winding",
                  "phases"},
             "\"drive\"", path);
  if (!jd.contains("mode") || !jd.at("mode").is_string())
    throw config_error("\"drive\" needs a string \"mode\"", path);
  const std::string mode = jd.at("mode").get<std::string>();
  if (mode == "alpha_prescribed") {
    cfg.params.drive.mode = DriveMode::alpha_prescribed;
    if (jd.contains("F_magnitude"))
      throw config_error("\"F_magnitude\" contradicts alpha_prescribed mode", path);
    cfg.params.drive.alpha_magnitude = number_field(jd, "alpha_magnitude", "\"drive\"", path);
  } else if (mode == "amplitude_driven") {
    cfg.params.drive.mode = DriveMode::amplitude_driven;
    if (jd.contains("alpha_magnitude"))
      throw config_error("\"alpha_magnitude\" contradicts amplitude_driven mode", path);
    cfg.params.drive.F_magnitude = number_field(jd, "F_magnitude", "\"drive\"", path);
  } else {
    throw config_error("unknown drive mode \"" + mode + "\"", path);
  }
  if (jd.contains("phase_gradient") && jd.contains("phase_winding"))
    throw config_error("give \"phase_gradient\" or \"phase_winding\", not both", path);
  if (jd.contains("phase_gradient")) {
    cfg.params.drive.phase_gradient = number_field(jd, "phase_gradient", "\"drive\"", path);
  } else if (jd.contains("phase_winding")) {
    if (!jd.at("phase_winding").is_number_integer())
      throw config_error("\"phase_winding\" must be an integer", path);
    cfg.params.drive.phase_gradient =
        two_pi * static_cast<double>(jd.at("phase_winding").get<long long>()) /
        static_cast<double>(L);
  }
  if (jd.contains("phases")) {
    const json& jp = jd.at("phases");
    if (!jp.is_array() || static_cast<int>(jp.size()) != L)
      throw config_error("\"phases\" must be an array of length L", path);
    for (const auto& e : jp) {
      if (!e.is_number()) throw config_error("\"phases\" entries must be numbers", path);
      cfg.params.drive.phases.push_back(e.get<double>());
    }
  }

  const json& jp = root.at("params");
  if (!jp.is_object()) throw config_error("\"params\" must be an object", path);
  check_keys(jp, {"omega_m", "delta", "delta_tilde", "g", "J", "gamma_c", "gamma_m", "nbar"},
             "\"params\"", path);
  cfg.params.omega_m = vector_field(jp, "omega_m", L, "\"params\"", path);
  cfg.params.g = vector_field(jp, "g", L, "\"params\"", path);
  cfg.params.J = number_field(jp, "J", "\"params\"", path);
  cfg.params.gamma_c = vector_field(jp, "gamma_c", L, "\"params\"", path);
  cfg.params.gamma_m = vector_field(jp, "gamma_m", L, "\"params\"", path);
  cfg.params.nbar = vector_field(jp, "nbar", L, "\"params\"", path);
  const bool has_delta = jp.contains("delta");
  const bool has_dt = jp.contains("delta_tilde");
  if (has_delta == has_dt)
    throw config_error("\"params\" needs exactly one of \"delta\" and \"delta_tilde\"", path);
  cfg.delta_tilde_input = has_dt;
  if (has_delta) {
    cfg.params.delta = vector_field(jp, "delta", L, "\"params\"", path);
  } else {
    // A prescribed dressed detuning is only meaningful when |alpha| is
    // fixed a priori; invert the static shift to recover the bare value.
    if (cfg.params.drive.mode != DriveMode::alpha_prescribed)
      throw config_error("\"delta_tilde\" requires alpha_prescribed drive mode", path);
    const Eigen::VectorXd dt = vector_field(jp, "delta_tilde", L, "\"params\"", path);
    const double a2 = cfg.params.drive.alpha_magnitude * cfg.params.drive.alpha_magnitude;
    cfg.params.delta.resize(L);
    for (int l = 0; l < L; ++l) {
      if (!(cfg.params.omega_m[l] > 0.0))
        throw config_error("\"delta_tilde\" requires positive omega_m", path);
      cfg.params.delta[l] =
          dt[l] - 2.0 * cfg.params.g[l] * cfg.params.g[l] * a2 / cfg.params.omega_m[l];
    }
  }

  if (root.contains("grid")) {
    const json& jg = root.at("grid");
    if (!jg.is_object()) throw config_error("\"grid\" must be an object", path);
    check_keys(jg, {"axis1", "axis2", "constraints"}, "\"grid\"", path);
    if (jg.contains("axis1")) cfg.grid.axis1 = detail::parse_axis(jg.at("axis1"), "\"grid.axis1\"", path);
    if (jg.contains("axis2")) {
      if (!cfg.grid.axis1) throw config_error("\"grid.axis2\" requires \"grid.axis1\"", path);
      cfg.grid.axis2 = detail::parse_axis(jg.at("axis2"), "\"grid.axis2\"", path);
    }
    if (jg.contains("constraints")) {
      const json& jc = jg.at("constraints");
      if (!jc.is_array()) throw config_error("\"constraints\" must be an array", path);
      for (const auto& e : jc) {
        if (!e.is_string()) throw config_error("\"constraints\" entries must be strings", path);
        cfg.grid.constraints.push_back(e.get<std::string>());
      }
    }
  }

  if (root.contains("run")) {
    const json& jr = root.at("run");
    if (!jr.is_object()) throw config_error("\"run\" must be an object", path);
    check_keys(jr, {"out", "svg", "threads"}, "\"run\"", path);
    if (jr.contains("out")) {
      if (!jr.at("out").is_string()) throw config_error("\"run.out\" must be a string", path);
      cfg.run.out = jr.at("out").get<std::string>();
    }
    if (jr.contains("svg")) {
      if (!jr.at("svg").is_boolean()) throw config_error("\"run.svg\" must be a boolean", path);
      cfg.run.svg = jr.at("svg").get<bool>();
    }
    if (jr.contains("threads")) {
      if (!jr.at("threads").is_number_integer() || jr.at("threads").get<int>() < 0)
        throw config_error("\"run.threads\" must be a nonnegative integer", path);
      cfg.run.threads = jr.at("threads").get<int>();
    }
  }

  if (root.contains("squeeze")) {
    const json& js = root.at("squeeze");
    if (!js.is_object()) throw config_error("\"squeeze\" must be an object", path);
    check_keys(js, {"G_plus", "G_minus", "nu", "phase_matched", "theta", "varphi"}, "\"squeeze\"",
               path);
    cfg.squeeze.present = true;
    cfg.squeeze.G_plus = number_field(js, "G_plus", "\"squeeze\"", path);
    cfg.squeeze.G_minus = number_field(js, "G_minus", "\"squeeze\"", path);
    if (js.contains("nu")) cfg.squeeze.nu = number_field(js, "nu", "\"squeeze\"", path);
    if (js.contains("phase_matched")) {
      if (!js.at("phase_matched").is_boolean())
        throw config_error("\"squeeze.phase_matched\" must be a boolean", path);
      cfg.squeeze.phase_matched = js.at("phase_matched").get<bool>();
    }
    auto read_phases = [&](const char* key, std::vector<double>& out) {
      if (!js.contains(key)) return;
      const json& v = js.at(key);
      if (!v.is_array() || static_cast<int>(v.size()) != L)
        throw config_error(std::string("\"squeeze.") + key + "\" must have length L", path);
      for (const auto& e : v) {
        if (!e.is_number())
          throw config_error(std::string("\"squeeze.") + key + "\" entries must be numbers", path);
        out.push_back(e.get<double>());
      }
    };
    read_phases("theta", cfg.squeeze.theta);
    read_phases("varphi", cfg.squeeze.varphi);
    if (cfg.squeeze.theta.empty() != cfg.squeeze.varphi.empty())
      throw config_error("\"squeeze\" needs both \"theta\" and \"varphi\" or neither", path);
    if (!cfg.squeeze.theta.empty() && cfg.squeeze.phase_matched)
      throw config_error("explicit squeeze phases contradict \"phase_matched\": true", path);
  }

  try {
    validate_params(cfg.params);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what(), path);
  }
  return cfg;
}

/// Loads and parses a configuration file, keeping the raw bytes for the run
/// manifest. Parse failures surface as config_error with the parser's
/// position diagnostics.
inline LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open configuration file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  LoadedConfig lc;
  lc.snapshot = buf.str();
  json root;
  try {
    root = json::parse(lc.snapshot);
  } catch (const json::parse_error& e) {
    throw config_error(e.what(), path);
  }
  lc.config = parse_config(root, path);
  return lc;
}

/// Command-line grid override, "name:min:max:steps[,name:min:max:steps]".
inline GridSpec parse_grid_arg(const std::string& arg) {
  GridSpec spec;
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : arg) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.empty() || parts.size() > 2)
    throw std::invalid_argument("--grid takes one or two axis specifications");
  auto parse_one = [](const std::string& s) {
    std::vector<std::string> f;
    std::string c;
    for (char ch : s) {
      if (ch == ':') {
        f.push_back(c);
        c.clear();
      } else {
        c.push_back(ch);
      }
    }
    f.push_back(c);
    if (f.size() != 4) throw std::invalid_argument("axis must be name:min:max:steps");
    try {
      json j{{"name", f[0]}, {"min", json::parse(f[1])}, {"max", json::parse(f[2])},
             {"steps", json::parse(f[3])}};
      return detail::parse_axis(j, "--grid axis", "<command line>");
    } catch (const json::parse_error&) {
      throw std::invalid_argument("--grid axis fields must be numbers: " + s);
    } catch (const config_error& e) {
      throw std::invalid_argument(e.what());
    }
  };
  spec.axis1 = parse_one(parts[0]);
  if (parts.size() == 2) spec.axis2 = parse_one(parts[1]);
  return spec;
}

/// Full-fidelity serialization of a parameter set (vectors kept as arrays;
/// doubles survive a round trip bit-exactly).
inline json params_to_json(const ModelParams& p) {
  json jl;
  switch (p.lattice.topology_tag) {
    case Topology::ring: jl["topology"] = "ring"; break;
    case Topology::open_chain: jl["topology"] = "open_chain"; break;
    case Topology::custom: jl["topology"] = "custom"; break;
  }
  jl["L"] = p.lattice.L;
  if (p.lattice.topology_tag == Topology::custom) {
    json rows = json::array();
    for (int i = 0; i < p.lattice.L; ++i) {
      json row = json::array();
      for (int j = 0; j < p.lattice.L; ++j) row.push_back(p.lattice.adjacency(i, j));
      rows.push_back(row);
    }
    jl["adjacency"] = rows;
  }
  auto vec = [](const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  json jp{{"omega_m", vec(p.omega_m)}, {"delta", vec(p.delta)}, {"g", vec(p.g)},
          {"J", p.J},                  {"gamma_c", vec(p.gamma_c)},
          {"gamma_m", vec(p.gamma_m)}, {"nbar", vec(p.nbar)}};
  json jd;
  jd["mode"] = p.drive.mode == DriveMode::alpha_prescribed ? "alpha_prescribed"
                                                           : "amplitude_driven";
  if (p.drive.mode == DriveMode::alpha_prescribed)
    jd["alpha_magnitude"] = p.drive.alpha_magnitude;
  else
    jd["F_magnitude"] = p.drive.F_magnitude;
  jd["phase_gradient"] = p.drive.phase_gradient;
  if (!p.drive.phases.empty()) jd["phases"] = p.drive.phases;
  return json{{"lattice", jl}, {"params", jp}, {"drive", jd}};
}

inline ModelParams params_from_json(const json& j) {
  json root = j;
  return parse_config(root, "<memory>").params;
}

}  // namespace optoring
