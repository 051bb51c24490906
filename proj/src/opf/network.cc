// Copyright 2026 The MSDRO Authors
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

#include "opf/network.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "common/error.h"
#include "json.hpp"

namespace msdro::opf {

using nlohmann::json;

int Network::BusIndex(int id) const {
  auto it = std::find(buses.begin(), buses.end(), id);
  Require(it != buses.end(), ErrorCode::kInput, "unknown bus " + std::to_string(id));
  return static_cast<int>(it - buses.begin());
}

int Network::SlackBus() const {
  if (slack != 0) return slack;
  Require(!generators.empty(), ErrorCode::kInput, "network has no generators");
  auto largest = std::max_element(generators.begin(), generators.end(),
                                  [](const Generator& a, const Generator& b) {
                                    return a.p_max < b.p_max;
                                  });
  return largest->bus;
}

Eigen::VectorXd Network::BusDemand() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(num_buses());
  for (const Load& load : loads) d[BusIndex(load.bus)] += load.d;
  return d;
}

double Network::TotalDemand() const {
  double total = 0.0;
  for (const Load& load : loads) total += load.d;
  return total;
}

double Network::TotalForecast() const {
  double total = 0.0;
  for (const Resource& r : resources) total += r.u;
  return total;
}

namespace {

template <typename T>
T Get(const json& obj, const char* key, const std::string& where) {
  Require(obj.is_object(), ErrorCode::kParse, where + ": expected an object");
  auto it = obj.find(key);
  Require(it != obj.end(), ErrorCode::kParse, where + ": missing key '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    Fail(ErrorCode::kParse, where + ": bad value for '" + key + "'");
  }
}

const json& Array(const json& root, const char* key, bool required) {
  static const json kEmpty = json::array();
  auto it = root.find(key);
  if (it == root.end()) {
    Require(!required, ErrorCode::kParse, std::string("missing key '") + key + "'");
    return kEmpty;
  }
  Require(it->is_array(), ErrorCode::kParse, std::string("'") + key + "' must be an array");
  return *it;
}

bool Finite(double v) { return std::isfinite(v); }

void Validate(const Network& net) {
  Require(net.num_buses() > 0, ErrorCode::kInput, "network has no buses");
  std::set<int> ids(net.buses.begin(), net.buses.end());
  Require(static_cast<int>(ids.size()) == net.num_buses(), ErrorCode::kInput,
          "duplicate bus id");
  Require(net.num_generators() > 0, ErrorCode::kInput, "network has no generators");
  for (const Line& l : net.lines) {
    net.BusIndex(l.from);
    net.BusIndex(l.to);
    Require(l.from != l.to, ErrorCode::kInput, "line connects a bus to itself");
    Require(Finite(l.reactance) && l.reactance > 0, ErrorCode::kInput,
            "line reactance must be positive");
    Require(Finite(l.f_max) && l.f_max > 0, ErrorCode::kInput, "line limit must be positive");
  }
  for (const Generator& g : net.generators) {
    net.BusIndex(g.bus);
    Require(Finite(g.p_min) && Finite(g.p_max) && g.p_min <= g.p_max, ErrorCode::kInput,
            "generator limits out of order");
    Require(Finite(g.c_energy) && Finite(g.c_reserve) && Finite(g.c_activation) &&
                g.c_reserve >= 0 && g.c_activation >= 0,
            ErrorCode::kInput, "bad generator cost");
  }
  for (const Load& d : net.loads) {
    net.BusIndex(d.bus);
    Require(Finite(d.d), ErrorCode::kInput, "bad load");
  }
  for (const Resource& r : net.resources) {
    net.BusIndex(r.bus);
    BuildSupport(r);
  }
  net.BusIndex(net.SlackBus());
}

}  // namespace

Network ParseNetwork(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, std::string("network JSON: ") + e.what());
  }
  Require(root.is_object(), ErrorCode::kParse, "network JSON must be an object");
  Network net;
  net.name = root.value("name", std::string());
  net.base_mva = root.value("base_mva", 100.0);
  net.slack = root.value("slack", 0);
  for (const json& b : Array(root, "buses", true)) net.buses.push_back(Get<int>(b, "id", "bus"));
  for (const json& l : Array(root, "lines", true)) {
    net.lines.push_back({Get<int>(l, "from", "line"), Get<int>(l, "to", "line"),
                         Get<double>(l, "reactance", "line"), Get<double>(l, "f_max", "line")});
  }
  for (const json& g : Array(root, "generators", true)) {
    net.generators.push_back({Get<int>(g, "bus", "generator"), Get<double>(g, "p_min", "generator"),
                              Get<double>(g, "p_max", "generator"),
                              Get<double>(g, "c_E", "generator"), Get<double>(g, "c_R", "generator"),
                              Get<double>(g, "c_A", "generator")});
  }
  for (const json& d : Array(root, "loads", false)) {
    net.loads.push_back({Get<int>(d, "bus", "load"), Get<double>(d, "d", "load")});
  }
  for (const json& r : Array(root, "resources", false)) {
    net.resources.push_back({Get<int>(r, "bus", "resource"), Get<double>(r, "u", "resource"),
                             Get<double>(r, "u_min", "resource"),
                             Get<double>(r, "u_max", "resource"),
                             Get<double>(r, "kappa", "resource")});
  }
  FinalizeNetwork(net);
  return net;
}

Network LoadNetwork(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open network file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseNetwork(buffer.str());
}

std::string NetworkToJson(const Network& net) {
  json root;
  root["name"] = net.name;
  root["base_mva"] = net.base_mva;
  root["slack"] = net.slack;
  root["buses"] = json::array();
  for (int id : net.buses) root["buses"].push_back({{"id", id}});
  root["lines"] = json::array();
  for (const Line& l : net.lines) {
    root["lines"].push_back(
        {{"from", l.from}, {"to", l.to}, {"reactance", l.reactance}, {"f_max", l.f_max}});
  }
  root["generators"] = json::array();
  for (const Generator& g : net.generators) {
    root["generators"].push_back({{"bus", g.bus}, {"p_min", g.p_min}, {"p_max", g.p_max},
                                  {"c_E", g.c_energy}, {"c_R", g.c_reserve},
                                  {"c_A", g.c_activation}});
  }
  root["loads"] = json::array();
  for (const Load& d : net.loads) root["loads"].push_back({{"bus", d.bus}, {"d", d.d}});
  root["resources"] = json::array();
  for (const Resource& r : net.resources) {
    root["resources"].push_back({{"bus", r.bus}, {"u", r.u}, {"u_min", r.u_min},
                                 {"u_max", r.u_max}, {"kappa", r.kappa}});
  }
  return root.dump(2);
}

void FinalizeNetwork(Network& network) {
  Validate(network);
  network.maps = ComputeFlowMaps(network);
}

FlowMaps ComputeFlowMaps(const Network& net) {
  const int v_count = net.num_buses();
  const int l_count = net.num_lines();

  std::vector<std::vector<int>> adj(v_count);
  for (const Line& l : net.lines) {
    adj[net.BusIndex(l.from)].push_back(net.BusIndex(l.to));
    adj[net.BusIndex(l.to)].push_back(net.BusIndex(l.from));
  }
  const int slack = net.BusIndex(net.SlackBus());
  std::vector<bool> seen(v_count, false);
  std::queue<int> frontier;
  frontier.push(slack);
  seen[slack] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  Require(reached == v_count, ErrorCode::kTopology, "network is not connected");

  // Reduced susceptance matrix without the slack row and column.
  auto reduced = [slack](int v) { return v < slack ? v : v - 1; };
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(v_count - 1, v_count - 1);
  for (const Line& l : net.lines) {
    const int f = net.BusIndex(l.from), t = net.BusIndex(l.to);
    const double y = 1.0 / l.reactance;
    if (f != slack) b(reduced(f), reduced(f)) += y;
    if (t != slack) b(reduced(t), reduced(t)) += y;
    if (f != slack && t != slack) {
      b(reduced(f), reduced(t)) -= y;
      b(reduced(t), reduced(f)) -= y;
    }
  }
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(v_count, v_count);
  if (v_count > 1) {
    const Eigen::MatrixXd x = b.ldlt().solve(Eigen::MatrixXd::Identity(v_count - 1, v_count - 1));
    for (int v = 0; v < v_count; ++v) {
      if (v == slack) continue;
      for (int w = 0; w < v_count; ++w) {
        if (w != slack) theta(w, v) = x(reduced(w), reduced(v));
      }
    }
  }

  FlowMaps maps;
  maps.bus.resize(l_count, v_count);
  for (int l = 0; l < l_count; ++l) {
    const int f = net.BusIndex(net.lines[l].from), t = net.BusIndex(net.lines[l].to);
    maps.bus.row(l) = (theta.row(f) - theta.row(t)) / net.lines[l].reactance;
  }
  maps.gen.resize(l_count, net.num_generators());
  for (int g = 0; g < net.num_generators(); ++g) {
    maps.gen.col(g) = maps.bus.col(net.BusIndex(net.generators[g].bus));
  }
  maps.resource.resize(l_count, net.num_resources());
  for (int j = 0; j < net.num_resources(); ++j) {
    maps.resource.col(j) = maps.bus.col(net.BusIndex(net.resources[j].bus));
  }
  return maps;
}

std::pair<double, double> BuildSupport(const Resource& r) {
  Require(std::isfinite(r.u) && std::isfinite(r.u_min) && std::isfinite(r.u_max) &&
              std::isfinite(r.kappa),
          ErrorCode::kInput, "resource data must be finite");
  Require(r.u_min <= r.u && r.u <= r.u_max, ErrorCode::kInput,
          "resource forecast outside [u_min, u_max] at bus " + std::to_string(r.bus));
  Require(r.kappa >= 0, ErrorCode::kInput, "resource kappa must be non-negative");
  return {r.kappa * (r.u_min - r.u), r.kappa * (r.u_max - r.u)};
}

dro::BoxSupport BuildSupport(const Network& net) {
  dro::BoxSupport box;
  for (const Resource& r : net.resources) {
    auto [lo, up] = BuildSupport(r);
    box.lower.push_back(lo);
    box.upper.push_back(up);
  }
  return box;
}

}  // namespace msdro::opf
