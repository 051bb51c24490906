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

#ifndef MSDRO_OPF_NETWORK_H_
#define MSDRO_OPF_NETWORK_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dro/dro.h"

namespace msdro::opf {

struct Line {
  int from = 0;  // Bus ids as written in the network file.
  int to = 0;
  double reactance = 0.0;
  double f_max = 0.0;
};

struct Generator {
  int bus = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  double c_energy = 0.0;
  double c_reserve = 0.0;
  double c_activation = 0.0;
};

struct Load {
  int bus = 0;
  double d = 0.0;
};

struct Resource {
  int bus = 0;
  double u = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double kappa = 0.0;
};

// Linear DC flow maps: line flows = B^G p + B^W u - B^B d.
struct FlowMaps {
  Eigen::MatrixXd gen;       // L x G
  Eigen::MatrixXd resource;  // L x D
  Eigen::MatrixXd bus;       // L x V
};

struct Network {
  std::string name;
  double base_mva = 100.0;
  std::vector<int> buses;
  int slack = 0;  // Bus id; 0 picks the bus of the largest generator.
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<Load> loads;
  std::vector<Resource> resources;
  FlowMaps maps;  // Filled by LoadNetwork / FinalizeNetwork.

  int num_buses() const { return static_cast<int>(buses.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }
  int num_generators() const { return static_cast<int>(generators.size()); }
  int num_resources() const { return static_cast<int>(resources.size()); }
  int BusIndex(int id) const;
  int SlackBus() const;
  // Demand per bus, ordered as `buses`.
  Eigen::VectorXd BusDemand() const;
  double TotalDemand() const;
  double TotalForecast() const;
};

// Parses the JSON network schema and computes the flow maps.
Network ParseNetwork(const std::string& text);
Network LoadNetwork(const std::string& path);
std::string NetworkToJson(const Network& network);

// Validates the network and (re)computes its flow maps.
void FinalizeNetwork(Network& network);

// Injection shift factors with the given slack bus.
FlowMaps ComputeFlowMaps(const Network& network);

// Technically feasible forecast error range [kappa (u_min - u), kappa (u_max - u)].
std::pair<double, double> BuildSupport(const Resource& resource);
dro::BoxSupport BuildSupport(const Network& network);

}  // namespace msdro::opf

#endif  // MSDRO_OPF_NETWORK_H_
