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

#ifndef MSDRO_QUALITY_QUALITY_H_
#define MSDRO_QUALITY_QUALITY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace msdro::quality {

// Wasserstein budget advertised for a dataset: an upper bound on W_p^p
// between its empirical distribution and the true one.
struct QualitySignal {
  double epsilon = 0.0;
  double p = 1.0;
  std::string confidence_note;
};

enum class NoiseKind { kLaplace, kGaussian, kCustom };
enum class Norm { kL1, kL2 };

// Additive obfuscation noise Z. Parametric kinds are i.i.d. per coordinate;
// custom noise is a row-major sample matrix with `dimension` columns.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kCustom;
  double scale = 0.0;  // Laplace scale or Gaussian standard deviation.
  int dimension = 1;
  std::vector<double> samples;

  static NoiseModel Laplace(double scale, int dimension = 1);
  static NoiseModel Gaussian(double stddev, int dimension = 1);
  static NoiseModel Custom(std::vector<double> samples, int dimension = 1);
};

// W_p^p between the uniform empirical measures on `a` and `b` (p >= 1).
// Unequal lengths are handled exactly by the monotone quantile coupling.
double EmpiricalWasserstein1d(const std::vector<double>& a, const std::vector<double>& b,
                              double p);

// E||Z||^p in closed form for parametric noise, sample mean otherwise.
QualitySignal AdditiveNoiseBound(const NoiseModel& noise, double p, Norm norm);

struct Obfuscated {
  std::vector<double> data;
  QualitySignal signal;
};

// Adds i.i.d. Laplace(sensitivity / theta) noise to every entry.
Obfuscated LaplaceMechanism(const std::vector<double>& data, double sensitivity,
                            double theta, std::uint64_t seed);

// Quality of a published dataset when the additive bound does not apply,
// e.g. masks that cancel over time.
QualitySignal AggregationProtocolBound(const std::vector<double>& original,
                                       const std::vector<double>& published, double p);

}  // namespace msdro::quality

#endif  // MSDRO_QUALITY_QUALITY_H_
