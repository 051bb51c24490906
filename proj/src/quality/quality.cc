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

#include "quality/quality.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "common/error.h"

namespace msdro::quality {
namespace {

void CheckSamples(const std::vector<double>& v, const char* what) {
  Require(!v.empty(), ErrorCode::kInput, std::string(what) + " is empty");
  for (double x : v) {
    Require(std::isfinite(x), ErrorCode::kInput,
            std::string(what) + " contains a non-finite value");
  }
}

[[noreturn]] void Unsupported(const NoiseModel& noise, double p, Norm norm) {
  Fail(ErrorCode::kUnsupported,
       "no noise bound for p=" + std::to_string(p) +
           (norm == Norm::kL1 ? ", l1" : ", l2") +
           ", dimension " + std::to_string(noise.dimension));
}

// E|X|^p for a single centered coordinate.
double ScalarMoment(const NoiseModel& noise, double p) {
  const double s = noise.scale;
  if (noise.kind == NoiseKind::kLaplace) return std::pow(s, p) * std::tgamma(p + 1);
  return std::pow(s, p) * std::pow(2.0, p / 2) * std::tgamma((p + 1) / 2) /
         std::sqrt(std::numbers::pi);
}

double ParametricBound(const NoiseModel& noise, double p, Norm norm) {
  const double d = noise.dimension;
  if (noise.dimension == 1) return ScalarMoment(noise, p);
  const double m1 = ScalarMoment(noise, 1);
  const double m2 = ScalarMoment(noise, 2);
  if (p == 1 && norm == Norm::kL1) return d * m1;
  if (p == 2 && norm == Norm::kL2) return d * m2;
  if (p == 2 && norm == Norm::kL1) return d * m2 + d * (d - 1) * m1 * m1;
  if (p == 1 && norm == Norm::kL2 && noise.kind == NoiseKind::kGaussian) {
    // Mean of a chi distribution with d degrees of freedom.
    return noise.scale * std::sqrt(2.0) *
           std::exp(std::lgamma((d + 1) / 2) - std::lgamma(d / 2));
  }
  Unsupported(noise, p, norm);
}

}  // namespace

NoiseModel NoiseModel::Laplace(double scale, int dimension) {
  Require(scale > 0 && std::isfinite(scale), ErrorCode::kInput, "Laplace scale must be positive");
  Require(dimension >= 1, ErrorCode::kInput, "noise dimension must be positive");
  return {NoiseKind::kLaplace, scale, dimension, {}};
}

NoiseModel NoiseModel::Gaussian(double stddev, int dimension) {
  Require(stddev > 0 && std::isfinite(stddev), ErrorCode::kInput,
          "Gaussian standard deviation must be positive");
  Require(dimension >= 1, ErrorCode::kInput, "noise dimension must be positive");
  return {NoiseKind::kGaussian, stddev, dimension, {}};
}

NoiseModel NoiseModel::Custom(std::vector<double> samples, int dimension) {
  Require(dimension >= 1, ErrorCode::kInput, "noise dimension must be positive");
  CheckSamples(samples, "noise samples");
  Require(samples.size() % dimension == 0, ErrorCode::kInput,
          "noise sample count is not a multiple of the dimension");
  return {NoiseKind::kCustom, 0.0, dimension, std::move(samples)};
}

double EmpiricalWasserstein1d(const std::vector<double>& a, const std::vector<double>& b,
                              double p) {
  CheckSamples(a, "first sample list");
  CheckSamples(b, "second sample list");
  Require(p >= 1 && std::isfinite(p), ErrorCode::kInput, "Wasserstein order must be >= 1");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  if (n == m) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += std::pow(std::abs(x[i] - y[i]), p);
    return total / static_cast<double>(n);
  }
  // Walk the merged quantile grid {i/n} U {k/m} in integer units of 1/(n*m).
  double total = 0.0;
  std::size_t i = 0, k = 0;
  std::size_t pos = 0;
  const std::size_t end = n * m;
  while (pos < end) {
    const std::size_t next = std::min((i + 1) * m, (k + 1) * n);
    total += static_cast<double>(next - pos) * std::pow(std::abs(x[i] - y[k]), p);
    pos = next;
    if (pos == (i + 1) * m) ++i;
    if (pos == (k + 1) * n) ++k;
  }
  return total / static_cast<double>(end);
}

QualitySignal AdditiveNoiseBound(const NoiseModel& noise, double p, Norm norm) {
  Require(p >= 1 && std::isfinite(p), ErrorCode::kUnsupported, "noise bound order must be >= 1");
  QualitySignal out;
  out.p = p;
  if (noise.kind == NoiseKind::kCustom) {
    const std::size_t d = noise.dimension;
    const std::size_t rows = noise.samples.size() / d;
    Require(rows > 0, ErrorCode::kInput, "custom noise has no samples");
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      double len = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double z = noise.samples[r * d + c];
        len += norm == Norm::kL1 ? std::abs(z) : z * z;
      }
      if (norm == Norm::kL2) len = std::sqrt(len);
      total += std::pow(len, p);
    }
    out.epsilon = total / static_cast<double>(rows);
    out.confidence_note = "sample mean of ||Z||^p over " + std::to_string(rows) + " draws";
    return out;
  }
  if (noise.dimension > 1 && p != 1 && p != 2) Unsupported(noise, p, norm);
  out.epsilon = ParametricBound(noise, p, norm);
  out.confidence_note = noise.kind == NoiseKind::kLaplace ? "analytic E||Z||^p, Laplace noise"
                                                          : "analytic E||Z||^p, Gaussian noise";
  return out;
}

Obfuscated LaplaceMechanism(const std::vector<double>& data, double sensitivity,
                            double theta, std::uint64_t seed) {
  Require(sensitivity > 0 && std::isfinite(sensitivity), ErrorCode::kInput,
          "sensitivity must be positive");
  Require(theta > 0 && std::isfinite(theta), ErrorCode::kInput, "theta must be positive");
  CheckSamples(data, "data");
  const double scale = sensitivity / theta;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  Obfuscated out;
  out.data.reserve(data.size());
  for (double v : data) out.data.push_back(v + scale * (expo(rng) - expo(rng)));
  out.signal = AdditiveNoiseBound(NoiseModel::Laplace(scale), 1, Norm::kL1);
  return out;
}

QualitySignal AggregationProtocolBound(const std::vector<double>& original,
                                       const std::vector<double>& published, double p) {
  QualitySignal out;
  out.p = p;
  out.epsilon = EmpiricalWasserstein1d(original, published, p);
  out.confidence_note = "empirical Wasserstein distance between original and published data";
  return out;
}

}  // namespace msdro::quality
