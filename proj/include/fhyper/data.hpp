#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fhyper/kernel.hpp"
#include "fhyper/manifold.hpp"

namespace fhyper {

/// phi(u) = (1 - u)_+^8 (32 u^3 + 25 u^2 + 8 u + 1).
double wendland_wu_profile(double u);

/// Wendland-Wu bump of radius 1 centred at `center`, radial in geodesic distance.
double wendland_wu_eval(TorusPoint center, TorusPoint x);

class TargetFunction {
public:
  struct WendlandWu {
    TorusPoint center;
  };
  struct Mode {
    MultiIndex k; // real part of phi_k
  };
  struct Custom {
    TorusFunction f;
    double smoothness;
    std::string name;
  };

  static TargetFunction wendland_wu(TorusPoint center = {});
  static TargetFunction mode(MultiIndex k);
  static TargetFunction custom(TorusFunction f, double smoothness, std::string name);

  double operator()(TorusPoint x) const;
  /// Declared Sobolev smoothness r: 6 for Wendland-Wu, infinity for modes.
  double smoothness() const;
  std::string describe() const;
  TorusFunction as_function() const;

  const std::variant<WendlandWu, Mode, Custom> &kind() const { return kind_; }

private:
  explicit TargetFunction(std::variant<WendlandWu, Mode, Custom> k) : kind_(std::move(k)) {}
  std::variant<WendlandWu, Mode, Custom> kind_;
};

struct NoiseModel {
  enum class Kind { none, bounded_uniform, gaussian };
  Kind kind = Kind::none;
  double level = 0.0; // bound M for uniform, sigma for gaussian
  std::uint64_t seed = 0;

  static NoiseModel none() { return {}; }
  static NoiseModel bounded_uniform(double bound, std::uint64_t seed);
  static NoiseModel gaussian(double sigma, std::uint64_t seed);

  bool is_noisy() const { return kind != Kind::none && level > 0.0; }
  /// "none", "uniform:<M>" or "gaussian:<sigma>".
  std::string descriptor() const;
  /// Inverse of descriptor(); throws ParseError.
  static NoiseModel parse(const std::string &descriptor, std::uint64_t seed);
};

struct GridSampling {
  int n0;
  double shift1 = 0.0;
  double shift2 = 0.0;
};

struct RandomSampling {
  std::size_t count;
  std::uint64_t seed;
};

using Sampling = std::variant<GridSampling, RandomSampling>;

struct Dataset {
  std::vector<TorusPoint> points;
  std::vector<double> values;
  NoiseModel noise;
  std::optional<TargetFunction> target;
  Sampling sampling = GridSampling{1};

  std::size_t size() const { return points.size(); }
};

/// Uniform points on [-pi, pi)^2 drawn from stream (seed, 0).
std::vector<TorusPoint> uniform_points(std::size_t count, std::uint64_t seed);

/// y_i = f*(x_i) + eps_i. Noise comes from stream (noise.seed, 1).
Dataset make_dataset(const TargetFunction &target, const Sampling &sampling,
                     const NoiseModel &noise = NoiseModel::none());

/// Offsets of the 2-D sub-lattice interleaving: with q = ceil(sqrt(m)) and grid
/// spacing h = 2 pi / (3 n0), shift j is ((j mod q) h / q, (j div q) h / q).
std::vector<std::pair<double, double>> interleaved_shifts(int n0, int servers);

/// One grid dataset per shift; shard j uses noise seed derive_seed(noise.seed, {j}).
/// Rejects shifts that would make two shards share a node.
std::vector<Dataset> shard_interleaved(const TargetFunction &target, int n0, int servers,
                                       const std::vector<std::pair<double, double>> &shifts,
                                       const NoiseModel &noise = NoiseModel::none());

/// Split by index modulo m (used for random samples).
std::vector<Dataset> split_round_robin(const Dataset &data, int servers);

/// Concatenate shards in order.
Dataset merge_shards(const std::vector<Dataset> &shards);

} // namespace fhyper
