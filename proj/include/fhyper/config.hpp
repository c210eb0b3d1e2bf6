#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "fhyper/experiments.hpp"

namespace fhyper {

/// Flat "[section]" / "key = value" text with '#' or ';' comments.
class KeyValueConfig {
public:
  struct Entry {
    std::string value;
    int line;
    int column; // 1-based column of the value
  };

  /// Throws ParseError carrying the line and column of the first problem.
  static KeyValueConfig parse(std::string_view text);

  const Entry *find(const std::string &section, const std::string &key) const;
  const std::map<std::pair<std::string, std::string>, Entry> &entries() const { return entries_; }

private:
  std::map<std::pair<std::string, std::string>, Entry> entries_;
};

/// Sweep configuration schema:
///
///   [target]  kind = wendland | mode;  center = x1, x2;  k = k1, k2
///   [sweep]   degrees = 2, 4, 8;  noise = 0, 0.01;  noise_kind = gaussian | uniform
///             servers = 1;  sampling = grid | random;  samples_per_server = 0
///             eval_grid = 0;  trials = 5;  seed = 42
///   [output]  path = sweep.csv
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string &path);

} // namespace fhyper
