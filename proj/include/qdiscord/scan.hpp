#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdiscord/discord.hpp"

namespace qdiscord {

/// "ginibre" (full rank), "ginibre:R", "classical", "product".
struct SamplerSpec {
  std::string kind = "ginibre";
  int rank = 0;

  static SamplerSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Seed of sample `index` in a run seeded with `base`.
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index);

DensityMatrix draw_state(const SamplerSpec& sampler, const std::vector<int>& dims, std::uint64_t seed);

struct AssumptionSample {
  long sample = 0;
  std::string comparison;
  double left = 0.0;
  double right = 0.0;
  double margin = 0.0;
};

struct AssumptionStat {
  std::string comparison;
  long count = 0;
  long violations = 0;
  double min_margin = 0.0;
};

struct Offender {
  long sample = 0;
  std::uint64_t seed = 0;
  double worst_margin = 0.0;
  DensityMatrix state;
};

struct ScanSummary {
  long samples = 0;
  std::vector<AssumptionSample> rows;
  std::vector<AssumptionStat> stats;
  std::vector<Offender> offenders;
};

/// MQD: d_{A1..As;A(s+1)} >= d_{sub;A(s+1)} for every proper nonempty
/// sub-selection, at the optimal tree of D_{A1;...;An}.
/// GQD: d^Phi(all blocks) >= d^Phi(sub) for every sub-selection of at least two
/// blocks, at the optimal Phi of D_{A1:...:An}.
/// A margin below -violation_tol marks the state as an offender.
ScanSummary scan_assumptions(long n_samples, const std::vector<int>& dims, MeasureKind kind, const OptimizerConfig& cfg,
                             std::uint64_t seed, const SamplerSpec& sampler = {}, double violation_tol = 1e-9);

}  // namespace qdiscord
