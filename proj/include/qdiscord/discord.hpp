#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdiscord/measure.hpp"
#include "qdiscord/optimizer.hpp"
#include "qdiscord/partition.hpp"
#include "qdiscord/qstate.hpp"

namespace qdiscord {

enum class MeasureKind { QD, MQD, GQD };

std::string to_string(MeasureKind kind);
/// Accepts "qd", "mqd", "gqd" (any case).
MeasureKind parse_measure_kind(std::string_view text);

struct DiscordResult {
  MeasureKind kind = MeasureKind::MQD;
  Partition partition;
  // Measured blocks in measurement order followed by the unmeasured block
  // (MQD/QD); the partition blocks for GQD.
  std::vector<Block> ordering;
  double value = 0.0;
  double raw_value = 0.0;
  bool clamped = false;
  OptResult opt;
  std::optional<MeasurementTree> tree;        // QD / MQD optimum
  std::optional<ProductMeasurement> product;  // GQD optimum
};

/// D_{X;Y}: measurement on `measured`, nothing on `unmeasured`. Blocks need
/// not be in label order, so D_{B;A} is qd_bipartite(rho, {1}, {0}).
DiscordResult qd_bipartite(const DensityMatrix& rho, const Block& measured, const Block& unmeasured,
                           const OptimizerConfig& cfg);

/// D_{X1;...;Xk} with measurement order = block order.
DiscordResult mqd(const DensityMatrix& rho, const Partition& partition, const OptimizerConfig& cfg);

/// Same objective for an arbitrary block order.
DiscordResult mqd_ordered(const DensityMatrix& rho, const std::vector<Block>& order, const OptimizerConfig& cfg);

/// D_{X1:...:Xk}.
DiscordResult gqd(const DensityMatrix& rho, const Partition& partition, const OptimizerConfig& cfg);

DiscordResult compute_discord(const DensityMatrix& rho, MeasureKind kind, const Partition& partition,
                              const OptimizerConfig& cfg);

/// Objective of the ordered discord at a given tree (no minimization). The
/// tree's blocks give the order; its depth must be #blocks - 1.
double mqd_objective(const DensityMatrix& rho, const MeasurementTree& tree);

/// I(rho) - I(Phi(rho)) over the partition blocks at a given Phi.
double gqd_objective(const DensityMatrix& rho, const Partition& partition, const ProductMeasurement& m);

/// d_{Z;Y} = S_{Y|Pi^Z} - S_{Y|Z} at the given tree. Every block of Z must be
/// measured by the tree before Y (if Y is measured by the tree at all); tree
/// levels after Z are traced out together with their blocks.
double d_quantity(const DensityMatrix& rho, const std::vector<Block>& measured_prefix, const Block& next_block,
                  const MeasurementTree& tree);

struct DefectPair {
  double defect = 0.0;             // d^Phi(full) - d^Phi(sub)
  double relative_entropy_form = 0.0;  // S(rho||rho_S (x) rest) - S(Phi rho||(Phi rho)_S (x) rest)
};

/// Both sides of the coarsening identity for the GQD gap. `sub_blocks` must be
/// blocks of `partition`; `m` is a product measurement over the partition.
DefectPair gqd_defect(const DensityMatrix& rho, const Partition& partition, const std::vector<Block>& sub_blocks,
                      const ProductMeasurement& m);

/// Restriction of a product measurement to some of its blocks.
ProductMeasurement restrict_measurement(const ProductMeasurement& m, const std::vector<Block>& blocks);

}  // namespace qdiscord
