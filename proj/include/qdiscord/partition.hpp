#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qdiscord {

/// Labels are indices into the letter universe: 0 = "A", 1 = "B", ...
using Block = std::vector<int>;

/// Ordered partition X1|X2|...|Xk over a subset of the label universe.
/// Labels increase within each block and every label of an earlier block is
/// smaller than every label of a later block, so "AC|B" is rejected.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Block> blocks);

  /// Text syntax: blocks joined by '|', labels as consecutive capital
  /// letters, e.g. "AB|C|DE". Whitespace is ignored.
  static Partition parse(std::string_view text);
  std::string to_string() const;

  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  /// All labels in ascending order.
  std::vector<int> labels() const;
  bool contains_label(int label) const;

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;

 private:
  std::vector<Block> blocks_;
};

std::string block_to_string(const Block& block);

/// The three generating coarsening moves.
enum class MoveKind {
  DiscardBlock,  // C1
  MergeBlocks,   // C2
  TrimLastBlock  // C3
};

std::string to_string(MoveKind kind);

struct MoveSet {
  bool discard = true;
  bool merge = true;
  bool trim = true;

  static constexpr MoveSet all() { return {true, true, true}; }
  static constexpr MoveSet discard_only() { return {true, false, false}; }
  static constexpr MoveSet merge_only() { return {false, true, false}; }
  static constexpr MoveSet trim_only() { return {false, false, true}; }
  /// The relation used for the symmetric (global) discord: C1 and C2.
  static constexpr MoveSet discard_merge() { return {true, true, false}; }

  bool allows(MoveKind kind) const;
  bool operator==(const MoveSet&) const = default;
};

/// One coarsening step.
///  - DiscardBlock: payload = {block index}
///  - MergeBlocks:  payload = {first, last} consecutive block range (last > first)
///  - TrimLastBlock: payload = labels removed from the last block
struct CoarseningMove {
  MoveKind kind;
  std::vector<int> payload;

  bool operator==(const CoarseningMove&) const = default;
};

std::string to_string(const CoarseningMove& move);

struct CoarseningChain {
  Partition source;
  Partition target;
  std::vector<CoarseningMove> moves;
};

/// Applies one move; throws ArgumentError when the move does not fit `p`.
Partition apply_move(const Partition& p, const CoarseningMove& move);

/// Every single move available from p under `allowed`, with its result.
std::vector<std::pair<CoarseningMove, Partition>> successors(const Partition& p, MoveSet allowed);

/// Witness chain from p to q using only `allowed` moves (empty chain when
/// p == q), or nullopt.
std::optional<CoarseningChain> is_coarser(const Partition& p, const Partition& q, MoveSet allowed = MoveSet::all());

/// Every partition with at least two blocks strictly coarser than p.
std::set<Partition> coarser_set(const Partition& p, MoveSet allowed = MoveSet::all());

/// Xi(p - q): partitions Gamma strictly coarser than p (under `allowed`) that
/// involve at least one label outside q and do not contain all labels of q.
/// Throws ArgumentError unless q is coarser than p under `allowed`.
std::set<Partition> xi_set(const Partition& p, const Partition& q, MoveSet allowed = MoveSet::all());

}  // namespace qdiscord
