#include "qdiscord/partition.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>

#include "qdiscord/qstate.hpp"

namespace qdiscord {

Partition::Partition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  int previous = -1;
  for (const Block& b : blocks_) {
    if (b.empty()) throw ArgumentError("partition has an empty block");
    for (int label : b) {
      if (label < 0 || label >= 26) throw ArgumentError("partition label out of range");
      // Strict increase across the flattened sequence covers both ordering
      // rules and rules out repeats.
      if (label <= previous) throw ArgumentError("partition labels must increase within and across blocks");
      previous = label;
    }
  }
}

Partition Partition::parse(std::string_view text) {
  std::vector<Block> blocks(1);
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '|') {
      blocks.emplace_back();
    } else if (ch >= 'A' && ch <= 'Z') {
      blocks.back().push_back(ch - 'A');
    } else {
      throw ArgumentError("partition syntax: unexpected character '" + std::string(1, ch) + "' in \"" +
                          std::string(text) + "\"");
    }
  }
  if (blocks.size() == 1 && blocks[0].empty()) throw ArgumentError("partition syntax: empty partition");
  return Partition(std::move(blocks));
}

std::string block_to_string(const Block& block) {
  std::string s;
  for (int label : block) s += static_cast<char>('A' + label);
  return s;
}

std::string Partition::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) s += '|';
    s += block_to_string(blocks_[i]);
  }
  return s;
}

std::vector<int> Partition::labels() const {
  std::vector<int> out;
  for (const Block& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool Partition::contains_label(int label) const {
  for (const Block& b : blocks_)
    if (std::find(b.begin(), b.end(), label) != b.end()) return true;
  return false;
}

std::string to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::DiscardBlock: return "C1";
    case MoveKind::MergeBlocks: return "C2";
    case MoveKind::TrimLastBlock: return "C3";
  }
  return "?";
}

bool MoveSet::allows(MoveKind kind) const {
  switch (kind) {
    case MoveKind::DiscardBlock: return discard;
    case MoveKind::MergeBlocks: return merge;
    case MoveKind::TrimLastBlock: return trim;
  }
  return false;
}

std::string to_string(const CoarseningMove& move) {
  std::string s = to_string(move.kind) + "(";
  for (std::size_t i = 0; i < move.payload.size(); ++i) {
    if (i) s += ',';
    s += move.kind == MoveKind::TrimLastBlock ? std::string(1, static_cast<char>('A' + move.payload[i]))
                                               : std::to_string(move.payload[i]);
  }
  return s + ")";
}

Partition apply_move(const Partition& p, const CoarseningMove& move) {
  const auto& blocks = p.blocks();
  const int k = static_cast<int>(blocks.size());
  switch (move.kind) {
    case MoveKind::DiscardBlock: {
      if (move.payload.size() != 1) throw ArgumentError("C1 move needs exactly one block index");
      const int i = move.payload[0];
      if (i < 0 || i >= k) throw ArgumentError("C1 move: block index out of range");
      if (k == 1) throw ArgumentError("C1 move would leave no blocks");
      std::vector<Block> out = blocks;
      out.erase(out.begin() + i);
      return Partition(std::move(out));
    }
    case MoveKind::MergeBlocks: {
      if (move.payload.size() != 2) throw ArgumentError("C2 move needs a block range {first, last}");
      const int first = move.payload[0], last = move.payload[1];
      if (first < 0 || last >= k || last <= first) throw ArgumentError("C2 move: invalid block range");
      std::vector<Block> out(blocks.begin(), blocks.begin() + first);
      Block merged;
      for (int i = first; i <= last; ++i) merged.insert(merged.end(), blocks[i].begin(), blocks[i].end());
      out.push_back(std::move(merged));
      out.insert(out.end(), blocks.begin() + last + 1, blocks.end());
      return Partition(std::move(out));
    }
    case MoveKind::TrimLastBlock: {
      const Block& tail = blocks.back();
      if (tail.size() < 2) throw ArgumentError("C3 move needs a last block with at least two labels");
      if (move.payload.empty()) throw ArgumentError("C3 move removes no labels");
      Block kept;
      for (int label : tail)
        if (std::find(move.payload.begin(), move.payload.end(), label) == move.payload.end()) kept.push_back(label);
      if (tail.size() - kept.size() != move.payload.size())
        throw ArgumentError("C3 move removes labels that are not in the last block");
      if (kept.empty()) throw ArgumentError("C3 move would empty the last block");
      std::vector<Block> out = blocks;
      out.back() = std::move(kept);
      return Partition(std::move(out));
    }
  }
  throw ArgumentError("unknown move kind");
}

std::vector<std::pair<CoarseningMove, Partition>> successors(const Partition& p, MoveSet allowed) {
  std::vector<std::pair<CoarseningMove, Partition>> out;
  const int k = static_cast<int>(p.size());
  if (allowed.discard && k >= 2) {
    for (int i = 0; i < k; ++i) {
      CoarseningMove m{MoveKind::DiscardBlock, {i}};
      out.emplace_back(m, apply_move(p, m));
    }
  }
  if (allowed.merge) {
    // Pairwise merges of neighbours generate every run merge by repetition.
    for (int i = 0; i + 1 < k; ++i) {
      CoarseningMove m{MoveKind::MergeBlocks, {i, i + 1}};
      out.emplace_back(m, apply_move(p, m));
    }
  }
  if (allowed.trim && k >= 1 && p.blocks().back().size() >= 2) {
    const Block& tail = p.blocks().back();
    const int n = static_cast<int>(tail.size());
    // Every nonempty proper subset of the last block may be removed.
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<int> removed;
      for (int b = 0; b < n; ++b)
        if (mask & (1 << b)) removed.push_back(tail[b]);
      CoarseningMove m{MoveKind::TrimLastBlock, removed};
      out.emplace_back(m, apply_move(p, m));
    }
  }
  return out;
}

std::optional<CoarseningChain> is_coarser(const Partition& p, const Partition& q, MoveSet allowed) {
  if (p == q) return CoarseningChain{p, q, {}};
  // Coarsening never introduces labels or blocks.
  const auto pl = p.labels();
  for (int label : q.labels())
    if (!std::binary_search(pl.begin(), pl.end(), label)) return std::nullopt;
  if (q.size() > p.size()) return std::nullopt;

  std::map<Partition, std::pair<Partition, CoarseningMove>> parent;
  std::deque<Partition> frontier{p};
  std::set<Partition> seen{p};
  while (!frontier.empty()) {
    Partition cur = std::move(frontier.front());
    frontier.pop_front();
    for (auto& [move, next] : successors(cur, allowed)) {
      if (!seen.insert(next).second) continue;
      parent.emplace(next, std::make_pair(cur, move));
      if (next == q) {
        CoarseningChain chain{p, q, {}};
        Partition at = q;
        while (!(at == p)) {
          const auto& [prev, m] = parent.at(at);
          chain.moves.push_back(m);
          at = prev;
        }
        std::reverse(chain.moves.begin(), chain.moves.end());
        return chain;
      }
      frontier.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

std::set<Partition> coarser_set(const Partition& p, MoveSet allowed) {
  std::set<Partition> seen{p};
  std::deque<Partition> frontier{p};
  while (!frontier.empty()) {
    Partition cur = std::move(frontier.front());
    frontier.pop_front();
    for (auto& [move, next] : successors(cur, allowed)) {
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  seen.erase(p);
  std::erase_if(seen, [](const Partition& x) { return x.size() < 2; });
  return seen;
}

std::set<Partition> xi_set(const Partition& p, const Partition& q, MoveSet allowed) {
  if (!is_coarser(p, q, allowed))
    throw ArgumentError("xi_set: " + q.to_string() + " is not coarser than " + p.to_string());
  const std::vector<int> target = q.labels();
  std::set<Partition> out;
  for (const Partition& gamma : coarser_set(p, allowed)) {
    const bool has_all = std::all_of(target.begin(), target.end(), [&](int l) { return gamma.contains_label(l); });
    const auto gl = gamma.labels();
    const bool has_outside =
        std::any_of(gl.begin(), gl.end(), [&](int l) { return !std::binary_search(target.begin(), target.end(), l); });
    if (!has_all && has_outside) out.insert(gamma);
  }
  return out;
}

}  // namespace qdiscord
