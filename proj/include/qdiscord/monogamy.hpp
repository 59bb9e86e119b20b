#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdiscord/discord.hpp"

namespace qdiscord {

struct Tolerances {
  double eps_eq = 1e-4;     // equality of two discord values
  double eps_zero = 1e-4;   // vanishing discord
  double eps_check = 5e-4;  // inequality margins
  double eps_d = 1e-9;      // comparisons between d-quantities at a fixed measurement
};

enum class Verdict { Holds, Violated, Inconclusive };
std::string to_string(Verdict v);

struct AssumptionCheck {
  std::string description;  // e.g. "d_{AB;C} >= d_{B;C}", alternatives joined by " or "
  double left = 0.0;
  double right = 0.0;
  bool satisfied = false;
};

struct InequalityCheck {
  std::string name;
  std::string lhs_label;
  std::string rhs_label;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool lhs_certified = false;
  bool comparable = true;
  double spread = 0.0;  // optimizer spread of the left side
  std::vector<AssumptionCheck> assumptions;
  Verdict verdict = Verdict::Inconclusive;
};

/// Applies the verdict rules: any failed assumption or an incomparable pair
/// gives inconclusive; otherwise margin >= -eps_check holds, and a larger
/// deficit is a violation only when the left side is certified.
Verdict decide(const InequalityCheck& check, const Tolerances& tol);

/// Memoized discord values for one state. Keys join blocks with ';' for the
/// ordered measure and ':' for the global one, e.g. "AB;C" or "A:B:C". An
/// ordered key may list its blocks in any order ("B;A").
class DiscordCache {
 public:
  DiscordCache(const DensityMatrix& rho, const OptimizerConfig& cfg) : rho_(rho), cfg_(cfg) {}
  const DiscordResult& get(const std::string& key);
  const DensityMatrix& state() const { return rho_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  DensityMatrix rho_;
  OptimizerConfig cfg_;
  std::map<std::string, DiscordResult> memo_;
};

/// "AB;C" -> {{0,1},{2}}; "A:B:C" -> {{0},{1},{2}}.
std::vector<Block> parse_discord_key(const std::string& key, char separator);
std::string discord_key(const std::vector<Block>& blocks, char separator);

/// Every coarsening edge below `top` (MQD: all moves; GQD: C1/C2, with C3
/// edges reported as not comparable).
std::vector<InequalityCheck> check_complete(const DensityMatrix& rho, MeasureKind kind, const Partition& top,
                                            const OptimizerConfig& cfg, const Tolerances& tol = {});

struct XiEntry {
  Partition gamma;
  double value = 0.0;
  bool vanishes = false;
};

struct MonogamyReport {
  std::string state_id;
  MeasureKind kind = MeasureKind::MQD;
  Partition p, q;
  std::vector<std::pair<Partition, double>> chain;  // p, intermediate partitions, q with values
  double d_p = 0.0, d_q = 0.0;
  bool equal = false;
  std::vector<XiEntry> xi;
  bool discorrelated = true;  // vacuously true when the values differ
};

MonogamyReport check_discorrelated(const DensityMatrix& rho, MeasureKind kind, const Partition& p, const Partition& q,
                                   const OptimizerConfig& cfg, const Tolerances& tol = {}, const std::string& state_id = "");

/// All catalog ids in order.
std::vector<std::string> proposition_catalog();

/// `prop_id` selects one catalog entry or, as a prefix ("prop1", "prop4",
/// "thm1"), every entry below it.
std::vector<InequalityCheck> check_proposition(const DensityMatrix& rho, const std::string& prop_id,
                                               const OptimizerConfig& cfg, const Tolerances& tol = {});
std::vector<InequalityCheck> check_proposition(DiscordCache& cache, const std::string& prop_id,
                                               const Tolerances& tol = {});

struct ClassicalWitness {
  bool classical = false;
  double residual = 0.0;         // max |rho - Phi(rho)| entry at the best bases found
  std::vector<Matrix> unitaries;  // one per block, columns = basis vectors
};

/// Whether some product of local bases on `blocks` leaves rho invariant
/// (max-entry residual <= 1e-9).
ClassicalWitness is_classical_on(const DensityMatrix& rho, const std::vector<Block>& blocks, const OptimizerConfig& cfg);

struct AlphaResult {
  std::optional<double> alpha;
  bool equality = false;
};

inline constexpr double kAlphaMin = 1e-3;
inline constexpr double kAlphaMax = 64.0;

/// Smallest alpha in [kAlphaMin, kAlphaMax] with lhs^a >= sum rhs_i^a.
AlphaResult monogamy_alpha(double lhs, const std::vector<double>& rhs);

}  // namespace qdiscord
