#include "qdiscord/scan.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "qdiscord/monogamy.hpp"

namespace qdiscord {

SamplerSpec SamplerSpec::parse(const std::string& text) {
  SamplerSpec s;
  const auto colon = text.find(':');
  s.kind = text.substr(0, colon);
  if (s.kind != "ginibre" && s.kind != "classical" && s.kind != "product")
    throw ArgumentError("unknown sampler '" + text + "' (expected ginibre[:rank], classical or product)");
  if (colon != std::string::npos) {
    if (s.kind != "ginibre") throw ArgumentError("only the ginibre sampler takes a rank");
    try {
      s.rank = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw ArgumentError("bad sampler rank in '" + text + "'");
    }
    if (s.rank < 1) throw ArgumentError("sampler rank must be positive");
  }
  return s;
}

std::string SamplerSpec::to_string() const { return rank > 0 ? kind + ":" + std::to_string(rank) : kind; }

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{base, index, std::uint64_t{0x5ca9}};
  std::mt19937_64 g(seq);
  return g();
}

DensityMatrix draw_state(const SamplerSpec& sampler, const std::vector<int>& dims, std::uint64_t seed) {
  if (sampler.kind == "ginibre") {
    int total = 1;
    for (int d : dims) total *= d;
    return sample_random_state(dims, sampler.rank > 0 ? std::min(sampler.rank, total) : total, seed);
  }
  const bool qubits = std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; });
  if (!qubits) throw ArgumentError("the " + sampler.kind + " sampler supports qubits only");
  const std::vector<double> params{static_cast<double>(dims.size()), static_cast<double>(seed % 1000000007ULL)};
  return make_named_state(sampler.kind == "classical" ? "classical_random" : "product_random", params);
}

namespace {

struct Comparison {
  std::string label;
  double left = 0.0, right = 0.0;
};

std::string letters(const std::vector<Block>& blocks) {
  std::string s;
  for (const Block& b : blocks) s += block_to_string(b);
  return s;
}

std::vector<Comparison> mqd_comparisons(const DensityMatrix& rho, const OptimizerConfig& cfg) {
  const int n = rho.num_subsystems();
  std::vector<Block> singles;
  for (int i = 0; i < n; ++i) singles.push_back({i});
  const DiscordResult top = mqd(rho, Partition(singles), cfg);
  std::vector<Comparison> out;
  for (int s = 2; s < n; ++s) {
    const std::vector<Block> z(singles.begin(), singles.begin() + s);
    const Block& y = singles[s];
    const double left = d_quantity(rho, z, y, *top.tree);
    for (int mask = 1; mask < (1 << s) - 1; ++mask) {
      std::vector<Block> sub;
      for (int b = 0; b < s; ++b)
        if (mask & (1 << b)) sub.push_back(singles[b]);
      const std::string y_name = block_to_string(y);
      out.push_back({"d_{" + letters(z) + ";" + y_name + "} >= d_{" + letters(sub) + ";" + y_name + "}", left,
                     d_quantity(rho, sub, y, *top.tree)});
    }
  }
  return out;
}

std::vector<Comparison> gqd_comparisons(const DensityMatrix& rho, const OptimizerConfig& cfg) {
  const int n = rho.num_subsystems();
  std::vector<Block> singles;
  for (int i = 0; i < n; ++i) singles.push_back({i});
  const Partition top_p(singles);
  const DiscordResult top = gqd(rho, top_p, cfg);
  const double full = gqd_defect(rho, top_p, {singles[0]}, *top.product).defect;  // d^Phi(full) - 0
  std::vector<Comparison> out;
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::vector<Block> sub;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b)) sub.push_back(singles[b]);
    if (sub.size() < 2) continue;
    const double defect = gqd_defect(rho, top_p, sub, *top.product).defect;
    out.push_back({"d^Phi_{" + discord_key(singles, ':') + "} >= d^Phi_{" + discord_key(sub, ':') + "}", full,
                   full - defect});
  }
  return out;
}

}  // namespace

ScanSummary scan_assumptions(long n_samples, const std::vector<int>& dims, MeasureKind kind, const OptimizerConfig& cfg,
                             std::uint64_t seed, const SamplerSpec& sampler, double violation_tol) {
  if (n_samples < 0) throw ArgumentError("scan: negative sample count");
  if (dims.size() < 2) throw ArgumentError("scan: need at least two subsystems");
  if (dims.size() > 4) throw ArgumentError("scan: at most four subsystems");
  cfg.validate();
  ScanSummary summary;
  summary.samples = n_samples;

  struct PerSample {
    std::uint64_t seed = 0;
    std::vector<Comparison> comparisons;
  };
  std::vector<PerSample> results(n_samples);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n_samples; ++i) {
    const std::uint64_t s = sample_seed(seed, static_cast<std::uint64_t>(i));
    const DensityMatrix rho = draw_state(sampler, dims, s);
    OptimizerConfig local = cfg;
    local.seed = s;
    results[i].seed = s;
    results[i].comparisons = kind == MeasureKind::GQD ? gqd_comparisons(rho, local) : mqd_comparisons(rho, local);
  }

  std::map<std::string, std::size_t> stat_index;
  for (long i = 0; i < n_samples; ++i) {
    double worst = 0.0;
    for (const Comparison& c : results[i].comparisons) {
      const double margin = c.left - c.right;
      summary.rows.push_back({i, c.label, c.left, c.right, margin});
      auto [it, fresh] = stat_index.emplace(c.label, summary.stats.size());
      if (fresh) summary.stats.push_back({c.label, 0, 0, margin});
      AssumptionStat& st = summary.stats[it->second];
      ++st.count;
      st.min_margin = std::min(st.min_margin, margin);
      if (margin < -violation_tol) ++st.violations;
      worst = std::min(worst, margin);
    }
    if (worst < -violation_tol)
      summary.offenders.push_back({i, results[i].seed, worst, draw_state(sampler, dims, results[i].seed)});
  }
  return summary;
}

}  // namespace qdiscord
