#include "qdiscord/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "qdiscord/kernels.hpp"

namespace qdiscord {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict decide(const InequalityCheck& check, const Tolerances& tol) {
  if (!check.comparable) return Verdict::Inconclusive;
  for (const auto& a : check.assumptions)
    if (!a.satisfied) return Verdict::Inconclusive;
  if (check.margin >= -tol.eps_check) return Verdict::Holds;
  return check.lhs_certified ? Verdict::Violated : Verdict::Inconclusive;
}

std::vector<Block> parse_discord_key(const std::string& key, char separator) {
  std::vector<Block> blocks(1);
  for (char ch : key) {
    if (ch == separator) {
      blocks.emplace_back();
    } else if (ch >= 'A' && ch <= 'Z') {
      blocks.back().push_back(ch - 'A');
    } else {
      throw ArgumentError("bad discord key '" + key + "'");
    }
  }
  for (const Block& b : blocks)
    if (b.empty()) throw ArgumentError("empty block in discord key '" + key + "'");
  return blocks;
}

std::string discord_key(const std::vector<Block>& blocks, char separator) {
  std::string s;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += separator;
    s += block_to_string(blocks[i]);
  }
  return s;
}

namespace {

char separator_for(MeasureKind kind) { return kind == MeasureKind::GQD ? ':' : ';'; }

std::string key_for(MeasureKind kind, const Partition& p) { return discord_key(p.blocks(), separator_for(kind)); }

std::string pretty(const std::string& key) { return "D_{" + key + "}"; }

}  // namespace

const DiscordResult& DiscordCache::get(const std::string& key) {
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  DiscordResult r;
  if (key.find(':') != std::string::npos) {
    r = gqd(rho_, Partition(parse_discord_key(key, ':')), cfg_);
  } else {
    const auto blocks = parse_discord_key(key, ';');
    if (blocks.size() < 2) throw ArgumentError("discord key '" + key + "' has a single block");
    r = mqd_ordered(rho_, blocks, cfg_);
  }
  return memo_.emplace(key, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------
// Completeness and dis-correlation

std::vector<InequalityCheck> check_complete(const DensityMatrix& rho, MeasureKind kind, const Partition& top,
                                            const OptimizerConfig& cfg, const Tolerances& tol) {
  if (top.size() < 2) throw ArgumentError("check_complete: top partition needs at least two blocks");
  DiscordCache cache(rho, cfg);
  std::vector<Partition> nodes{top};
  for (const Partition& p : coarser_set(top, MoveSet::all())) nodes.push_back(p);

  std::vector<InequalityCheck> out;
  std::set<std::pair<Partition, Partition>> seen;
  for (const Partition& from : nodes) {
    for (const auto& [move, to] : successors(from, MoveSet::all())) {
      if (to.size() < 2 || !seen.insert({from, to}).second) continue;
      InequalityCheck c;
      c.name = from.to_string() + " > " + to.to_string() + " (" + to_string(move.kind) + ")";
      const std::string lk = key_for(kind, from), rk = key_for(kind, to);
      const DiscordResult& l = cache.get(lk);
      const DiscordResult& r = cache.get(rk);
      c.lhs_label = pretty(lk);
      c.rhs_label = pretty(rk);
      c.lhs = l.value;
      c.rhs = r.value;
      c.margin = c.lhs - c.rhs;
      c.lhs_certified = l.opt.certified;
      c.spread = l.opt.spread;
      // C3 keeps part of a measured block: the two global measurements are
      // not compatible, so the pair is not ordered by the definition.
      c.comparable = !(kind == MeasureKind::GQD && move.kind == MoveKind::TrimLastBlock);
      c.verdict = decide(c, tol);
      out.push_back(std::move(c));
    }
  }
  return out;
}

MonogamyReport check_discorrelated(const DensityMatrix& rho, MeasureKind kind, const Partition& p, const Partition& q,
                                   const OptimizerConfig& cfg, const Tolerances& tol, const std::string& state_id) {
  const MoveSet allowed = kind == MeasureKind::GQD ? MoveSet::discard_merge() : MoveSet::all();
  const auto chain = is_coarser(p, q, allowed);
  if (!chain) throw ArgumentError("check_discorrelated: " + q.to_string() + " is not coarser than " + p.to_string());
  if (q.size() < 2) throw ArgumentError("check_discorrelated: coarser partition needs at least two blocks");
  DiscordCache cache(rho, cfg);
  MonogamyReport rep;
  rep.state_id = state_id;
  rep.kind = kind;
  rep.p = p;
  rep.q = q;
  Partition at = p;
  rep.chain.emplace_back(at, cache.get(key_for(kind, at)).value);
  for (const auto& m : chain->moves) {
    at = apply_move(at, m);
    if (at.size() >= 2) rep.chain.emplace_back(at, cache.get(key_for(kind, at)).value);
  }
  rep.d_p = cache.get(key_for(kind, p)).value;
  rep.d_q = cache.get(key_for(kind, q)).value;
  rep.equal = std::abs(rep.d_p - rep.d_q) <= tol.eps_eq;
  if (rep.equal) {
    for (const Partition& gamma : xi_set(p, q, allowed)) {
      XiEntry e{gamma, cache.get(key_for(kind, gamma)).value, false};
      e.vanishes = e.value <= tol.eps_zero;
      if (!e.vanishes) rep.discorrelated = false;
      rep.xi.push_back(std::move(e));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Inequality catalog

namespace {

struct DTerm {
  std::string z;  // measured labels, e.g. "AB"
  std::string y;  // next block, e.g. "C"
};

struct DComparison {
  DTerm left, right;
};

struct CatalogItem {
  std::string id;
  int parties = 3;
  std::string lhs;
  std::vector<std::string> rhs;
  std::string tree;  // ordered key whose optimum supplies the d-quantities
  std::vector<std::vector<DComparison>> d_assumptions;  // all groups; any member of a group
  std::vector<std::pair<std::string, std::string>> discord_assumptions;  // left >= right
};

std::string letters(int from, int to) {
  std::string s;
  for (int i = from; i < to; ++i) s += static_cast<char>('A' + i);
  return s;
}

std::string singles(int n, char sep) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += sep;
    s += static_cast<char>('A' + i);
  }
  return s;
}

std::vector<CatalogItem> fixed_items() {
  std::vector<CatalogItem> v;
  auto add = [&v](std::string id, int parties, std::string lhs, std::vector<std::string> rhs,
                  std::vector<std::vector<DComparison>> d = {}, std::string tree = "") {
    CatalogItem it{std::move(id), parties, lhs, std::move(rhs), tree.empty() ? lhs : tree, std::move(d), {}};
    v.push_back(std::move(it));
  };
  const std::string abc = "A;B;C", abcd = "A;B;C;D";
  add("prop1.item1a", 3, abc, {"A;B", "AB;C"});
  add("prop1.item1b", 3, abc, {"A;C"});
  add("prop1.item2", 3, abc, {"B;C"}, {{{{"AB", "C"}, {"B", "C"}}}});
  add("prop1.item3a", 3, abc, {"A;BC"});
  add("prop1.item3b", 3, "A;BC", {"A;B"});
  add("prop1.item4", 3, "A;BC", {"A;C"}, {{{{"AB", "C"}, {"A", "C"}}}}, abc);
  add("prop3", 3, abc, {"A;B", "A;C"}, {{{{"AB", "C"}, {"A", "C"}}}});

  add("prop4.item1", 4, abcd, {"A;B;C", "ABC;D"});
  add("prop4.item2", 4, abcd, {"A;B;D"});
  add("prop4.item3a", 4, abcd, {"A;B"});
  add("prop4.item3b", 4, abcd, {"A;C"});
  add("prop4.item3c", 4, abcd, {"A;D"});
  add("prop4.item4", 4, abcd, {"A;C;D"}, {{{{"ABC", "D"}, {"AC", "D"}}}});
  add("prop4.item5", 4, abcd, {"A;C;D", "A;B"}, {{{{"ABC", "D"}, {"AC", "D"}}}, {{{"AB", "C"}, {"A", "C"}}}});
  add("prop4.item6", 4, abcd, {"B;C;D", "A;B"}, {{{{"ABC", "D"}, {"BC", "D"}}}, {{{"AB", "C"}, {"B", "C"}}}});
  add("prop4.item7", 4, abcd, {"A;B;D", "AB;C"}, {{{{"ABC", "D"}, {"AB", "D"}}}});
  add("prop4.item8", 4, abcd, {"B;C"}, {{{{"AB", "C"}, {"B", "C"}}, {{"ABC", "D"}, {"B", "C"}}}});
  add("prop4.item9", 4, abcd, {"B;D"}, {{{{"ABC", "D"}, {"B", "D"}}}});
  add("prop4.item10", 4, abcd, {"C;D"}, {{{{"ABC", "D"}, {"A", "D"}}}});
  add("prop4.item11", 4, abcd, {"AB;CD", "A;B"});
  add("prop4.item12", 4, abcd, {"A;BCD"});
  add("prop4.item13", 4, abcd, {"A;BC;D"});
  add("prop4.item14", 4, abcd, {"AB;C;D", "A;B"});
  add("prop4.item15", 4, abcd, {"A;B;CD"});
  return v;
}

// Chain hypotheses along the top ordering: d_{A1..As;A(s+1)} against
// every proper nonempty sub-selection of A1..As.
std::vector<std::vector<DComparison>> chain_hypotheses(int n) {
  std::vector<std::vector<DComparison>> out;
  for (int s = 2; s < n; ++s) {
    const std::string z = letters(0, s);
    const std::string y(1, static_cast<char>('A' + s));
    for (int mask = 1; mask < (1 << s) - 1; ++mask) {
      std::string sub;
      for (int b = 0; b < s; ++b)
        if (mask & (1 << b)) sub += static_cast<char>('A' + b);
      out.push_back({{{z, y}, {sub, y}}});
    }
  }
  return out;
}

std::vector<CatalogItem> generated_items(int n) {
  std::vector<CatalogItem> v;
  if (n < 3) return v;
  const std::string top = singles(n, ';');
  const char last = static_cast<char>('A' + n - 1);
  auto add = [&v, n, &top](std::string id, std::vector<std::string> rhs, std::vector<std::vector<DComparison>> d = {}) {
    v.push_back({std::move(id), n, top, std::move(rhs), top, std::move(d), {}});
  };
  add("thm1.item1", {letters(0, n - 1) + ";" + std::string(1, last), singles(n - 1, ';')});
  for (int p = 2; p <= n - 1; ++p) add("thm1.item2.p" + std::to_string(p), {singles(p, ';')});
  for (int i = 3; i <= n; ++i) add("thm1.item3.i" + std::to_string(i), {std::string("A;") + static_cast<char>('A' + i - 1)});

  std::vector<Block> top_blocks;
  for (int i = 0; i < n; ++i) top_blocks.push_back({i});
  const Partition top_p(top_blocks);
  for (const Partition& y : coarser_set(top_p, MoveSet::merge_only())) {
    add("thm1.item4." + y.to_string(), {discord_key(y.blocks(), ';')});
    const int q = static_cast<int>(y.block(0).size());
    if (q >= 2)
      add("thm1.item4b." + y.to_string(), {discord_key(y.blocks(), ';'), singles(q, ';')});
  }
  const auto hyp = chain_hypotheses(n);
  for (const Partition& y : coarser_set(top_p, MoveSet::discard_only()))
    add("thm1.item5." + y.to_string(), {discord_key(y.blocks(), ';')}, hyp);

  CatalogItem g{"gqd_bound_eq26", n, singles(n, ':'), {}, "", {}, {}};
  for (int k = 1; k < n; ++k) g.rhs.push_back(std::string("A:") + static_cast<char>('A' + k));
  for (int k = 2; k < n; ++k)
    g.discord_assumptions.emplace_back(letters(0, k) + ":" + static_cast<char>('A' + k), std::string("A:") + static_cast<char>('A' + k));
  v.push_back(std::move(g));
  return v;
}

bool matches(const std::string& id, const std::string& request) {
  return id == request || (id.size() > request.size() && id.compare(0, request.size(), request) == 0 &&
                           id[request.size()] == '.');
}

// Tree blocks whose union is exactly the labels of `z`.
std::vector<Block> tree_blocks_for(const MeasurementTree& tree, const std::string& z) {
  std::vector<Block> out;
  std::set<int> wanted;
  for (char ch : z) wanted.insert(ch - 'A');
  std::set<int> covered;
  for (const Block& b : tree.blocks()) {
    const bool inside = std::all_of(b.begin(), b.end(), [&](int l) { return wanted.count(l) > 0; });
    if (inside && std::any_of(b.begin(), b.end(), [&](int l) { return wanted.count(l) > 0; })) {
      out.push_back(b);
      covered.insert(b.begin(), b.end());
    }
  }
  if (covered != wanted) throw ArgumentError("d-quantity prefix " + z + " is not a union of measured blocks");
  return out;
}

double evaluate_d(const DensityMatrix& rho, const MeasurementTree& tree, const DTerm& t) {
  Block y;
  for (char ch : t.y) y.push_back(ch - 'A');
  return d_quantity(rho, tree_blocks_for(tree, t.z), y, tree);
}

std::string d_label(const DTerm& t) { return "d_{" + t.z + ";" + t.y + "}"; }

InequalityCheck evaluate_item(DiscordCache& cache, const CatalogItem& item, const Tolerances& tol) {
  InequalityCheck c;
  c.name = item.id;
  const DiscordResult& l = cache.get(item.lhs);
  c.lhs_label = pretty(item.lhs);
  c.lhs = l.value;
  c.lhs_certified = l.opt.certified;
  c.spread = l.opt.spread;
  for (std::size_t i = 0; i < item.rhs.size(); ++i) {
    if (i) c.rhs_label += "+";
    c.rhs_label += pretty(item.rhs[i]);
    c.rhs += cache.get(item.rhs[i]).value;
  }
  c.margin = c.lhs - c.rhs;

  if (!item.d_assumptions.empty()) {
    const MeasurementTree& tree = *cache.get(item.tree).tree;
    for (const auto& group : item.d_assumptions) {
      AssumptionCheck a;
      bool first = true;
      for (const DComparison& cmp : group) {
        const double left = evaluate_d(cache.state(), tree, cmp.left);
        const double right = evaluate_d(cache.state(), tree, cmp.right);
        const bool ok = left - right >= -tol.eps_d;
        if (!a.description.empty()) a.description += " or ";
        a.description += d_label(cmp.left) + " >= " + d_label(cmp.right);
        if (first || (ok && !a.satisfied)) {
          a.left = left;
          a.right = right;
        }
        a.satisfied = a.satisfied || ok;
        first = false;
      }
      c.assumptions.push_back(std::move(a));
    }
  }
  for (const auto& [lk, rk] : item.discord_assumptions) {
    AssumptionCheck a;
    a.description = pretty(lk) + " >= " + pretty(rk);
    a.left = cache.get(lk).value;
    a.right = cache.get(rk).value;
    a.satisfied = a.left - a.right >= -tol.eps_check;
    c.assumptions.push_back(std::move(a));
  }
  c.verdict = decide(c, tol);
  return c;
}

std::vector<CatalogItem> catalog_for(int n) {
  std::vector<CatalogItem> all = fixed_items();
  for (auto& it : generated_items(std::max(n, 3))) all.push_back(std::move(it));
  return all;
}

}  // namespace

std::vector<std::string> proposition_catalog() {
  std::vector<std::string> ids;
  for (const auto& it : fixed_items()) ids.push_back(it.id);
  for (const auto& it : generated_items(3)) ids.push_back(it.id);
  return ids;
}

std::vector<InequalityCheck> check_proposition(DiscordCache& cache, const std::string& prop_id, const Tolerances& tol) {
  const int n = cache.state().num_subsystems();
  std::vector<InequalityCheck> out;
  bool known = false;
  for (const CatalogItem& item : catalog_for(n)) {
    if (!matches(item.id, prop_id)) continue;
    known = true;
    if (item.parties != n)
      throw ArgumentError(item.id + " needs a " + std::to_string(item.parties) + "-partite state, got " +
                          std::to_string(n) + " subsystems");
    out.push_back(evaluate_item(cache, item, tol));
  }
  if (!known) throw ArgumentError("unknown proposition id '" + prop_id + "'");
  return out;
}

std::vector<InequalityCheck> check_proposition(const DensityMatrix& rho, const std::string& prop_id,
                                               const OptimizerConfig& cfg, const Tolerances& tol) {
  DiscordCache cache(rho, cfg);
  return check_proposition(cache, prop_id, tol);
}

// ---------------------------------------------------------------------------
// Classical structure

namespace {

double dephasing_residual(const DensityMatrix& rho, const std::vector<int>& targets, const Matrix& w) {
  const std::vector<int> dims = rho.dims();
  const Matrix out = kernels::dephase(rho.data(), dims, targets, w);
  return (rho.data() - out).cwiseAbs().maxCoeff();
}

Matrix kron_all(const std::vector<Matrix>& us) {
  Matrix w = Matrix::Ones(1, 1);
  for (const Matrix& u : us) {
    Matrix next(w.rows() * u.rows(), w.cols() * u.cols());
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) next.block(r * u.rows(), c * u.cols(), u.rows(), u.cols()) = w(r, c) * u;
    w = std::move(next);
  }
  return w;
}

// Eigenbasis of Tr_rest[rho (I (x) R)] for a random Hermitian R. When rho is
// block diagonal in some basis of the block, every such operator is diagonal
// in it, so a generic combination recovers that basis.
Matrix candidate_basis(const DensityMatrix& rho, const std::vector<int>& positions, std::uint64_t seed) {
  const int n = rho.num_subsystems();
  std::vector<int> order = positions;
  for (int i = 0; i < n; ++i)
    if (std::find(positions.begin(), positions.end(), i) == positions.end()) order.push_back(i);
  const std::vector<int> dims = rho.dims();
  const Matrix m = kernels::permute(rho.data(), dims, order);
  long dx = 1;
  for (int p : positions) dx *= dims[p];
  const long dr = rho.dim() / dx;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix r(dr, dr);
  for (long i = 0; i < dr; ++i)
    for (long j = 0; j < dr; ++j) r(i, j) = Complex(g(rng), g(rng));
  r = (r + r.adjoint()).eval();
  Matrix h = Matrix::Zero(dx, dx);
  for (long a = 0; a < dx; ++a)
    for (long b = 0; b < dx; ++b) h(a, b) = (m.block(a * dr, b * dr, dr, dr) * r).trace();
  h = ((h + h.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvectors();
}

}  // namespace

ClassicalWitness is_classical_on(const DensityMatrix& rho, const std::vector<Block>& blocks, const OptimizerConfig& cfg) {
  if (blocks.empty()) throw ArgumentError("is_classical_on: no blocks");
  std::vector<int> targets;
  std::vector<std::vector<int>> positions;
  std::vector<int> dims;
  for (const Block& b : blocks) {
    positions.push_back(block_positions(rho, b));
    targets.insert(targets.end(), positions.back().begin(), positions.back().end());
    dims.push_back(block_dim(rho, b));
  }
  {
    std::vector<int> sorted = targets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ArgumentError("is_classical_on: blocks overlap");
  }
  constexpr double kThreshold = 1e-9;

  ClassicalWitness w;
  for (std::size_t k = 0; k < blocks.size(); ++k)
    w.unitaries.push_back(candidate_basis(rho, positions[k], cfg.seed * 7919 + 17 + k));
  w.residual = dephasing_residual(rho, targets, kron_all(w.unitaries));

  if (w.residual > kThreshold) {
    Problem problem;
    for (int d : dims) problem.dim += basis_param_count(d);
    problem.qubit_angles = std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; });
    problem.objective = [&](std::span<const double> x) {
      std::vector<Matrix> us;
      std::size_t off = 0;
      for (int d : dims) {
        us.push_back(basis_unitary(d, x.subspan(off, basis_param_count(d))));
        off += basis_param_count(d);
      }
      const std::vector<int> all_dims = rho.dims();
      const Matrix out = kernels::dephase(rho.data(), all_dims, targets, kron_all(us));
      return (rho.data() - out).squaredNorm();
    };
    const OptResult r = minimize(problem, cfg);
    std::vector<Matrix> us;
    std::size_t off = 0;
    for (int d : dims) {
      us.push_back(basis_unitary(d, std::span<const double>(r.params).subspan(off, basis_param_count(d))));
      off += basis_param_count(d);
    }
    const double res = dephasing_residual(rho, targets, kron_all(us));
    if (res < w.residual) {
      w.residual = res;
      w.unitaries = std::move(us);
    }
  }
  w.classical = w.residual <= kThreshold;
  return w;
}

// ---------------------------------------------------------------------------
// Power exponent

AlphaResult monogamy_alpha(double lhs, const std::vector<double>& rhs) {
  if (lhs < 0 || std::any_of(rhs.begin(), rhs.end(), [](double x) { return x < 0; }))
    throw ArgumentError("monogamy_alpha: negative input");
  constexpr double kSame = 1e-12;
  std::vector<double> positive;
  for (double r : rhs)
    if (r > 0) positive.push_back(r);
  if (positive.empty()) return {kAlphaMin, lhs == 0};
  if (lhs == 0) return {};
  const double top = *std::max_element(positive.begin(), positive.end());
  if (top >= lhs - kSame) {
    // Only a single term equal to lhs leaves room: equality for every alpha.
    if (positive.size() == 1 && std::abs(top - lhs) <= kSame) return {kAlphaMin, true};
    return {};
  }
  auto excess = [&](double a) {
    double s = 0.0;
    for (double r : positive) s += std::pow(r / lhs, a);
    return s - 1.0;
  };
  if (excess(kAlphaMin) <= 0) return {kAlphaMin, false};
  if (excess(kAlphaMax) > 0) return {};
  double lo = kAlphaMin, hi = kAlphaMax;
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) <= 0 ? hi : lo) = mid;
  }
  return {hi, false};
}

}  // namespace qdiscord
