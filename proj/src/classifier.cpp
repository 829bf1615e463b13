#include "multone/classifier.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace multone {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace {

void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
}

void require_rank(std::size_t rank, const Weight& w) {
  if (w.rank() != rank)
    throw DomainError("weight " + w.str() + " has rank " + std::to_string(w.rank()) + ", expected " +
                      std::to_string(rank));
}

std::string join_tags(const std::vector<std::string>& tags) {
  std::string out;
  for (const auto& t : tags) out += (out.empty() ? "" : ",") + t;
  return out;
}

}  // namespace

Weight PAdicExpansion::reconstruct(std::size_t rank) const {
  Weight out(rank);
  std::int64_t scale = 1;
  for (const auto& layer : layers) {
    out += scale * layer;
    scale *= prime;
  }
  return out;
}

PAdicExpansion p_adic_expand(const Weight& w, std::int64_t p) {
  require_prime(p);
  if (!w.is_dominant()) throw DomainError("expected a dominant weight, got " + w.str());
  PAdicExpansion out;
  out.prime = p;
  Weight rest = w;
  while (!rest.is_zero()) {
    Weight digit(rest.rank());
    for (std::size_t i = 0; i < rest.rank(); ++i) {
      digit[i] = rest[i] % p;
      rest[i] /= p;
    }
    out.layers.push_back(std::move(digit));
  }
  return out;
}

std::set<Weight> OmegaTable::weights() const {
  std::set<Weight> out;
  for (const auto& [w, tags] : entries) out.insert(w);
  return out;
}

OmegaTable omega_table(SimpleType type, std::int64_t p, const ClassifierOptions& opts) {
  type.validate();
  require_prime(p);
  OmegaTable t;
  t.type = type;
  t.prime = p;
  t.effective_type = type;
  const std::size_t n = static_cast<std::size_t>(type.rank);
  t.coordinate_source.resize(n);
  std::iota(t.coordinate_source.begin(), t.coordinate_source.end(), std::size_t{0});

  if (type.family == Family::B && n == 2) {
    t.effective_type = {Family::C, 2};
    t.coordinate_source = {1, 0};
    t.notes.push_back("normalized: B2 = C2 with coordinates swapped");
  } else if (type.family == Family::D && n == 3) {
    t.effective_type = {Family::A, 3};
    t.coordinate_source = {1, 0, 2};
    t.notes.push_back("normalized: D3 = A3 with (a1,a2,a3) -> (a2,a1,a3)");
  } else if (type.family == Family::B && p == 2) {
    t.effective_type = {Family::C, type.rank};
    t.notes.push_back("normalized: B_n = C_n for p = 2");
  } else if (type.family == Family::B && n == 3) {
    t.boundary = true;
    t.notes.push_back("boundary: outside printed table");
  }

  auto add = [&](const Weight& w, const std::string& tag) {
    if (w.is_zero()) return;
    auto& tags = t.entries[w];
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
  };
  auto fw = [&](std::size_t i) { return Weight::fundamental(n, i); };

  switch (t.effective_type.family) {
    case Family::A:
      for (std::size_t i = 1; i <= n; ++i) add(fw(i), "omega:A:omega_i");
      for (std::int64_t a = 1; a < p; ++a) {
        add(a * fw(1), "omega:A:a*omega_1");
        add(a * fw(n), "omega:A:b*omega_n");
      }
      for (std::size_t j = 1; j < n; ++j)
        for (std::int64_t c = 0; c < p; ++c) add(c * fw(j) + (p - 1 - c) * fw(j + 1), "omega:A:c*omega_j+(p-1-c)*omega_j+1");
      if (n == 1) t.notes.push_back("A1: every restricted weight qualifies");
      break;
    case Family::C:
      if (p == 2) {
        add(fw(1), "omega:C:p=2:omega_1");
        add(fw(n), "omega:C:p=2:omega_n");
      } else {
        add(fw(1), "omega:C:omega_1");
        add(fw(n - 1) + ((p - 3) / 2) * fw(n), "omega:C:omega'_n");
        add(((p - 1) / 2) * fw(n), "omega:C:omega''_n");
        if (n == 2) add(fw(2), "omega:C:omega_n(n=2)");
        if (n == 3 && !opts.omega_cn_strict) add(fw(3), "omega:C:omega_n(n=3)");
      }
      break;
    case Family::B:
      add(fw(1), "omega:B:omega_1");
      add(fw(n), "omega:B:omega_n");
      break;
    case Family::D:
      add(fw(1), "omega:D:omega_1");
      add(fw(n - 1), "omega:D:omega_n-1");
      add(fw(n), "omega:D:omega_n");
      break;
    case Family::E:
      if (n == 6) {
        add(fw(1), "omega:E6:omega_1");
        add(fw(6), "omega:E6:omega_6");
      } else {
        add(fw(7), "omega:E7:omega_7");
      }
      break;
    case Family::F:
      if (p == 3) add(fw(4), "omega:F4:p=3:omega_4");
      break;
    case Family::G:
      add(fw(1), "omega:G2:omega_1");
      if (p == 3) add(fw(2), "omega:G2:p=3:omega_2");
      break;
  }
  return t;
}

Weight normalize_weight(const OmegaTable& table, const Weight& w) {
  require_rank(table.coordinate_source.size(), w);
  Weight out(w.rank());
  for (std::size_t k = 0; k < w.rank(); ++k) out[k] = w[table.coordinate_source[k]];
  return out;
}

Classifier::Classifier(SimpleType type, std::int64_t p, ClassifierOptions opts)
    : table_(omega_table(type, p, opts)), rs_(&root_system(table_.effective_type)) {
  const std::size_t n = static_cast<std::size_t>(table_.effective_type.rank);
  const Family f = table_.effective_type.family;
  if (f == Family::C && p == 2) {
    adjacency_trigger_ = Weight::fundamental(n, n);
    adjacency_tag_ = kAdjacencyCp2;
  } else if (f == Family::G && p == 2) {
    adjacency_trigger_ = Weight::fundamental(2, 1);
    adjacency_tag_ = kAdjacencyG2p2;
  } else if (f == Family::G && p == 3) {
    adjacency_trigger_ = Weight::fundamental(2, 2);
    adjacency_tag_ = kAdjacencyG2p3;
  }
}

std::optional<std::string> Classifier::adjacency_rule(const Weight& layer) const {
  if (adjacency_trigger_ && layer == *adjacency_trigger_) return adjacency_tag_;
  return std::nullopt;
}

ClassifierVerdict Classifier::classify(const Weight& omega) const {
  ClassifierVerdict v;
  v.type = table_.type;
  v.effective_type = table_.effective_type;
  v.prime = table_.prime;
  v.omega = omega;
  v.normalized_omega = normalize_weight(table_, omega);
  v.expansion = p_adic_expand(v.normalized_omega, table_.prime);
  v.boundary = table_.boundary;
  v.notes = table_.notes;

  const std::size_t n = rs_->rank();
  const Weight omega1 = Weight::fundamental(n, 1);
  const auto& layers = v.expansion.layers;
  bool ok = true;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    LayerReport r;
    r.level = l;
    r.weight = layers[l];
    if (layers[l].is_zero()) {
      r.in_omega = true;
      r.rule = "zero";
    } else if (auto it = table_.entries.find(layers[l]); it != table_.entries.end()) {
      r.in_omega = true;
      r.rule = join_tags(it->second);
    } else {
      r.in_omega = false;
      r.rule = "not-in-omega";
      ok = false;
    }
    v.layer_reports.push_back(std::move(r));
    if (l + 1 < layers.size() && layers[l + 1] == omega1)
      if (auto rule = adjacency_rule(layers[l])) v.adjacency_violations.push_back({l, *rule});
  }
  v.answer = ok && v.adjacency_violations.empty();
  return v;
}

bool Classifier::answer(const Weight& omega) const {
  Weight rest = normalize_weight(table_, omega);
  if (!rest.is_dominant()) throw DomainError("expected a dominant weight, got " + omega.str());
  const std::int64_t p = table_.prime;
  const std::size_t n = rest.rank();
  Weight digit(n);
  std::optional<std::string> pending;  // adjacency rule waiting on the next layer
  while (!rest.is_zero()) {
    for (std::size_t i = 0; i < n; ++i) {
      digit[i] = rest[i] % p;
      rest[i] /= p;
    }
    if (pending && digit == Weight::fundamental(n, 1)) return false;
    if (!digit.is_zero() && !table_.contains(digit)) return false;
    pending = adjacency_rule(digit);
  }
  return true;
}

ClassifierVerdict classify(SimpleType type, std::int64_t p, const Weight& omega, const ClassifierOptions& opts) {
  return Classifier(type, p, opts).classify(omega);
}

// ---------------------------------------------------------------------------

std::set<Weight> difference_dominants(const RootSystemData& rs, const WeightMultiset& x) {
  std::set<Weight> out;
  for (const auto& [a, ma] : x.entries)
    for (const auto& [b, mb] : x.entries) out.insert(dominant_representative(rs, a - b));
  return out;
}

namespace {

/// Nonzero difference -> lexicographically least pair realizing it.
using DifferenceTable = std::unordered_map<Weight, std::pair<Weight, Weight>, WeightHash>;

DifferenceTable difference_table(const WeightMultiset& x) {
  DifferenceTable out;
  for (const auto& [a, ma] : x.entries)
    for (const auto& [b, mb] : x.entries)
      if (a != b) out.emplace(a - b, std::make_pair(a, b));  // first insertion is the least pair
  return out;
}

ObstructionResult obstruction_from_tables(std::int64_t p, const DifferenceTable& rho, const DifferenceTable& psi) {
  ObstructionResult res;
  for (const auto& [nu, pair_psi] : psi) {
    auto it = rho.find(p * nu);
    if (it == rho.end()) continue;
    ObstructionWitness w{it->second.first, it->second.second, pair_psi.first, pair_psi.second};
    if (!res.witness || std::tie(w.mu1, w.mu2, w.mu1p, w.mu2p) <
                            std::tie(res.witness->mu1, res.witness->mu2, res.witness->mu1p, res.witness->mu2p))
      res.witness = std::move(w);
  }
  res.found = res.witness.has_value();
  return res;
}

}  // namespace

ObstructionResult tensor_obstruction(const RootSystemData& rs, std::int64_t p, const WeightMultiset& rho,
                                     const WeightMultiset& psi) {
  if (rho.rank != psi.rank) throw DomainError("tensor_obstruction: rank mismatch");
  (void)rs;
  return obstruction_from_tables(p, difference_table(rho), difference_table(psi));
}

ModularWeightSet modular_weight_set(const RootSystemData& rs, std::int64_t p, const Weight& lambda) {
  require_rank(rs.rank(), lambda);
  ModularWeightSet out;
  out.weights.rank = rs.rank();
  auto orbit = [&] {
    for (auto& w : weyl_orbit(rs, lambda)) out.weights.entries.emplace(std::move(w), 1);
  };
  const Family f = rs.type.family;
  const std::size_t n = rs.rank();
  if (lambda.is_zero()) {
    out.weights.add(lambda);
    out.licensed = true;
    out.basis = "zero";
  } else if (is_minuscule(rs, lambda)) {
    orbit();
    out.licensed = true;
    out.basis = "minuscule";
  } else if (f == Family::C && p == 2 && lambda == Weight::fundamental(n, n)) {
    orbit();
    out.licensed = true;
    out.basis = "table:C:p=2:omega_n";
  } else if (f == Family::G && p == 3 && lambda == Weight::fundamental(2, 2)) {
    orbit();
    out.weights.add(Weight(2));
    out.licensed = true;
    out.basis = "table:G2:p=3:omega_2";
  } else if (f == Family::G && lambda == Weight::fundamental(2, 1) && p <= 3) {
    orbit();
    if (p != 2) out.weights.add(Weight(2));
    out.licensed = true;
    out.basis = "table:G2:omega_1";
  } else {
    out.weights = weight_set(rs, lambda);
    const bool restricted = std::all_of(lambda.coords().begin(), lambda.coords().end(), [&](auto c) { return c < p; });
    out.licensed = restricted && p > 2 && !(f == Family::G && p == 3);
    out.basis = out.licensed ? "restricted" : "proxy:char0";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t AuditReport::hard_count() const {
  return static_cast<std::size_t>(
      std::count_if(discrepancies.begin(), discrepancies.end(), [](const auto& d) { return d.kind == "hard"; }));
}

std::vector<Weight> box_grid(std::size_t rank, std::int64_t bound) {
  std::vector<Weight> out;
  Weight w(rank);
  for (;;) {
    out.push_back(w);
    std::size_t i = rank;
    while (i > 0 && w[i - 1] == bound) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  return out;
}

std::vector<Weight> conformance_grid(SimpleType type, std::int64_t p, std::size_t exhaustive_cap, std::size_t sample,
                                     std::uint64_t seed) {
  type.validate();
  const std::size_t n = static_cast<std::size_t>(type.rank);
  const std::int64_t bound = p * p - 1;
  double points = 1;
  for (std::size_t i = 0; i < n; ++i) points *= static_cast<double>(bound + 1);
  if (points <= static_cast<double>(exhaustive_cap)) return box_grid(n, bound);

  std::set<Weight> out;
  out.insert(Weight(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::int64_t a = 1; a <= bound; ++a) {
      Weight w(n);
      w[i] = a;
      out.insert(w);
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::int64_t b = 1; b <= bound; ++b) {
          Weight v = w;
          v[j] = b;
          out.insert(std::move(v));
        }
    }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(0, bound);
  for (std::size_t s = 0; s < sample; ++s) {
    Weight w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = coord(rng);
    out.insert(std::move(w));
  }
  return {out.begin(), out.end()};
}

namespace {

struct PointStats {
  std::size_t yes = 0;
  std::map<std::string, std::size_t> rules_fired;
  std::unordered_set<Weight, WeightHash> layers;
  std::set<std::pair<Weight, Weight>> pairs;

  void merge(PointStats&& o) {
    yes += o.yes;
    for (const auto& [k, v] : o.rules_fired) rules_fired[k] += v;
    layers.merge(o.layers);
    pairs.merge(o.pairs);
  }
};

void scan_point(const Classifier& c, const Weight& omega, PointStats& st) {
  const ClassifierVerdict v = c.classify(omega);
  if (v.answer) ++st.yes;
  std::set<std::string> fired;
  for (const auto& a : v.adjacency_violations) fired.insert(a.rule);
  for (const auto& f : fired) ++st.rules_fired[f];
  const auto& layers = v.expansion.layers;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].is_zero()) continue;
    st.layers.insert(layers[l]);
    if (l + 1 < layers.size() && !layers[l + 1].is_zero() && c.table().contains(layers[l]) &&
        c.table().contains(layers[l + 1]))
      st.pairs.emplace(layers[l], layers[l + 1]);
  }
  if (v.answer != c.answer(omega))
    throw std::logic_error("classifier fast path disagrees with the traced verdict at " + omega.str());
}

struct LayerOutcome {
  std::optional<Discrepancy> discrepancy;
};

LayerOutcome check_layer(const Classifier& c, const Weight& layer) {
  const RootSystemData& rs = c.effective_root_system();
  const bool in_omega = c.table().contains(layer);
  LayerOutcome out;
  bool mf = false;
  try {
    mf = is_multiplicity_free(rs, layer);
  } catch (const CapExceeded& e) {
    out.discrepancy = Discrepancy{"proxy", "layer-multiplicity", layer.str(), std::string("undetermined: ") + e.what()};
    return out;
  }
  if (!in_omega && mf)
    out.discrepancy = Discrepancy{"hard", "layer-multiplicity", layer.str(),
                                  "V(lambda) is multiplicity-free in characteristic 0 but lambda is not in Omega"};
  else if (in_omega && !mf)
    out.discrepancy = Discrepancy{"proxy", "layer-multiplicity", layer.str(),
                                  "Omega entry whose characteristic-0 module has a repeated weight"};
  return out;
}

struct Modular {
  ModularWeightSet set;
  DifferenceTable diffs;
};

struct PairOutcome {
  std::optional<Discrepancy> discrepancy;
  std::optional<std::string> rederived;
};

PairOutcome check_pair(const Classifier& c, const Modular& a, const Modular& b, const Weight& la, const Weight& lb) {
  const std::size_t n = c.effective_root_system().rank();
  const auto rule = c.adjacency_rule(la);
  const bool forbidden = rule && lb == Weight::fundamental(n, 1);
  const ObstructionResult ob = obstruction_from_tables(c.table().prime, a.diffs, b.diffs);
  PairOutcome out;
  if (forbidden && ob.found) out.rederived = *rule;
  if (ob.found != forbidden) {
    const bool licensed = a.set.licensed && b.set.licensed;
    std::string detail = ob.found ? "condition (2) holds but no adjacency rule forbids the pair"
                                  : "adjacency rule " + *rule + " fires but condition (2) fails";
    detail += " [" + a.set.basis + "/" + b.set.basis + "]";
    out.discrepancy = Discrepancy{licensed ? "hard" : "proxy", "adjacency", la.str() + "->" + lb.str(), detail};
  }
  return out;
}

}  // namespace

AuditReport audit_classifier(SimpleType type, std::int64_t p, const std::vector<Weight>& grid,
                             const ClassifierOptions& opts, Execution exec) {
  const Classifier c(type, p, opts);
  const bool par = exec == Execution::parallel;
  AuditReport rep;
  rep.type = type;
  rep.prime = p;
  rep.points = grid.size();

  // Points.
  PointStats total;
  if (par) {
#pragma omp parallel
    {
      PointStats local;
#pragma omp for schedule(static) nowait
      for (std::size_t i = 0; i < grid.size(); ++i) scan_point(c, grid[i], local);
#pragma omp critical(multone_audit_merge)
      total.merge(std::move(local));
    }
  } else {
    for (const auto& w : grid) scan_point(c, w, total);
  }
  rep.yes = total.yes;
  rep.rules_fired = total.rules_fired;
  std::vector<Weight> layers(total.layers.begin(), total.layers.end());
  std::sort(layers.begin(), layers.end());
  std::vector<std::pair<Weight, Weight>> pairs(total.pairs.begin(), total.pairs.end());
  rep.distinct_layers = layers.size();
  rep.distinct_pairs = pairs.size();

  // Layers.
  std::vector<LayerOutcome> lo(layers.size());
  if (par) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < layers.size(); ++i) lo[i] = check_layer(c, layers[i]);
  } else {
    for (std::size_t i = 0; i < layers.size(); ++i) lo[i] = check_layer(c, layers[i]);
  }
  for (auto& o : lo)
    if (o.discrepancy) rep.discrepancies.push_back(std::move(*o.discrepancy));

  // Adjacent pairs.
  std::set<Weight> involved;
  for (const auto& [a, b] : pairs) {
    involved.insert(a);
    involved.insert(b);
  }
  std::vector<Weight> inv(involved.begin(), involved.end());
  std::vector<Modular> mods(inv.size());
  auto build_mod = [&](std::size_t i) {
    mods[i].set = modular_weight_set(c.effective_root_system(), p, inv[i]);
    mods[i].diffs = difference_table(mods[i].set.weights);
  };
  if (par) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < inv.size(); ++i) build_mod(i);
  } else {
    for (std::size_t i = 0; i < inv.size(); ++i) build_mod(i);
  }
  auto mod_of = [&](const Weight& w) -> const Modular& {
    return mods[static_cast<std::size_t>(std::lower_bound(inv.begin(), inv.end(), w) - inv.begin())];
  };
  std::vector<PairOutcome> po(pairs.size());
  auto run_pair = [&](std::size_t i) {
    po[i] = check_pair(c, mod_of(pairs[i].first), mod_of(pairs[i].second), pairs[i].first, pairs[i].second);
  };
  if (par) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < pairs.size(); ++i) run_pair(i);
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) run_pair(i);
  }

  for (const auto& w : c.table().weights())
    if (auto rule = c.adjacency_rule(w)) rep.adjacency_rederived.emplace(*rule, false);
  for (auto& o : po) {
    if (o.rederived) rep.adjacency_rederived[*o.rederived] = true;
    if (o.discrepancy) rep.discrepancies.push_back(std::move(*o.discrepancy));
  }
  std::sort(rep.discrepancies.begin(), rep.discrepancies.end());
  return rep;
}

AuditReport audit_classifier(SimpleType type, std::int64_t p, std::int64_t bound, const ClassifierOptions& opts,
                             Execution exec) {
  type.validate();
  return audit_classifier(type, p, box_grid(static_cast<std::size_t>(type.rank), bound), opts, exec);
}

}  // namespace multone
