#include "doctest.h"
#include "multone/classifier.hpp"
#include "support.hpp"
#include "table_oracle.hpp"

#include <random>

using namespace multone;

namespace {

std::set<Weight> set_of(std::initializer_list<Weight> ws) { return {ws}; }

WeightMultiset as_multiset(std::size_t rank, std::initializer_list<Weight> ws) {
  WeightMultiset m;
  m.rank = rank;
  for (const auto& w : ws) m.add(w);
  return m;
}

WeightMultiset negated(const WeightMultiset& x) {
  WeightMultiset out;
  out.rank = x.rank;
  for (const auto& [w, m] : x.entries) out.add(-w, m);
  return out;
}

bool has_tag(const LayerReport& r, const std::string& tag) { return r.rule.find(tag) != std::string::npos; }

}  // namespace

TEST_CASE("p-adic expansion") {
  auto e = p_adic_expand(Weight{7, 0}, 5);
  CHECK(e.layers == std::vector<Weight>{Weight{2, 0}, Weight{1, 0}});
  CHECK(p_adic_expand(Weight{0, 0}, 3).layers.empty());
  CHECK(p_adic_expand(Weight{1, 3}, 3).layers == std::vector<Weight>{Weight{1, 0}, Weight{0, 1}});
  CHECK_THROWS_AS(p_adic_expand(Weight{1, -1}, 3), DomainError);
  CHECK_THROWS_AS(p_adic_expand(Weight{1, 1}, 4), DomainError);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t p = std::vector<std::int64_t>{2, 3, 5, 7, 11}[trial % 5];
    const auto w = multone::testing::random_weight(rng, 1 + trial % 5, 0, 500);
    const auto ex = p_adic_expand(w, p);
    CHECK(ex.reconstruct(w.rank()) == w);
    for (const auto& layer : ex.layers)
      for (auto c : layer.coords()) CHECK((c >= 0 && c < p));
    if (!ex.layers.empty()) CHECK_FALSE(ex.layers.back().is_zero());
  }
}

TEST_CASE("Omega tables") {
  CHECK(omega_table({Family::C, 4}, 5).weights() == set_of({Weight{1, 0, 0, 0}, Weight{0, 0, 1, 1}, Weight{0, 0, 0, 2}}));
  CHECK(omega_table({Family::G, 2}, 3).weights() == set_of({Weight{1, 0}, Weight{0, 1}}));
  CHECK(omega_table({Family::G, 2}, 5).weights() == set_of({Weight{1, 0}}));
  CHECK(omega_table({Family::F, 4}, 5).weights().empty());
  CHECK(omega_table({Family::F, 4}, 3).weights() == set_of({Weight{0, 0, 0, 1}}));
  CHECK(omega_table({Family::E, 7}, 11).weights() == set_of({Weight::fundamental(7, 7)}));
  CHECK(omega_table({Family::C, 3}, 2).weights() == set_of({Weight{1, 0, 0}, Weight{0, 0, 1}}));
  CHECK(omega_table({Family::C, 2}, 5).weights() == set_of({Weight{1, 0}, Weight{1, 1}, Weight{0, 2}, Weight{0, 1}}));
  CHECK(omega_table({Family::C, 3}, 5).weights() ==
        set_of({Weight{1, 0, 0}, Weight{0, 1, 1}, Weight{0, 0, 2}, Weight{0, 0, 1}}));
  CHECK(omega_table({Family::C, 3}, 5, {.omega_cn_strict = true}).weights() ==
        set_of({Weight{1, 0, 0}, Weight{0, 1, 1}, Weight{0, 0, 2}}));
  // omega'' already equals omega_3 at p = 3
  const auto c3p3 = omega_table({Family::C, 3}, 3);
  CHECK(c3p3.weights() == set_of({Weight{1, 0, 0}, Weight{0, 1, 0}, Weight{0, 0, 1}}));
  CHECK(c3p3.entries.at(Weight{0, 0, 1}).size() == 2);

  const auto a2 = omega_table({Family::A, 2}, 3);
  CHECK(a2.weights() == set_of({Weight{1, 0}, Weight{0, 1}, Weight{2, 0}, Weight{0, 2}, Weight{1, 1}}));
  // A1: every restricted weight
  CHECK(omega_table({Family::A, 1}, 7).weights().size() == 6);

  const auto b2 = omega_table({Family::B, 2}, 5);
  CHECK(b2.effective_type == SimpleType{Family::C, 2});
  CHECK(normalize_weight(b2, Weight{3, 4}) == Weight{4, 3});
  const auto d3 = omega_table({Family::D, 3}, 5);
  CHECK(d3.effective_type == SimpleType{Family::A, 3});
  CHECK(normalize_weight(d3, Weight{1, 2, 3}) == Weight{2, 1, 3});
  const auto b4p2 = omega_table({Family::B, 4}, 2);
  CHECK(b4p2.effective_type == SimpleType{Family::C, 4});
  CHECK(omega_table({Family::B, 3}, 5).boundary);
  CHECK_FALSE(omega_table({Family::B, 4}, 5).boundary);
  CHECK_THROWS_AS(omega_table({Family::C, 3}, 4), DomainError);
  CHECK_THROWS_AS(omega_table({Family::E, 8}, 5), DomainError);
}

TEST_CASE("classify examples") {
  auto v = classify({Family::C, 4}, 5, Weight{0, 0, 0, 1});
  CHECK_FALSE(v.answer);
  REQUIRE(v.layer_reports.size() == 1);
  CHECK(v.layer_reports[0].rule == "not-in-omega");

  v = classify({Family::C, 3}, 5, Weight{0, 0, 2});
  CHECK(v.answer);
  CHECK(has_tag(v.layer_reports[0], "omega:C:omega''_n"));

  for (int n = 2; n <= 5; ++n) {
    CAPTURE(n);
    Weight w = Weight::fundamental(n, n) + 2 * Weight::fundamental(n, 1);
    v = classify({Family::C, n}, 2, w);
    CHECK_FALSE(v.answer);
    REQUIRE(v.adjacency_violations.size() == 1);
    CHECK(v.adjacency_violations[0].level == 0);
    CHECK(v.adjacency_violations[0].rule == kAdjacencyCp2);
    CHECK(v.layer_reports[0].in_omega);
    CHECK(v.layer_reports[1].in_omega);
  }

  v = classify({Family::A, 2}, 5, Weight{3, 0});
  CHECK(v.answer);
  CHECK(has_tag(v.layer_reports[0], "omega:A:a*omega_1"));

  v = classify({Family::G, 2}, 3, Weight{3, 1});
  CHECK_FALSE(v.answer);
  REQUIRE(v.adjacency_violations.size() == 1);
  CHECK(v.adjacency_violations[0].rule == kAdjacencyG2p3);
  CHECK(classify({Family::G, 2}, 3, Weight{1, 3}).answer);

  v = classify({Family::G, 2}, 2, Weight{3, 0});
  CHECK_FALSE(v.answer);
  CHECK(v.adjacency_violations.at(0).rule == kAdjacencyG2p2);

  CHECK(classify({Family::F, 4}, 5, Weight(4)).answer);
  CHECK_FALSE(classify({Family::F, 4}, 5, Weight{0, 0, 0, 1}).answer);
  CHECK(classify({Family::B, 3}, 5, Weight{1, 0, 0}).boundary);
  // B2 omega_1 is the 5-dimensional module, C2 omega_2 after the swap
  v = classify({Family::B, 2}, 5, Weight{1, 0});
  CHECK(v.answer);
  CHECK(v.normalized_omega == Weight{0, 1});

  CHECK_THROWS_AS(classify({Family::C, 3}, 5, Weight{0, 1}), DomainError);
  CHECK_THROWS_AS(classify({Family::C, 3}, 5, Weight{0, -1, 0}), DomainError);
}

TEST_CASE("A1 classifies every weight YES") {
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    const Classifier c({Family::A, 1}, p);
    for (std::int64_t a = 0; a <= p * p; ++a) CHECK(c.answer(Weight{a}));
  }
}

TEST_CASE("classifier agrees with the predicate table") {
  std::mt19937_64 rng(17);
  for (const auto& t : multone::testing::small_types())
    for (std::int64_t p : {2, 3, 5, 7}) {
      for (bool strict : {false, true}) {
        const Classifier c(t, p, {.omega_cn_strict = strict});
        const multone::testing::OracleInput in{static_cast<char>(t.family), t.rank, p, strict};
        for (int trial = 0; trial < 300; ++trial) {
          const auto w = multone::testing::random_weight(rng, t.rank, 0, static_cast<int>(p * p - 1));
          const bool fast = c.answer(w);
          CHECK(fast == c.classify(w).answer);
          CHECK(fast == multone::testing::oracle_verdict(in, w.coords()));
        }
      }
    }
}

TEST_CASE("verdict invariants: layer flip and Frobenius twist") {
  std::mt19937_64 rng(23);
  for (const auto& t : multone::testing::small_types())
    for (std::int64_t p : {2, 3, 5}) {
      CAPTURE(t.name());
      CAPTURE(p);
      const Classifier c(t, p);
      const auto omega = c.table().weights();
      std::vector<Weight> yes_layers(omega.begin(), omega.end());
      yes_layers.push_back(Weight(static_cast<std::size_t>(t.rank)));
      for (int trial = 0; trial < 40; ++trial) {
        const auto w = multone::testing::random_weight(rng, t.rank, 0, static_cast<int>(p * p * p));
        const auto v = c.classify(w);
        const auto twisted = c.classify(p * w);
        CHECK(twisted.answer == v.answer);
        if (!w.is_zero()) {
          CHECK(twisted.expansion.layers.front().is_zero());
          CHECK(std::equal(v.expansion.layers.begin(), v.expansion.layers.end(), twisted.expansion.layers.begin() + 1));
        }
      }
      // Build YES weights from Omega layers, then spoil one layer.
      std::uniform_int_distribution<std::size_t> pick(0, yes_layers.size() - 1);
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<Weight> layers(3);
        for (auto& l : layers) l = yes_layers[pick(rng)];
        const auto build = [&](const std::vector<Weight>& ls) {
          PAdicExpansion e{p, ls};
          return normalize_weight(c.table(), e.reconstruct(static_cast<std::size_t>(t.rank)));
        };
        const Weight w = build(layers);
        const auto v = c.classify(w);
        bool expect = v.adjacency_violations.empty();
        CHECK(v.answer == expect);
        Weight bad(static_cast<std::size_t>(t.rank));
        bool found = false;
        for (const auto& cand : box_grid(static_cast<std::size_t>(t.rank), p - 1))
          if (!cand.is_zero() && !c.table().contains(cand)) {
            bad = cand;
            found = true;
            break;
          }
        if (!found) continue;
        for (std::size_t l = 0; l < layers.size(); ++l) {
          auto spoiled = layers;
          spoiled[l] = bad;
          CHECK_FALSE(c.classify(build(spoiled)).answer);
        }
      }
    }
}

TEST_CASE("difference dominants") {
  for (int n = 2; n <= 5; ++n) {
    CAPTURE(n);
    const auto& rs = root_system({Family::C, n});
    const auto spin = modular_weight_set(rs, 2, Weight::fundamental(n, n));
    CHECK(spin.licensed);
    CHECK(spin.weights.distinct() == (std::size_t{1} << n));
    const auto d = difference_dominants(rs, spin.weights);
    for (int i = 1; i <= n; ++i) CHECK(d.count(2 * Weight::fundamental(n, i)) == 1);
    const auto nat = modular_weight_set(rs, 2, Weight::fundamental(n, 1));
    CHECK(difference_dominants(rs, nat.weights) == set_of({Weight(n), 2 * Weight::fundamental(n, 1), Weight::fundamental(n, 2)}));
  }
  const auto& g2 = root_system({Family::G, 2});
  for (std::int64_t p : {2, 3}) {
    const auto x = modular_weight_set(g2, p, Weight{1, 0});
    CHECK(x.weights.distinct() == (p == 2 ? 6u : 7u));
    CHECK(difference_dominants(g2, x.weights) == set_of({Weight{0, 0}, Weight{1, 0}, Weight{0, 1}, Weight{2, 0}}));
  }
  const auto long_roots = modular_weight_set(g2, 3, Weight{0, 1});
  CHECK(long_roots.weights.distinct() == 7);
  CHECK(difference_dominants(g2, long_roots.weights) == set_of({Weight{0, 0}, Weight{0, 1}, Weight{0, 2}, Weight{3, 0}}));

  CHECK(difference_dominants(g2, as_multiset(2, {Weight{5, -3}})) == set_of({Weight{0, 0}}));

  std::mt19937_64 rng(5);
  for (const auto& t : multone::testing::small_types()) {
    if (t.rank > 4) continue;
    const auto& rs = root_system(t);
    const auto x = weight_set(rs, multone::testing::random_weight(rng, rs.rank(), 0, 1));
    const auto d = difference_dominants(rs, x);
    for (const auto& mu : d) CHECK(d.count(dominant_representative(rs, -mu)) == 1);
  }
}

TEST_CASE("modular weight set provenance") {
  CHECK(modular_weight_set(root_system({Family::E, 6}), 2, Weight::fundamental(6, 1)).basis == "minuscule");
  CHECK(modular_weight_set(root_system({Family::C, 3}), 2, Weight{0, 0, 1}).basis == "table:C:p=2:omega_n");
  CHECK(modular_weight_set(root_system({Family::C, 3}), 5, Weight{0, 1, 1}).basis == "restricted");
  const auto proxy = modular_weight_set(root_system({Family::F, 4}), 2, Weight{0, 0, 0, 1});
  CHECK_FALSE(proxy.licensed);
  CHECK(proxy.basis == "proxy:char0");
  CHECK(modular_weight_set(root_system({Family::A, 2}), 3, Weight(2)).basis == "zero");
}

TEST_CASE("tensor obstruction") {
  for (int n = 2; n <= 4; ++n) {
    const auto& rs = root_system({Family::C, n});
    const auto rho = modular_weight_set(rs, 2, Weight::fundamental(n, n)).weights;
    const auto psi = modular_weight_set(rs, 2, Weight::fundamental(n, 1)).weights;
    const auto r = tensor_obstruction(rs, 2, rho, psi);
    REQUIRE(r.found);
    const auto& w = *r.witness;
    CHECK(w.mu1 - w.mu2 == 2 * (w.mu1p - w.mu2p));
    CHECK_FALSE((w.mu1 - w.mu2).is_zero());
    CHECK(rho.multiplicity(w.mu1) == 1);
    CHECK(psi.multiplicity(w.mu2p) == 1);
    // least witness: nothing smaller in the first coordinate works
    for (const auto& [a, ma] : rho.entries) {
      if (a >= w.mu1) break;
      for (const auto& [b, mb] : rho.entries)
        for (const auto& [c, mc] : psi.entries)
          for (const auto& [d, md] : psi.entries)
            CHECK_FALSE((a != b && a - b == 2 * (c - d)));
    }
    CHECK(tensor_obstruction(rs, 2, negated(rho), negated(psi)).found);
    CHECK_FALSE(tensor_obstruction(rs, 2, psi, rho).found);
    CHECK_FALSE(tensor_obstruction(rs, 2, rho, rho).found);
  }
  const auto& a1 = root_system({Family::A, 1});
  const auto zero = as_multiset(1, {Weight{0}});
  CHECK_FALSE(tensor_obstruction(a1, 3, zero, zero).found);

  // A_n: a(rho) <= p - 1 never meets condition (2)
  for (int n = 1; n <= 3; ++n)
    for (std::int64_t p : {3, 5}) {
      const auto& rs = root_system({Family::A, n});
      const auto table = omega_table({Family::A, n}, p);
      for (const auto& x : table.weights()) {
        REQUIRE(a_value(rs, x) <= p - 1);
        const auto rho = weight_set(rs, x);
        for (const auto& y : table.weights()) CHECK_FALSE(tensor_obstruction(rs, p, rho, weight_set(rs, y)).found);
      }
    }
  CHECK_THROWS_AS(tensor_obstruction(a1, 3, zero, as_multiset(2, {Weight{0, 0}})), DomainError);
}

TEST_CASE("a-value bound on Omega entries") {
  for (const auto& t : multone::testing::small_types())
    for (std::int64_t p : {2, 3, 5, 7}) {
      const Classifier c(t, p);
      const auto& rs = c.effective_root_system();
      for (const auto& x : c.table().weights()) {
        CAPTURE(x.str());
        const auto d = difference_dominants(rs, modular_weight_set(rs, p, x).weights);
        for (const auto& mu : d) CHECK(a_value(rs, mu) <= 2 * a_value(rs, x));
      }
    }
}

TEST_CASE("audit examples") {
  auto rep = audit_classifier({Family::C, 2}, 3, 8);
  CHECK(rep.points == 81);
  CHECK(rep.hard_count() == 0);

  rep = audit_classifier({Family::G, 2}, 3, 8);
  CHECK(rep.hard_count() == 0);
  CHECK(rep.adjacency_rederived.at(kAdjacencyG2p3));
  CHECK(rep.rules_fired.at(kAdjacencyG2p3) >= 1);

  for (std::int64_t p : {2, 3, 5, 7}) {
    rep = audit_classifier({Family::A, 1}, p, p * p);
    CHECK(rep.yes == rep.points);
    CHECK(rep.discrepancies.empty());
  }

  rep = audit_classifier({Family::C, 3}, 2, 3);
  CHECK(rep.adjacency_rederived.at(kAdjacencyCp2));
  CHECK(rep.hard_count() == 0);
}

TEST_CASE("strict C3 table contradicts the characteristic-zero bound") {
  const auto rep = audit_classifier({Family::C, 3}, 5, 4, {.omega_cn_strict = true});
  CHECK(rep.hard_count() == 1);
  bool seen = false;
  for (const auto& d : rep.discrepancies)
    if (d.kind == "hard") seen = d.subject == Weight{0, 0, 1}.str() && d.check == "layer-multiplicity";
  CHECK(seen);
  CHECK(audit_classifier({Family::C, 3}, 5, 4).hard_count() == 0);
}

TEST_CASE("serial and parallel audits agree") {
  for (const auto& [t, p] : std::vector<std::pair<SimpleType, std::int64_t>>{
           {{Family::A, 3}, 3}, {{Family::C, 3}, 2}, {{Family::G, 2}, 3}, {{Family::B, 3}, 5}, {{Family::D, 4}, 3}}) {
    CAPTURE(t.name());
    const auto grid = conformance_grid(t, p);
    const auto a = audit_classifier(t, p, grid, {}, Execution::serial);
    const auto b = audit_classifier(t, p, grid, {}, Execution::parallel);
    CHECK(a.points == b.points);
    CHECK(a.yes == b.yes);
    CHECK(a.distinct_layers == b.distinct_layers);
    CHECK(a.distinct_pairs == b.distinct_pairs);
    CHECK(a.rules_fired == b.rules_fired);
    CHECK(a.adjacency_rederived == b.adjacency_rederived);
    CHECK(a.discrepancies == b.discrepancies);
  }
}

TEST_CASE("conformance grid") {
  CHECK(conformance_grid({Family::C, 2}, 3).size() == 81);
  const auto g = conformance_grid({Family::E, 7}, 3, 1000, 50);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.size() >= 1 + 7 * 8 + 21 * 64);
  CHECK(g == conformance_grid({Family::E, 7}, 3, 1000, 50));
}
