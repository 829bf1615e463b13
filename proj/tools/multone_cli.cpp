#include "criteria.hpp"
#include "multone/classifier.hpp"
#include "multone/symplectic.hpp"
#include "multone/weil.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace multone;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string format = "json";
  int threads = 0;
  bool omega_cn_strict = false;
  bool timings = false;
  std::string output;
  std::int64_t max_pn = 9;
  std::size_t group_cap = 100'000;
  std::int64_t weight_bound = kDefaultWeilBound;
  std::size_t grid_sample = 20'000;
};

std::int64_t env_int(const char* name, std::int64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const long long x = std::strtoll(v, &end, 10);
  if (*end != '\0' || x <= 0) throw UsageError(std::string(name) + " must be a positive integer, got '" + v + "'");
  return x;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::string rat(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

SimpleType parse_type(const std::string& family, int rank) {
  if (family.size() != 1) throw UsageError("type must be one letter A-G, got '" + family + "'");
  return SimpleType::parse(std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(family[0])))), rank);
}

/// 1 for omega', 2 for omega'', 0 otherwise.
int symbolic_kind(const std::string& s) {
  static const std::vector<std::string> one{"ω′", "ω'", "omega'", "w'", "omega1'"};
  static const std::vector<std::string> two{"ω″", "ω''", "ω′′", "omega''", "w''", "omega\""};
  if (std::find(one.begin(), one.end(), s) != one.end()) return 1;
  if (std::find(two.begin(), two.end(), s) != two.end()) return 2;
  return 0;
}

Weight parse_weight(const std::string& text, const SimpleType& type, std::optional<std::int64_t> p) {
  if (const int kind = symbolic_kind(text)) {
    const bool symplectic = type.family == Family::C || (type.family == Family::A && type.rank == 1);
    if (!symplectic) throw UsageError("symbolic weights are only defined for type C");
    if (!p) throw UsageError("symbolic weights need --p");
    const auto [hw1, hw2] = weil_highest_weights(type.rank, *p);
    return kind == 1 ? hw1 : hw2;
  }
  std::vector<std::int64_t> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed weight coordinate '" + item + "'");
    }
    if (used != item.size()) throw UsageError("malformed weight coordinate '" + item + "'");
    c.push_back(v);
  }
  if (static_cast<int>(c.size()) != type.rank)
    throw UsageError("weight has " + std::to_string(c.size()) + " coordinates, type " + type.name() + " needs " +
                     std::to_string(type.rank));
  Weight w(std::move(c));
  if (!w.is_dominant()) throw UsageError("weight " + w.str() + " is not dominant");
  return w;
}

void check_prime(std::int64_t p) {
  if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not a prime");
}

struct Output {
  Json doc;
  std::string text;
  int code = kExitOk;
};

// ---------------------------------------------------------------------------

Output cmd_classify(const RunConfig& cfg, const std::string& fam, int rank, std::int64_t p, const std::string& wtext) {
  const auto type = parse_type(fam, rank);
  check_prime(p);
  const Weight w = parse_weight(wtext, type, p);
  const auto v = classify(type, p, w, {.omega_cn_strict = cfg.omega_cn_strict});
  Output o;
  o.doc["type"] = v.type.name();
  o.doc["effective_type"] = v.effective_type.name();
  o.doc["p"] = p;
  o.doc["omega"] = w.coords();
  o.doc["normalized_omega"] = v.normalized_omega.coords();
  o.doc["answer"] = v.answer ? "YES" : "NO";
  o.doc["boundary"] = v.boundary;
  Json layers = Json::array();
  std::ostringstream t;
  t << type.name() << " p=" << p << " " << w.str() << ": " << (v.answer ? "YES" : "NO") << '\n';
  for (const auto& l : v.layer_reports) {
    layers.push_back({{"level", l.level}, {"weight", l.weight.coords()}, {"in_omega", l.in_omega}, {"rule", l.rule}});
    t << "  layer " << l.level << " " << l.weight.str() << ": " << l.rule << '\n';
  }
  o.doc["layers"] = layers;
  Json adj = Json::array();
  for (const auto& a : v.adjacency_violations) {
    adj.push_back({{"level", a.level}, {"rule", a.rule}});
    t << "  adjacency after layer " << a.level << ": " << a.rule << '\n';
  }
  o.doc["adjacency_violations"] = adj;
  o.doc["notes"] = v.notes;
  for (const auto& n : v.notes) t << "  note: " << n << '\n';
  o.text = t.str();
  o.code = v.answer ? kExitOk : kExitNo;
  return o;
}

Output cmd_omega(const RunConfig& cfg, const std::string& fam, int rank, std::int64_t p) {
  const auto type = parse_type(fam, rank);
  check_prime(p);
  const auto table = omega_table(type, p, {.omega_cn_strict = cfg.omega_cn_strict});
  Output o;
  o.doc["type"] = table.type.name();
  o.doc["effective_type"] = table.effective_type.name();
  o.doc["p"] = p;
  o.doc["boundary"] = table.boundary;
  std::ostringstream t;
  t << "Omega for " << table.type.name() << " p=" << p;
  if (!(table.effective_type == table.type)) t << " (as " << table.effective_type.name() << ")";
  t << '\n';
  Json entries = Json::array();
  for (const auto& [w, tags] : table.entries) {
    entries.push_back({{"weight", w.coords()}, {"rules", tags}});
    t << "  " << w.str() << "  ";
    for (std::size_t i = 0; i < tags.size(); ++i) t << (i ? "," : "") << tags[i];
    t << '\n';
  }
  o.doc["entries"] = entries;
  o.doc["notes"] = table.notes;
  o.text = t.str();
  return o;
}

Output cmd_weights(const RunConfig&, const std::string& fam, int rank, const std::string& wtext,
                   std::optional<std::int64_t> p, bool modular) {
  const auto type = parse_type(fam, rank);
  if (p) check_prime(*p);
  const Weight w = parse_weight(wtext, type, p);
  const auto& rs = root_system(type);
  Output o;
  o.doc["type"] = type.name();
  o.doc["highest_weight"] = w.coords();
  WeightMultiset set;
  if (modular) {
    if (!p) throw UsageError("--modular needs --p");
    const auto m = modular_weight_set(rs, *p, w);
    o.doc["p"] = *p;
    o.doc["basis"] = m.basis;
    o.doc["licensed"] = m.licensed;
    set = m.weights;
  } else {
    set = weight_system(rs, w);
    o.doc["dimension"] = weyl_dimension(rs, w).str();
  }
  o.doc["distinct"] = set.distinct();
  Json list = Json::array();
  std::ostringstream t;
  t << type.name() << " " << w.str() << ": " << set.distinct() << " distinct weights\n";
  for (const auto& [mu, m] : set.entries) {
    list.push_back({{"weight", mu.coords()}, {"multiplicity", m}});
    t << "  " << mu.str() << (modular ? "" : " x" + std::to_string(m)) << '\n';
  }
  o.doc["weights"] = list;
  o.text = t.str();
  return o;
}

Output cmd_dim(const RunConfig&, const std::string& fam, int rank, const std::string& wtext, std::optional<std::int64_t> p) {
  const auto type = parse_type(fam, rank);
  if (p) check_prime(*p);
  const Weight w = parse_weight(wtext, type, p);
  const auto& rs = root_system(type);
  Output o;
  const auto dim = weyl_dimension(rs, w).str();
  const auto count = weight_count(rs, w);
  const bool free = is_multiplicity_free(rs, w);
  o.doc["type"] = type.name();
  o.doc["highest_weight"] = w.coords();
  o.doc["dimension"] = dim;
  o.doc["distinct_weights"] = count;
  o.doc["multiplicity_free"] = free;
  o.text = type.name() + " " + w.str() + ": dimension " + dim + ", " + std::to_string(count) + " distinct weights, " +
           (free ? "multiplicity free" : "not multiplicity free") + "\n";
  return o;
}

Output cmd_branch(const RunConfig& cfg, int n, std::int64_t p, std::optional<int> k) {
  check_prime(p);
  if (p == 2) throw UsageError("branching needs an odd prime");
  Output o;
  bool pass = true;
  std::ostringstream t;
  const auto w = build_weil_weights(n, p, cfg.weight_bound);
  o.doc["n"] = n;
  o.doc["p"] = p;
  o.doc["highest_weights"] = {w.hw1.coords(), w.hw2.coords()};
  o.doc["distinct"] = {w.x1.distinct(), w.x2.distinct()};
  t << "n=" << n << " p=" << p << ": " << w.x1.distinct() << " and " << w.x2.distinct() << " weights\n";
  Json levi = Json::array();
  std::vector<int> ks;
  if (k) {
    if (*k < 1 || *k >= n) throw UsageError("--k must lie in [1, n-1]");
    ks.push_back(*k);
  } else {
    for (int i = 1; i < n; ++i) ks.push_back(i);
  }
  for (int i : ks) {
    const auto b = check_branching_formulas(n, p, i, cfg.weight_bound);
    pass = pass && b.pass;
    levi.push_back({{"k", i}, {"pass", b.pass}, {"mass", {b.mass1, b.mass2}}, {"defects", b.defects}});
    t << "  levi k=" << i << ": " << (b.pass ? "pass" : "FAIL") << '\n';
  }
  o.doc["levi"] = levi;
  if (n >= 2) {
    const auto s = check_subgroup_restriction(n, p, cfg.weight_bound);
    pass = pass && s.pass;
    o.doc["subgroup"] = {{"pass", s.pass}, {"mass", {s.mass1, s.mass2}}, {"defects", s.defects}};
    t << "  rank n-1 subgroup: " << (s.pass ? "pass" : "FAIL") << '\n';
  }
  const auto par = check_parity_separation(w);
  pass = pass && par.pass;
  o.doc["parity"] = {{"pass", par.pass}, {"expected_parity", par.expected_parity2}, {"defects", par.defects}};
  t << "  parity separation: " << (par.pass ? "pass" : "FAIL") << '\n';
  o.doc["pass"] = pass;
  o.text = t.str();
  o.code = pass ? kExitOk : kExitNo;
  return o;
}

WeilOptions weil_options(const RunConfig& cfg) {
  WeilOptions w;
  w.max_dim = cfg.max_pn;
  w.group_cap = cfg.group_cap;
  return w;
}

Json product_restriction_json(const ProductRestrictionReport& r) {
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (int c = 0; c < 4; ++c) row.push_back(rat(r.products[i][c]));
    rows.push_back(row);
  }
  return {{"k", r.k}, {"pass", r.pass}, {"subgroup_order", r.subgroup_order}, {"odd", rows[0]}, {"even", rows[1]}};
}

Json brauer_json(const BrauerReport& r) {
  return {{"p", r.p},
          {"pass", r.pass()},
          {"regular_elements", r.regular_elements},
          {"dims", {r.dim_odd, r.dim_even}},
          {"sym_degrees", {r.sym_odd, r.sym_even}},
          {"max_err", {r.max_err_odd, r.max_err_even}},
          {"mismatches", r.mismatches}};
}

Output cmd_weilcheck(const RunConfig& cfg, int n, std::int64_t p, std::uint64_t seed) {
  const auto opts = weil_options(cfg);
  const auto rep = build_weil_rep(n, static_cast<int>(p), opts);
  const auto split = parity_split(rep);
  Output o;
  std::ostringstream t;
  bool pass = true;
  auto mark = [&](const std::string& name, bool ok) {
    pass = pass && ok;
    t << "  " << name << ": " << (ok ? "pass" : "FAIL") << '\n';
  };
  o.doc["n"] = n;
  o.doc["p"] = p;
  o.doc["group_order"] = rep.atlas.size();
  o.doc["dim"] = rep.dim;
  o.doc["calibration"] = rep.calibration.str();
  o.doc["candidates_tried"] = rep.candidates_tried;
  Json rejected = Json::array();
  for (const auto& f : rep.rejected) rejected.push_back(f.str());
  o.doc["rejected"] = rejected;
  o.doc["edges_checked"] = rep.edges_checked;
  t << "Sp_" << 2 * n << "(" << p << "): " << rep.atlas.size() << " elements, calibration after " << rep.candidates_tried
    << " candidate(s)\n";

  const auto gens = check_formula_generators(rep);
  o.doc["generator_audit"] = {{"checked", gens.checked}, {"mismatches", gens.mismatches}};
  mark("all generator formulas", gens.mismatches.empty());
  const auto spot = spot_check(rep, seed);
  o.doc["spot_check"] = {{"products", spot.products},
                         {"inverses", spot.inverses},
                         {"conjugates", spot.conjugates},
                         {"failures", spot.product_failures + spot.inverse_failures + spot.conjugate_failures}};
  mark("random products, inverses, conjugates", spot.pass());

  const auto norms = character_norms(rep, split);
  o.doc["parity"] = {{"dims", {split.dim_odd, split.dim_even}},
                     {"commutes", split.commutes},
                     {"norms", {rat(norms.odd_odd), rat(norms.even_even), rat(norms.odd_even)}}};
  mark("parity split " + std::to_string(split.dim_odd) + "+" + std::to_string(split.dim_even),
       split.commutes && split.dim_odd + split.dim_even == rep.dim);
  mark("irreducible pieces", norms.odd_odd == Rational(1) && norms.even_even == Rational(1) && norms.odd_even == Rational(0));
  const auto inter = intertwiner_dimension(rep, split);
  o.doc["intertwiner_dimension"] = inter;
  mark("no intertwiner", inter == 0);
  const bool galois = galois_stable_under_squares(rep, split);
  o.doc["galois_stable"] = galois;
  mark("characters fixed by square Galois twists", galois);

  const auto l2 = check_simple_spectrum(rep, split);
  o.doc["simple_spectrum"] = {{"pass", l2.pass()},       {"element", l2.element_str},     {"order", l2.order},
                     {"char_poly", l2.char_poly}, {"sep", {l2.sep_odd, l2.sep_even}}, {"trace_powers", l2.trace_power_consistent}};
  mark("order " + std::to_string(ipow(p, n) + 1) + " element with simple spectrum", l2.pass());

  Json f1 = Json::array();
  for (int k = 1; k < n; ++k) {
    try {
      const auto left = build_weil_rep(k, static_cast<int>(p), opts);
      const auto right = build_weil_rep(n - k, static_cast<int>(p), opts);
      const auto r = check_product_restriction(rep, left, right);
      f1.push_back(product_restriction_json(r));
      mark("restriction to rank " + std::to_string(k) + " x " + std::to_string(n - k), r.pass);
    } catch (const DomainError& e) {
      f1.push_back({{"k", k}, {"skipped", e.what()}});
    }
  }
  o.doc["product_restriction"] = f1;
  if (n == 1) {
    const auto b = brauer_compare_sl2(rep);
    o.doc["brauer"] = brauer_json(b);
    mark("symmetric power Brauer characters", b.pass());
  }
  o.doc["pass"] = pass;
  o.text = t.str();
  o.code = pass ? kExitOk : kExitNo;
  return o;
}

Output cmd_brauer(const RunConfig& cfg, std::int64_t p, double tol) {
  check_prime(p);
  const auto r = brauer_compare_sl2(static_cast<int>(p), tol, weil_options(cfg));
  Output o;
  o.doc = brauer_json(r);
  std::ostringstream t;
  t << "SL_2(" << p << "): " << r.regular_elements << " p-regular elements, pieces " << r.dim_odd << "+" << r.dim_even
    << " vs Sym^" << r.sym_odd << ", Sym^" << r.sym_even << ": " << (r.pass() ? "agree" : "DISAGREE") << '\n';
  for (const auto& m : r.mismatches) t << "  mismatch at " << m << '\n';
  o.text = t.str();
  o.code = r.pass() ? kExitOk : kExitNo;
  return o;
}

Output cmd_report(const RunConfig& cfg, const std::vector<int>& ids, const std::vector<std::int64_t>& primes, int max_rank,
                  std::uint64_t seed, std::size_t cases) {
  acceptance::Config ac;
  ac.grid_primes = primes;
  ac.grid_max_rank = max_rank;
  ac.grid_sample = cfg.grid_sample;
  ac.omega_cn_strict = cfg.omega_cn_strict;
  ac.weight_bound = cfg.weight_bound;
  ac.seed = seed;
  ac.property_cases = cases;
  ac.weil = weil_options(cfg);
  for (auto p : primes) check_prime(p);
  Output o;
  o.doc["config"] = {{"grid_primes", primes},     {"grid_max_rank", max_rank},     {"grid_sample", cfg.grid_sample},
                     {"omega_cn_strict", cfg.omega_cn_strict}, {"weight_bound", cfg.weight_bound}, {"max_pn", cfg.max_pn},
                     {"group_cap", cfg.group_cap}, {"seed", seed},              {"property_cases", cases}};
  std::ostringstream t;
  Json crit = Json::array();
  bool pass = true;
  const auto results = acceptance::run(ac, ids);
  for (const auto& r : results) {
    pass = pass && r.pass;
    Json c{{"id", r.id}, {"title", r.title}, {"pass", r.pass}};
    if (cfg.timings) c["seconds"] = r.seconds;
    c["data"] = r.data;
    crit.push_back(c);
    t << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title;
    if (cfg.timings) t << " (" << r.seconds << " s)";
    t << '\n';
  }
  o.doc["criteria"] = crit;
  o.doc["pass"] = pass;
  o.text = t.str();
  o.code = pass ? kExitOk : kExitNo;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplicity-one classifier and oscillator representation checks"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", cfg.threads, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);
  app.add_flag("--omega-cn-strict", cfg.omega_cn_strict, "use the printed C_n table (omega_n only when n = 2)");
  app.add_flag("--timings", cfg.timings, "include wall-clock timings");
  app.add_option("--output", cfg.output, "write the document to this file");

  std::string fam, wtext;
  int rank = 0, n = 0;
  std::int64_t p = 0;
  std::optional<std::int64_t> opt_p;
  std::optional<int> opt_k;
  bool modular = false;
  std::uint64_t seed = 0x5eed;
  double tol = 1e-8;
  std::vector<int> ids;
  std::vector<std::int64_t> primes{2, 3, 5, 7};
  int max_rank = 4;
  std::size_t cases = 1000;

  auto* c_classify = app.add_subcommand("classify", "decide whether the irreducible module has all weight multiplicities one");
  c_classify->add_option("type", fam)->required();
  c_classify->add_option("rank", rank)->required();
  c_classify->add_option("p", p)->required();
  c_classify->add_option("weight", wtext, "comma-separated coordinates, or omega' / omega'' for type C")->required();

  auto* c_omega = app.add_subcommand("omega", "list the restricted multiplicity-one weights with rule tags");
  c_omega->add_option("type", fam)->required();
  c_omega->add_option("rank", rank)->required();
  c_omega->add_option("p", p)->required();

  auto* c_weights = app.add_subcommand("weights", "weights of the characteristic-zero module (or a licensed modular set)");
  c_weights->add_option("type", fam)->required();
  c_weights->add_option("rank", rank)->required();
  c_weights->add_option("weight", wtext)->required();
  c_weights->add_option("--p", opt_p, "prime for symbolic weights and --modular");
  c_weights->add_flag("--modular", modular, "characteristic-p weight set where known");

  auto* c_dim = app.add_subcommand("dim", "Weyl dimension and distinct weight count");
  c_dim->add_option("type", fam)->required();
  c_dim->add_option("rank", rank)->required();
  c_dim->add_option("weight", wtext)->required();
  c_dim->add_option("--p", opt_p, "prime for symbolic weights");

  auto* c_branch = app.add_subcommand("branch", "Levi and subgroup branching of the two small symplectic modules");
  c_branch->add_option("n", n)->required()->check(CLI::PositiveNumber);
  c_branch->add_option("p", p)->required();
  c_branch->add_option("--k", opt_k, "Levi split (default: every k)");

  auto* c_weil = app.add_subcommand("weilcheck", "build the oscillator representation of Sp_2n(p) and run every check");
  c_weil->add_option("n", n)->required()->check(CLI::PositiveNumber);
  c_weil->add_option("p", p)->required();
  c_weil->add_option("--seed", seed, "seed for random spot checks");

  auto* c_brauer = app.add_subcommand("brauer", "compare the rank one pieces with symmetric power Brauer characters");
  c_brauer->add_option("p", p)->required();
  c_brauer->add_option("--tolerance", tol)->check(CLI::PositiveNumber);

  auto* c_report = app.add_subcommand("report", "run the acceptance grid and emit one summary");
  c_report->add_option("--criteria", ids, "subset of criteria")->delimiter(',')->check(CLI::Range(1, acceptance::kCriteria));
  c_report->add_option("--primes", primes, "primes for the conformance grid")->delimiter(',');
  c_report->add_option("--max-rank", max_rank, "largest classical rank in the conformance grid")->check(CLI::Range(1, 8));
  c_report->add_option("--seed", seed);
  c_report->add_option("--cases", cases, "cases per property suite")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const bool json = cfg.format == "json";
  std::string command;
  Output out;
  try {
    cfg.max_pn = env_int("MULTONE_MAX_PN", cfg.max_pn);
    cfg.group_cap = static_cast<std::size_t>(env_int("MULTONE_GROUP_CAP", static_cast<std::int64_t>(cfg.group_cap)));
    cfg.weight_bound = env_int("MULTONE_WEIGHT_BOUND", cfg.weight_bound);
    cfg.grid_sample = static_cast<std::size_t>(env_int("MULTONE_GRID_SAMPLE", static_cast<std::int64_t>(cfg.grid_sample)));
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    const auto t0 = std::chrono::steady_clock::now();
    command = app.get_subcommands().front()->get_name();
    if (command == "classify") out = cmd_classify(cfg, fam, rank, p, wtext);
    else if (command == "omega") out = cmd_omega(cfg, fam, rank, p);
    else if (command == "weights") out = cmd_weights(cfg, fam, rank, wtext, opt_p, modular);
    else if (command == "dim") out = cmd_dim(cfg, fam, rank, wtext, opt_p);
    else if (command == "branch") out = cmd_branch(cfg, n, p, opt_k);
    else if (command == "weilcheck") out = cmd_weilcheck(cfg, n, p, seed);
    else if (command == "brauer") out = cmd_brauer(cfg, p, tol);
    else if (command == "report") out = cmd_report(cfg, ids, primes, max_rank, seed, cases);
    if (cfg.timings)
      out.doc["timings"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                            {"threads", omp_get_max_threads()}};
  } catch (const UsageError& e) {
    out = {Json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}, std::string("error: ") + e.what() + "\n", kExitUsage};
  } catch (const DomainError& e) {
    out = {Json{{"error", {{"kind", "domain"}, {"message", e.what()}}}}, std::string("error: ") + e.what() + "\n", kExitUsage};
  } catch (const std::exception& e) {
    out = {Json{{"error", {{"kind", "computation"}, {"message", e.what()}}}}, std::string("error: ") + e.what() + "\n", kExitNo};
  }

  Json doc{{"schema", 1}, {"command", command}};
  for (auto& [k, v] : out.doc.items()) doc[k] = v;
  const std::string body = json ? doc.dump(2) + "\n" : out.text;
  if (!cfg.output.empty()) {
    std::ofstream f(cfg.output);
    if (!f) {
      std::cerr << "error: cannot write " << cfg.output << '\n';
      return kExitUsage;
    }
    f << body;
  } else if (doc.contains("error") && !json) {
    std::cerr << body;
  } else {
    std::cout << body;
  }
  return out.code;
}
