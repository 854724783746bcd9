#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <qcrys/qcrys.hpp>

namespace qcrys::cli {

using io::json;

std::vector<Int> parse_int_list(const std::string& text) {
  std::vector<Int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    Int x = 0;
    try {
      x = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError("int-list", "cannot parse '" + item + "' in '" + text + "'");
    out.push_back(x);
  }
  if (out.empty()) throw InputError("int-list", "empty list");
  return out;
}

GradedDims parse_dims(const std::string& text, std::size_t rank) {
  GradedDims d;
  bool have_v = false, have_w = false;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.size() < 2 || part[1] != '=') throw InputError("dims-syntax", "expected v=..;w=.., got '" + text + "'");
    auto values = parse_int_list(part.substr(2));
    if (part[0] == 'v') {
      d.v = std::move(values);
      have_v = true;
    } else if (part[0] == 'w') {
      d.w = std::move(values);
      have_w = true;
    } else {
      throw InputError("dims-syntax", "unknown dimension vector '" + part.substr(0, 1) + "'");
    }
  }
  if (!have_v || !have_w) throw InputError("dims-syntax", "both v=.. and w=.. are required");
  if (d.v.size() != rank || d.w.size() != rank) {
    throw InputError("dims-rank", "dimension vectors need " + std::to_string(rank) + " entries");
  }
  return d;
}

namespace {

CartanDatum cartan_of(const RunConfig& cfg) {
  if (cfg.type_or_matrix.empty()) throw InputError("cartan-missing", "--type or --matrix is required");
  return io::load_cartan(cfg.type_or_matrix);
}

WeightVector lambda_of(const CartanDatum& c, const std::vector<Int>& lam, const char* flag) {
  if (lam.empty()) throw InputError("weight-missing", std::string(flag) + " is required");
  if (lam.size() != c.rank()) {
    throw InputError("weight-rank", std::string(flag) + " needs " + std::to_string(c.rank()) + " entries");
  }
  auto w = WeightVector::from_lambda(lam);
  require_dominant_lambda(c, w);
  return w;
}

IotaSequence iota_of(const RunConfig& cfg, std::size_t rank) {
  if (cfg.iota.empty()) return IotaSequence::standard(rank);
  std::vector<std::size_t> cycle;
  for (auto i : cfg.iota) {
    if (i < 1) throw InputError("index-range", "iota entries are 1-based");
    cycle.push_back(i - 1);
  }
  return IotaSequence(std::move(cycle), rank);
}

Int depth_of(const RunConfig& cfg, const CartanDatum& c, const WeightVector& lam) {
  if (cfg.depth) {
    if (*cfg.depth < 0) throw InputError("depth", "depth must be >= 0");
    return *cfg.depth;
  }
  return c.is_finite() ? lowest_weight_depth(c, lam) : 6;
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw InputError("format", "format '" + cfg.format + "' is not available for " + cfg.command);
}

json violations_json(const std::vector<Violation>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back({{"check", v.check}, {"element", v.element}, {"i", v.color + 1}, {"detail", v.detail}});
  return out;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

ExitCode run_character(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  const auto c = cartan_of(cfg);
  const auto table = weyl_kac_character(c, lambda_of(c, cfg.lam, "--lam"), cfg.bound);
  if (cfg.format == "csv") {
    out << io::to_csv(table);
  } else {
    emit(out, io::to_json(table));
  }
  return ExitCode::ok;
}

ExitCode run_crystal(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "dot"});
  const auto c = cartan_of(cfg);
  const auto lam = lambda_of(c, cfg.lam, "--lam");
  const auto g = generate_blambda(c, lam, depth_of(cfg, c, lam), iota_of(cfg, c.rank()));
  if (cfg.format == "dot") {
    out << io::to_dot(g.graph, "B(lambda)");
  } else {
    emit(out, io::to_json(g.graph));
  }
  return ExitCode::ok;
}

ExitCode run_verify(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json"});
  std::optional<CrystalGraph> graph;
  std::optional<CartanDatum> cartan;
  std::size_t top = 0;
  WeightVector lam;
  if (!cfg.graph_path.empty()) {
    graph = io::graph_from_json(io::parse_json(io::read_file(cfg.graph_path), cfg.graph_path));
    cartan = graph->cartan();
    lam = lambda_of(*cartan, cfg.lam, "--lam");
    std::optional<std::size_t> found;
    if (!cfg.top_key.empty()) {
      found = graph->find(cfg.top_key);
    } else {
      for (std::size_t b = 0; b < graph->size() && !found; ++b)
        if (graph->node(b).wt == lam) found = b;
    }
    if (!found) throw InputError("graph-top", "no top element of weight " + lam.to_string() + " in the graph");
    top = *found;
  } else {
    cartan = cartan_of(cfg);
    lam = lambda_of(*cartan, cfg.lam, "--lam");
    auto g = generate_blambda(*cartan, lam, depth_of(cfg, *cartan, lam), iota_of(cfg, cartan->rank()));
    top = g.top();
    graph = std::move(g.graph);
  }

  json report{{"elements", graph->size()}, {"truncated", graph->truncated()}};
  bool ok = true;

  const auto axioms = check_axioms(*graph, {.string_lengths = true});
  report["axioms"] = {{"ok", axioms.ok()}, {"violations", violations_json(axioms.violations)}};
  ok = ok && axioms.ok();

  if (graph->truncated()) {
    report["characterization"] = {{"skipped", "truncated graph"}};
  } else {
    const auto ch = verify_highest_weight_characterization(*graph, top, lam, std::nullopt, iota_of(cfg, cartan->rank()));
    report["characterization"] = {{"ok", ch.passed()},
                                  {"unique_top", ch.unique_top},
                                  {"strict_morphism", ch.strict_morphism},
                                  {"bijective", ch.bijective},
                                  {"string_lengths", ch.string_lengths},
                                  {"binf_depth", ch.binf_depth},
                                  {"binf_elements", ch.binf_elements},
                                  {"violations", violations_json(ch.violations)}};
    ok = ok && ch.passed();
  }

  if (cartan->is_finite() && !graph->truncated()) {
    const auto census = weight_census(*graph, lam);
    const auto table = weyl_kac_character(*cartan, lam, lowest_weight_depth(*cartan, lam));
    json mismatches = json::array();
    std::set<std::vector<Int>> weights;
    for (const auto& [nu, m] : census.counts) weights.insert(nu);
    for (const auto& [nu, m] : table.entries) weights.insert(nu);
    for (const auto& nu : weights) {
      const auto it = census.counts.find(nu);
      const Int have = it == census.counts.end() ? 0 : it->second;
      if (have != table.multiplicity(nu)) mismatches.push_back({{"nu", nu}, {"crystal", have}, {"character", table.multiplicity(nu)}});
    }
    const bool census_ok = mismatches.empty() && census.stray == 0;
    report["character"] = {{"ok", census_ok}, {"total", table.total()}, {"stray", census.stray}, {"mismatches", mismatches}};
    ok = ok && census_ok;
  }
  report["status"] = ok ? "pass" : "fail";
  emit(out, report);
  return ok ? ExitCode::ok : ExitCode::check_failed;
}

ExitCode run_tensor(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "dot"});
  const auto c = cartan_of(cfg);
  c.require_finite("tensor");
  const auto lam1 = lambda_of(c, cfg.lam, "--lam");
  const auto lam2 = lambda_of(c, cfg.lam2, "--lam2");
  GraphCrystal b1(generate_blambda(c, lam1, lowest_weight_depth(c, lam1)).graph);
  GraphCrystal b2(generate_blambda(c, lam2, lowest_weight_depth(c, lam2)).graph);
  auto product = tensor(b1, b2);
  std::vector<std::pair<std::size_t, std::size_t>> seeds;
  for (std::size_t x = 0; x < b1.graph().size(); ++x)
    for (std::size_t y = 0; y < b2.graph().size(); ++y) seeds.emplace_back(x, y);
  const auto g = materialize(product, seeds);
  if (cfg.format == "dot") {
    out << io::to_dot(g, "tensor");
    return ExitCode::ok;
  }
  const auto axioms = check_axioms(g, {.string_lengths = true});
  json components = json::array();
  for (const auto& part : connected_components(g)) {
    json tops = json::array();
    for (const auto& nd : part.nodes()) {
      bool highest = true;
      for (std::size_t i = 0; i < c.rank(); ++i) highest = highest && nd.eps[i] == ExtInt(0);
      if (highest) tops.push_back({{"key", nd.key}, {"lambda", pairings(c, nd.wt)}});
    }
    components.push_back({{"size", part.size()}, {"highest", tops}});
  }
  emit(out, {{"elements", g.size()},
             {"axioms", {{"ok", axioms.ok()}, {"violations", violations_json(axioms.violations)}}},
             {"components", components},
             {"status", axioms.ok() ? "pass" : "fail"}});
  return axioms.ok() ? ExitCode::ok : ExitCode::check_failed;
}

ExitCode run_quiver_sample(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json"});
  const auto c = cartan_of(cfg);
  const auto q = build_doubled_quiver(c);
  const auto dims = parse_dims(cfg.dims, c.rank());
  const auto d = sample_lagrangian_point(q, dims, cfg.seed);
  emit(out, {{"seed", cfg.seed}, {"quiver", io::to_json(q)}, {"datum", io::to_json(d)}});
  return ExitCode::ok;
}

ExitCode run_quiver_check(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json"});
  const auto c = cartan_of(cfg);
  const auto q = build_doubled_quiver(c);
  std::mt19937_64 rng(cfg.seed);
  ADHMDatum d = cfg.datum_path.empty()
                    ? sample_lagrangian_point(q, parse_dims(cfg.dims, c.rank()), rng())
                    : io::datum_from_json(q, io::parse_json(io::read_file(cfg.datum_path), cfg.datum_path));
  check_shapes(q, d);

  json checks = json::array();
  bool ok = true;
  auto record = [&](const std::string& name, bool pass, json detail = nullptr) {
    json entry{{"name", name}, {"ok", pass}};
    if (!detail.is_null()) entry["detail"] = std::move(detail);
    checks.push_back(std::move(entry));
    ok = ok && pass;
  };

  const bool mu_zero = moment_map_vanishes(q, d);
  record("moment-map-zero", mu_zero);
  const auto stab = is_stable(q, d);
  json witness = nullptr;
  if (!stab.stable) {
    witness = json::object();
    for (std::size_t i = 0; i < stab.witness.size(); ++i) witness[std::to_string(i + 1)] = io::to_json(stab.witness[i]);
  }
  record("stable", stab.stable, witness);

  std::vector<std::size_t> eps(c.rank());
  for (std::size_t i = 0; i < c.rank(); ++i) eps[i] = eps_i(q, d, i);
  const bool nilpotent = is_nilpotent(q, d);

  if (mu_zero && stab.stable) {
    for (std::size_t i = 0; i < c.rank(); ++i) {
      const Int room = static_cast<Int>(eps[i]) + weight_pairing(q, d.dims, i);
      record("eps-bound@" + std::to_string(i + 1), room >= 0, json{{"eps", eps[i]}, {"pairing", weight_pairing(q, d.dims, i)}});
    }
    const auto fa = free_action_checks(q, d);
    record("free-action", fa.ok(), json{{"stabilizer_dim", fa.stabilizer_dim}, {"moment_rank", fa.moment_rank}, {"group_dim", fa.group_dim}});

    // isotropy: omega(xi . d, x) = 0 for x in ker d mu
    const Matrix kernel = moment_map_kernel(q, d);
    bool isotropic = true;
    if (kernel.cols() > 0 && group_dimension(d.dims) > 0) {
      for (int trial = 0; trial < 3; ++trial) {
        const Matrix x = kernel * detail::random_matrix(rng, kernel.cols(), 1, -3, 3);
        const Matrix xi = detail::random_matrix(rng, group_dimension(d.dims), 1, -3, 3);
        const auto a = infinitesimal_action(q, d, unflatten_algebra(d.dims, xi));
        isotropic = isotropic && sgn(symplectic_form(q, a, unflatten(q, d.dims, x))) == 0;
      }
    }
    record("isotropy", isotropic);

    // moves: extend by the largest admissible l and shrink back; shrink by eps_i and extend back
    for (std::size_t i = 0; i < c.rank(); ++i) {
      const Int room = static_cast<Int>(eps[i]) + weight_pairing(q, d.dims, i);
      if (room > 0) {
        const auto ext = extend_i(q, d, i, static_cast<std::size_t>(room), rng());
        const auto expected_kernel = weight_pairing(q, d.dims, i) + static_cast<Int>(eps[i]) + d.dims.v[i];
        const auto back = shrink_i(q, ext.datum, i, static_cast<std::size_t>(room));
        bool same = back.datum.dims == d.dims;
        for (std::size_t j = 0; j < c.rank(); ++j) same = same && eps_i(q, back.datum, j) == eps[j];
        record("extend@" + std::to_string(i + 1),
               static_cast<Int>(ext.kernel_dim) == expected_kernel && eps_i(q, ext.datum, i) == eps[i] + room && same,
               json{{"l", room}, {"kernel_dim", ext.kernel_dim}});
      }
      if (eps[i] > 0) {
        const auto sh = shrink_i(q, d, i, eps[i]);
        const auto ext = extend_i(q, sh.datum, i, eps[i], rng());
        record("shrink@" + std::to_string(i + 1),
               eps_i(q, sh.datum, i) == 0 && ext.datum.dims == d.dims && eps_i(q, ext.datum, i) == eps[i],
               json{{"k", eps[i]}});
      }
    }
  }

  // equivariance under a random group element
  {
    const auto g = random_group_element(d.dims, rng);
    const auto gd = group_act(q, g, d);
    bool equivariant = is_stable(q, gd).stable == stab.stable && is_nilpotent(q, gd) == nilpotent;
    for (std::size_t i = 0; i < c.rank(); ++i) equivariant = equivariant && eps_i(q, gd, i) == eps[i];
    const auto mu = moment_map(q, d);
    const auto mu_g = moment_map(q, gd);
    for (std::size_t i = 0; i < c.rank(); ++i) equivariant = equivariant && mu_g[i] * g.g[i] == g.g[i] * mu[i];
    const auto y = random_datum(q, d.dims, rng);
    equivariant = equivariant && symplectic_form(q, gd, group_act(q, g, y)) == symplectic_form(q, d, y);
    record("equivariance", equivariant);
  }

  emit(out, {{"dims", io::to_json(d.dims)},
             {"eps", eps},
             {"nilpotent", nilpotent},
             {"checks", checks},
             {"status", ok ? "pass" : "fail"}});
  return ok ? ExitCode::ok : ExitCode::check_failed;
}

ExitCode run_dim_identity(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  const auto c = cartan_of(cfg);
  c.require_finite("dim-identity");
  const auto q = build_doubled_quiver(c);
  std::vector<GradedDims> cases;
  if (!cfg.dims.empty()) {
    cases.push_back(parse_dims(cfg.dims, c.rank()));
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<Int> small(0, 3);
    const std::size_t n = cfg.count ? cfg.count : 200;
    for (std::size_t k = 0; k < n; ++k) {
      GradedDims d;
      for (std::size_t i = 0; i < c.rank(); ++i) {
        d.v.push_back(small(rng));
        d.w.push_back(small(rng));
      }
      cases.push_back(std::move(d));
    }
  }
  bool all = true;
  json rows = json::array();
  std::ostringstream csv;
  csv << "v,w,lhs,rhs,equal\n";
  auto joined = [](const std::vector<Int>& x) {
    std::string s;
    for (std::size_t k = 0; k < x.size(); ++k) s += (k ? " " : "") + std::to_string(x[k]);
    return s;
  };
  for (const auto& d : cases) {
    const auto r = dimension_identity(c, q, d);
    all = all && r.equal;
    rows.push_back({{"v", d.v}, {"w", d.w}, {"lhs", r.lhs}, {"rhs", r.rhs.get_str()}, {"equal", r.equal}});
    csv << joined(d.v) << ',' << joined(d.w) << ',' << r.lhs << ',' << r.rhs.get_str() << ',' << (r.equal ? "true" : "false") << '\n';
  }
  if (cfg.format == "csv") {
    out << csv.str();
  } else {
    emit(out, {{"cases", rows}, {"all_equal", all}, {"status", all ? "pass" : "fail"}});
  }
  return all ? ExitCode::ok : ExitCode::check_failed;
}

json diagnostic(const char* kind, const std::string& invariant, const std::string& message) {
  return {{"status", "error"}, {"kind", kind}, {"invariant", invariant}, {"message", message}};
}

}  // namespace

ExitCode run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "character") return run_character(cfg, out);
  if (cfg.command == "crystal") return run_crystal(cfg, out);
  if (cfg.command == "verify") return run_verify(cfg, out);
  if (cfg.command == "tensor") return run_tensor(cfg, out);
  if (cfg.command == "quiver-sample") return run_quiver_sample(cfg, out);
  if (cfg.command == "quiver-check") return run_quiver_check(cfg, out);
  if (cfg.command == "dim-identity") return run_dim_identity(cfg, out);
  throw InputError("command", "unknown command '" + cfg.command + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crystals, characters and quiver data over exact rationals", "qcrys"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string lam, lam2, iota, out_path, matrix_path;
  std::optional<std::uint64_t> seed;
  std::optional<Int> depth;

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"character", "Weyl-Kac weight multiplicities of L(lambda)"},
      {"crystal", "Generate B(lambda) as a graph"},
      {"verify", "Check crystal axioms, the highest weight characterization and the character census"},
      {"tensor", "Decompose B(lambda) (x) B(lambda2) into connected components"},
      {"quiver-sample", "Sample a stable point of the Lagrangian locus"},
      {"quiver-check", "Run the invariant suite on a quiver datum"},
      {"dim-identity", "Compare dim X - 2 dim G with ||lambda||^2 - ||lambda+nu||^2"},
  };
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--type", cfg.type_or_matrix, "Cartan type (A3, D4, E6, A2~, ...)");
    sub->add_option("--matrix", matrix_path, "JSON file with a symmetric Cartan matrix")->excludes("--type");
    sub->add_option("--format", cfg.format, "Output format (json, dot, csv)");
    sub->add_option("--out", out_path, "Write the report to this file");
    sub->add_option("--seed", seed, "Random seed (default 1, or $QCRYS_SEED)");
    const std::string name = cmd.name;
    if (name == "character" || name == "crystal" || name == "verify" || name == "tensor") {
      sub->add_option("--lam", lam, "Comma-separated fundamental-weight coefficients");
    }
    if (name == "character") sub->add_option("--bound", cfg.bound, "Height bound");
    if (name == "crystal" || name == "verify") {
      sub->add_option("--depth", depth, "Generation depth |ht|");
      sub->add_option("--iota", iota, "Comma-separated 1-based iota cycle");
    }
    if (name == "verify") {
      sub->add_option("--graph", cfg.graph_path, "Verify a crystal graph JSON file instead of generating one");
      sub->add_option("--top", cfg.top_key, "Key of the top element in --graph");
    }
    if (name == "tensor") sub->add_option("--lam2", lam2, "Second highest weight");
    if (name == "quiver-sample" || name == "quiver-check" || name == "dim-identity") {
      sub->add_option("--dims", cfg.dims, "Dimension vectors as v=..;w=..");
    }
    if (name == "quiver-check") sub->add_option("--datum", cfg.datum_path, "ADHM datum JSON file");
    if (name == "dim-identity") sub->add_option("--count", cfg.count, "Number of random cases (default 200)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << diagnostic("input", "arguments", e.what()).dump() << '\n';
    return static_cast<int>(ExitCode::input_error);
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!matrix_path.empty()) cfg.type_or_matrix = matrix_path;
    if (!lam.empty()) cfg.lam = parse_int_list(lam);
    if (!lam2.empty()) cfg.lam2 = parse_int_list(lam2);
    if (!iota.empty()) {
      for (Int i : parse_int_list(iota)) {
        if (i < 1) throw InputError("index-range", "iota entries are 1-based");
        cfg.iota.push_back(static_cast<std::size_t>(i));
      }
    }
    cfg.depth = depth;
    if (seed) {
      cfg.seed = *seed;
    } else if (const char* env = std::getenv("QCRYS_SEED")) {
      try {
        cfg.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw InputError("seed", "QCRYS_SEED must be a nonnegative integer");
      }
    }

    std::ostringstream report;
    const ExitCode code = run(cfg, report);
    if (out_path.empty()) {
      out << report.str();
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw InputError("file-write", "cannot write '" + out_path + "'");
      file << report.str();
    }
    if (code == ExitCode::check_failed) err << diagnostic("check", "report", "one or more checks failed; see report").dump() << '\n';
    return static_cast<int>(code);
  } catch (const InputError& e) {
    err << diagnostic("input", e.invariant(), e.what()).dump() << '\n';
    return static_cast<int>(ExitCode::input_error);
  } catch (const ExhaustedError& e) {
    err << diagnostic("exhausted", e.invariant(), e.what()).dump() << '\n';
    return static_cast<int>(ExitCode::check_failed);
  } catch (const InternalError& e) {
    err << diagnostic("internal", e.invariant(), e.what()).dump() << '\n';
    return static_cast<int>(ExitCode::internal_error);
  } catch (const std::exception& e) {
    err << diagnostic("internal", "unexpected", e.what()).dump() << '\n';
    return static_cast<int>(ExitCode::internal_error);
  }
}

}  // namespace qcrys::cli
