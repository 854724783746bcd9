#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "binfinity.hpp"
#include "checks.hpp"

namespace qcrys {

namespace highest_weight {
inline constexpr const char* unique_top = "unique-top";        // b_top is the only element of weight lambda
inline constexpr const char* well_defined = "strict-extension";  // Phi(f b) = f Phi(b) is consistent
inline constexpr const char* surjective = "surjective";
inline constexpr const char* injective = "injective";
inline constexpr const char* string_length = axiom::string_length;
}  // namespace highest_weight

/// Outcome of testing whether a finite crystal is B(lambda) via its universal
/// map from B(infinity) (x) T_lambda.
struct CharacterizationReport {
  bool unique_top = true;
  bool strict_morphism = true;  // Phi well defined, structure preserving and strict
  bool bijective = true;        // onto g, injective off the zero locus
  bool string_lengths = true;
  Int binf_depth = 0;
  std::size_t binf_elements = 0;
  std::vector<Violation> violations;

  bool passed() const { return unique_top && strict_morphism && bijective && string_lengths; }
};

/// Number of elements of each weight lam + nu, keyed by nu. Elements whose
/// weight is not of that form are counted under `stray`.
struct WeightCensus {
  std::map<std::vector<Int>, Int> counts;
  std::size_t stray = 0;
};

inline WeightCensus weight_census(const CrystalGraph& g, const WeightVector& lam) {
  WeightCensus census;
  for (const auto& nd : g.nodes()) {
    if (nd.wt.lam != lam.lam) {
      ++census.stray;
      continue;
    }
    const auto diff = nd.wt - lam;
    ++census.counts[diff.nu];
  }
  return census;
}

/// Materializes B(infinity) (x) T_lambda down to |ht| <= depth.
inline CrystalGraph materialize_binf_tensor_t(const CartanDatum& c, const WeightVector& lam, Int depth,
                                              const IotaSequence& iota) {
  auto product = tensor(BInfinityCrystal(c, iota), TCrystal(c, lam));
  using E = decltype(product)::element_type;
  const auto& binf = product.left();
  return materialize(product, {E{StringElement(), TCrystal::element_type{}}},
                     [&](const E& b) { return std::abs(binf.weight(b.first).height()) <= depth; });
}

/// Checks, for a finite crystal g with a chosen top b_top of weight lambda:
///  - b_top is the unique element of weight lambda;
///  - Phi(b_0 (x) t_lambda) = b_top extends along f-words to a strict morphism
///    from B(infinity) (x) T_lambda onto g, bijective off its zero locus;
///  - eps_i and phi_i equal the e_i- and f_i-string lengths.
/// `binf_depth` defaults to the depth of g plus one; it must cover g.
inline CharacterizationReport verify_highest_weight_characterization(const CrystalGraph& g, std::size_t b_top,
                                                                     const WeightVector& lam,
                                                                     std::optional<Int> binf_depth = std::nullopt,
                                                                     std::optional<IotaSequence> iota = std::nullopt) {
  const auto& c = g.cartan();
  c.check_weight(lam);
  if (b_top >= g.size()) throw InputError("element-range", "b_top outside the graph");
  const Int depth_g = g.depth_below(lam);
  const Int depth = binf_depth.value_or(depth_g + 1);
  if (depth < depth_g) {
    throw DepthError("characterization-depth", "truncation depth " + std::to_string(depth) +
                                                   " does not cover graph depth " + std::to_string(depth_g));
  }

  CharacterizationReport report;
  report.binf_depth = depth;
  auto add = [&](const char* check, std::string element, std::size_t i, std::string detail) {
    report.violations.push_back({check, std::move(element), i, std::move(detail)});
  };

  for (std::size_t b = 0; b < g.size(); ++b) {
    const bool is_top_weight = g.node(b).wt == lam;
    if ((b == b_top) != is_top_weight) {
      report.unique_top = false;
      add(highest_weight::unique_top, g.node(b).key, 0,
          b == b_top ? "chosen top does not have weight lambda" : "second element of weight lambda");
    }
  }

  for (std::size_t b = 0; b < g.size(); ++b) {
    for (std::size_t i = 0; i < g.rank(); ++i) {
      const auto& nd = g.node(b);
      const auto lengths = string_lengths(g, b, i);
      const bool eps_ok = nd.eps[i].is_finite() && lengths.up && *lengths.up == nd.eps[i].value();
      const bool phi_ok = nd.phi[i].is_finite() && lengths.down && *lengths.down == nd.phi[i].value();
      if (!eps_ok || !phi_ok) {
        report.string_lengths = false;
        add(highest_weight::string_length, nd.key, i,
            "eps " + nd.eps[i].to_string() + ", phi " + nd.phi[i].to_string() + " vs string lengths " +
                (lengths.up ? std::to_string(*lengths.up) : "?") + ", " +
                (lengths.down ? std::to_string(*lengths.down) : "?"));
      }
    }
  }

  const auto source = materialize_binf_tensor_t(c, lam, depth, iota.value_or(IotaSequence::standard(c.rank())));
  report.binf_elements = source.size();
  const auto start = source.find(std::string("[") + StringElement().key() + " x t]");
  if (!start) throw InternalError("binf-top", "B(infinity) (x) T_lambda lacks b_0 (x) t_lambda");

  // Phi along f-words, breadth-first from b_0 (x) t_lambda
  std::vector<std::optional<std::optional<std::size_t>>> phi_map(source.size());
  phi_map[*start] = b_top;
  std::deque<std::size_t> queue{*start};
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    const auto y = *phi_map[x];
    for (std::size_t i = 0; i < g.rank(); ++i) {
      const Link& l = source.f_link(x, i);
      if (!l.is_to()) continue;
      std::optional<std::size_t> candidate;
      if (y) {
        const Link& ly = g.f_link(*y, i);
        if (ly.kind == LinkKind::beyond) continue;
        if (ly.is_to()) candidate = ly.target;
      }
      auto& slot = phi_map[l.target];
      if (!slot) {
        slot = candidate;
        queue.push_back(l.target);
      } else if (*slot != candidate) {
        report.strict_morphism = false;
        auto show = [&](const std::optional<std::size_t>& v) { return v ? "'" + g.node(*v).key + "'" : std::string("0"); };
        add(highest_weight::well_defined, source.node(l.target).key, i,
            "reached as " + show(*slot) + " and as f of " + show(y));
      }
    }
  }

  ElementMap psi;
  std::vector<std::size_t> preimages(g.size(), 0);
  for (std::size_t x = 0; x < source.size(); ++x) {
    if (!phi_map[x]) continue;
    psi[x] = *phi_map[x];
    if (*phi_map[x]) ++preimages[**phi_map[x]];
  }
  const auto morphism_report = check_morphism(source, g, psi, /*strict=*/true);
  if (!morphism_report.ok()) {
    report.strict_morphism = false;
    for (const auto& v : morphism_report.violations) report.violations.push_back(v);
  }
  for (std::size_t y = 0; y < g.size(); ++y) {
    if (preimages[y] == 0) {
      report.bijective = false;
      add(highest_weight::surjective, g.node(y).key, 0, "not in the image");
    } else if (preimages[y] > 1) {
      report.bijective = false;
      add(highest_weight::injective, g.node(y).key, 0, std::to_string(preimages[y]) + " preimages");
    }
  }
  return report;
}

}  // namespace qcrys
