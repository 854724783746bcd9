#include <gtest/gtest.h>

#include <set>

#include <qcrys/binfinity.hpp>
#include <qcrys/characterize.hpp>
#include <qcrys/checks.hpp>

#include "oracles.hpp"

using namespace qcrys;

namespace {

CrystalGraph blambda(const char* type, std::vector<Int> lam) {
  const auto c = CartanDatum::preset(type);
  const auto w = WeightVector::from_lambda(std::move(lam));
  return generate_blambda(c, w, lowest_weight_depth(c, w)).graph;
}

bool has_check(const std::vector<Violation>& vs, const std::string& name) {
  for (const auto& v : vs)
    if (v.check == name) return true;
  return false;
}

std::vector<CrystalNode> nodes_of(const CrystalGraph& g) { return g.nodes(); }

// every element of a finite crystal paired with an explicit element list
template <Crystal C>
struct Sample {
  C crystal;
  std::vector<typename C::element_type> elements;
};

template <class A, class B, class C>
void expect_associative(const A& a, const B& b, const C& c) {
  const auto left = tensor(tensor(a.crystal, b.crystal), c.crystal);
  const auto right = tensor(a.crystal, tensor(b.crystal, c.crystal));
  const std::size_t n = a.crystal.cartan().rank();
  for (const auto& x : a.elements)
    for (const auto& y : b.elements)
      for (const auto& z : c.elements) {
        const typename decltype(left)::element_type l{{x, y}, z};
        const typename decltype(right)::element_type r{x, {y, z}};
        ASSERT_EQ(left.weight(l), right.weight(r));
        for (std::size_t i = 0; i < n; ++i) {
          ASSERT_EQ(left.eps(l, i), right.eps(r, i)) << left.key(l) << " color " << i + 1;
          ASSERT_EQ(left.phi(l, i), right.phi(r, i)) << left.key(l) << " color " << i + 1;
          auto rebracket = [](const auto& v) { return std::make_pair(v.first.first, std::make_pair(v.first.second, v.second)); };
          const auto fl = left.f(l, i);
          const auto fr = right.f(r, i);
          ASSERT_EQ(fl.has_value(), fr.has_value()) << left.key(l);
          if (fl) ASSERT_EQ(rebracket(*fl), *fr) << left.key(l);
          const auto el = left.e(l, i);
          const auto er = right.e(r, i);
          ASSERT_EQ(el.has_value(), er.has_value()) << left.key(l);
          if (el) ASSERT_EQ(rebracket(*el), *er) << left.key(l);
        }
      }
}

template <class Visit>
void for_each_triple(const Visit& kinds) {
  kinds([&](const auto& a) {
    kinds([&](const auto& b) { kinds([&](const auto& c) { expect_associative(a, b, c); }); });
  });
}

Sample<GraphCrystal> graph_sample(const char* type, std::vector<Int> lam) {
  GraphCrystal g(blambda(type, std::move(lam)));
  std::vector<std::size_t> all(g.graph().size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return {g, all};
}

Sample<ElementaryCrystal> elementary_sample(const CartanDatum& c, std::size_t i) {
  return {ElementaryCrystal(c, i), {-2, -1, 0, 1, 2}};
}

}  // namespace

TEST(ExtInt, Arithmetic) {
  const ExtInt inf = ExtInt::neg_inf();
  EXPECT_TRUE(inf.is_neg_inf());
  EXPECT_EQ(inf + ExtInt(5), inf);
  EXPECT_EQ(inf - 3, inf);
  EXPECT_EQ(ExtInt(2) + ExtInt(3), ExtInt(5));
  EXPECT_LT(inf, ExtInt(-1000000));
  EXPECT_EQ(max(inf, ExtInt(-7)), ExtInt(-7));
  EXPECT_EQ(max(ExtInt(4), inf), ExtInt(4));
  EXPECT_EQ(max(inf, inf), inf);
  EXPECT_EQ(inf.to_string(), "-inf");
  EXPECT_NE(inf, ExtInt(0));
}

TEST(TensorStructure, Examples) {
  const auto c = CartanDatum::preset("A1");
  // eps(b1) = 0, eps(b2) = 1, wt_1(b1) = 2
  const StructureValues b1{WeightVector::fundamental(1, 0) + WeightVector::fundamental(1, 0), 0, 2};
  const StructureValues b2{WeightVector::fundamental(1, 0), 1, 2};
  EXPECT_EQ(tensor_structure(c, b1, b2, 0).eps, ExtInt(0));

  const TCrystal t(c, WeightVector::from_lambda({3}));
  const auto s = tensor_structure(c, b1, structure_of(t, t.element(), 0), 0);
  EXPECT_EQ(s.phi, ExtInt(2 + 3));
  EXPECT_EQ(s.wt, b1.wt + t.lambda());

  const ElementaryCrystal e(c, 0);
  const auto z = tensor_structure(c, structure_of(e, Int{0}, 0), structure_of(e, Int{0}, 0), 0);
  EXPECT_EQ(z.eps, ExtInt(0));
  EXPECT_EQ(z.phi, ExtInt(0));
}

TEST(TensorRouting, StrictForFTieForE) {
  EXPECT_EQ(route_f(ExtInt(2), ExtInt(1)), Side::left);
  EXPECT_EQ(route_f(ExtInt(1), ExtInt(1)), Side::right);
  EXPECT_EQ(route_e(ExtInt(1), ExtInt(1)), Side::left);
  EXPECT_EQ(route_e(ExtInt(0), ExtInt(1)), Side::right);
  // against t_lambda (eps = -inf) f always acts on the left
  EXPECT_EQ(route_f(ExtInt(-5), ExtInt::neg_inf()), Side::left);
}

TEST(TensorCrystal, ZeroWhenRoutedFactorVanishes) {
  const auto c = CartanDatum::preset("A1");
  const auto product = tensor(TCrystal(c, WeightVector::from_lambda({1})), ElementaryCrystal(c, 0));
  // left factor t has phi = -inf < eps(b(0)) = 0, so both operators go right
  EXPECT_EQ(product.f({{}, 0}, 0)->second, -1);
  const auto product2 = tensor(ElementaryCrystal(c, 0), TCrystal(c, WeightVector::from_lambda({1})));
  EXPECT_EQ(product2.f({0, {}}, 0)->first, -1);
  const auto tt = tensor(TCrystal(c, WeightVector::zero(1)), TCrystal(c, WeightVector::zero(1)));
  EXPECT_FALSE(tt.f({{}, {}}, 0).has_value());
  EXPECT_FALSE(tt.e({{}, {}}, 0).has_value());
}

TEST(TensorCrystal, RejectsMismatchedCartan) {
  EXPECT_THROW(tensor(TCrystal(CartanDatum::preset("A1"), WeightVector::zero(1)),
                      TCrystal(CartanDatum::preset("A2"), WeightVector::zero(2))),
               InputError);
}

TEST(TensorCrystal, AssociativeOnA1) {
  const auto c = CartanDatum::preset("A1");
  const auto b = graph_sample("A1", {1});
  const auto b2 = graph_sample("A1", {2});
  const Sample<TCrystal> t{TCrystal(c, WeightVector::from_lambda({1})), {TCrystal::element_type{}}};
  const auto e = elementary_sample(c, 0);
  for_each_triple([&](const auto& visit) {
    visit(b);
    visit(b2);
    visit(t);
    visit(e);
  });
}

TEST(TensorCrystal, AssociativeOnA2) {
  const auto c = CartanDatum::preset("A2");
  const auto b = graph_sample("A2", {1, 0});
  const auto b2 = graph_sample("A2", {0, 1});
  const Sample<TCrystal> t{TCrystal(c, WeightVector::from_lambda({1, 1})), {TCrystal::element_type{}}};
  const auto e1 = elementary_sample(c, 0);
  const auto e2 = elementary_sample(c, 1);
  for_each_triple([&](const auto& visit) {
    visit(b);
    visit(b2);
    visit(t);
    visit(e1);
    visit(e2);
  });
}

TEST(CheckAxioms, Sl2StringIsClean) {
  const auto g = blambda("A1", {2});
  ASSERT_EQ(g.size(), 3u);
  EXPECT_TRUE(check_axioms(g, {.string_lengths = true}).ok());
}

TEST(CheckAxioms, TLambdaAndElementaryAreClean) {
  const auto c = CartanDatum::preset("A2");
  const auto t = materialize(TCrystal(c, WeightVector::from_lambda({2, 1})), {TCrystal::element_type{}});
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(check_axioms(t).ok());
  // a window of the elementary crystal; links leaving it are marked and skipped
  const auto e = materialize(ElementaryCrystal(c, 1), {Int{0}}, [](Int n) { return n >= -4 && n <= 4; });
  EXPECT_EQ(e.size(), 9u);
  EXPECT_TRUE(e.truncated());
  EXPECT_TRUE(check_axioms(e).ok());
}

TEST(CheckAxioms, TensorOfCleanCrystalsIsClean) {
  const auto c = CartanDatum::preset("A2");
  GraphCrystal b(blambda("A2", {1, 1}));
  const auto product = tensor(b, TCrystal(c, WeightVector::from_lambda({0, 2})));
  std::vector<decltype(product)::element_type> seeds;
  for (std::size_t k = 0; k < b.graph().size(); ++k) seeds.push_back({k, {}});
  EXPECT_TRUE(check_axioms(materialize(product, seeds)).ok());
}

TEST(CheckAxioms, PerturbedEpsIsReported) {
  auto nodes = nodes_of(blambda("A1", {2}));
  nodes[1].eps[0] = nodes[1].eps[0] + ExtInt(1);
  const CrystalGraph g(CartanDatum::preset("A1"), nodes);
  const auto report = check_axioms(g);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(has_check(report.violations, axiom::phi_balance));
  bool located = false;
  for (const auto& v : report.violations) located = located || (v.check == axiom::phi_balance && v.element == nodes[1].key);
  EXPECT_TRUE(located);
}

TEST(CheckAxioms, DeletedEdgeIsReported) {
  auto nodes = nodes_of(blambda("A2", {1, 1}));
  std::size_t victim = 0;
  while (!nodes[victim].f[0].is_to()) ++victim;
  nodes[victim].f[0] = Link::none();
  // with explicit e-links the dangling inverse is caught directly
  const auto with_e = check_axioms(CrystalGraph(CartanDatum::preset("A2"), nodes));
  EXPECT_TRUE(has_check(with_e.violations, axiom::inverse_pair));
  // with derived e-links the string lengths expose it
  for (auto& nd : nodes) nd.e.clear();
  const CrystalGraph derived(CartanDatum::preset("A2"), nodes);
  EXPECT_TRUE(check_axioms(derived).ok());
  EXPECT_TRUE(has_check(check_axioms(derived, {.string_lengths = true}).violations, axiom::string_length));
}

TEST(CheckAxioms, WrongShiftAndIsolation) {
  const auto c = CartanDatum::preset("A1");
  std::vector<CrystalNode> nodes{
      {"a", WeightVector::from_lambda({1}), {ExtInt(0)}, {ExtInt(1)}, {Link::to(1)}, {}},
      {"b", WeightVector::from_lambda({1}), {ExtInt(1)}, {ExtInt(3)}, {Link::none()}, {}},
  };
  const auto r = check_axioms(CrystalGraph(c, nodes));
  EXPECT_TRUE(has_check(r.violations, axiom::lower_shift));
  EXPECT_TRUE(has_check(r.violations, axiom::raise_shift));

  std::vector<CrystalNode> iso{
      {"x", WeightVector::zero(1), {ExtInt::neg_inf()}, {ExtInt::neg_inf()}, {Link::to(1)}, {}},
      {"y", WeightVector::zero(1) - WeightVector::simple_root(1, 0), {ExtInt::neg_inf()}, {ExtInt::neg_inf()}, {Link::none()}, {}},
  };
  EXPECT_TRUE(has_check(check_axioms(CrystalGraph(c, iso)).violations, axiom::isolated));
}

TEST(CrystalGraph, RejectsMalformedInput) {
  const auto c = CartanDatum::preset("A1");
  CrystalNode good{"a", WeightVector::zero(1), {ExtInt(0)}, {ExtInt(0)}, {Link::none()}, {}};
  EXPECT_THROW(CrystalGraph(c, {good, good}), InputError);
  CrystalNode short_node = good;
  short_node.eps.clear();
  EXPECT_THROW(CrystalGraph(c, {short_node}), InputError);
  CrystalNode dangling = good;
  dangling.f[0] = Link::to(7);
  EXPECT_THROW(CrystalGraph(c, {dangling}), InputError);
}

TEST(CheckMorphism, IdentityIsStrict) {
  const auto g = blambda("A2", {1, 1});
  ElementMap id;
  for (std::size_t b = 0; b < g.size(); ++b) id[b] = b;
  EXPECT_TRUE(check_morphism(g, g, id, true).ok());
}

TEST(CheckMorphism, WrongWeightIsReported) {
  const auto g = blambda("A1", {2});
  ElementMap m;
  for (std::size_t b = 0; b < g.size(); ++b) m[b] = b;
  m[0] = 1;
  EXPECT_TRUE(has_check(check_morphism(g, g, m, false).violations, morphism::preserves_structure));
}

TEST(CheckMorphism, ProjectionFromBInfinityIsStrict) {
  const auto c = CartanDatum::preset("A2");
  const auto lam = WeightVector::from_lambda({1, 1});
  const auto g = generate_blambda(c, lam, 4);
  const auto source = materialize_binf_tensor_t(c, lam, 5, IotaSequence::standard(2));
  ElementMap pi;
  for (std::size_t x = 0; x < source.size(); ++x) {
    // keys of source are "[s x t]", keys of g are s
    const std::string& key = source.node(x).key;
    const std::string s = key.substr(1, key.size() - 1 - std::string(" x t]").size());
    pi[x] = g.graph.find(s);
  }
  std::set<std::size_t> hit;
  for (const auto& [x, y] : pi)
    if (y) hit.insert(*y);
  EXPECT_EQ(hit.size(), g.graph.size());
  EXPECT_TRUE(check_morphism(source, g.graph, pi, true).ok());
}

TEST(ConnectedComponents, ClebschGordanA1) {
  const auto c = CartanDatum::preset("A1");
  for (Int a = 1; a <= 3; ++a) {
    for (Int b = 1; b <= 3; ++b) {
      GraphCrystal x(blambda("A1", {a}));
      GraphCrystal y(blambda("A1", {b}));
      std::vector<std::pair<std::size_t, std::size_t>> seeds;
      for (std::size_t i = 0; i < x.graph().size(); ++i)
        for (std::size_t j = 0; j < y.graph().size(); ++j) seeds.emplace_back(i, j);
      const auto g = materialize(tensor(x, y), seeds);
      std::multiset<Int> sizes;
      for (const auto& part : connected_components(g)) sizes.insert(static_cast<Int>(part.size()));
      EXPECT_EQ(sizes, oracle::sl2_tensor_component_sizes(a, b));
    }
  }
}

TEST(ConnectedComponents, OrderingAndDisjointUnion) {
  const auto one = blambda("A1", {1});
  EXPECT_EQ(connected_components(one).size(), 1u);
  auto nodes = nodes_of(blambda("A1", {2}));
  auto extra = nodes_of(one);
  for (auto& nd : extra) {
    nd.key = "z" + nd.key;
    for (auto& l : nd.f)
      if (l.is_to()) l.target += nodes.size();
    for (auto& l : nd.e)
      if (l.is_to()) l.target += nodes.size();
  }
  nodes.insert(nodes.end(), extra.begin(), extra.end());
  const auto parts = connected_components(CrystalGraph(CartanDatum::preset("A1"), nodes));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].size(), 2u);
  EXPECT_EQ(parts[1].size(), 3u);
}

TEST(Characterization, PassesOnGeneratedCrystals) {
  for (auto [type, lam] : std::vector<std::pair<const char*, std::vector<Int>>>{
           {"A1", {2}}, {"A1", {5}}, {"A2", {1, 0}}, {"A2", {1, 1}}, {"A2", {0, 0}}, {"A3", {0, 1, 0}}}) {
    const auto c = CartanDatum::preset(type);
    const auto w = WeightVector::from_lambda(lam);
    const auto g = generate_blambda(c, w, lowest_weight_depth(c, w));
    const auto report = verify_highest_weight_characterization(g.graph, g.top(), w);
    EXPECT_TRUE(report.passed()) << type;
    EXPECT_TRUE(report.violations.empty());
  }
}

TEST(Characterization, SecondTopFailsUniqueness) {
  auto nodes = nodes_of(blambda("A1", {2}));
  CrystalNode twin = nodes[0];
  twin.key = "twin";
  for (auto& l : twin.f) l = Link::none();
  for (auto& l : twin.e) l = Link::none();
  twin.phi[0] = ExtInt(2);
  nodes.push_back(twin);
  const CrystalGraph g(CartanDatum::preset("A1"), nodes);
  const auto top = *g.find("()");
  const auto report = verify_highest_weight_characterization(g, top, WeightVector::from_lambda({2}));
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(report.unique_top);
  EXPECT_TRUE(has_check(report.violations, highest_weight::unique_top));
}

TEST(Characterization, DeletedEdgeFailsStrictness) {
  // delete an edge whose target is still reached along another color
  const auto g0 = blambda("A2", {1, 1});
  auto nodes = nodes_of(g0);
  bool deleted = false;
  for (std::size_t b = 0; b < nodes.size() && !deleted; ++b) {
    for (std::size_t i = 0; i < 2 && !deleted; ++i) {
      if (!nodes[b].f[i].is_to()) continue;
      const std::size_t target = nodes[b].f[i].target;
      if (g0.f_in_degree(target, 1 - i) == 0) continue;
      nodes[b].f[i] = Link::none();
      nodes[target].e[i] = Link::none();
      deleted = true;
    }
  }
  ASSERT_TRUE(deleted);
  const CrystalGraph g(CartanDatum::preset("A2"), nodes);
  const auto report = verify_highest_weight_characterization(g, *g.find("()"), WeightVector::from_lambda({1, 1}));
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(report.strict_morphism);
}

TEST(Characterization, DepthMustCoverGraph) {
  const auto g = blambda("A2", {1, 1});
  EXPECT_THROW(verify_highest_weight_characterization(g, *g.find("()"), WeightVector::from_lambda({1, 1}), 2),
               DepthError);
}

TEST(Isomorphism, DetectsRelabeling) {
  const auto g = blambda("A2", {2, 1});
  const auto iso = isomorphism_from_tops(g, *g.find("()"), g, *g.find("()"));
  ASSERT_TRUE(iso.has_value());
  for (std::size_t b = 0; b < g.size(); ++b) EXPECT_EQ((*iso)[b], b);
  const auto other = blambda("A2", {1, 2});
  EXPECT_FALSE(isomorphism_from_tops(g, *g.find("()"), other, *other.find("()")).has_value());
}
