#include <gtest/gtest.h>

#include <random>
#include <set>

#include <qcrys/binfinity.hpp>
#include <qcrys/characterize.hpp>
#include <qcrys/checks.hpp>

#include "oracles.hpp"

using namespace qcrys;

namespace {

// the elements reached from the highest one by at most `steps` lowering operators
std::vector<StringElement> reachable(const BInfinityCrystal& b, int steps) {
  std::set<StringElement> seen{b.highest()};
  std::vector<StringElement> frontier{b.highest()};
  for (int k = 0; k < steps; ++k) {
    std::vector<StringElement> next;
    for (const auto& s : frontier)
      for (std::size_t i = 0; i < b.cartan().rank(); ++i)
        if (auto t = b.f(s, i); t && seen.insert(*t).second) next.push_back(*t);
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

struct Case {
  const char* type;
  std::vector<Int> lam;
};

}  // namespace

TEST(IotaSequence, Validation) {
  EXPECT_NO_THROW(IotaSequence({1, 0, 2}, 3));
  EXPECT_THROW(IotaSequence({}, 2), InputError);
  EXPECT_THROW(IotaSequence({0, 0}, 2), InputError);
  EXPECT_THROW(IotaSequence({0, 2}, 2), InputError);
  const auto iota = IotaSequence({1, 0}, 2);
  EXPECT_EQ(iota.color(0), 1u);
  EXPECT_EQ(iota.color(5), 0u);
  EXPECT_EQ(iota.next_position(2, 0), 3u);
  EXPECT_THROW(BInfinityCrystal(CartanDatum::preset("A3"), IotaSequence::standard(2)), InputError);
}

TEST(StringElement, NormalizesAndRejectsPositive) {
  EXPECT_EQ(StringElement({-1, 0, 0}), StringElement({-1}));
  EXPECT_EQ(StringElement({0, 0}).key(), "()");
  EXPECT_TRUE(StringElement({0}).is_highest());
  EXPECT_EQ(StringElement({-2, 0, -1}).key(), "(-2,0,-1)");
  EXPECT_EQ(StringElement({-2}).at(7), 0);
  EXPECT_THROW(StringElement({-1, 1}), InputError);
}

TEST(BInfinity, Sl2Examples) {
  const BInfinityCrystal b(CartanDatum::preset("A1"));
  const StringElement s({-1});
  EXPECT_EQ(b.eps(s, 0), ExtInt(1));
  EXPECT_EQ(b.phi(s, 0), ExtInt(-1));
  EXPECT_EQ(b.weight(s), WeightVector::from_root({-1}));
  EXPECT_EQ(*b.f(b.highest(), 0), s);
  EXPECT_FALSE(b.e(b.highest(), 0).has_value());
  EXPECT_EQ(*b.e(s, 0), b.highest());
  // on sl2 B(infinity) is a single infinite string
  for (Int n = 0; n < 8; ++n) {
    const StringElement x(std::vector<Int>{-n});
    EXPECT_EQ(b.eps(x, 0), ExtInt(n));
    EXPECT_EQ(b.phi(x, 0), ExtInt(-n));
    EXPECT_EQ(*b.f(x, 0), StringElement(std::vector<Int>{-n - 1}));
  }
}

TEST(BInfinity, HighestElement) {
  for (const char* type : {"A2", "A3", "D4", "A2~"}) {
    const BInfinityCrystal b(CartanDatum::preset(type));
    for (std::size_t i = 0; i < b.cartan().rank(); ++i) {
      EXPECT_EQ(b.eps(b.highest(), i), ExtInt(0)) << type;
      EXPECT_EQ(b.phi(b.highest(), i), ExtInt(0)) << type;
      EXPECT_FALSE(b.e(b.highest(), i).has_value());
      EXPECT_TRUE(b.f(b.highest(), i).has_value());
    }
  }
}

TEST(BInfinity, OperatorsAreMutuallyInverse) {
  for (const char* type : {"A2", "A3", "A2~"}) {
    const auto c = CartanDatum::preset(type);
    for (const auto& iota : {IotaSequence::standard(c.rank()), IotaSequence({1, 0, 2}, 3)}) {
      if (iota.cycle().size() != c.rank()) continue;
      const BInfinityCrystal b(c, iota);
      for (const auto& s : reachable(b, 5)) {
        for (std::size_t i = 0; i < c.rank(); ++i) {
          const auto fs = b.f(s, i);
          ASSERT_TRUE(fs.has_value());
          EXPECT_EQ(*b.e(*fs, i), s) << type << " " << s.key();
          EXPECT_EQ(b.eps(*fs, i), b.eps(s, i) + ExtInt(1));
          EXPECT_EQ(b.weight(*fs), b.weight(s) - WeightVector::simple_root(c.rank(), i));
          if (const auto es = b.e(s, i)) {
            EXPECT_EQ(*b.f(*es, i), s);
          } else {
            EXPECT_EQ(b.eps(s, i), ExtInt(0));
          }
          // phi = eps + <h_i, wt>
          EXPECT_EQ(b.phi(s, i), b.eps(s, i) + ExtInt(pairing(c, i, b.weight(s))));
        }
      }
    }
  }
}

TEST(BInfinity, TruncationSatisfiesAxioms) {
  for (const char* type : {"A2", "A3", "A1~"}) {
    const auto c = CartanDatum::preset(type);
    const BInfinityCrystal b(c);
    const auto g = materialize(b, {StringElement()}, [&](const StringElement& s) { return -b.weight(s).height() <= 4; });
    EXPECT_TRUE(g.truncated());
    EXPECT_TRUE(check_axioms(g).ok()) << type;
  }
}

TEST(BInfinity, Sl2WeightSpaceCountsOfA2) {
  // dim U^-_{-nu} for sl3 is the Kostant partition count of nu
  const BInfinityCrystal b(CartanDatum::preset("A2"));
  const auto g = materialize(b, {StringElement()}, [&](const StringElement& s) { return -b.weight(s).height() <= 4; });
  std::map<std::vector<Int>, Int> counts;
  for (const auto& nd : g.nodes()) ++counts[nd.wt.nu];
  // partitions of (a, b) into alpha1, alpha2, alpha1+alpha2: min(a, b) + 1
  for (Int a = 0; a <= 4; ++a)
    for (Int bb = 0; a + bb <= 4; ++bb) EXPECT_EQ((counts[{-a, -bb}]), std::min(a, bb) + 1) << a << "," << bb;
}

TEST(BLambda, RejectsBadInput) {
  const auto c = CartanDatum::preset("A2");
  EXPECT_THROW(generate_blambda(c, WeightVector::from_lambda({-1, 0}), 3), InputError);
  EXPECT_THROW(generate_blambda(c, WeightVector::from_lambda({1}), 3), InputError);
  EXPECT_THROW(generate_blambda(c, WeightVector::from_lambda({1, 0}), -1), InputError);
  EXPECT_THROW(generate_blambda(c, WeightVector::from_root({-1, 0}), 3), InputError);
}

TEST(BLambda, Sl2Strings) {
  const auto c = CartanDatum::preset("A1");
  for (Int k = 0; k <= 6; ++k) {
    const auto g = generate_blambda(c, WeightVector::from_lambda({k}), k + 1);
    ASSERT_EQ(g.graph.size(), static_cast<std::size_t>(k + 1));
    const auto expect = oracle::sl2_string(k);
    for (Int j = 0; j <= k; ++j) {
      const auto node = g.graph.find(StringElement(std::vector<Int>{-j}).key());
      ASSERT_TRUE(node.has_value());
      EXPECT_EQ(g.graph.node(*node).eps[0], ExtInt(expect[j].eps));
      EXPECT_EQ(g.graph.node(*node).phi[0], ExtInt(expect[j].phi));
    }
  }
}

TEST(BLambda, TrivialWeightIsOnePoint) {
  for (const char* type : {"A1", "A2", "D4", "A2~"}) {
    const auto c = CartanDatum::preset(type);
    const auto g = generate_blambda(c, WeightVector::zero(c.rank()), 5);
    EXPECT_EQ(g.graph.size(), 1u) << type;
    EXPECT_FALSE(g.graph.truncated());
  }
}

class BLambdaVsOracle : public ::testing::TestWithParam<Case> {};

TEST_P(BLambdaVsOracle, SizeCharacterAndLaws) {
  const auto& p = GetParam();
  const auto c = CartanDatum::preset(p.type);
  const auto lam = WeightVector::from_lambda(p.lam);
  const Int depth = lowest_weight_depth(c, lam);
  const auto g = generate_blambda(c, lam, depth);
  EXPECT_FALSE(g.graph.truncated());
  EXPECT_EQ(mpq_class(g.graph.size()), oracle::weyl_dimension(c.matrix(), p.lam));

  const auto census = weight_census(g.graph, lam);
  EXPECT_EQ(census.stray, 0u);
  const auto mult = oracle::freudenthal(c.matrix(), p.lam, depth);
  for (const auto& [coef, m] : mult) {
    std::vector<Int> nu(coef.size());
    for (std::size_t k = 0; k < nu.size(); ++k) nu[k] = -coef[k];
    const auto it = census.counts.find(nu);
    EXPECT_EQ(it == census.counts.end() ? 0 : it->second, m);
  }
  Int total = 0;
  for (const auto& [coef, m] : mult) total += m;
  EXPECT_EQ(static_cast<std::size_t>(total), g.graph.size());

  EXPECT_TRUE(check_axioms(g.graph, {.string_lengths = true}).ok());
  EXPECT_TRUE(verify_highest_weight_characterization(g.graph, g.top(), lam).passed());
}

INSTANTIATE_TEST_SUITE_P(Finite, BLambdaVsOracle,
                         ::testing::Values(Case{"A1", {1}}, Case{"A1", {4}}, Case{"A2", {1, 0}}, Case{"A2", {0, 1}},
                                           Case{"A2", {1, 1}}, Case{"A2", {2, 1}}, Case{"A2", {3, 0}},
                                           Case{"A3", {1, 0, 0}}, Case{"A3", {0, 1, 0}}, Case{"A3", {1, 0, 1}},
                                           Case{"A3", {1, 1, 0}}, Case{"D4", {1, 0, 0, 0}}, Case{"D4", {0, 1, 0, 0}},
                                           Case{"D4", {0, 0, 1, 1}}));

TEST(BLambda, IndependentOfIota) {
  const std::vector<std::pair<const char*, std::vector<std::vector<std::size_t>>>> cycles{
      {"A2", {{1, 0}}},
      {"A3", {{2, 1, 0}, {1, 0, 2}, {0, 2, 1}}},
      {"D4", {{3, 2, 1, 0}, {1, 0, 2, 3}}},
  };
  for (const auto& [type, alts] : cycles) {
    const auto c = CartanDatum::preset(type);
    std::vector<WeightVector> lams;
    for (std::size_t i = 0; i < c.rank(); ++i) lams.push_back(WeightVector::fundamental(c.rank(), i));
    lams.push_back(rho(c));
    for (const auto& lam : lams) {
      const Int depth = lowest_weight_depth(c, lam);
      if (depth > 12) continue;
      const auto base = generate_blambda(c, lam, depth);
      for (const auto& cyc : alts) {
        const auto other = generate_blambda(c, lam, depth, IotaSequence(cyc, c.rank()));
        ASSERT_EQ(other.graph.size(), base.graph.size());
        EXPECT_TRUE(isomorphism_from_tops(base.graph, base.top(), other.graph, other.top()).has_value())
            << type << " " << lam.to_string();
      }
    }
  }
}

TEST(PiLambda, Sl2) {
  const auto c = CartanDatum::preset("A1");
  const auto g = generate_blambda(c, WeightVector::from_lambda({2}), 3);
  EXPECT_EQ(pi_lambda(g, StringElement()), g.top());
  const auto lowest = pi_lambda(g, StringElement({-2}));
  ASSERT_TRUE(lowest.has_value());
  EXPECT_EQ(g.graph.node(*lowest).phi[0], ExtInt(0));
  EXPECT_FALSE(pi_lambda(g, StringElement({-3})).has_value());
}

TEST(PiLambda, TruncatedGraphRaisesDepthError) {
  const auto c = CartanDatum::preset("A1");
  const auto g = generate_blambda(c, WeightVector::from_lambda({5}), 2);
  EXPECT_TRUE(g.graph.truncated());
  EXPECT_TRUE(pi_lambda(g, StringElement({-2})).has_value());
  EXPECT_THROW(pi_lambda(g, StringElement({-3})), DepthError);
  // depth errors are input errors as far as callers are concerned
  EXPECT_THROW(pi_lambda(g, StringElement({-4})), InputError);
}

TEST(PiLambda, CommutesWithLoweringWords) {
  // walking a word in B(lambda) agrees with walking it in B(infinity) (x) T_lambda
  // and projecting at the end
  std::mt19937_64 rng(7);
  for (const Case& p : {Case{"A2", {1, 1}}, Case{"A3", {0, 1, 1}}, Case{"D4", {0, 1, 0, 0}}}) {
    const auto c = CartanDatum::preset(p.type);
    const auto lam = WeightVector::from_lambda(p.lam);
    const auto g = generate_blambda(c, lam, lowest_weight_depth(c, lam));
    const auto product = tensor(BInfinityCrystal(c), TCrystal(c, lam));
    std::uniform_int_distribution<std::size_t> color(0, c.rank() - 1);
    for (int trial = 0; trial < 300; ++trial) {
      std::optional<std::size_t> node = g.top();
      decltype(product)::element_type x{StringElement(), {}};
      const int len = 1 + trial % 8;
      for (int step = 0; step < len; ++step) {
        const std::size_t i = color(rng);
        x = *product.f(x, i);
        if (node) {
          const Link l = g.graph.node(*node).f[i];
          node = l.is_to() ? std::optional<std::size_t>(l.target) : std::nullopt;
        }
      }
      EXPECT_EQ(node, pi_lambda(g, x.first)) << p.type << " " << x.first.key();
    }
  }
}

TEST(BLambda, AffineTruncation) {
  const auto c = CartanDatum::preset("A1~");
  const auto lam = WeightVector::fundamental(2, 0);
  std::size_t previous = 0;
  for (Int depth = 1; depth <= 6; ++depth) {
    const auto g = generate_blambda(c, lam, depth);
    EXPECT_TRUE(g.graph.truncated());
    EXPECT_GT(g.graph.size(), previous);
    previous = g.graph.size();
    EXPECT_TRUE(check_axioms(g.graph).ok());
  }
  // basic representation of affine sl2: principally graded dimensions 1,1,1,2,2,3,4
  const auto g = generate_blambda(c, lam, 6);
  std::map<Int, Int> by_height;
  for (const auto& nd : g.graph.nodes()) ++by_height[-(nd.wt - lam).height()];
  EXPECT_EQ(by_height, (std::map<Int, Int>{{0, 1}, {1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 3}, {6, 4}}));
}
