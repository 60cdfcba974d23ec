#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "support/oracle.hpp"
#include "vbs/algebra.hpp"
#include "vbs/commonality.hpp"
#include "vbs/potential.hpp"
#include "vbs/relation.hpp"
#include "vbs/sampling.hpp"

using namespace vbs;

namespace {

oracle::Table as_oracle(const ProbabilityPotential& p) {
  std::vector<double> v(p.table());
  return {p.scope(), std::move(v)};
}

bool close(const std::vector<double>& a, const std::vector<double>& b,
           double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("potential combination and marginalization match the nested-loop oracle") {
  const ModelPtr m = make_test_model(6);
  PotentialSampler sampler(m, 18);
  for (int i = 0; i < 200; ++i) {
    const ProbabilityPotential a = sampler.arbitrary(sampler.random_scope());
    const ProbabilityPotential b = sampler.arbitrary(sampler.random_scope());
    const ProbabilityPotential c = combine(a, b);
    const oracle::Table expect = oracle::product(*m, {as_oracle(a), as_oracle(b)});
    REQUIRE_EQ(c.scope(), expect.scope);
    CHECK(close(c.table(), expect.values));

    const VarSet r = sampler.random_subscope(c.scope());
    const oracle::Table down = oracle::marginal(*m, expect, r);
    CHECK(close(marginalize(c, r).table(), down.values));
  }
}

TEST_CASE("potential removal is pointwise pseudo-division over the union") {
  const ModelPtr m = make_test_model(5, {2, 3});
  PotentialSampler sampler(m, 77);
  for (int i = 0; i < 100; ++i) {
    const ProbabilityPotential a = sampler.arbitrary(sampler.random_scope());
    const ProbabilityPotential b = sampler.arbitrary(sampler.random_scope());
    const ProbabilityPotential q = remove(a, b);
    const oracle::Table ta = as_oracle(a), tb = as_oracle(b);
    const VarSet u = a.scope() | b.scope();
    REQUIRE_EQ(q.scope(), u);
    for (std::size_t x = 0; x < q.entry_count(); ++x) {
      const double num = ta.values[oracle::project_index(*m, u, x, ta.scope)];
      const double den = tb.values[oracle::project_index(*m, u, x, tb.scope)];
      const double want = den == 0.0 ? 0.0 : num / den;
      CHECK(q.entry(x) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("potentials read configuration values through scope projection") {
  const ModelPtr m = make_test_model(3, {2, 3, 2});
  const VarSet s{0, 2};
  ProbabilityPotential p(m, s, {1, 2, 3, 4});
  // Configuration over a larger scope still addresses the right entry.
  Configuration c{m->all_vars(), {1, 2, 0}};
  CHECK_EQ(p.value_at(c), 3.0);  // V0=1, V2=0 -> index 2
  CHECK_EQ(p.value_at(Configuration{s, {0, 1}}), 2.0);
  CHECK_EQ(p.total(), 10.0);
  CHECK(p.normalized().is_normal());
}

TEST_CASE("commonality tables round-trip through mass space") {
  const ModelPtr m = make_test_model(3);
  CommonalitySampler sampler(m, 4242);
  for (int i = 0; i < 120; ++i) {
    const VarSet s = sampler.random_scope();
    const CommonalityTable q = sampler.normal(s);
    const std::vector<double> masses = q.to_masses();
    CHECK_EQ(masses[0], 0.0);
    const CommonalityTable back = CommonalityTable::from_masses(m, s, masses);
    CHECK(approx_equal(q, back, 1e-12));
    double total = 0.0;
    for (double w : masses) total += w;
    CHECK_EQ(q.total_mass(), doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("commonality combination agrees with focal-set mass arithmetic") {
  const ModelPtr m = make_test_model(4);
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  auto random_mass = [&](const VarSet& s) {
    const std::size_t n = oracle::space(*m, s);
    oracle::MassTable t{s, {}};
    std::uniform_int_distribution<std::uint32_t> mask(
        1, static_cast<std::uint32_t>((std::uint32_t{1} << n) - 1));
    for (int f = 0; f < 4; ++f) t.mass[mask(rng)] += weight(rng);
    return t;
  };
  auto to_engine = [&](const oracle::MassTable& t) {
    std::vector<double> masses(std::size_t{1} << oracle::space(*m, t.scope), 0.0);
    for (const auto& [mask, w] : t.mass) masses[mask] = w;
    return CommonalityTable::from_masses(m, t.scope, masses);
  };

  const std::vector<VarSet> scopes{VarSet{0, 1}, VarSet{1, 2}, VarSet{2, 3},
                                   VarSet{0}, VarSet{3}};
  for (int i = 0; i < 60; ++i) {
    for (std::size_t si = 0; si < scopes.size(); ++si) {
      for (std::size_t sj = si; sj < scopes.size(); ++sj) {
        const oracle::MassTable ma = random_mass(scopes[si]);
        const oracle::MassTable mb = random_mass(scopes[sj]);
        const CommonalityTable got = combine(to_engine(ma), to_engine(mb));
        const std::vector<double> want =
            oracle::commonality_of(*m, oracle::dempster(*m, ma, mb));
        REQUIRE_EQ(got.entry_count(), want.size());
        std::vector<double> entries;
        for (std::size_t e = 0; e < got.entry_count(); ++e)
          entries.push_back(got.entry(e));
        CHECK(close(entries, want, 1e-9));
      }
    }
  }
}

TEST_CASE("commonality marginalization is mass projection") {
  const ModelPtr m = make_test_model(3);
  CommonalitySampler sampler(m, 616);
  for (int i = 0; i < 120; ++i) {
    const VarSet s = sampler.random_scope();
    const CommonalityTable q = sampler.normal(s);
    const VarSet r = sampler.random_subscope(s);

    oracle::MassTable masses{s, {}};
    const std::vector<double> mv = q.to_masses();
    for (std::uint32_t mask = 1; mask < mv.size(); ++mask) {
      if (mv[mask] != 0.0) masses.mass[mask] = mv[mask];
    }
    const std::vector<double> want =
        oracle::commonality_of(*m, oracle::project(*m, masses, r));
    const CommonalityTable got = marginalize(q, r);
    std::vector<double> entries;
    for (std::size_t e = 0; e < got.entry_count(); ++e)
      entries.push_back(got.entry(e));
    CHECK(close(entries, want, 1e-9));
  }
}

TEST_CASE("oversized commonality scopes are refused") {
  const ModelPtr m = make_test_model(6);  // 64 configurations
  const std::vector<double> junk(7, 1.0);
  CHECK_THROWS_AS(CommonalityTable::identity(m, m->all_vars()), CapabilityError);
  CHECK_THROWS_AS(CommonalityTable(m, m->all_vars(), junk), CapabilityError);

  // Combination whose union would blow past the limit is refused too.
  const ModelPtr big = make_test_model(10);
  const CommonalityTable a =
      CommonalityTable::identity(big, VarSet{0, 1, 2, 3});
  const CommonalityTable b =
      CommonalityTable::identity(big, VarSet{4, 5, 6, 7});
  CHECK_THROWS_AS(combine(a, b), CapabilityError);
}

TEST_CASE("commonality positivity grading distinguishes vacuous parts") {
  const ModelPtr m = make_test_model(2);
  // Mass concentrated on one configuration: commonality vanishes elsewhere.
  std::vector<double> pointed(1 << 2, 0.0);
  pointed[1] = 1.0;
  const CommonalityTable q =
      CommonalityTable::from_masses(m, VarSet{0}, pointed);
  CHECK(q.is_normal());
  CHECK_FALSE(q.is_positive_normal());

  std::vector<double> spread(1 << 2, 0.0);
  spread[1] = 0.5;
  spread[3] = 0.5;
  const CommonalityTable u = CommonalityTable::from_masses(m, VarSet{0}, spread);
  CHECK(u.is_positive_normal());
}

TEST_CASE("relations join with AND and project with OR") {
  const ModelPtr m = make_test_model(5);
  RelationSampler sampler(m, 2024);
  for (int i = 0; i < 150; ++i) {
    const BooleanRelation a = sampler.arbitrary(sampler.random_scope());
    const BooleanRelation b = sampler.arbitrary(sampler.random_scope());
    const BooleanRelation j = combine(a, b);

    oracle::Table ta{a.scope(), {}}, tb{b.scope(), {}};
    for (std::size_t x = 0; x < a.entry_count(); ++x) ta.values.push_back(a.entry(x));
    for (std::size_t x = 0; x < b.entry_count(); ++x) tb.values.push_back(b.entry(x));
    const oracle::Table prod = oracle::product(*m, {ta, tb});
    REQUIRE_EQ(j.scope(), prod.scope);
    for (std::size_t x = 0; x < j.entry_count(); ++x)
      CHECK_EQ(j.entry(x), prod.values[x] > 0.0 ? 1.0 : 0.0);

    const VarSet r = sampler.random_subscope(j.scope());
    const BooleanRelation down = marginalize(j, r);
    const oracle::Table sums = oracle::marginal(*m, prod, r);
    for (std::size_t x = 0; x < down.entry_count(); ++x)
      CHECK_EQ(down.entry(x), sums.values[x] > 0.0 ? 1.0 : 0.0);
  }
}

TEST_CASE("relations expose rows and normality as emptiness") {
  const ModelPtr m = make_test_model(2);
  const BooleanRelation r(m, m->all_vars(), {0, 1, 1, 0});
  CHECK(r.is_normal());
  CHECK_FALSE(r.is_zero());
  CHECK(r.holds_at(1));       // first variable 0, second 1
  CHECK_FALSE(r.holds_at(0));
  CHECK(BooleanRelation::zero(m, VarSet{0}).is_zero());
  CHECK_FALSE(BooleanRelation::zero(m, VarSet{0}).is_normal());
}
