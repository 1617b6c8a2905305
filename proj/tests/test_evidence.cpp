#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "bba_gen.hpp"
#include "evifuse/error.hpp"
#include "evifuse/evidence.hpp"

using namespace evifuse;
using evidence::Bba;

namespace {

// Independent conjunctive combination over bitmask focal sets, written
// separately from the library's oracle.
std::map<unsigned, double> conjunctive(const std::map<unsigned, double>& a,
                                       const std::map<unsigned, double>& b) {
  std::map<unsigned, double> out;
  for (const auto& [sa, ma] : a) {
    for (const auto& [sb, mb] : b) out[sa & sb] += ma * mb;
  }
  return out;
}

std::map<unsigned, double> as_sets(const Bba& b) {
  std::map<unsigned, double> out;
  for (std::size_t k = 0; k < b.class_count(); ++k) out[1u << k] = b.singletons[k];
  out[(1u << b.class_count()) - 1] = b.ignorance;
  return out;
}

void expect_near(const Bba& a, const Bba& b, double tol) {
  ASSERT_EQ(a.class_count(), b.class_count());
  for (std::size_t k = 0; k < a.class_count(); ++k) EXPECT_NEAR(a.singletons[k], b.singletons[k], tol);
  EXPECT_NEAR(a.ignorance, b.ignorance, tol);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

const Bba kB1{{0.6, 0.0}, 0.4};
const Bba kB2{{0.5, 0.3}, 0.2};

}  // namespace

TEST(Validate, AcceptsProperMassFunctions) {
  EXPECT_NO_THROW(evidence::validate(Bba{{0.3, 0.5}, 0.2}));
  EXPECT_NO_THROW(evidence::validate(Bba{{1.0, 0.0}, 0.0}));
}

TEST(Validate, RejectsBadSums) {
  EXPECT_EQ(kind_of([] { evidence::validate(Bba{{0.6, 0.6}, 0.0}); }), ErrorKind::MassSumViolation);
  EXPECT_EQ(kind_of([] { evidence::validate(Bba{{-0.1, 0.6}, 0.5}); }), ErrorKind::NegativeMass);
}

TEST(Conflict, Examples) {
  EXPECT_DOUBLE_EQ(evidence::conflict(Bba::vacuous(2), kB2), 0.0);
  EXPECT_DOUBLE_EQ(evidence::conflict(Bba::certain(2, 0), Bba::certain(2, 1)), 1.0);
  const auto sets = conjunctive(as_sets(kB1), as_sets(kB2));
  EXPECT_NEAR(sets.at(0), 0.18, 1e-15);
  EXPECT_NEAR(evidence::conflict(kB1, kB2), 0.18, 1e-12);
}

TEST(CombinePair, WorkedExample) {
  // Reference values from enumeration: normalizer 0.82.
  const auto sets = conjunctive(as_sets(kB1), as_sets(kB2));
  const double norm = 1.0 - sets.at(0);
  const Bba expected{{sets.at(1) / norm, sets.at(2) / norm}, sets.at(3) / norm};
  EXPECT_NEAR(expected.singletons[0], 0.7561, 1e-4);
  EXPECT_NEAR(expected.singletons[1], 0.1463, 1e-4);
  EXPECT_NEAR(expected.ignorance, 0.0976, 1e-4);

  const auto fused = evidence::combine_pair(kB1, kB2);
  expect_near(fused, expected, 1e-12);
  expect_near(fused, Bba{{0.7561, 0.1463}, 0.0976}, 1e-3);
}

TEST(CombinePair, VacuousIsNeutral) {
  expect_near(evidence::combine_pair(Bba::vacuous(2), kB2), kB2, 1e-12);
}

TEST(CombinePair, TotalConflictThrows) {
  EXPECT_EQ(kind_of([] { evidence::combine_pair(Bba::certain(2, 0), Bba::certain(2, 1)); }),
            ErrorKind::TotalConflict);
}

TEST(CombinePair, FrameMismatchThrows) {
  EXPECT_EQ(kind_of([] { evidence::combine_pair(Bba::vacuous(2), Bba::vacuous(3)); }),
            ErrorKind::FrameMismatch);
}

TEST(CombineSequence, IdentityAndNeutral) {
  const std::vector<Bba> one{kB2};
  expect_near(evidence::combine_sequence(one), kB2, 0.0);
  const std::vector<Bba> three{kB2, Bba::vacuous(2), Bba::vacuous(2)};
  expect_near(evidence::combine_sequence(three), kB2, 1e-12);
}

TEST(CombineSequence, ConflictCarriesPairIndex) {
  const std::vector<Bba> list{Bba::vacuous(2), Bba::certain(2, 0), Bba::certain(2, 1)};
  try {
    evidence::combine_sequence(list);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TotalConflict);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 2u);
  }
}

TEST(CombinePair, RandomizedAlgebra) {
  Rng rng(11);
  for (std::size_t k = 2; k <= 5; ++k) {
    for (int t = 0; t < 300; ++t) {
      const auto a = fixtures::random_bba(rng, k);
      const auto b = fixtures::random_bba(rng, k);
      const auto c = fixtures::random_bba(rng, k);
      const auto ab = evidence::combine_pair(a, b);
      EXPECT_NO_THROW(evidence::validate(ab));
      expect_near(ab, evidence::combine_pair(b, a), 1e-12);
      expect_near(evidence::combine_pair(Bba::vacuous(k), a), a, 1e-12);
      if (evidence::conflict(a, b) < 0.99 && evidence::conflict(b, c) < 0.99 &&
          evidence::conflict(a, c) < 0.99) {
        expect_near(evidence::combine_pair(ab, c), evidence::combine_pair(a, evidence::combine_pair(b, c)), 1e-9);
      }
    }
  }
}

TEST(CombineInto, MatchesCombinePair) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto a = fixtures::random_bba(rng, 3);
    const auto b = fixtures::random_bba(rng, 3);
    std::vector<double> acc = a.singletons;
    double ign = a.ignorance;
    ASSERT_TRUE(evidence::combine_into(acc, ign, b.singletons, b.ignorance));
    expect_near(Bba{acc, ign}, evidence::combine_pair(a, b), 1e-15);
  }
  std::vector<double> acc{1.0, 0.0};
  double ign = 0.0;
  const std::vector<double> other{0.0, 1.0};
  EXPECT_FALSE(evidence::combine_into(acc, ign, other, 0.0));
}

TEST(PowersetOracle, Examples) {
  const std::vector<evidence::GeneralBba> vac{evidence::GeneralBba::from(Bba::vacuous(2)),
                                              evidence::GeneralBba::from(Bba::vacuous(2))};
  const auto v = evidence::combine_powerset_oracle(vac);
  EXPECT_NEAR(v.masses.at(0b11), 1.0, 1e-15);

  const std::vector<evidence::GeneralBba> sub{evidence::GeneralBba::from(Bba::vacuous(2)),
                                              evidence::GeneralBba::from(Bba::certain(2, 0))};
  EXPECT_NEAR(evidence::combine_powerset_oracle(sub).masses.at(0b01), 1.0, 1e-15);
}

TEST(PowersetOracle, FrameTooLarge) {
  const std::vector<evidence::GeneralBba> big{evidence::GeneralBba::from(Bba::vacuous(7))};
  EXPECT_EQ(kind_of([&] { evidence::combine_powerset_oracle(big); }), ErrorKind::FrameTooLarge);
}

TEST(PowersetOracle, AgreesWithClosedForm) {
  Rng rng(2024);
  for (std::size_t k : {2u, 3u, 4u, 6u}) {
    for (int t = 0; t < 200; ++t) {
      std::vector<Bba> list{fixtures::random_bba(rng, k), fixtures::random_bba(rng, k),
                            fixtures::random_bba(rng, k)};
      std::vector<evidence::GeneralBba> general;
      for (const auto& b : list) general.push_back(evidence::GeneralBba::from(b));
      const auto closed = evidence::combine_sequence(list);
      const auto oracle = evidence::combine_powerset_oracle(general);
      for (std::size_t c = 0; c < k; ++c) {
        const auto it = oracle.masses.find(1u << c);
        EXPECT_NEAR(closed.singletons[c], it == oracle.masses.end() ? 0.0 : it->second, 1e-12);
      }
      EXPECT_NEAR(closed.ignorance, oracle.masses.at(oracle.frame_mask()), 1e-12);
    }
  }
}
