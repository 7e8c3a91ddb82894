#include "support.hpp"

#include <gtest/gtest.h>

using namespace boxgal;

namespace {

IntPoly poly(std::vector<std::int64_t> lower) { return IntPoly::from_lower(lower); }

// Integer roots by scanning a window that contains every root of a monic
// cubic with coefficients bounded by 60 (Cauchy bound).
bool has_integer_root_scan(const IntPoly& f) {
  for (std::int64_t x = -200; x <= 200; ++x)
    if (f.evaluate(x) == 0) return true;
  return false;
}

}  // namespace

TEST(CycleType, FactorPatterns) {
  auto f = parse_intpoly("X^5-X-1");
  auto t = cycle_type(f, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->parts, (std::vector<unsigned>{2, 3}));
  EXPECT_TRUE(t->is_odd());
  EXPECT_TRUE(t->isolates_cycle(2));
  EXPECT_TRUE(t->isolates_cycle(3));
  // ramified prime gives no type
  EXPECT_FALSE(cycle_type(parse_intpoly("X^2+1"), 2).has_value());
  CycleType u{{2, 2, 1}, 0};
  EXPECT_FALSE(u.isolates_cycle(2));
  EXPECT_FALSE(u.is_odd());
}

TEST(IntegerRoot, AgreesWithScan) {
  testsupport::Gen g(61);
  for (int t = 0; t < 500; ++t) {
    auto f = poly({g.range(-60, 60), g.range(-60, 60), g.range(-60, 60)});
    EXPECT_EQ(integer_root(f).has_value(), has_integer_root_scan(f)) << to_string(f);
  }
}

TEST(Certifier, Anchors) {
  auto c = sn_certificate(parse_intpoly("X^5-X-1"), 50);
  EXPECT_EQ(c.verdict, Verdict::SnCertified);
  auto d = sn_certificate(parse_intpoly("X^3-3*X-1"), 50);
  EXPECT_EQ(d.verdict, Verdict::NotSnDiscSquare);
  EXPECT_EQ(*d.disc, BigInt(81));
  EXPECT_EQ(exact_cubic_galois(parse_intpoly("X^3-3*X-1")), CubicGroup::C3);
  EXPECT_EQ(sn_certificate(parse_intpoly("X^3-X"), 50).verdict, Verdict::NotSnReducible);
  EXPECT_EQ(sn_certificate(parse_intpoly("X^4+1"), 50).verdict, Verdict::NotSnDiscSquare);
  EXPECT_EQ(sn_certificate(parse_intpoly("X^3-2"), 50).verdict, Verdict::SnCertified);
  // (X^2+1)^2 has no integer root and disc 0
  EXPECT_EQ(sn_certificate(parse_intpoly("X^4+2*X^2+1"), 50).verdict, Verdict::NotSnReducible);
}

TEST(Certifier, SoundExhaustiveQuadratics) {
  for (std::int64_t b = -30; b <= 30; ++b)
    for (std::int64_t c = -30; c <= 30; ++c) {
      const BigInt d = testsupport::disc_quadratic(b, c);
      const bool irreducible = !is_perfect_square_int(d);
      auto cert = sn_certificate(poly({c, b}), 50);
      if (cert.verdict == Verdict::SnCertified) EXPECT_TRUE(irreducible);
      if (irreducible) EXPECT_EQ(cert.verdict, Verdict::SnCertified);
    }
}

TEST(Certifier, SoundExhaustiveCubics) {
  std::uint64_t certified = 0, total = 0;
  for (std::int64_t a = -8; a <= 8; ++a)
    for (std::int64_t b = -8; b <= 8; ++b)
      for (std::int64_t c = -8; c <= 8; ++c) {
        auto f = poly({c, b, a});
        const BigInt d = testsupport::disc_cubic(a, b, c);
        const bool s3 = !has_integer_root_scan(f) && !is_perfect_square_int(d);
        auto cert = sn_certificate(f, 50);
        ++total;
        if (cert.verdict == Verdict::SnCertified) {
          ++certified;
          EXPECT_TRUE(s3) << to_string(f);
        }
        if (cert.verdict == Verdict::NotSnDiscSquare) EXPECT_TRUE(is_perfect_square_int(d) && d != 0);
        if (cert.verdict == Verdict::NotSnReducible) EXPECT_TRUE(!s3);
        EXPECT_EQ(exact_cubic_galois(f) == CubicGroup::S3, s3);
      }
  EXPECT_GT(certified, total / 2);
}

TEST(EstimateProbSn, ReproducibleAndSound) {
  GaloisOptions opt;
  opt.samples = 6000;
  opt.seed = 12;
  opt.threads = 1;
  const auto law = PolyLaw::iid(3, CoeffLaw::box(-50, 100));
  std::uint64_t unsound = 0;
  auto a = estimate_prob_sn(law, opt, [&](const IntPoly& f, const Certificate& c) {
    if (c.verdict == Verdict::SnCertified && exact_cubic_galois(f) != CubicGroup::S3) ++unsound;
  });
  EXPECT_EQ(unsound, 0u);
  opt.threads = 3;
  auto b = estimate_prob_sn(law, opt);
  EXPECT_TRUE(a.same_result(b));
  EXPECT_EQ(a.certified + a.disc_square + a.reducible + a.unknown, a.samples);
}

TEST(Regime, Classification) {
  EXPECT_EQ(uniformity_regime(PolyLaw{2, {CoeffLaw::point(0), CoeffLaw::point(1)}}), Regime::NotBox);
  EXPECT_GT(gallagher_rhs(3, 100), 0);
  EXPECT_THROW(gallagher_rhs(3, 1), DomainError);
}
