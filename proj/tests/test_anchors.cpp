// Small hand-checkable values for each public operation.

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace boxgal;

namespace {

FFPoly P(const char* s, std::uint64_t p) { return parse_ffpoly(s, PrimeField(p)); }

}  // namespace

// ---------------------------------------------------------------------------
// ffpoly

TEST(AnchorFF, GcdDerivativeDivrem) {
  EXPECT_EQ(gcd(P("T^2+2*T+1", 3), P("T+1", 3)), P("T+1", 3));
  EXPECT_TRUE(derivative(P("T^3", 3)).is_zero());
  auto [q, r] = divrem(P("T^2+1", 2), P("T", 2));
  EXPECT_EQ(q, P("T", 2));
  EXPECT_EQ(r, P("1", 2));
}

TEST(AnchorFF, Factor) {
  auto a = factor(P("T^2+T", 2));
  ASSERT_EQ(a.factors.size(), 2u);
  EXPECT_EQ(a.factors[0].first, P("T", 2));
  EXPECT_EQ(a.factors[1].first, P("T+1", 2));
  auto b = factor(P("T^2+1", 2));
  ASSERT_EQ(b.factors.size(), 1u);
  EXPECT_EQ(b.factors[0].first, P("T+1", 2));
  EXPECT_EQ(b.factors[0].second, 2u);
  EXPECT_TRUE(is_irreducible(P("T^2+1", 3)));
}

TEST(AnchorFF, MoebiusAndSquarefree) {
  EXPECT_EQ(moebius(P("T", 5)), -1);
  EXPECT_EQ(moebius(P("T^2", 5)), 0);
  int sum = 0;
  for (const auto& f : MonicPolys(PrimeField(3), 3)) sum += moebius(f);
  EXPECT_EQ(sum, 0);
  EXPECT_TRUE(is_squarefree(P("T^2+T", 2)));
  EXPECT_FALSE(is_squarefree(P("T^2", 5)));
  int sqf = 0;
  for (const auto& f : MonicPolys(PrimeField(3), 4)) sqf += is_squarefree(f);
  EXPECT_EQ(sqf, 81 - 27);
}

TEST(AnchorFF, Resultant) {
  EXPECT_EQ(resultant(P("T-1", 5), P("T^2+1", 5)), 2u);
  EXPECT_EQ(resultant(P("T^3", 7), P("2", 7)), 1u);
  EXPECT_EQ(resultant(P("T^2+T", 3), P("T", 3)), 0u);
}

TEST(AnchorFF, DiscriminantAndCharacter) {
  EXPECT_EQ(discriminant(P("T^2+1", 3)), 2u);
  EXPECT_EQ(discriminant(P("T^2", 7)), 0u);
  for (std::uint64_t p : {5, 7, 11, 13, 101}) EXPECT_EQ(discriminant(P("T^3-3*T-1", p)), 81 % p);
  EXPECT_EQ(quadratic_character(1, PrimeField(3)), 1);
  EXPECT_EQ(quadratic_character(2, PrimeField(3)), -1);
  EXPECT_EQ(quadratic_character(0, PrimeField(7)), 0);
}

TEST(AnchorFF, Enumeration) {
  MonicPolys m(PrimeField(2), 1);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], P("T", 2));
  EXPECT_EQ(m[1], P("T+1", 2));
  EXPECT_EQ(enumerate_monic(PrimeField(3), 4).size(), 81u);
  EXPECT_EQ(enumerate_monic(PrimeField(5), 3).size(), 125u);
}

// ---------------------------------------------------------------------------
// torus

TEST(AnchorTorus, ResidueReadOff) {
  PrimeField f5(5);
  EXPECT_EQ(res(TorusElem::monomial(f5, -1)), 1u);
  EXPECT_EQ(res(TorusElem::monomial(f5, -2)), 0u);
  EXPECT_EQ(res(TorusElem::monomial(f5, -1, 2) + TorusElem::monomial(f5, -3)), 2u);
}

TEST(AnchorTorus, FracMul) {
  EXPECT_TRUE(frac_mul(1, P("T", 2), P("T", 2)).is_zero());
  EXPECT_EQ(res(frac_mul(2, P("T^2+T", 2), P("T^2+1", 2))), 1u);
  testsupport::Gen g(3);
  PrimeField f(5);
  for (int t = 0; t < 50; ++t) {
    auto g1 = testsupport::random_poly(g, f, 3, true), g2 = testsupport::random_poly(g, f, 3, true);
    auto h = testsupport::random_poly(g, f, 3, true);
    // G1 + G2 is no longer monic; the pairing is bilinear in the full product
    EXPECT_EQ(res(frac_mul(3, g1 + g2, h)), f.add(res(frac_mul(3, g1, h)), res(frac_mul(3, g2, h))));
  }
}

TEST(AnchorTorus, CharactersAndPsi) {
  EXPECT_LT(std::abs(e_p(TorusElem::monomial(PrimeField(2), -1)) - Complex(-1)), 1e-15);
  EXPECT_LT(std::abs(e_p(TorusElem(PrimeField(3))) - Complex(1)), 1e-15);
  EXPECT_LT(std::abs(e_p(TorusElem::monomial(PrimeField(5), -1, 2)) - std::polar(1.0, 4 * std::numbers::pi / 5)), 1e-15);
  PrimeSet ps{2, 3};
  MultiTorusElem xi(ps, {TorusElem::monomial(PrimeField(2), -1), TorusElem::monomial(PrimeField(3), -1)});
  EXPECT_EQ(psi_P(xi), Rational(5, 6));
  EXPECT_EQ(psi_P(MultiTorusElem(ps, {TorusElem(PrimeField(2)), TorusElem(PrimeField(3))})), Rational(0));
  testsupport::Gen g(5);
  for (int t = 0; t < 30; ++t) {
    auto a = TorusElem::from_laurent(PrimeField(2), -3, {g.next() % 2, g.next() % 2, g.next() % 2});
    auto b = TorusElem::from_laurent(PrimeField(3), -3, {g.next() % 3, g.next() % 3, g.next() % 3});
    EXPECT_LT(std::abs(e_P(MultiTorusElem(ps, {a, b})) - e_p(a) * e_p(b)), 1e-12);
  }
}

// ---------------------------------------------------------------------------
// fourier

TEST(AnchorFourier, TransformOfSimpleFunctions) {
  GridShape shape(PrimeSet{2, 3}, 2);
  std::vector<double> ones(shape.size(), 1.0);
  auto one = GridFunction::from_real(shape, ones);
  EXPECT_LT(std::abs(transform_at(one, shape.zero_frequency()) - Complex(36)), 1e-12);
  EXPECT_LT(std::abs(transform_at(one, 7)), 1e-12);
  // uniform probability: spectrum is the indicator of the zero frequency
  std::vector<double> uni(shape.size(), 1.0 / 36);
  auto spec = full_spectrum(GridFunction::from_real(shape, uni));
  for (std::uint64_t g = 0; g < shape.size(); ++g)
    EXPECT_LT(std::abs(spec.values[g] - Complex(g == 0 ? 1.0 : 0.0)), 1e-12);
}

TEST(AnchorFourier, Orthogonality) {
  GridShape s1(PrimeSet{2}, 1);
  EXPECT_EQ(verify_orthogonality(s1, s1.index_of(std::vector<FFPoly>{P("T", 2)})), BigInt(2));
  EXPECT_EQ(verify_orthogonality(s1, s1.index_of(std::vector<FFPoly>{P("T+1", 2)})), BigInt(0));
  GridShape s2(PrimeSet{2, 3}, 2);
  EXPECT_EQ(verify_orthogonality(s2, s2.index_of(std::vector<FFPoly>{P("T^2", 2), P("T^2", 3)})), BigInt(36));
}

TEST(AnchorFourier, MoebiusSpectrumM22) {
  auto mu = moebius_grid(PrimeField(2), 2);
  // T^2, T^2+1, T^2+T, T^2+T+1
  EXPECT_EQ(mu.values, (std::vector<Complex>{0.0, 0.0, 1.0, -1.0}));
  auto spec = full_spectrum(mu);
  for (const auto& v : spec.values) {
    EXPECT_LT(std::abs(v.imag()), 1e-12);
    const double r = std::abs(v.real());
    EXPECT_TRUE(r < 1e-12 || std::abs(r - 2) < 1e-12);
  }
  auto rep = moebius_spectrum_report(spec, 0.1);
  EXPECT_DOUBLE_EQ(rep.max_abs, 2.0);
  EXPECT_NEAR(rep.bound, std::pow(2.0, 1.7), 1e-12);
  EXPECT_TRUE(rep.bound_holds);
  auto par = parseval(mu, mu);
  EXPECT_DOUBLE_EQ(par.lhs, 2.0);
  EXPECT_LT(std::abs(par.rhs - 2.0), 1e-10);
}

TEST(AnchorFourier, SmallDegreeReportOnly) {
  // mu = -1 on {T, T+1}: |mu-hat| reaches 2 and the asymptotic bound fails here
  auto rep = moebius_spectrum_report(full_spectrum(moebius_grid(PrimeField(2), 1)), 0.05);
  EXPECT_DOUBLE_EQ(rep.max_abs, 2.0);
  EXPECT_FALSE(rep.bound_holds);
}

TEST(AnchorFourier, InvertRoundTrips) {
  GridShape shape(PrimeSet{3}, 2);
  auto pm = GridFunction::point_mass(shape, 4);
  auto back = invert(full_spectrum(pm));
  for (std::uint64_t i = 0; i < shape.size(); ++i) EXPECT_LT(std::abs(back.values[i] - pm.values[i]), 1e-12);
  auto mu = moebius_grid(PrimeField(3), 2);
  auto mb = invert(full_spectrum(mu));
  for (std::uint64_t i = 0; i < shape.size(); ++i) EXPECT_LT(std::abs(mb.values[i] - mu.values[i]), 1e-10);
  auto par = parseval(pm, pm);
  EXPECT_DOUBLE_EQ(par.lhs, 1.0);
  EXPECT_LT(std::abs(par.rhs - 1.0), 1e-12);
}

TEST(AnchorFourier, ParsevalGivesExpectation) {
  const PrimeSet ps{3};
  const auto m = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 7)), ps);
  auto par = parseval(m.to_grid(), moebius_grid(PrimeField(3), 2));
  EXPECT_LT(std::abs(par.rhs - expected_moebius_direct(m, SubsetSelector::all(ps))), 1e-12);
}

// ---------------------------------------------------------------------------
// measures

TEST(AnchorMeasures, ResidueLaw) {
  EXPECT_EQ(residue_law(CoeffLaw::box(0, 10), 3), (std::vector<Rational>{Rational(3, 10), Rational(4, 10), Rational(3, 10)}));
  for (const auto& r : residue_law(CoeffLaw::box(-4, 12), 4)) EXPECT_EQ(r, Rational(1, 4));
}

TEST(AnchorMeasures, PushforwardUniformAndMarginal) {
  const auto m = pushforward<Rational>(PolyLaw::iid(2, CoeffLaw::box(0, 6)), PrimeSet{2, 3});
  const auto sh = m.shape();
  for (std::uint64_t i = 0; i < sh.size(); ++i) EXPECT_EQ(m.mass(sh.digits(i)), Rational(1, 36));
  const auto skew = pushforward<Rational>(PolyLaw::iid(2, CoeffLaw::box(-1, 5)), PrimeSet{2, 3});
  const auto only2 = pushforward<Rational>(PolyLaw::iid(2, CoeffLaw::box(-1, 5)), PrimeSet{2});
  const GridShape s2(PrimeSet{2}, 2);
  for (std::uint64_t j = 0; j < s2.size(); ++j) {
    Rational sum = 0;
    for (std::uint64_t i = 0; i < skew.shape().size(); ++i)
      if (skew.shape().component(i, 0) == j) sum += skew.mass(skew.shape().digits(i));
    EXPECT_EQ(sum, only2.mass(s2.digits(j)));
  }
}

TEST(AnchorMeasures, MeasureFourier) {
  const auto uni = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 12)), PrimeSet{2, 3});
  EXPECT_LT(std::abs(measure_fourier_at(uni, 0) - Complex(1)), 1e-15);
  for (std::uint64_t g = 1; g < uni.shape().size(); ++g) EXPECT_LT(std::abs(measure_fourier_at(uni, g)), 1e-12);
  EXPECT_NEAR(l_gamma_norm(uni, 1.0), 1.0, 1e-12);
  const auto m = pushforward<double>(PolyLaw::iid(3, CoeffLaw::box(-2, 7)), PrimeSet{3});
  auto naive = full_spectrum_naive(m.to_grid());
  for (std::uint64_t g = 0; g < naive.values.size(); ++g)
    EXPECT_LT(std::abs(measure_fourier_at(m, g) - naive.values[g]), 1e-12);
}

TEST(AnchorMeasures, NormsAndL1) {
  const PrimeSet ps{2, 3};
  const auto m30 = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 30)), ps);
  EXPECT_DOUBLE_EQ(l1_bound(ps, 30, 2), 4.0);
  EXPECT_LE(l_gamma_norm(m30, 1.0), 4.0);
  const auto m7 = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 7)), ps);
  EXPECT_NEAR(l_gamma_norm(m7, 1.0), l_gamma_norm_naive(m7, 1.0), 1e-10);
  EXPECT_NEAR(l1_bound(ps, 1'000'000, 5), std::pow(1 + 3e-5, 5), 1e-15);
  testsupport::Gen g(8);
  for (int t = 0; t < 20; ++t) {
    const auto L = static_cast<std::uint64_t>(g.range(6, 400));
    const auto m = pushforward<double>(PolyLaw::iid(3, CoeffLaw::box(g.range(-300, 300), L)), ps);
    EXPECT_LE(l_gamma_norm(m, 1.0), l1_bound(ps, L, 3) * (1 + 1e-12));
  }
}

TEST(AnchorMeasures, HCondition) {
  const PrimeSet ps{5, 7};
  const auto law = PolyLaw::iid(2, CoeffLaw::box(0, 35));
  auto r = check_h_condition(law, ps, {{5, Rational(5, 2)}, {7, Rational(7, 2)}});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.witness->omega.at(5), Rational(1, 4));
  EXPECT_EQ(r.witness->omega.at(7), Rational(3, 4));
  // box lengths with d <= P <= L keep P(zeta = u mod d) <= 1/d + 1/L <= prod 2/p
  for (std::uint64_t L : {35, 36, 50, 71, 200}) {
    auto w = check_h_condition(PolyLaw::iid(2, CoeffLaw::box(-3, L)), ps, {{5, Rational(5, 2)}, {7, Rational(7, 2)}});
    EXPECT_TRUE(w.ok()) << L;
  }
  EXPECT_FALSE(check_h_condition(PolyLaw::iid(2, CoeffLaw::point(0)), ps, {{5, Rational(5, 2)}, {7, Rational(7, 2)}}).ok());
}

// ---------------------------------------------------------------------------
// moebius_stats

TEST(AnchorStats, TupleValues) {
  const PrimeSet ps{2, 3};
  std::vector<FFPoly> F{P("T^2", 2), P("T^2+T", 3)};
  EXPECT_EQ(moebius_tuple(F, SubsetSelector(ps, 0)), 1);
  EXPECT_EQ(moebius_tuple(F, SubsetSelector(ps, std::vector<std::uint64_t>{2})), 0);
  EXPECT_EQ(moebius_tuple(F, SubsetSelector(ps, std::vector<std::uint64_t>{3})), 1);
  EXPECT_EQ(moebius_tuple(F, SubsetSelector::all(ps)), 0);
  EXPECT_EQ(eta_tuple(F, SubsetSelector::all(ps)), 0);
}

TEST(AnchorStats, Expectations) {
  const PrimeSet p5{5};
  const auto uni = pushforward<Rational>(PolyLaw::iid(3, CoeffLaw::box(0, 5)), p5);
  EXPECT_EQ(expected_moebius_direct(uni, SubsetSelector::all(p5)), Rational(0));
  EXPECT_EQ(expected_moebius_fourier(uni, SubsetSelector::all(p5)), Rational(0));
  const auto lin = pushforward<Rational>(PolyLaw::iid(1, CoeffLaw::box(0, 5)), p5);
  EXPECT_EQ(expected_moebius_direct(lin, SubsetSelector::all(p5)), Rational(-1));
  const PrimeSet p3{3};
  const auto m7 = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 7)), p3);
  EXPECT_NEAR(expected_moebius_direct(m7, SubsetSelector::all(p3)), expected_moebius_fourier(m7, SubsetSelector::all(p3)), 1e-9);
  const PrimeSet p23{2, 3};
  const auto m = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(-3, 7)), p23);
  const SubsetSelector q3(p23, std::vector<std::uint64_t>{3});
  EXPECT_NEAR(expected_moebius_direct(m, q3), expected_moebius_fourier(m, q3), 1e-9);
  EXPECT_EQ(expected_moebius_fourier(m, SubsetSelector(p23, 0)), 1.0);
  const auto law6 = PolyLaw::iid(2, CoeffLaw::box(0, 6));
  EXPECT_EQ(expected_eta_divisorsum(law6, {2, 3}),
            expected_eta_direct(pushforward<Rational>(law6, p23), SubsetSelector::all(p23)));
  EXPECT_EQ(expected_eta_divisorsum(PolyLaw::iid(4, CoeffLaw::box(0, 7)), {7}), Rational(1, 7));
}

TEST(AnchorStats, JointSquareDivisors) {
  const auto uni = PolyLaw::iid(4, CoeffLaw::box(0, 15));
  EXPECT_EQ(prob_joint_square_divisors(uni, {{3, P("T+1", 3)}}), Rational(1, 9));
  EXPECT_EQ(prob_joint_square_divisors(uni, {{3, P("T^2+1", 3)}}), Rational(1, 81));
  EXPECT_EQ(prob_joint_square_divisors(uni, {{3, P("1", 3)}}), Rational(1));
  EXPECT_EQ(prob_joint_square_divisors(uni, {{3, P("T", 3)}, {5, P("T+2", 5)}}),
            prob_joint_square_divisors(uni, {{3, P("T", 3)}}) * prob_joint_square_divisors(uni, {{5, P("T+2", 5)}}));
}

TEST(AnchorStats, MuSquaredAndLemma) {
  auto s = mu_squared_sides(P("T^2", 3));
  EXPECT_EQ(s.lhs, 0);
  EXPECT_EQ(s.rhs, 0);
  EXPECT_EQ(mu_squared_sides(P("T^2+1", 3)).rhs, 1);
  const auto uni = pushforward<Rational>(PolyLaw::iid(3, CoeffLaw::box(0, 3)), PrimeSet{3});
  auto c0 = lemma31_check<Rational>(uni, [](const FFPoly& f) { return f.coeff(0) == 0; });
  EXPECT_EQ(c0.lhs, c0.rhs);
  auto none = lemma31_check<Rational>(uni, [](const FFPoly&) { return false; });
  EXPECT_EQ(none.lhs, Rational(0));
  EXPECT_EQ(none.rhs, Rational(0));
}

TEST(AnchorStats, Holder) {
  const PrimeSet p3{3};
  const auto m = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 7)), p3);
  auto r = holder_bound(m, SubsetSelector::all(p3), 1.0, 0.01, 2.0);
  EXPECT_TRUE(r.raw_inequality_holds);
  EXPECT_TRUE(std::isinf(r.delta_conjugate));
  // gamma = 1: Q^-n (sum |P-hat|) max |mu-hat|
  const double mx = moebius_spectrum(PrimeField(3), 2).max_abs();
  EXPECT_NEAR(r.raw_bound, l_gamma_norm(m, 1.0) * mx / 9.0, 1e-12);
  const auto uni = pushforward<double>(PolyLaw::iid(2, CoeffLaw::box(0, 9)), p3);
  EXPECT_NEAR(holder_bound(uni, SubsetSelector::all(p3), 1.0, 0.01, 2.0).expectation, 0.0, 1e-15);
}

// ---------------------------------------------------------------------------
// discprob

TEST(AnchorDisc, SquaresInFq) {
  EXPECT_TRUE(is_square_fq(0, PrimeField(3)));
  EXPECT_TRUE(is_square_fq(1, PrimeField(3)));
  EXPECT_FALSE(is_square_fq(2, PrimeField(3)));
}

TEST(AnchorDisc, ProbabilityAndDecomposition) {
  const auto u33 = pushforward<Rational>(PolyLaw::iid(3, CoeffLaw::box(0, 3)), PrimeSet{3});
  EXPECT_EQ(prob_disc_square_fq(u33), Rational(2, 3));
  auto t = decomposition_check(u33);
  EXPECT_EQ(t.expected_mu, Rational(0));
  EXPECT_EQ(t.expected_eta, Rational(1, 3));
  EXPECT_EQ(t.rhs, Rational(2, 3));
  const auto u52 = pushforward<Rational>(PolyLaw::iid(2, CoeffLaw::box(0, 5)), PrimeSet{5});
  EXPECT_EQ(prob_disc_square_fq(u52), Rational(3, 5));
  const auto lin = pushforward<Rational>(PolyLaw::iid(1, CoeffLaw::box(0, 5)), PrimeSet{5});
  EXPECT_EQ(prob_disc_square_fq(lin), Rational(1));
  // point mass at T^2 + 1 over F_3: squarefree, disc 2 is a non-square
  const auto pm = pushforward<Rational>(PolyLaw{2, {CoeffLaw::point(1), CoeffLaw::point(0)}}, PrimeSet{3});
  auto a = decomposition_check(pm);
  EXPECT_EQ(a.lhs, Rational(0));
  EXPECT_TRUE(a.exact_match());
  // point mass at T^2
  const auto sq = pushforward<Rational>(PolyLaw::iid(2, CoeffLaw::point(0)), PrimeSet{3});
  auto b = decomposition_check(sq);
  EXPECT_EQ(b.lhs, Rational(1));
  EXPECT_EQ(b.expected_eta, Rational(1));
  EXPECT_TRUE(b.exact_match());
}

TEST(AnchorDisc, Prop33Reports) {
  for (auto [q, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 3}, {5, 2}, {7, 3}}) {
    const auto uni = pushforward<double>(PolyLaw::iid(n, CoeffLaw::box(0, q)), PrimeSet{q});
    auto r = prop33_check(uni, FqBoundParams{1.0, 1.0, 0.2}, static_cast<double>(q));
    EXPECT_NEAR(std::abs(r.divisor_sum), 1.0 / q, 1e-12);
    EXPECT_NEAR(r.deviation, 0.5 / q, 1e-12);
    EXPECT_TRUE(r.hypotheses_hold());
    EXPECT_TRUE(r.conclusion_holds);
  }
  const auto pm = pushforward<double>(PolyLaw::iid(3, CoeffLaw::point(1)), PrimeSet{5});
  EXPECT_FALSE(prop33_check(pm, FqBoundParams{1.0, 1.0, 0.2}, 5.0).hypotheses_hold());
  const auto box = pushforward<double>(PolyLaw::iid(3, CoeffLaw::box(0, 25)), PrimeSet{5});
  auto full = prop33_check(box, FqBoundParams{1.0, 1.0, 0.2}, 5.0);
  EXPECT_TRUE(full.norm_condition);
  EXPECT_NEAR(full.prob_square, 0.6, 1e-15);
}

TEST(AnchorDisc, IntegerDiscriminants) {
  EXPECT_EQ(disc_int(parse_intpoly("X^2+1")), BigInt(-4));
  EXPECT_EQ(disc_int(parse_intpoly("X^3-3*X-1")), BigInt(81));
  EXPECT_EQ(disc_int(parse_intpoly("X^2-2*X+1")), BigInt(0));
  EXPECT_TRUE(is_perfect_square_int(81));
  EXPECT_FALSE(is_perfect_square_int(-4));
  const BigInt two128 = BigInt(1) << 128;
  EXPECT_TRUE(is_perfect_square_int(two128));
  EXPECT_FALSE(is_perfect_square_int(two128 + 1));
}

TEST(AnchorDisc, MonteCarloPointMasses) {
  McOptions opt;
  opt.samples = 2000;
  auto c3 = mc_disc_square(PolyLaw{3, {CoeffLaw::point(-1), CoeffLaw::point(-3), CoeffLaw::point(0)}}, opt);
  EXPECT_EQ(c3.estimate, 1.0);
  auto q2 = mc_disc_square(PolyLaw{2, {CoeffLaw::point(1), CoeffLaw::point(0)}}, opt);
  EXPECT_EQ(q2.estimate, 0.0);
}

TEST(AnchorDisc, BoundShapes) {
  double prev = INFINITY;
  for (double L : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double v = theorem2_rhs(L, 20, 0.1, 0.05);
    EXPECT_LT(v, prev);
    prev = v;
  }
  // second term shrinks geometrically in n
  const double lg = std::log(1e3), t = lg / std::log(lg), first = std::pow(2.0, -0.4 * t);
  const double s10 = theorem2_rhs(1e3, 10, 0.1, 0.05) - first, s11 = theorem2_rhs(1e3, 11, 0.1, 0.05) - first;
  const double s12 = theorem2_rhs(1e3, 12, 0.1, 0.05) - first;
  EXPECT_NEAR(s11 / s10, s12 / s11, 1e-9);
  EXPECT_LT(s11 / s10, 1.0);

  std::map<std::uint64_t, double> omega{{11, 7.0 / 4}};
  const double r12 = prop23_rhs(PrimeSet{11}, omega, 0.2, 12), r13 = prop23_rhs(PrimeSet{11}, omega, 0.2, 13);
  EXPECT_TRUE(std::isfinite(r12));
  EXPECT_LT(r13, r12);
  EXPECT_THROW(PrimeSet(std::vector<std::uint64_t>{}), DomainError);
}

TEST(AnchorDisc, Windows) {
  EXPECT_EQ(choose_prime_window(std::exp(20.0), 0.1).primes(), (std::vector<std::uint64_t>{11, 13, 17}));
  EXPECT_EQ(choose_prime_window(100, 0.1).primes(), (std::vector<std::uint64_t>{3}));
  std::size_t prev = SIZE_MAX;
  for (double delta : {0.05, 0.2, 0.35, 0.49}) {
    const std::size_t k = choose_prime_window(1e30, delta).size();
    EXPECT_LE(k, prev);
    prev = k;
  }
}

// ---------------------------------------------------------------------------
// bounds

TEST(AnchorBounds, Values) {
  EXPECT_EQ(primes_in(9, 18), (std::vector<std::uint64_t>{11, 13, 17}));
  EXPECT_EQ(primes_in(2, 3), (std::vector<std::uint64_t>{3}));
  EXPECT_TRUE(primes_in(13, 16).empty());
  EXPECT_NEAR(mertens_sum(10).sum, 1.1762, 1e-4);
  EXPECT_NEAR(kMeisselMertens, 0.261, 1e-3);
  EXPECT_EQ(prime_pi(100), 25u);
  EXPECT_NEAR(chebyshev_theta(10), 5.347, 1e-3);
  for (std::uint64_t x : {1000, 10'000, 100'000, 1'000'000}) EXPECT_LE(pnt_report(x).pi_scaled_error, 1.3) << x;
}

TEST(AnchorBounds, Products) {
  auto a = dyadic_product_bound(100, [](std::uint64_t p) { return static_cast<double>(p); }, 1.0);
  EXPECT_TRUE(a.product_le_exp());
  auto e = dyadic_product_bound(0.6, [](std::uint64_t p) { return static_cast<double>(p); }, 1.0);
  EXPECT_EQ(e.product, 1.0);
  EXPECT_EQ(e.exp_bound, 1.0);
  auto b = dyadic_product_bound(100, [](std::uint64_t p) { return static_cast<double>(p) / 4; }, 4.0);
  EXPECT_TRUE(b.product_le_exp());
  EXPECT_TRUE(b.product_le_mertens());

  auto c = convergent_product(50, 3, 0.5);
  double first = 1;
  for (auto p : primes_in(50, 100)) first += 0.5 * std::pow(static_cast<double>(p), -3.0);
  EXPECT_NEAR(c.product, first, 1e-9);
  EXPECT_EQ(convergent_product(50, 3, 0).product, 1.0);
  EXPECT_LT(convergent_product(50, 4, 0.5).product, c.product);
}

// ---------------------------------------------------------------------------
// galois_mc

TEST(AnchorGalois, CycleTypes) {
  // X^5 + X + 1 = (X^2 + X + 1)(X^3 + X^2 + 1) over F_2
  auto t = cycle_type(parse_intpoly("X^5-X-1"), 2);
  ASSERT_TRUE(t);
  const auto fz = factor(parse_intpoly("X^5-X-1").mod(PrimeField(2)));
  std::vector<unsigned> degs;
  for (const auto& [f, m] : fz.factors) degs.push_back(static_cast<unsigned>(f.degree()));
  std::sort(degs.begin(), degs.end());
  EXPECT_EQ(t->parts, degs);
  auto u = cycle_type(parse_intpoly("X^3-3*X-1"), 5);
  ASSERT_TRUE(u);
  EXPECT_EQ(u->total(), 3u);
  for (std::uint64_t p : {2, 3, 5, 7}) EXPECT_FALSE(cycle_type(parse_intpoly("X^2-2*X+1"), p));
}

TEST(AnchorGalois, Verdicts) {
  auto a = sn_certificate(parse_intpoly("X^2-1"), 50);
  EXPECT_EQ(a.verdict, Verdict::NotSnReducible);
  ASSERT_TRUE(a.rational_root);
  EXPECT_EQ(abs(*a.rational_root), BigInt(1));
  EXPECT_EQ(exact_cubic_galois(parse_intpoly("X^3-2")), CubicGroup::S3);
  EXPECT_EQ(disc_int(parse_intpoly("X^3-2")), BigInt(-108));
  const auto x3x = exact_cubic_galois(parse_intpoly("X^3-X"));
  EXPECT_TRUE(x3x == CubicGroup::C1 || x3x == CubicGroup::S2);
}

TEST(AnchorGalois, Estimates) {
  GaloisOptions opt;
  opt.samples = 500;
  auto q = estimate_prob_sn(PolyLaw{2, {CoeffLaw::point(1), CoeffLaw::point(0)}}, opt);
  EXPECT_EQ(q.certified, q.samples);
  std::vector<GaloisEstimate> runs;
  for (std::uint64_t L : {10, 100, 1000}) {
    GaloisOptions o;
    o.samples = 4000;
    o.seed = 6;
    runs.push_back(estimate_prob_sn(PolyLaw::iid(6, CoeffLaw::box(0, L)), o));
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    auto w0 = wilson(runs[i - 1].certified, runs[i - 1].samples), w1 = wilson(runs[i].certified, runs[i].samples);
    EXPECT_GE(runs[i].certified_rate(), runs[i - 1].certified_rate() - 2 * std::max(w0.radius(), w1.radius()));
  }
  EXPECT_NEAR(gallagher_rhs(10, 1e7), 5.1, 0.01);
  EXPECT_GT(gallagher_rhs(10, 1e5), gallagher_rhs(10, 1e6));
}
