#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "heightlab/oracle/residue_integral.hpp"
#include "heightlab/zeta.hpp"

using namespace heightlab;

namespace {

std::vector<std::string> const shipped_models{"p1", "p2", "p3", "heis_p3", "heis_center_p1", "blowup_p2"};

std::vector<Rational> svec(std::vector<long> const &xs)
{
	std::vector<Rational> out;
	for (long x : xs)
		out.emplace_back(x);
	return out;
}

// All integer s with s_a in {kappa_a, kappa_a + 1, kappa_a + 2}.
std::vector<std::vector<long>> s_grid(CompactificationModel const &m)
{
	std::vector<std::vector<long>> out{{}};
	for (auto k : m.kappa) {
		std::vector<std::vector<long>> next;
		for (auto const &prefix : out)
			for (long d = 0; d <= 2; ++d) {
				auto v = prefix;
				v.push_back(k + d);
				next.push_back(v);
			}
		out = next;
	}
	return out;
}

// int_{Q_p^n} psi(x_1) max(1, |x|)^{-s} dx: the ball of radius p^m integrates psi(x_1) to 0 for m >= 1.
Rational projective_twist_exact(unsigned long p, long s)
{
	return 1 - rational_pow(Rational(static_cast<long>(p)), -s);
}

} // namespace

TEST(Zeta, PrimeSieve)
{
	auto const ps = primes_up_to(100);
	EXPECT_EQ(ps.size(), 25u);
	for (unsigned long n = 0; n <= 100; ++n)
		EXPECT_EQ(is_prime(n), std::find(ps.begin(), ps.end(), n) != ps.end()) << n;
}

TEST(Zeta, ProjectiveLineAtKappa)
{
	auto const m = CompactificationModel::load("p1");
	for (unsigned long q : {5ul, 7ul, 11ul, 101ul}) {
		Rational const Q(static_cast<long>(q));
		EXPECT_EQ(*local_height_integral(m, q).exact, 1 + 1 / Q);
	}
	EXPECT_EQ(*local_height_integral(m, 7, svec({2})).exact, Rational(8, 7));
}

TEST(Zeta, MatchesResidueClassOracle)
{
	for (auto const &name : shipped_models) {
		auto const m = CompactificationModel::load(name);
		for (unsigned long p : {5ul, 7ul, 11ul})
			for (auto const &s : s_grid(m))
				EXPECT_EQ(*local_height_integral(m, p, svec(s)).exact, oracle::residue_integral(m, p, s, 3))
				    << name << " p=" << p << " s0=" << s[0];
	}
}

TEST(Zeta, ShippedBadFactorsMatchOracle)
{
	for (auto const &name : shipped_models) {
		auto const m = CompactificationModel::load(name);
		std::vector<long> const kappa(m.kappa.begin(), m.kappa.end());
		for (auto p : m.bad_primes) {
			ASSERT_TRUE(m.bad_factors.count(p)) << name << " p=" << p;
			EXPECT_EQ(m.bad_factors.at(p), oracle::residue_integral(m, p, kappa, 4)) << name << " p=" << p;
			EXPECT_EQ(oracle::residue_integral(m, p, kappa, 3), oracle::residue_integral(m, p, kappa, 4));
		}
	}
}

TEST(Zeta, VolumeAtInfinity)
{
	for (auto const &name : shipped_models) {
		auto const m = CompactificationModel::load(name);
		for (auto p : primes_up_to(200)) {
			if (m.is_bad(p))
				continue;
			std::vector<Rational> s;
			for (auto k : m.kappa)
				s.emplace_back(k + 200);
			auto const v = local_height_integral(m, p, s).exact;
			EXPECT_GT(*v, 1);
			EXPECT_LT(*v - 1, Rational(1, 1000000)) << name << " p=" << p;
		}
	}
}

TEST(Zeta, RealExponentsArePositiveAndMonotone)
{
	auto const m = CompactificationModel::load("blowup_p2");
	double prev = std::numeric_limits<double>::infinity();
	for (int k = 0; k <= 12; ++k) {
		std::vector<Rational> s{Rational(5 + 2 * k, 4) + 1, Rational(5 + 2 * k, 4)};
		auto const v = local_height_integral(m, 7, s);
		EXPECT_EQ(v.exact.has_value(), k % 2 == 1 && (5 + 2 * k) % 4 == 0);
		EXPECT_GT(v.value, 1);
		EXPECT_LT(static_cast<double>(v.value), prev);
		prev = static_cast<double>(v.value);
	}
	auto const fl = local_height_integral(m, 7, {Rational(41, 10), Rational(31, 10)});
	auto const lo = local_height_integral(m, 7, svec({4, 3}));
	auto const hi = local_height_integral(m, 7, svec({5, 4}));
	EXPECT_LT(fl.value, lo.value);
	EXPECT_GT(fl.value, hi.value);
}

TEST(Zeta, LocalIntegralPreconditions)
{
	auto const m = CompactificationModel::load("p2");
	EXPECT_THROW(local_height_integral(m, 2), PreconditionError);
	EXPECT_THROW(local_height_integral(m, 9), PreconditionError);
	EXPECT_THROW(local_height_integral(m, 5, svec({2})), PreconditionError);
	EXPECT_THROW(local_height_integral(m, 5, svec({2, 3})), PreconditionError);
	EXPECT_NO_THROW(local_height_integral(m, 5, {Rational(5, 2)}));
}

TEST(Zeta, UnitIntegralMatchesCharacterSums)
{
	for (auto p : primes_up_to(13))
		for (unsigned m = 0; m <= 4; ++m)
			EXPECT_EQ(twisted_unit_integral(p, m), oracle::unit_character_sum(p, m)) << p << " " << m;
}

TEST(Zeta, TrivialTwistIsUntwisted)
{
	for (auto const &name : shipped_models) {
		auto const m = CompactificationModel::load(name);
		RationalFunctionDivisor f{"one", std::vector<long>(m.boundary_size(), 0), false,
		                          std::vector<IntPoly>(m.boundary_size())};
		for (unsigned long p : {5ul, 7ul, 13ul})
			for (auto const &s : s_grid(m))
				EXPECT_EQ(*twisted_local_factor(m, f, p, svec(s)).exact, *local_height_integral(m, p, svec(s)).exact);
	}
}

TEST(Zeta, ProjectiveLineTwistIsExact)
{
	auto const m = CompactificationModel::load("p1");
	auto const &f = m.twist("x");
	for (unsigned long p : {5ul, 7ul, 11ul, 13ul})
		for (long s = 2; s <= 6; ++s)
			EXPECT_EQ(*twisted_local_factor(m, f, p, svec({s})).exact, projective_twist_exact(p, s));
	Rational const q(5);
	EXPECT_EQ(*twisted_local_factor(m, f, 5, svec({2})).exact, 1 - 1 / (q * q));
}

TEST(Zeta, DeeperStrataUseUntwistedBound)
{
	// On P^n with n >= 2 the zero locus of x_1 meets the boundary, so the exact value is only bounded.
	for (auto const &name : {"p2", "p3"}) {
		auto const m = CompactificationModel::load(name);
		auto const &f = m.twist("x1");
		for (unsigned long p : {5ul, 7ul, 11ul})
			for (long s = m.kappa[0]; s <= m.kappa[0] + 3; ++s) {
				Rational const approx = *twisted_local_factor(m, f, p, svec({s})).exact;
				Rational const exact = projective_twist_exact(p, s);
				Rational const P(static_cast<long>(p));
				Rational const bound = 2 * evaluate(f.zero_meets[0], static_cast<long>(p)) *
				                       rational_pow(P, -static_cast<long>(m.n) - (s - m.kappa[0] + 1)) * (P - 1) /
				                       (1 - rational_pow(P, -(s - m.kappa[0] + 1)));
				EXPECT_LE(abs(approx - exact), bound) << name << " p=" << p << " s=" << s;
			}
	}
}

TEST(Zeta, TwistedFactorTendsToOne)
{
	for (auto const &name : shipped_models) {
		auto const m = CompactificationModel::load(name);
		for (auto const &f : m.twists) {
			std::vector<Rational> s;
			for (auto k : m.kappa)
				s.emplace_back(k + 100);
			EXPECT_LT(abs(*twisted_local_factor(m, f, 7, s).exact - 1), Rational(1, 1000000));
		}
	}
}

TEST(Zeta, BlowupTwists)
{
	auto const m = CompactificationModel::load("blowup_p2");
	Rational const q(5);
	auto const y = *twisted_local_factor(m, m.twist("y"), 5, m.kappa_class()).exact;
	EXPECT_EQ(y, 1 + 1 / (q * q * q));
	auto const x = *twisted_local_factor(m, m.twist("x"), 5, m.kappa_class()).exact;
	EXPECT_EQ(x, 1 + 1 / q);
	EXPECT_EQ(regularized_twisted_factor(m, m.twist("x"), 5), 1 - 1 / (q * q));
}

TEST(Zeta, ArchimedeanDensityClosedForms)
{
	// P^n: 2^n (n + 1); blow-up: 16.
	std::map<std::string, double> const expected{{"p1", 4}, {"p2", 12}, {"p3", 32}, {"blowup_p2", 16}};
	for (auto const &[name, v] : expected)
		EXPECT_NEAR(archimedean_density(CompactificationModel::load(name)), v, 1e-7 * v) << name;
}

TEST(Zeta, ArchimedeanHeightIsEven)
{
	auto const m = CompactificationModel::load("blowup_p2");
	for (double a : {0.3, 1.7, 4.0})
		for (double b : {0.1, 2.5})
			EXPECT_EQ(archimedean_height(m, {a, b}), archimedean_height(m, {-a, -b}));
	EXPECT_EQ(archimedean_height(m, {2, 3}), 18);
}

TEST(Zeta, RegularizedFactorsAreOneMinusInverseSquare)
{
	auto const p1 = CompactificationModel::load("p1");
	auto const bl = CompactificationModel::load("blowup_p2");
	for (auto p : primes_up_to(10000)) {
		Rational const q(static_cast<long>(p));
		EXPECT_EQ(regularized_local_factor(p1, p), 1 - 1 / (q * q));
		Rational const f = regularized_local_factor(bl, p);
		EXPECT_LE(abs(f - 1) * q * q, 2);
	}
}

TEST(Zeta, LeadingConstantForProjectiveLine)
{
	auto const m = CompactificationModel::load("p1");
	auto const est = euler_leading_constant(m, 10000);
	double const pi = std::numbers::pi;
	EXPECT_NEAR(est.tau, 24 / (pi * pi), 0.005 * 24 / (pi * pi));
	EXPECT_EQ(est.pole_order, 1u);
	EXPECT_NEAR(predicted_coefficient(m, est), 12 / (pi * pi), 0.005 * 12 / (pi * pi));
	EXPECT_EQ(euler_leading_constant(CompactificationModel::load("blowup_p2"), 100).pole_order, 2u);
}

TEST(Zeta, TruncationWithinTailHeuristic)
{
	for (auto const &name : {"p1", "p2", "blowup_p2"}) {
		auto const m = CompactificationModel::load(name);
		double const arch = archimedean_density(m);
		auto const a = euler_leading_constant(m, 5000, 1, arch);
		auto const b = euler_leading_constant(m, 10000, 1, arch);
		EXPECT_LT(std::abs(a.tau - b.tau) / a.tau, a.tail_heuristic) << name;
		EXPECT_GT(a.tau, 0);
	}
}

TEST(Zeta, WorkerCountDoesNotChangeResult)
{
	auto const m = CompactificationModel::load("blowup_p2");
	auto const a = euler_leading_constant(m, 3000, 1, 16.0);
	auto const b = euler_leading_constant(m, 3000, 3, 16.0);
	EXPECT_EQ(a.tau, b.tau);
	EXPECT_EQ(a.fitted_c, b.fitted_c);
}

TEST(Zeta, PrimeBoundTooSmall)
{
	EXPECT_THROW(euler_leading_constant(CompactificationModel::load("p1"), 50), PreconditionError);
}
