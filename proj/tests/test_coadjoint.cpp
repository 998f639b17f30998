#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "heightlab/coadjoint.hpp"

using namespace heightlab;
using namespace fixtures;

namespace {

// Pf = 1/(2^k k!) sum over permutations of sgn(s) prod a[s(2i)][s(2i+1)].
Rational pfaffian_by_permutations(Matrix const &a)
{
	std::size_t const m = a.size();
	std::vector<std::size_t> s(m);
	std::iota(s.begin(), s.end(), 0);
	Rational total = 0;
	do {
		int inversions = 0;
		for (std::size_t i = 0; i < m; ++i)
			for (std::size_t j = i + 1; j < m; ++j)
				inversions += s[i] > s[j];
		Rational term = inversions % 2 ? -1 : 1;
		for (std::size_t i = 0; i < m; i += 2)
			term *= a[s[i]][s[i + 1]];
		total += term;
	} while (std::next_permutation(s.begin(), s.end()));
	Rational norm = 1;
	for (std::size_t i = 1; i <= m / 2; ++i)
		norm *= 2 * static_cast<long>(i);
	return total / norm;
}

Vector random_orbit_point(NilpotentLieAlgebra const &g, Vector const &ell, RationalSampler &rng)
{
	return coadjoint_act(g, rng.vector(g.dim()), ell);
}

} // namespace

TEST(Coadjoint, HeisenbergAction)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	RationalSampler rng(1);
	for (int trial = 0; trial < 50; ++trial) {
		Vector const ell = rng.vector(3);
		Rational const t = rng();
		Vector const moved = coadjoint_act(g, t * g.basis_vector(2), ell);
		EXPECT_EQ(moved, (Vector{ell[0], ell[1] - t * ell[0], ell[2]}));
		EXPECT_EQ(coadjoint_act(g, rng() * g.basis_vector(0), ell), ell);
	}
}

TEST(Coadjoint, ActionAxiom)
{
	RationalSampler rng(2);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		for (int trial = 0; trial < 100; ++trial) {
			Vector const x = rng.vector(g.dim()), y = rng.vector(g.dim()), ell = rng.vector(g.dim());
			ASSERT_EQ(coadjoint_act(g, x, coadjoint_act(g, y, ell)), coadjoint_act(g, bch(g, x, y), ell)) << name;
		}
	}
}

TEST(Coadjoint, SkewFormRadicalOrbitDim)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	Vector const lx{0, 0, 1};
	EXPECT_EQ(b_form(g, lx), zero_matrix(3, 3));
	EXPECT_EQ(radical(g, lx), Subspace::full(3));
	EXPECT_EQ(orbit_dim(g, lx), 0u);
	Vector const generic{3, 1, -2};
	EXPECT_EQ(radical(g, generic), span(g, {"Z"}));
	EXPECT_EQ(orbit_dim(g, generic), 2u);
	auto const k = NilpotentLieAlgebra::load("k4");
	EXPECT_EQ(orbit_dim(k, Vector{1, 2, 3, 4}), 2u);
}

TEST(Coadjoint, RankEvenAndAntisymmetric)
{
	RationalSampler rng(3);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		for (int trial = 0; trial < 200; ++trial) {
			Vector const ell = rng.vector(g.dim());
			Matrix const b = b_form(g, ell);
			EXPECT_EQ(b, [&] {
				Matrix t = transpose(b, g.dim());
				for (auto &r : t)
					for (auto &c : r)
						c = -c;
				return t;
			}());
			EXPECT_EQ(orbit_dim(g, ell) % 2, 0u);
			EXPECT_EQ(orbit_dim(g, ell) + radical(g, ell).dim(), g.dim());
		}
	}
}

TEST(Coadjoint, VergneHeisenbergExample)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const basis = default_strong_basis(g);
	EXPECT_EQ(vergne_polarization(g, Vector{1, 0, 0}, basis).space(), span(g, {"Z", "Y"}));
	EXPECT_EQ(vergne_polarization(g, Vector{-7, 2, 5}, basis).space(), span(g, {"Z", "Y"}));
	EXPECT_EQ(vergne_polarization(g, Vector{0, 2, 5}, basis).space(), Subspace::full(3));
	auto const weak = malcev_basis_through(g, {span(g, {"X"})}, false);
	EXPECT_THROW(vergne_polarization(g, Vector{1, 0, 0}, weak), PreconditionError);
}

TEST(Coadjoint, VergneCertificate)
{
	RationalSampler rng(4);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		auto const basis = default_strong_basis(g);
		for (int trial = 0; trial < 200; ++trial) {
			Vector const ell = rng.vector(g.dim());
			auto const m = vergne_polarization(g, ell, basis);
			EXPECT_TRUE(g.is_subalgebra(m.space()));
			EXPECT_TRUE(is_isotropic(g, ell, m.space()));
			std::size_t const r = radical(g, ell).dim();
			EXPECT_EQ(2 * m.dim(), 2 * r + (g.dim() - r)) << name;
		}
	}
	auto const k = NilpotentLieAlgebra::load("k4");
	EXPECT_EQ(vergne_polarization(k, Vector{1, 2, 3, 4}, default_strong_basis(k)).dim(), 3u);
}

TEST(Coadjoint, DVectorExamples)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const basis = default_strong_basis(g);
	auto const s = d_vector(g, Vector{5, 1, 2}, basis);
	EXPECT_EQ(s.d, (std::vector<std::size_t>{0, 1, 2}));
	EXPECT_EQ(s.I, (std::vector<std::size_t>{2, 3}));
	EXPECT_EQ(s.J, (std::vector<std::size_t>{1}));
	EXPECT_EQ(s.k(), 1u);
	auto const z = d_vector(g, zero_vector(3), basis);
	EXPECT_EQ(z.d, (std::vector<std::size_t>{0, 0, 0}));
	EXPECT_TRUE(z.I.empty());
	EXPECT_EQ(d_vector(g, Vector{0, 4, -1}, basis).d, (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Coadjoint, DVectorInvariants)
{
	RationalSampler rng(5);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		auto const basis = default_strong_basis(g);
		for (int trial = 0; trial < 100; ++trial) {
			Vector const ell = rng.vector(g.dim());
			auto const s = d_vector(g, ell, basis);
			EXPECT_EQ(s.I.size() % 2, 0u);
			EXPECT_EQ(s.I.size() + s.J.size(), g.dim());
			EXPECT_EQ(s.d.back(), orbit_dim(g, ell));
			for (std::size_t j = 1; j < s.d.size(); ++j)
				EXPECT_LE(s.d[j] - s.d[j - 1], 1u);
			EXPECT_EQ(d_vector(g, random_orbit_point(g, ell, rng), basis).d, s.d) << name;
		}
	}
}

TEST(Coadjoint, RepresentativeExamples)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const basis = default_strong_basis(g);
	EXPECT_EQ(orbit_representative(g, Vector{5, 1, 2}, basis), (Vector{5, 0, 0}));
	EXPECT_EQ(orbit_representative(g, Vector{Rational(-2, 3), 7, 1}, basis), (Vector{Rational(-2, 3), 0, 0}));
	Vector const fixed{0, 3, 4};
	EXPECT_EQ(orbit_representative(g, fixed, basis), fixed);
}

TEST(Coadjoint, RepresentativeOrbitConstantAndIdempotent)
{
	RationalSampler rng(6);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		auto const basis = default_strong_basis(g);
		for (int trial = 0; trial < 20; ++trial) {
			Vector const ell = rng.vector(g.dim());
			Vector const rep = orbit_representative(g, ell, basis);
			auto const s = d_vector(g, ell, basis);
			for (auto i : s.I)
				EXPECT_EQ(dot(rep, basis.vectors[i - 1]), 0);
			EXPECT_EQ(orbit_representative(g, rep, basis), rep);
			for (int t = 0; t < 20; ++t)
				ASSERT_EQ(orbit_representative(g, random_orbit_point(g, ell, rng), basis), rep) << name;
		}
	}
}

TEST(Coadjoint, PfaffianExamples)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const basis = default_strong_basis(g);
	// Block over I = (Y, X) is [[0, l([Y,X])], [-l([Y,X]), 0]] and l([Y,X]) = -l(Z).
	EXPECT_EQ(pfaffian(g, Vector{5, 1, 2}, basis), -5);
	EXPECT_EQ(pfaffian(g, Vector{0, 1, 2}, basis), 1);
	StratumData odd;
	odd.I = {1};
	EXPECT_THROW(pfaffian(g, Vector{1, 0, 0}, odd, basis), PreconditionError);
}

TEST(Coadjoint, PfaffianIdentities)
{
	RationalSampler rng(7);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		auto const basis = default_strong_basis(g);
		for (int trial = 0; trial < 200; ++trial) {
			Vector const ell = rng.vector(g.dim());
			auto const s = d_vector(g, ell, basis);
			Matrix const block = stratum_block(g, ell, s, basis);
			Rational const pf = pfaffian(g, ell, s, basis);
			EXPECT_EQ(pf * pf, determinant(block));
			EXPECT_EQ(pf, pfaffian_by_permutations(block));
			Vector const moved = random_orbit_point(g, ell, rng);
			EXPECT_EQ(pfaffian(g, moved, basis), pf) << name;
		}
	}
}

TEST(Coadjoint, OrbitNorm)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const inv = load_invariants("h3");
	EXPECT_EQ(orbit_norm(g, Vector{-3, 1, 2}, inv).value, 3);
	EXPECT_EQ(orbit_norm(g, zero_vector(3), inv).value, 0);
	RationalSampler rng(8);
	for (auto const &name : {"h3", "n3", "k4"}) {
		auto const a = NilpotentLieAlgebra::load(name);
		auto const polys = load_invariants(name);
		for (int trial = 0; trial < 20; ++trial) {
			Vector const ell = rng.vector(a.dim());
			EXPECT_EQ(orbit_norm(a, ell, polys).value, orbit_norm(a, random_orbit_point(a, ell, rng), polys).value);
		}
	}
	std::vector<Polynomial> bad{Polynomial::variable(3, 1)};
	EXPECT_THROW(orbit_norm(g, Vector{1, 1, 1}, bad), PreconditionError);
}

TEST(Coadjoint, ShippedInvariantsAreExactlyInvariant)
{
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		for (auto const &p : load_invariants(name))
			EXPECT_TRUE(is_ad_invariant(g, p)) << name;
	}
	auto const k = NilpotentLieAlgebra::load("k4");
	EXPECT_FALSE(is_ad_invariant(k, Polynomial::variable(4, 1)));
}

TEST(Coadjoint, MultiplicityBound)
{
	EXPECT_EQ(multiplicity_bound(Rational(125), 5), 125);
	EXPECT_EQ(multiplicity_bound(Rational(7), 5), 1);
	EXPECT_EQ(multiplicity_bound(Rational(1, 5), 5), Rational(1, 5));
	EXPECT_EQ(multiplicity_bound(Rational(-50), 5), 25);
	EXPECT_THROW(multiplicity_bound(Rational(0), 5), PreconditionError);
}

TEST(Coadjoint, HeisenbergSeparation)
{
	// Points with different l(Z) have different representatives; equal l(Z) != 0 share one.
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const basis = default_strong_basis(g);
	auto const inv = load_invariants("h3");
	RationalSampler rng(9);
	for (int trial = 0; trial < 100; ++trial) {
		Vector const a = rng.vector(3), b = rng.vector(3);
		bool const same_inv = inv[0].evaluate(a) == inv[0].evaluate(b);
		bool const same_rep = orbit_representative(g, a, basis) == orbit_representative(g, b, basis);
		if (!same_inv) {
			EXPECT_FALSE(same_rep);
		}
		if (a[0] != 0 && same_inv) {
			EXPECT_TRUE(same_rep);
		}
	}
}

TEST(Coadjoint, StratumDiscovery)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const strata = discover_strata(g, default_strong_basis(g), 500, 1);
	std::set<std::vector<std::size_t>> keys;
	for (auto const &[d, n] : strata)
		keys.insert(d);
	EXPECT_EQ(keys, (std::set<std::vector<std::size_t>>{{0, 0, 0}, {0, 1, 2}}));
	EXPECT_EQ(discover_strata(g, default_strong_basis(g), 500, 1), strata);
}
