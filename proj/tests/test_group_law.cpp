#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace heightlab;
using namespace fixtures;

namespace {

std::vector<std::pair<NilpotentLieAlgebra, MatrixRep>> algebras_with_reps()
{
	std::vector<std::pair<NilpotentLieAlgebra, MatrixRep>> out;
	for (auto const &name : shipped_algebras()) {
		auto g = NilpotentLieAlgebra::load(name);
		auto r = MatrixRep::load(g, name);
		out.emplace_back(std::move(g), std::move(r));
	}
	auto g = n4();
	auto r = n4_rep(g);
	out.emplace_back(std::move(g), std::move(r));
	return out;
}

Matrix inverse_unipotent(Matrix const &u)
{
	// Back substitution on the upper-triangular system U V = I.
	std::size_t const m = u.size();
	Matrix v = identity_matrix(m);
	for (std::size_t c = 0; c < m; ++c)
		for (std::size_t r = m; r-- > 0;) {
			Rational s = r == c ? 1 : 0;
			for (std::size_t k = r + 1; k < m; ++k)
				s -= u[r][k] * v[k][c];
			v[r][c] = s;
		}
	return v;
}

} // namespace

TEST(GroupLaw, DynkinLowDegreePattern)
{
	auto const &d2 = BchTable::instance().degree(2);
	ASSERT_EQ(d2.size(), 1u);
	EXPECT_EQ(d2[0].word, (BracketWord{0, 1}));
	EXPECT_EQ(d2[0].coeff, Rational(1, 2));
	EXPECT_EQ(format_bch_degree(2), "1/2[X,Y]");
	EXPECT_EQ(format_bch_degree(3), "1/12[X,[X,Y]] - 1/12[Y,[X,Y]]");
}

TEST(GroupLaw, DynkinTableMatchesFreeNilpotentOracleThroughDegreeSix)
{
	// Strictly upper 7x7 matrices are nilpotent of class 6.
	std::size_t const m = 7;
	RationalSampler rng(5, 3, 2);
	for (int trial = 0; trial < 3; ++trial) {
		Matrix a = zero_matrix(m, m), b = zero_matrix(m, m);
		for (std::size_t i = 0; i < m; ++i)
			for (std::size_t j = i + 1; j < m; ++j) {
				a[i][j] = rng();
				b[i][j] = rng();
			}
		Matrix sum = a;
		for (std::size_t i = 0; i < m; ++i)
			for (std::size_t j = 0; j < m; ++j)
				sum[i][j] += b[i][j];
		for (int deg = 2; deg <= 6; ++deg)
			for (auto const &t : BchTable::instance().degree(deg)) {
				Matrix v = t.word.back() ? b : a;
				for (std::size_t k = t.word.size() - 1; k-- > 0;)
					v = MatrixRep::commutator(t.word[k] ? b : a, v);
				for (std::size_t i = 0; i < m; ++i)
					for (std::size_t j = 0; j < m; ++j)
						sum[i][j] += t.coeff * v[i][j];
			}
		EXPECT_EQ(sum, matrix_log(multiply(matrix_exp(a), matrix_exp(b))));
	}
}

TEST(GroupLaw, IdentityAndInverse)
{
	RationalSampler rng(17);
	for (auto const &name : shipped_algebras()) {
		auto const g = NilpotentLieAlgebra::load(name);
		for (int t = 0; t < 100; ++t) {
			Vector const x = rng.vector(g.dim());
			EXPECT_EQ(bch(g, x, zero_vector(g.dim())), x);
			EXPECT_EQ(bch(g, zero_vector(g.dim()), x), x);
			EXPECT_TRUE(is_zero(bch(g, x, group_inverse(x))));
			EXPECT_TRUE(is_zero(bch(g, group_inverse(x), x)));
		}
	}
	EXPECT_EQ(group_inverse(vec({1, 2, 3})), vec({-1, -2, -3}));
}

TEST(GroupLaw, HeisenbergClosedForm)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	RationalSampler rng(19);
	for (int t = 0; t < 100; ++t) {
		Vector const a = rng.vector(3), b = rng.vector(3);
		// coordinates (z, y, x)
		Vector expected{a[0] + b[0] + Rational(1, 2) * (a[2] * b[1] - b[2] * a[1]), a[1] + b[1], a[2] + b[2]};
		EXPECT_EQ(bch(g, a, b), expected);
	}
}

TEST(GroupLaw, Associativity)
{
	RationalSampler rng(23);
	auto check = [&](NilpotentLieAlgebra const &g) {
		for (int t = 0; t < 200; ++t) {
			Vector const x = rng.vector(g.dim()), y = rng.vector(g.dim()), z = rng.vector(g.dim());
			ASSERT_EQ(bch(g, bch(g, x, y), z), bch(g, x, bch(g, y, z)));
		}
	};
	for (auto const &name : shipped_algebras())
		check(NilpotentLieAlgebra::load(name));
	check(n4());
}

TEST(GroupLaw, MatrixOracleEquivalence)
{
	RationalSampler rng(29);
	for (auto const &[g, rep] : algebras_with_reps())
		for (int t = 0; t < 200; ++t) {
			Vector const x = rng.vector(g.dim()), y = rng.vector(g.dim());
			ASSERT_EQ(bch(g, x, y), rep.log(multiply(rep.exp(x), rep.exp(y))));
		}
}

TEST(GroupLaw, MatrixExpLog)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const rep = MatrixRep::load(g, "h3");
	EXPECT_EQ(rep.exp(zero_vector(3)), identity_matrix(3));
	RationalSampler rng(31);
	for (int t = 0; t < 100; ++t) {
		Vector const x = rng.vector(3);  // (c, b, a) for cZ + bY + aX
		Matrix const e = rep.exp(x);
		EXPECT_EQ(e[0][1], x[2]);
		EXPECT_EQ(e[1][2], x[1]);
		EXPECT_EQ(e[0][2], x[0] + x[2] * x[1] / 2);
		EXPECT_EQ(rep.log(e), x);
		EXPECT_EQ(rep.log(inverse_unipotent(e)), -x);
	}
	Matrix bad = identity_matrix(2);
	bad[1][0] = 1;
	bad[0][1] = 1;
	EXPECT_THROW(matrix_log(bad), PreconditionError);
	EXPECT_THROW(matrix_exp(identity_matrix(2)), PreconditionError);
}

TEST(GroupLaw, RepValidation)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	json j = json::parse(R"({"dim":3,"images":{"X":[[0,1,0],[0,0,0],[0,0,0]],"Y":[[0,0,0],[0,0,1],[0,0,0]],
		"Z":[[0,0,2],[0,0,0],[0,0,0]]}})");
	EXPECT_THROW(MatrixRep::from_json(g, j), ValidationError);
}

TEST(GroupLaw, ClassDepthGuard)
{
	// Filiform algebra of class 7: [Y, X_i] = X_{i-1}, X_1..X_7.
	std::vector<std::string> labels{"X1", "X2", "X3", "X4", "X5", "X6", "X7", "Y"};
	std::map<std::pair<std::size_t, std::size_t>, Vector> br;
	for (std::size_t i = 1; i < 7; ++i)
		br[{7, i}] = unit_vector(8, i - 1);
	NilpotentLieAlgebra const g(labels, br);
	EXPECT_EQ(g.nilpotency_class(), 7u);
	EXPECT_THROW(bch(g, zero_vector(8), zero_vector(8)), PreconditionError);
	EXPECT_THROW(universal_scalar(g), PreconditionError);
}

TEST(GroupLaw, UniversalScalars)
{
	for (auto const *name : {"abelian1", "abelian2", "abelian3", "abelian4"})
		EXPECT_EQ(universal_scalar(NilpotentLieAlgebra::load(name)), 1) << name;
	EXPECT_EQ(universal_scalar(NilpotentLieAlgebra::load("h3")), 2);
	EXPECT_EQ(universal_scalar(NilpotentLieAlgebra::load("n3")), 2);
	EXPECT_EQ(universal_scalar(NilpotentLieAlgebra::load("k4")), 6);
	auto const g = n4();
	EXPECT_EQ(g.nilpotency_class(), 3u);
	EXPECT_TRUE(is_universal_scalar(g, 6));
	EXPECT_EQ(universal_scalar(g), 6);
	EXPECT_FALSE(is_universal_scalar(NilpotentLieAlgebra::load("h3"), 1));
}

TEST(GroupLaw, UniversalRequiresIntegralConstants)
{
	json j = json::parse(R"({"dim":3,"basis":["Z","Y","X"],"brackets":[{"i":"X","j":"Y","terms":[["Z","1/2"]]}]})");
	EXPECT_THROW(universal_scalar(NilpotentLieAlgebra::from_json(j)), PreconditionError);
}

TEST(GroupLaw, UniversalLatticeClosedUnderProduct)
{
	RationalSampler rng(37);
	auto check = [&](NilpotentLieAlgebra const &g) {
		long const a = universal_scalar(g);
		Rational const ra(a);
		for (std::size_t i = 0; i < g.dim(); ++i)
			for (std::size_t k = 0; k < g.dim(); ++k)
				for (int j = 2; j <= static_cast<int>(g.nilpotency_class()); ++j)
					for (auto const &c : bch_component(g, j, ra * g.basis_vector(i), ra * g.basis_vector(k)))
						ASSERT_TRUE(is_integer(c / ra));
		for (int t = 0; t < 200; ++t) {
			Vector const x = ra * rng.integer_vector(g.dim()), y = ra * rng.integer_vector(g.dim());
			for (auto const &c : bch(g, x, y))
				ASSERT_TRUE(is_integer(c / ra));
			for (auto const &c : group_inverse(x))
				ASSERT_TRUE(is_integer(c / ra));
		}
	};
	for (auto const &name : shipped_algebras())
		check(NilpotentLieAlgebra::load(name));
	check(n4());
}
