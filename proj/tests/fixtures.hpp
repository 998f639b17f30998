#pragma once

#include <string>
#include <vector>

#include "heightlab/group_law.hpp"
#include "heightlab/lie_algebra.hpp"

namespace fixtures {

using namespace heightlab;

inline std::vector<std::string> const &shipped_algebras()
{
	static std::vector<std::string> const names{"abelian1", "abelian2", "abelian3", "abelian4", "h3", "n3", "k4"};
	return names;
}

inline NilpotentLieAlgebra n4()
{
	return NilpotentLieAlgebra::load(std::string(HEIGHTLAB_TEST_DATA) + "/n4.json");
}

inline MatrixRep n4_rep(NilpotentLieAlgebra const &g)
{
	return MatrixRep::load(g, std::string(HEIGHTLAB_TEST_DATA) + "/n4_rep.json");
}

inline Subspace span(NilpotentLieAlgebra const &g, std::vector<std::string> const &labels)
{
	Matrix m;
	for (auto const &l : labels)
		m.push_back(g.basis_vector(*g.index_of(l)));
	return Subspace(m, g.dim());
}

inline Vector vec(std::vector<long> const &xs)
{
	Vector v;
	for (long x : xs)
		v.emplace_back(x);
	return v;
}

} // namespace fixtures
