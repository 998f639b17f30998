// Walks the coadjoint strata of a shipped algebra: d-vector, Pfaffian and cross-section point per stratum.

#include <cstdio>

#include "heightlab/heightlab.hpp"

using namespace heightlab;

int main(int argc, char **argv)
{
	std::string const name = argc > 1 ? argv[1] : "k4";
	auto const g = NilpotentLieAlgebra::load(name);
	auto const basis = default_strong_basis(g);
	auto const strata = discover_strata(g, basis, 400, 7);
	std::printf("%s: %zu strata among 400 sparse random functionals\n", name.c_str(), strata.size());

	RationalSampler rng(7, 3, 2);
	for (auto const &[d, hits] : strata) {
		// find a sample functional in this stratum to display
		for (int t = 0; t < 4000; ++t) {
			Vector ell = rng.vector(g.dim());
			for (std::size_t i = 0; i < ell.size(); ++i)
				if (t % (i + 2) == 0)
					ell[i] = 0;
			auto const st = d_vector(g, ell, basis);
			if (st.d != d)
				continue;
			std::string ds, ls, rs;
			for (auto x : d)
				ds += std::to_string(x) + " ";
			for (auto const &x : ell)
				ls += to_string(x) + " ";
			for (auto const &x : orbit_representative(g, ell, basis))
				rs += to_string(x) + " ";
			std::printf("  d = ( %s) hits %4zu  l = ( %s)  Pf = %s  rep = ( %s)\n", ds.c_str(), hits, ls.c_str(),
			            to_string(pfaffian(g, ell, st, basis)).c_str(), rs.c_str());
			break;
		}
	}
}
