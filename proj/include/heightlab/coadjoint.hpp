#pragma once

#include <map>
#include <string>
#include <vector>

#include "heightlab/group_law.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

/// Matrix M with Ad*(exp x) l = M l, i.e. the transpose of exp(-ad x).
inline Matrix coadjoint_matrix(NilpotentLieAlgebra const &g, Vector const &x)
{
	Matrix neg = g.ad(x);
	for (auto &row : neg)
		for (auto &c : row)
			c = -c;
	return transpose(matrix_exp(neg), g.dim());
}

/// Ad*(g) l = l o Ad(g^-1).
inline Vector coadjoint_act(NilpotentLieAlgebra const &g, Vector const &log_g, Vector const &ell)
{
	if (log_g.size() != g.dim() || ell.size() != g.dim())
		throw PreconditionError("coadjoint_act: dimension mismatch");
	return matvec(coadjoint_matrix(g, log_g), ell);
}

inline Vector coadjoint_act(NilpotentLieAlgebra const &g, GroupElement const &x, Vector const &ell)
{
	return coadjoint_act(g, x.log_coords, ell);
}

/// B_l(X_i, X_j) = l([X_i, X_j]) in the canonical basis.
inline Matrix b_form(NilpotentLieAlgebra const &g, Vector const &ell)
{
	std::size_t const n = g.dim();
	Matrix m = zero_matrix(n, n);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j) {
			m[i][j] = dot(ell, g.bracket_basis(i, j));
			m[j][i] = -m[i][j];
		}
	return m;
}

/// Same form in the coordinates of an arbitrary basis (rows of `basis`).
inline Matrix b_form(NilpotentLieAlgebra const &g, Vector const &ell, Matrix const &basis)
{
	std::size_t const n = basis.size();
	Matrix m = zero_matrix(n, n);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j) {
			m[i][j] = dot(ell, g.bracket(basis[i], basis[j]));
			m[j][i] = -m[i][j];
		}
	return m;
}

inline Subspace radical(NilpotentLieAlgebra const &g, Vector const &ell)
{
	return Subspace(kernel(b_form(g, ell), g.dim()), g.dim());
}

inline std::size_t orbit_dim(NilpotentLieAlgebra const &g, Vector const &ell)
{
	return rank(b_form(g, ell), g.dim());
}

inline bool is_isotropic(NilpotentLieAlgebra const &g, Vector const &ell, Subspace const &m)
{
	auto const &b = m.basis();
	for (std::size_t i = 0; i < b.size(); ++i)
		for (std::size_t j = i + 1; j < b.size(); ++j)
			if (dot(ell, g.bracket(b[i], b[j])) != 0)
				return false;
	return true;
}

/// Vergne's polarization m_l = sum_j r_{l_j}(g_j) along the prefix ideals g_j of a strong basis.
inline Subalgebra vergne_polarization(NilpotentLieAlgebra const &g, Vector const &ell, MalcevBasis const &basis)
{
	if (!basis.strong)
		throw PreconditionError("Vergne polarization needs a strong Malcev basis");
	std::size_t const n = g.dim();
	Subspace m = Subspace::zero(n);
	for (std::size_t j = 1; j <= n; ++j) {
		// r = {sum_a y_a v_a : l([sum y_a v_a, v_b]) = 0 for b <= j}, a <= j
		Matrix const prefix(basis.vectors.begin(), basis.vectors.begin() + static_cast<std::ptrdiff_t>(j));
		Matrix const form = b_form(g, ell, prefix);
		Matrix gens;
		for (auto const &y : kernel(form, j)) {
			Vector v = zero_vector(n);
			for (std::size_t a = 0; a < j; ++a)
				if (y[a] != 0)
					v += y[a] * prefix[a];
			gens.push_back(std::move(v));
		}
		m = m + Subspace(std::move(gens), n);
	}
	return Subalgebra::from(g, m);
}

/// Orbit dimensions of the successive projections, with the jump indices I and the rest J (1-based).
struct StratumData {
	std::vector<std::size_t> d;
	std::vector<std::size_t> I, J;

	std::size_t k() const { return I.size() / 2; }
	bool operator==(StratumData const &o) const { return d == o.d; }
	bool operator<(StratumData const &o) const { return d < o.d; }
};

inline StratumData d_vector(NilpotentLieAlgebra const &g, Vector const &ell, MalcevBasis const &basis)
{
	if (!basis.strong)
		throw PreconditionError("d-vector needs a strong Malcev basis");
	std::size_t const n = g.dim();
	Matrix const form = b_form(g, ell, basis.vectors);
	StratumData s;
	std::size_t prev = 0;
	for (std::size_t j = 1; j <= n; ++j) {
		Matrix cols(n);
		for (std::size_t a = 0; a < n; ++a)
			cols[a] = Vector(form[a].begin(), form[a].begin() + static_cast<std::ptrdiff_t>(j));
		std::size_t const dj = rank(cols, j);
		s.d.push_back(dj);
		(dj == prev + 1 ? s.I : s.J).push_back(j);
		prev = dj;
	}
	return s;
}

/// The point of Ad*(G) l whose I-coordinates (in the dual Malcev basis) vanish.
inline Vector orbit_representative(NilpotentLieAlgebra const &g, Vector const &ell, MalcevBasis const &basis)
{
	std::size_t const n = g.dim();
	StratumData const s = d_vector(g, ell, basis);
	Vector cur = ell;
	for (std::size_t i1 : s.I) {
		std::size_t const i = i1 - 1;
		Matrix const form = b_form(g, cur, basis.vectors);
		// Stabilizer directions: y with l'([y, X_b]) = 0 for every b < i.
		Matrix eqs;
		for (std::size_t b = 0; b < i; ++b) {
			Vector row(n);
			for (std::size_t a = 0; a < n; ++a)
				row[a] = form[a][b];
			eqs.push_back(std::move(row));
		}
		Subspace const stab(kernel(eqs, n), n);
		std::vector<Vector> candidates;
		for (std::size_t a = 0; a < n; ++a)
			if (stab.contains(unit_vector(n, a)))
				candidates.push_back(unit_vector(n, a));
		for (auto const &v : stab.basis())
			candidates.push_back(v);
		bool done = false;
		for (auto const &y : candidates) {
			Rational pairing = 0;
			for (std::size_t a = 0; a < n; ++a)
				pairing += y[a] * form[a][i];
			if (pairing == 0)
				continue;
			Rational const coord = dot(cur, basis.vectors[i]);
			Rational const t = coord / pairing;
			cur = coadjoint_act(g, t * basis.to_canonical(y), cur);
			if (dot(cur, basis.vectors[i]) != 0)
				throw PreconditionError("internal: cross-section solve left coordinate " + std::to_string(i1) +
				                        " nonzero; d-vector and basis are inconsistent");
			done = true;
			break;
		}
		if (!done)
			throw PreconditionError("internal: no stabilizer direction moves coordinate " + std::to_string(i1) +
			                        "; d-vector and basis are inconsistent");
	}
	return cur;
}

/// Pfaffian of a 2k x 2k skew matrix by expansion along the first row.
inline Rational pfaffian_of(Matrix const &a)
{
	std::size_t const m = a.size();
	if (m % 2 == 1)
		throw PreconditionError("Pfaffian of an odd-dimensional matrix");
	if (m == 0)
		return 1;
	Rational total = 0;
	for (std::size_t j = 1; j < m; ++j) {
		if (a[0][j] == 0)
			continue;
		Matrix minor;
		for (std::size_t r = 1; r < m; ++r) {
			if (r == j)
				continue;
			Vector row;
			for (std::size_t c = 1; c < m; ++c)
				if (c != j)
					row.push_back(a[r][c]);
			minor.push_back(std::move(row));
		}
		Rational const term = a[0][j] * pfaffian_of(minor);
		// sign (-1)^(j+1) with 0-based j
		if (j % 2 == 1)
			total += term;
		else
			total -= term;
	}
	return total;
}

/// The block (B_l(X_{i_r}, X_{i_r'})) over the jump indices of the stratum.
inline Matrix stratum_block(NilpotentLieAlgebra const &g, Vector const &ell, StratumData const &s,
                            MalcevBasis const &basis)
{
	Matrix rows;
	for (auto i : s.I)
		rows.push_back(basis.vectors[i - 1]);
	return b_form(g, ell, rows);
}

/// Relative Pfaffian: Pf of the stratum block, in increasing I order.
inline Rational pfaffian(NilpotentLieAlgebra const &g, Vector const &ell, StratumData const &s,
                         MalcevBasis const &basis)
{
	if (s.I.size() % 2 == 1)
		throw PreconditionError("odd jump set |I| = " + std::to_string(s.I.size()));
	return pfaffian_of(stratum_block(g, ell, s, basis));
}

inline Rational pfaffian(NilpotentLieAlgebra const &g, Vector const &ell, MalcevBasis const &basis)
{
	return pfaffian(g, ell, d_vector(g, ell, basis), basis);
}

/// Throws unless every polynomial takes the same value at `samples` random points of the orbit of l.
inline void check_orbit_constant(NilpotentLieAlgebra const &g, std::vector<Polynomial> const &polys,
                                 Vector const &ell, std::uint64_t seed, int samples = 20)
{
	RationalSampler rng(seed);
	std::vector<Rational> base;
	for (auto const &p : polys)
		base.push_back(p.evaluate(ell));
	for (int t = 0; t < samples; ++t) {
		Vector const moved = coadjoint_act(g, rng.vector(g.dim()), ell);
		for (std::size_t j = 0; j < polys.size(); ++j)
			if (polys[j].evaluate(moved) != base[j])
				throw PreconditionError("polynomial " + std::to_string(j) + " is not constant on the orbit of l");
	}
}

/// Exact invariance: P o Ad*(exp t X_i) = P for every basis direction and enough t to pin the polynomial in t.
inline bool is_ad_invariant(NilpotentLieAlgebra const &g, Polynomial const &p)
{
	unsigned const tdeg = p.degree() * static_cast<unsigned>(g.nilpotency_class());
	for (std::size_t i = 0; i < g.dim(); ++i)
		for (unsigned t = 1; t <= tdeg + 1; ++t)
			if (!(p.substitute_linear(coadjoint_matrix(g, Rational(t) * g.basis_vector(i))) == p))
				return false;
	return true;
}

struct OrbitNorm {
	Rational value;
	std::string invariant_set;
};

/// max_j |P_j(l)| at the real place.
inline OrbitNorm orbit_norm(NilpotentLieAlgebra const &g, Vector const &ell, std::vector<Polynomial> const &polys,
                            std::string const &set_name = "", std::uint64_t seed = 0)
{
	check_orbit_constant(g, polys, ell, seed);
	Rational v = 0;
	for (auto const &p : polys) {
		Rational const a = abs(p.evaluate(ell));
		if (a > v)
			v = a;
	}
	return {v, set_name};
}

/// |Pf(l)|_p^{-1} = p^{v_p(Pf)}, with the local constant c_p = 1.
inline Rational multiplicity_bound(Rational const &pf, unsigned long p)
{
	if (pf == 0)
		throw PreconditionError("multiplicity bound needs a nonzero Pfaffian");
	return rational_pow(Rational(static_cast<long>(p)), valuation(pf, p));
}

/// Distinct d-vectors met by random rational points, with hit counts; ordered lexicographically.
inline std::map<std::vector<std::size_t>, std::size_t> discover_strata(NilpotentLieAlgebra const &g,
                                                                        MalcevBasis const &basis,
                                                                        std::size_t samples, std::uint64_t seed)
{
	RationalSampler rng(seed, 3, 2);
	std::uniform_int_distribution<int> sparsity(0, 2);
	std::map<std::vector<std::size_t>, std::size_t> out;
	for (std::size_t t = 0; t < samples; ++t) {
		// Zero out coordinates at random so lower strata are actually hit.
		Vector ell = rng.vector(g.dim());
		for (auto &c : ell)
			if (sparsity(rng.engine()) == 0)
				c = 0;
		++out[d_vector(g, ell, basis).d];
	}
	return out;
}

} // namespace heightlab
