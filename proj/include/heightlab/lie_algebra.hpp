#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heightlab/io.hpp"
#include "heightlab/linalg.hpp"

namespace heightlab {

struct BracketTerm {
	std::size_t index;
	Rational coeff;
};

/**
 * Finite-dimensional nilpotent Lie algebra over Q given by structure constants
 * in a fixed basis.
 *
 * Only [X_i, X_j] for i < j is stored; [X_j, X_i] is synthesized by antisymmetry.
 * Construction rejects data violating the Jacobi identity or nilpotency.
 */
class NilpotentLieAlgebra {
  public:
	NilpotentLieAlgebra(std::vector<std::string> labels,
	                    std::map<std::pair<std::size_t, std::size_t>, Vector> const &brackets)
	    : labels_(std::move(labels)), table_(labels_.size() * labels_.size())
	{
		std::size_t const n = labels_.size();
		if (n == 0)
			throw ValidationError("algebra dimension must be positive");
		for (auto const &[key, value] : brackets) {
			auto [i, j] = key;
			if (i >= n || j >= n || value.size() != n)
				throw ValidationError("bracket index out of range");
			if (i == j) {
				if (!is_zero(value))
					throw ValidationError("antisymmetry: [" + labels_[i] + "," + labels_[i] + "] must vanish");
				continue;
			}
			Vector v = value;
			if (i > j) {
				std::swap(i, j);
				v = -v;
			}
			auto &slot = table_[i * n + j];
			if (!slot.empty())
				throw ValidationError("bracket [" + labels_[i] + "," + labels_[j] + "] given twice");
			for (std::size_t k = 0; k < n; ++k)
				if (v[k] != 0)
					slot.push_back({k, v[k]});
		}
		check_jacobi();
		series_ = compute_central_series();
	}

	static NilpotentLieAlgebra from_json(json const &j)
	{
		try {
			auto labels = j.at("basis").get<std::vector<std::string>>();
			std::size_t const n = j.at("dim").get<std::size_t>();
			if (labels.size() != n)
				throw ParseError("'dim' does not match the number of basis labels");
			auto index = [&](std::string const &name) {
				auto it = std::find(labels.begin(), labels.end(), name);
				if (it == labels.end())
					throw ParseError("unknown basis label '" + name + "'");
				return static_cast<std::size_t>(it - labels.begin());
			};
			std::map<std::pair<std::size_t, std::size_t>, Vector> brackets;
			for (auto const &b : j.value("brackets", json::array())) {
				std::size_t const i = index(b.at("i").get<std::string>());
				std::size_t const jj = index(b.at("j").get<std::string>());
				Vector v = zero_vector(n);
				for (auto const &term : b.at("terms"))
					v[index(term.at(0).get<std::string>())] += rational_from_json(term.at(1));
				if (brackets.count({i, jj}) || brackets.count({jj, i}))
					throw ParseError("bracket [" + labels[i] + "," + labels[jj] + "] given twice");
				brackets[{i, jj}] = v;
			}
			return NilpotentLieAlgebra(std::move(labels), brackets);
		} catch (json::exception const &e) {
			throw ParseError(std::string("algebra file: ") + e.what());
		}
	}

	static NilpotentLieAlgebra load(std::string const &name)
	{
		return from_json(read_json_file(resolve_data_file(name, "algebras")));
	}

	/// Abelian algebra of dimension n with basis X1..Xn.
	static NilpotentLieAlgebra abelian(std::size_t n)
	{
		std::vector<std::string> labels;
		for (std::size_t i = 0; i < n; ++i)
			labels.push_back("X" + std::to_string(i + 1));
		return NilpotentLieAlgebra(std::move(labels), {});
	}

	std::size_t dim() const { return labels_.size(); }
	std::vector<std::string> const &labels() const { return labels_; }

	std::optional<std::size_t> index_of(std::string const &label) const
	{
		auto it = std::find(labels_.begin(), labels_.end(), label);
		if (it == labels_.end())
			return std::nullopt;
		return static_cast<std::size_t>(it - labels_.begin());
	}

	Vector basis_vector(std::size_t i) const { return unit_vector(dim(), i); }

	/// [X_i, X_j] in coordinates.
	Vector bracket_basis(std::size_t i, std::size_t j) const
	{
		Vector v = zero_vector(dim());
		if (i == j)
			return v;
		Rational const sign = i < j ? 1 : -1;
		auto const &slot = i < j ? table_[i * dim() + j] : table_[j * dim() + i];
		for (auto const &t : slot)
			v[t.index] = sign * t.coeff;
		return v;
	}

	Vector bracket(Vector const &x, Vector const &y) const
	{
		std::size_t const n = dim();
		if (x.size() != n || y.size() != n)
			throw PreconditionError("bracket: dimension mismatch");
		Vector r = zero_vector(n);
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t j = i + 1; j < n; ++j) {
				auto const &slot = table_[i * n + j];
				if (slot.empty())
					continue;
				Rational const w = x[i] * y[j] - x[j] * y[i];
				if (w == 0)
					continue;
				for (auto const &t : slot)
					r[t.index] += w * t.coeff;
			}
		}
		return r;
	}

	/// Matrix of ad_x acting on column vectors: ad_x(y) = matvec(ad(x), y).
	Matrix ad(Vector const &x) const
	{
		std::size_t const n = dim();
		Matrix m = zero_matrix(n, n);
		for (std::size_t j = 0; j < n; ++j) {
			Vector const col = bracket(x, basis_vector(j));
			for (std::size_t k = 0; k < n; ++k)
				m[k][j] = col[k];
		}
		return m;
	}

	bool is_abelian() const
	{
		for (auto const &slot : table_)
			if (!slot.empty())
				return false;
		return true;
	}

	/// 0 = g_0 < g_1 < ... < g_k = g.
	std::vector<Subspace> const &ascending_central_series() const { return series_; }

	/// Length k of the ascending central series (1 for abelian algebras).
	std::size_t nilpotency_class() const { return series_.size() - 1; }

	Subspace center() const { return centralizer(Subspace::full(dim())); }

	/// z_g(h) = {x : [x, h] = 0}.
	Subspace centralizer(Subspace const &h) const
	{
		check_ambient(h);
		Matrix eqs;
		for (auto const &y : h.basis()) {
			Matrix const m = ad_right(y);
			eqs.insert(eqs.end(), m.begin(), m.end());
		}
		return Subspace(kernel(eqs, dim()), dim());
	}

	/// n_g(h) = {x : [x, h] in h}.
	Subspace normalizer(Subspace const &h) const
	{
		check_ambient(h);
		return Subspace(kernel(bracket_into_conditions(h.basis(), h), dim()), dim());
	}

	/// {x : [x, g] in h}; for an ideal h this is the preimage of the center of g/h.
	Subspace upper_central_step(Subspace const &h) const
	{
		check_ambient(h);
		return Subspace(kernel(bracket_into_conditions(identity_matrix(dim()), h), dim()), dim());
	}

	bool is_subalgebra(Subspace const &h) const
	{
		auto const &b = h.basis();
		for (std::size_t a = 0; a < b.size(); ++a)
			for (std::size_t c = a + 1; c < b.size(); ++c)
				if (!h.contains(bracket(b[a], b[c])))
					return false;
		return true;
	}

	bool is_ideal(Subspace const &h) const
	{
		for (auto const &y : h.basis())
			for (std::size_t i = 0; i < dim(); ++i)
				if (!h.contains(bracket(basis_vector(i), y)))
					return false;
		return true;
	}

	json to_json() const
	{
		json j;
		j["dim"] = dim();
		j["basis"] = labels_;
		json brackets = json::array();
		for (std::size_t i = 0; i < dim(); ++i)
			for (std::size_t k = i + 1; k < dim(); ++k) {
				auto const &slot = table_[i * dim() + k];
				if (slot.empty())
					continue;
				json terms = json::array();
				for (auto const &t : slot)
					terms.push_back({labels_[t.index], to_string(t.coeff)});
				brackets.push_back({{"i", labels_[i]}, {"j", labels_[k]}, {"terms", terms}});
			}
		j["brackets"] = brackets;
		return j;
	}

  private:
	void check_ambient(Subspace const &h) const
	{
		if (h.ambient() != dim())
			throw PreconditionError("subspace lives in a different ambient dimension");
	}

	// Rows of the linear map x -> [x, y].
	Matrix ad_right(Vector const &y) const
	{
		std::size_t const n = dim();
		Matrix m = zero_matrix(n, n);
		for (std::size_t i = 0; i < n; ++i) {
			Vector const col = bracket(basis_vector(i), y);
			for (std::size_t k = 0; k < n; ++k)
				m[k][i] = col[k];
		}
		return m;
	}

	// Linear conditions on x expressing [x, y] in h for every y in ys.
	Matrix bracket_into_conditions(Matrix const &ys, Subspace const &h) const
	{
		Matrix const ann = h.annihilator();
		Matrix eqs;
		for (auto const &y : ys) {
			Matrix const m = ad_right(y);
			for (auto const &phi : ann) {
				Vector row = zero_vector(dim());
				for (std::size_t k = 0; k < dim(); ++k)
					if (phi[k] != 0)
						row += phi[k] * m[k];
				eqs.push_back(std::move(row));
			}
		}
		return eqs;
	}

	void check_jacobi() const
	{
		std::size_t const n = dim();
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = i + 1; j < n; ++j)
				for (std::size_t k = j + 1; k < n; ++k) {
					auto const ei = basis_vector(i), ej = basis_vector(j), ek = basis_vector(k);
					Vector r = bracket(ei, bracket(ej, ek));
					r += bracket(ej, bracket(ek, ei));
					r += bracket(ek, bracket(ei, ej));
					if (!is_zero(r))
						throw ValidationError("Jacobi identity fails on (" + labels_[i] + "," + labels_[j] +
						                      "," + labels_[k] + ")");
				}
	}

	std::vector<Subspace> compute_central_series() const
	{
		std::size_t const n = dim();
		std::vector<Subspace> s{Subspace::zero(n)};
		while (s.back().dim() < n) {
			if (s.size() > n)
				throw ValidationError("not nilpotent: ascending central series does not reach g");
			Subspace next = upper_central_step(s.back());
			if (next.dim() == s.back().dim())
				throw ValidationError("not nilpotent: ascending central series stabilizes below g");
			s.push_back(std::move(next));
		}
		return s;
	}

	std::vector<std::string> labels_;
	std::vector<std::vector<BracketTerm>> table_;  // index i*n+j, i<j only
	std::vector<Subspace> series_;
};

/// Subspace certified closed under the bracket.
class Subalgebra {
  public:
	static Subalgebra from(NilpotentLieAlgebra const &g, Subspace h)
	{
		if (!g.is_subalgebra(h))
			throw PreconditionError("subspace is not closed under the bracket");
		bool const ideal = g.is_ideal(h);
		return Subalgebra(std::move(h), ideal);
	}

	Subspace const &space() const { return space_; }
	Matrix const &generators() const { return space_.basis(); }
	std::size_t dim() const { return space_.dim(); }
	bool is_ideal() const { return is_ideal_; }
	bool operator==(Subalgebra const &o) const { return space_ == o.space_; }

  private:
	Subalgebra(Subspace s, bool ideal) : space_(std::move(s)), is_ideal_(ideal) {}
	Subspace space_;
	bool is_ideal_;
};

/// Ordered basis whose prefixes are subalgebras (weak) or ideals (strong).
struct MalcevBasis {
	Matrix vectors;
	bool strong = false;
	std::vector<std::size_t> checkpoints;  // prefix length n_j realizing the j-th chain member

	std::size_t size() const { return vectors.size(); }

	Subspace prefix(std::size_t k) const
	{
		std::size_t const n = vectors.empty() ? 0 : vectors[0].size();
		return Subspace(Matrix(vectors.begin(), vectors.begin() + static_cast<std::ptrdiff_t>(k)), n);
	}

	/// Change of coordinates: rows are the basis vectors, so x_canonical = coords * vectors.
	Vector to_canonical(Vector const &coords) const
	{
		Vector r = zero_vector(vectors.size());
		for (std::size_t i = 0; i < vectors.size(); ++i)
			if (coords[i] != 0)
				r += coords[i] * vectors[i];
		return r;
	}

	/// Dual coordinates ell(X_j) of a functional given in the canonical dual basis.
	Vector dual_coordinates(Vector const &ell) const
	{
		Vector r(vectors.size());
		for (std::size_t j = 0; j < vectors.size(); ++j)
			r[j] = dot(ell, vectors[j]);
		return r;
	}

	/// Inverse of dual_coordinates.
	Vector dual_to_canonical(Vector const &dual) const
	{
		// Solve sum_k ell_k v_j[k] = dual_j, i.e. V ell = dual.
		std::size_t const n = vectors.size();
		Matrix aug = vectors;
		for (std::size_t j = 0; j < n; ++j)
			aug[j].push_back(dual[j]);
		auto const e = rref(aug, n + 1);
		Vector ell = zero_vector(n);
		for (std::size_t r = 0; r < e.rows.size(); ++r)
			ell[e.pivots[r]] = e.rows[r][n];
		return ell;
	}

	bool is_canonical() const
	{
		for (std::size_t i = 0; i < vectors.size(); ++i)
			if (vectors[i] != unit_vector(vectors.size(), i))
				return false;
		return true;
	}
};

namespace detail {

// Lowest-pivot vector of the echelon basis of `pool` that lies outside `h`.
inline Vector lowest_candidate(Subspace const &pool, Subspace const &h)
{
	// Prefer canonical basis vectors, then echelon vectors, each in index order.
	for (std::size_t i = 0; i < pool.ambient(); ++i) {
		Vector e = unit_vector(pool.ambient(), i);
		if (pool.contains(e) && !h.contains(e))
			return e;
	}
	for (auto const &v : pool.basis())
		if (!h.contains(v))
			return v;
	throw PreconditionError("no extension vector available");
}

} // namespace detail

/**
 * Malcev basis through an ascending chain of subalgebras (weak) or ideals (strong).
 *
 * Each step extends the current prefix h by a vector of n_g(h) (weak) or of
 * {x : [x, g] in h} (strong) lying in the next chain member, taking the
 * candidate with the lowest basis index.
 */
inline MalcevBasis malcev_basis_through(NilpotentLieAlgebra const &g, std::vector<Subspace> chain, bool strong)
{
	std::size_t const n = g.dim();
	for (std::size_t i = 0; i < chain.size(); ++i) {
		if (chain[i].ambient() != n)
			throw PreconditionError("chain member has wrong ambient dimension");
		if (!g.is_subalgebra(chain[i]))
			throw PreconditionError("chain member " + std::to_string(i) + " is not a subalgebra");
		if (strong && !g.is_ideal(chain[i]))
			throw PreconditionError("strong Malcev basis requested but chain member " + std::to_string(i) +
			                        " is not an ideal");
		if (i > 0 && !chain[i].contains(chain[i - 1]))
			throw PreconditionError("chain is not ascending at member " + std::to_string(i));
	}
	std::size_t const given = chain.size();
	if (chain.empty() || chain.back().dim() < n)
		chain.push_back(Subspace::full(n));

	MalcevBasis out;
	out.strong = strong;
	Subspace h = Subspace::zero(n);
	for (std::size_t c = 0; c < chain.size(); ++c) {
		auto const &target = chain[c];
		while (h.dim() < target.dim()) {
			Subspace const allowed = strong ? g.upper_central_step(h) : g.normalizer(h);
			Vector x = detail::lowest_candidate(allowed.intersect(target), h);
			out.vectors.push_back(x);
			Matrix gens = h.basis();
			gens.push_back(std::move(x));
			h = Subspace(std::move(gens), n);
		}
		if (c < given)
			out.checkpoints.push_back(h.dim());
	}
	return out;
}

/// Strong Malcev basis through the ascending central series.
inline MalcevBasis default_strong_basis(NilpotentLieAlgebra const &g)
{
	auto const &s = g.ascending_central_series();
	return malcev_basis_through(g, std::vector<Subspace>(s.begin() + 1, s.end()), true);
}

/// (Z, Y, X, g0) with [X, Y] = Z, g0 = z_g(Y), g = g0 + QX, Z spanning the center.
struct ReducingQuadruple {
	Vector Z, Y, X;
	Subalgebra g0;
};

inline ReducingQuadruple kirillov_quadruple(NilpotentLieAlgebra const &g)
{
	if (g.is_abelian())
		throw PreconditionError("Kirillov's lemma needs a noncommutative algebra");
	Subspace const z = g.center();
	if (z.dim() != 1)
		throw PreconditionError("Kirillov's lemma needs a 1-dimensional center (found " + std::to_string(z.dim()) +
		                        ")");
	auto const &s = g.ascending_central_series();
	Vector const Z = z.basis()[0];
	Vector const Y = detail::lowest_candidate(s[2], s[1]);
	Subspace const g0 = g.centralizer(Subspace({Y}, g.dim()));
	if (g0.dim() + 1 != g.dim())
		throw PreconditionError("centralizer of Y does not have codimension 1");
	Vector X = detail::lowest_candidate(Subspace::full(g.dim()), g0);
	Vector const xy = g.bracket(X, Y);
	// [X, Y] lies in g_1 = <Z>; rescale so it equals Z exactly.
	std::size_t const piv = z.pivots()[0];
	Rational const c = xy[piv] / Z[piv];
	if (c == 0 || xy != c * Z)
		throw PreconditionError("internal: [X, Y] is not a nonzero multiple of Z");
	X = (Rational(1) / c) * X;
	return {Z, Y, X, Subalgebra::from(g, g0)};
}

} // namespace heightlab
