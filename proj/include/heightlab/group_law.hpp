#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "heightlab/lie_algebra.hpp"

namespace heightlab {

/// Element of the unipotent group in exponential coordinates (log g in g).
struct GroupElement {
	Vector log_coords;

	static GroupElement identity(std::size_t n) { return {zero_vector(n)}; }
	bool operator==(GroupElement const &o) const { return log_coords == o.log_coords; }
};

/// Word in the letters X (0) and Y (1), read as a right-nested bracket [a1,[a2,[...,a_m]]].
using BracketWord = std::vector<int>;

struct BchTerm {
	BracketWord word;
	Rational coeff;
};

/**
 * Dynkin's form of the Baker-Campbell-Hausdorff series, tabulated through total degree 6.
 *
 *   log(e^X e^Y) = sum_k (-1)^(k-1)/k sum 1/(m prod r_i! s_i!) [X^r1 Y^s1 ... X^rk Y^sk]
 *
 * Terms are aggregated per word; words ending in XX or YY vanish and words ending
 * in YX are folded into XY with a sign, so every stored word ends in XY.
 */
class BchTable {
  public:
	static constexpr int max_degree = 6;

	static BchTable const &instance()
	{
		static BchTable const table;
		return table;
	}

	/// Terms of the homogeneous degree-j part b_j (j >= 2).
	std::vector<BchTerm> const &degree(int j) const { return terms_.at(static_cast<std::size_t>(j)); }

  private:
	BchTable() : terms_(max_degree + 1)
	{
		std::vector<std::map<BracketWord, Rational>> acc(max_degree + 1);
		std::vector<std::pair<int, int>> pairs;
		for (int m = 2; m <= max_degree; ++m)
			enumerate(m, m, pairs, acc[static_cast<std::size_t>(m)]);
		for (int m = 2; m <= max_degree; ++m) {
			std::map<BracketWord, Rational> canon;
			for (auto const &[w, c] : acc[static_cast<std::size_t>(m)]) {
				int const a = w[w.size() - 2], b = w[w.size() - 1];
				if (a == b || c == 0)
					continue;
				BracketWord cw = w;
				Rational cc = c;
				if (a == 1) {
					std::swap(cw[cw.size() - 2], cw[cw.size() - 1]);
					cc = -cc;
				}
				canon[cw] += cc;
			}
			for (auto const &[w, c] : canon)
				if (c != 0)
					terms_[static_cast<std::size_t>(m)].push_back({w, c});
		}
	}

	static Rational factorial(int k)
	{
		Rational r = 1;
		for (int i = 2; i <= k; ++i)
			r *= i;
		return r;
	}

	// Sequences of (r_i, s_i) with r_i + s_i >= 1 summing to m.
	static void enumerate(int m, int remaining, std::vector<std::pair<int, int>> &pairs,
	                      std::map<BracketWord, Rational> &out)
	{
		if (remaining == 0) {
			int const k = static_cast<int>(pairs.size());
			Rational c = Rational(k % 2 == 1 ? 1 : -1, k) / m;
			BracketWord w;
			for (auto [r, s] : pairs) {
				c /= factorial(r) * factorial(s);
				w.insert(w.end(), static_cast<std::size_t>(r), 0);
				w.insert(w.end(), static_cast<std::size_t>(s), 1);
			}
			c.canonicalize();
			out[w] += c;
			return;
		}
		for (int r = 0; r <= remaining; ++r)
			for (int s = 0; r + s <= remaining; ++s) {
				if (r + s == 0)
					continue;
				pairs.emplace_back(r, s);
				enumerate(m, remaining - r - s, pairs, out);
				pairs.pop_back();
			}
	}

	std::vector<std::vector<BchTerm>> terms_;
};

/// Renders b_j symbolically, e.g. "1/12[X,[X,Y]] - 1/12[Y,[X,Y]]".
inline std::string format_bch_degree(int j)
{
	std::string out;
	for (auto const &t : BchTable::instance().degree(j)) {
		std::string bracket;
		for (std::size_t i = 0; i + 1 < t.word.size(); ++i)
			bracket += std::string("[") + (t.word[i] ? "Y" : "X") + ",";
		bracket += t.word.back() ? "Y" : "X";
		bracket += std::string(t.word.size() - 1, ']');
		Rational const mag = abs(t.coeff);
		if (out.empty())
			out += (t.coeff < 0 ? "-" : "");
		else
			out += (t.coeff < 0 ? " - " : " + ");
		out += to_string(mag) + bracket;
	}
	return out;
}

inline void check_bch_depth(NilpotentLieAlgebra const &g)
{
	if (g.nilpotency_class() > static_cast<std::size_t>(BchTable::max_degree))
		throw PreconditionError("nilpotency class " + std::to_string(g.nilpotency_class()) +
		                        " exceeds the BCH coefficient table depth " + std::to_string(BchTable::max_degree));
}

/// Homogeneous BCH component b_j(x, y), evaluated in the algebra.
inline Vector bch_component(NilpotentLieAlgebra const &g, int j, Vector const &x, Vector const &y)
{
	Vector out = zero_vector(g.dim());
	if (j == 1)
		return x + y;
	std::map<BracketWord, Vector> memo;  // suffix -> nested bracket value
	auto nested = [&](auto &&self, BracketWord const &w, std::size_t from) -> Vector const & {
		BracketWord key(w.begin() + static_cast<std::ptrdiff_t>(from), w.end());
		if (auto it = memo.find(key); it != memo.end())
			return it->second;
		Vector v = from + 1 == w.size() ? (w[from] ? y : x)
		                                : g.bracket(w[from] ? y : x, self(self, w, from + 1));
		return memo.emplace(std::move(key), std::move(v)).first->second;
	};
	for (auto const &t : BchTable::instance().degree(j))
		out += t.coeff * nested(nested, t.word, 0);
	return out;
}

/// x * y = log(exp x exp y), truncated at the nilpotency class.
inline Vector bch(NilpotentLieAlgebra const &g, Vector const &x, Vector const &y)
{
	check_bch_depth(g);
	if (x.size() != g.dim() || y.size() != g.dim())
		throw PreconditionError("bch: dimension mismatch");
	Vector r = x + y;
	int const k = static_cast<int>(g.nilpotency_class());
	for (int j = 2; j <= k; ++j)
		r += bch_component(g, j, x, y);
	return r;
}

inline GroupElement multiply(NilpotentLieAlgebra const &g, GroupElement const &a, GroupElement const &b)
{
	return {bch(g, a.log_coords, b.log_coords)};
}

inline Vector group_inverse(Vector const &x)
{
	return -x;
}

inline GroupElement inverse(GroupElement const &a)
{
	return {group_inverse(a.log_coords)};
}

// ---------------------------------------------------------------------------
// Matrix representations (test oracles for the group law)

inline bool is_strictly_upper(Matrix const &m)
{
	for (std::size_t i = 0; i < m.size(); ++i)
		for (std::size_t j = 0; j <= i && j < m[i].size(); ++j)
			if (m[i][j] != 0)
				return false;
	return true;
}

inline bool is_zero_matrix(Matrix const &m)
{
	for (auto const &row : m)
		if (!is_zero(row))
			return false;
	return true;
}

inline Matrix matrix_power(Matrix const &n, std::size_t k)
{
	Matrix r = identity_matrix(n.size());
	for (std::size_t i = 0; i < k; ++i)
		r = multiply(r, n);
	return r;
}

/// exp(N) for nilpotent N as the finite series sum N^k/k!.
inline Matrix matrix_exp(Matrix const &n)
{
	std::size_t const m = n.size();
	Matrix result = identity_matrix(m);
	Matrix term = identity_matrix(m);
	for (std::size_t k = 1; k <= m; ++k) {
		term = multiply(term, n);
		for (auto &row : term)
			for (auto &x : row)
				x /= static_cast<unsigned long>(k);
		for (std::size_t i = 0; i < m; ++i)
			for (std::size_t j = 0; j < m; ++j)
				result[i][j] += term[i][j];
	}
	if (!is_zero_matrix(matrix_power(n, m)))
		throw PreconditionError("matrix_exp: input is not nilpotent");
	return result;
}

/// log(U) for unipotent U as sum (-1)^(k+1) (U-I)^k / k.
inline Matrix matrix_log(Matrix const &u)
{
	std::size_t const m = u.size();
	Matrix n = u;
	for (std::size_t i = 0; i < m; ++i)
		n[i][i] -= 1;
	if (!is_zero_matrix(matrix_power(n, m)))
		throw PreconditionError("matrix_log: input is not unipotent");
	Matrix result = zero_matrix(m, m);
	Matrix power = identity_matrix(m);
	for (std::size_t k = 1; k < m; ++k) {
		power = multiply(power, n);
		Rational const c = Rational(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
		for (std::size_t i = 0; i < m; ++i)
			for (std::size_t j = 0; j < m; ++j)
				result[i][j] += c * power[i][j];
	}
	return result;
}

/// Faithful representation by strictly upper-triangular matrices.
class MatrixRep {
  public:
	MatrixRep(NilpotentLieAlgebra const &g, std::vector<Matrix> images) : images_(std::move(images))
	{
		if (images_.size() != g.dim())
			throw ValidationError("matrix representation: one image per basis vector required");
		size_ = images_.empty() ? 0 : images_[0].size();
		for (auto const &m : images_) {
			if (m.size() != size_ || !is_strictly_upper(m))
				throw ValidationError("matrix representation: images must be strictly upper-triangular " +
				                      std::to_string(size_) + "x" + std::to_string(size_));
		}
		for (std::size_t i = 0; i < g.dim(); ++i)
			for (std::size_t j = i + 1; j < g.dim(); ++j) {
				Matrix const lhs = commutator(images_[i], images_[j]);
				if (lhs != image(g.bracket_basis(i, j)))
					throw ValidationError("matrix representation is not a homomorphism on (" + g.labels()[i] + "," +
					                      g.labels()[j] + ")");
			}
		// Faithfulness: images linearly independent.
		Matrix flat;
		for (auto const &m : images_) {
			Vector row;
			for (auto const &r : m)
				row.insert(row.end(), r.begin(), r.end());
			flat.push_back(std::move(row));
		}
		if (rank(flat, size_ * size_) != g.dim())
			throw ValidationError("matrix representation is not faithful");
	}

	static MatrixRep from_json(NilpotentLieAlgebra const &g, json const &j)
	{
		try {
			std::size_t const m = j.at("dim").get<std::size_t>();
			std::vector<Matrix> images(g.dim(), zero_matrix(m, m));
			std::vector<bool> seen(g.dim(), false);
			for (auto const &[label, rows] : j.at("images").items()) {
				auto idx = g.index_of(label);
				if (!idx)
					throw ParseError("matrix representation: unknown label '" + label + "'");
				if (rows.size() != m)
					throw ParseError("matrix representation: wrong row count for '" + label + "'");
				for (std::size_t r = 0; r < m; ++r) {
					if (rows[r].size() != m)
						throw ParseError("matrix representation: wrong column count for '" + label + "'");
					for (std::size_t c = 0; c < m; ++c)
						images[*idx][r][c] = rational_from_json(rows[r][c]);
				}
				seen[*idx] = true;
			}
			for (std::size_t i = 0; i < g.dim(); ++i)
				if (!seen[i])
					throw ParseError("matrix representation: missing image for '" + g.labels()[i] + "'");
			return MatrixRep(g, std::move(images));
		} catch (json::exception const &e) {
			throw ParseError(std::string("matrix representation: ") + e.what());
		}
	}

	static MatrixRep load(NilpotentLieAlgebra const &g, std::string const &name)
	{
		return from_json(g, read_json_file(resolve_data_file(name, "reps")));
	}

	std::size_t size() const { return size_; }

	Matrix image(Vector const &x) const
	{
		Matrix m = zero_matrix(size_, size_);
		for (std::size_t i = 0; i < images_.size(); ++i) {
			if (x[i] == 0)
				continue;
			for (std::size_t r = 0; r < size_; ++r)
				for (std::size_t c = 0; c < size_; ++c)
					m[r][c] += x[i] * images_[i][r][c];
		}
		return m;
	}

	/// Coordinates of a matrix in the span of the images.
	Vector coordinates(Matrix const &m) const
	{
		std::size_t const n = images_.size();
		// Solve sum_i x_i images_i = m entrywise.
		Matrix aug;
		for (std::size_t r = 0; r < size_; ++r)
			for (std::size_t c = 0; c < size_; ++c) {
				Vector row(n + 1);
				for (std::size_t i = 0; i < n; ++i)
					row[i] = images_[i][r][c];
				row[n] = m[r][c];
				aug.push_back(std::move(row));
			}
		auto const e = rref(aug, n + 1);
		Vector x = zero_vector(n);
		for (std::size_t r = 0; r < e.rows.size(); ++r) {
			if (e.pivots[r] == n)
				throw PreconditionError("matrix is not in the image of the representation");
			x[e.pivots[r]] = e.rows[r][n];
		}
		return x;
	}

	Matrix exp(Vector const &x) const { return matrix_exp(image(x)); }
	Vector log(Matrix const &u) const { return coordinates(matrix_log(u)); }

	static Matrix commutator(Matrix const &a, Matrix const &b)
	{
		Matrix ab = multiply(a, b);
		Matrix const ba = multiply(b, a);
		for (std::size_t i = 0; i < ab.size(); ++i)
			for (std::size_t j = 0; j < ab.size(); ++j)
				ab[i][j] -= ba[i][j];
		return ab;
	}

  private:
	std::vector<Matrix> images_;
	std::size_t size_ = 0;
};

// ---------------------------------------------------------------------------
// Integral structure

inline bool has_integral_structure_constants(NilpotentLieAlgebra const &g)
{
	for (std::size_t i = 0; i < g.dim(); ++i)
		for (std::size_t j = i + 1; j < g.dim(); ++j)
			for (auto const &c : g.bracket_basis(i, j))
				if (!is_integer(c))
					return false;
	return true;
}

/// Sufficient condition from the coefficient ladder: a^(j-1) c_w in Z for every
/// tabulated coefficient of degree 2 <= j <= class.
inline bool satisfies_coefficient_ladder(NilpotentLieAlgebra const &g, long a)
{
	int const k = static_cast<int>(g.nilpotency_class());
	for (int j = 2; j <= k; ++j) {
		Rational const aj = rational_pow(Rational(a), j - 1);
		for (auto const &t : BchTable::instance().degree(j))
			if (!is_integer(aj * t.coeff))
				return false;
	}
	return true;
}

/// b_j(aX_i, aX_k) in a * Z^n for all basis pairs and all 2 <= j <= class.
inline bool basis_pairs_close(NilpotentLieAlgebra const &g, long a)
{
	int const k = static_cast<int>(g.nilpotency_class());
	Rational const ra(a);
	for (std::size_t i = 0; i < g.dim(); ++i)
		for (std::size_t l = 0; l < g.dim(); ++l) {
			if (i == l)
				continue;
			Vector const x = ra * g.basis_vector(i), y = ra * g.basis_vector(l);
			for (int j = 2; j <= k; ++j)
				for (auto const &c : bch_component(g, j, x, y))
					if (!is_integer(c / ra))
						return false;
		}
	return true;
}

/// True when a * (Z-span of the basis) is a universal Lie order.
inline bool is_universal_scalar(NilpotentLieAlgebra const &g, long a)
{
	check_bch_depth(g);
	if (!has_integral_structure_constants(g))
		throw PreconditionError("structure constants are not integral; rescale the basis first");
	return a >= 1 && satisfies_coefficient_ladder(g, a) && basis_pairs_close(g, a);
}

/// Least a >= 1 passing is_universal_scalar; the lcm of all relevant denominators
/// always passes, so the search is finite.
inline long universal_scalar(NilpotentLieAlgebra const &g)
{
	check_bch_depth(g);
	if (!has_integral_structure_constants(g))
		throw PreconditionError("structure constants are not integral; rescale the basis first");
	Integer bound = 1;
	for (int j = 2; j <= static_cast<int>(g.nilpotency_class()); ++j)
		for (auto const &t : BchTable::instance().degree(j))
			mpz_lcm(bound.get_mpz_t(), bound.get_mpz_t(), t.coeff.get_den_mpz_t());
	for (long a = 1; a <= bound.get_si(); ++a)
		if (satisfies_coefficient_ladder(g, a) && basis_pairs_close(g, a))
			return a;
	throw PreconditionError("internal: no universal scalar found below the certificate bound");
}

} // namespace heightlab
