#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "heightlab/rational.hpp"

namespace heightlab {

/// Dense exact matrix stored row-major as a list of rows.
using Matrix = std::vector<Vector>;

inline Matrix zero_matrix(std::size_t rows, std::size_t cols)
{
	return Matrix(rows, zero_vector(cols));
}

inline Matrix identity_matrix(std::size_t n)
{
	Matrix m = zero_matrix(n, n);
	for (std::size_t i = 0; i < n; ++i)
		m[i][i] = 1;
	return m;
}

inline Matrix transpose(Matrix const &a, std::size_t cols)
{
	Matrix t = zero_matrix(cols, a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		for (std::size_t j = 0; j < cols; ++j)
			t[j][i] = a[i][j];
	return t;
}

inline Matrix multiply(Matrix const &a, Matrix const &b)
{
	std::size_t const n = a.size();
	std::size_t const m = b.empty() ? 0 : b[0].size();
	Matrix c = zero_matrix(n, m);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t k = 0; k < b.size(); ++k) {
			if (a[i][k] == 0)
				continue;
			for (std::size_t j = 0; j < m; ++j)
				c[i][j] += a[i][k] * b[k][j];
		}
	return c;
}

inline Vector matvec(Matrix const &a, Vector const &x)
{
	Vector y = zero_vector(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		y[i] = dot(a[i], x);
	return y;
}

struct EchelonForm {
	Matrix rows;                      // nonzero rows, reduced
	std::vector<std::size_t> pivots;  // pivot column of each row
};

/// Reduced row echelon form; pivots are the leading (lowest-index) nonzero columns.
inline EchelonForm rref(Matrix a, std::size_t cols)
{
	EchelonForm out;
	std::size_t r = 0;
	for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
		std::size_t piv = r;
		while (piv < a.size() && a[piv][c] == 0)
			++piv;
		if (piv == a.size())
			continue;
		std::swap(a[r], a[piv]);
		Rational const inv = Rational(1) / a[r][c];
		for (auto &x : a[r])
			x *= inv;
		for (std::size_t i = 0; i < a.size(); ++i) {
			if (i == r || a[i][c] == 0)
				continue;
			Rational const f = a[i][c];
			for (std::size_t j = c; j < cols; ++j)
				a[i][j] -= f * a[r][j];
		}
		out.pivots.push_back(c);
		++r;
	}
	a.resize(r);
	out.rows = std::move(a);
	return out;
}

inline std::size_t rank(Matrix const &a, std::size_t cols)
{
	return rref(a, cols).pivots.size();
}

/// Basis of {x : a x = 0}, one vector per free column, in increasing free-column order.
inline Matrix kernel(Matrix const &a, std::size_t cols)
{
	auto const e = rref(a, cols);
	std::vector<bool> is_pivot(cols, false);
	for (auto p : e.pivots)
		is_pivot[p] = true;
	Matrix basis;
	for (std::size_t f = 0; f < cols; ++f) {
		if (is_pivot[f])
			continue;
		Vector v = zero_vector(cols);
		v[f] = 1;
		for (std::size_t r = 0; r < e.rows.size(); ++r)
			v[e.pivots[r]] = -e.rows[r][f];
		basis.push_back(std::move(v));
	}
	return basis;
}

/// Determinant by exact Gaussian elimination.
inline Rational determinant(Matrix a)
{
	std::size_t const n = a.size();
	Rational det = 1;
	for (std::size_t c = 0; c < n; ++c) {
		std::size_t piv = c;
		while (piv < n && a[piv][c] == 0)
			++piv;
		if (piv == n)
			return 0;
		if (piv != c) {
			std::swap(a[piv], a[c]);
			det = -det;
		}
		det *= a[c][c];
		for (std::size_t i = c + 1; i < n; ++i) {
			if (a[i][c] == 0)
				continue;
			Rational const f = a[i][c] / a[c][c];
			for (std::size_t j = c; j < n; ++j)
				a[i][j] -= f * a[c][j];
		}
	}
	return det;
}

/// Linear subspace of F^n kept in canonical reduced echelon form, so equality is structural.
class Subspace {
  public:
	Subspace() = default;

	Subspace(Matrix generators, std::size_t ambient) : ambient_(ambient)
	{
		auto e = rref(std::move(generators), ambient);
		basis_ = std::move(e.rows);
		pivots_ = std::move(e.pivots);
	}

	static Subspace zero(std::size_t ambient) { return Subspace({}, ambient); }
	static Subspace full(std::size_t ambient) { return Subspace(identity_matrix(ambient), ambient); }

	std::size_t dim() const { return basis_.size(); }
	std::size_t ambient() const { return ambient_; }
	Matrix const &basis() const { return basis_; }
	std::vector<std::size_t> const &pivots() const { return pivots_; }

	bool contains(Vector const &v) const
	{
		Vector w = v;
		for (std::size_t r = 0; r < basis_.size(); ++r) {
			Rational const f = w[pivots_[r]];
			if (f == 0)
				continue;
			for (std::size_t j = 0; j < ambient_; ++j)
				w[j] -= f * basis_[r][j];
		}
		return is_zero(w);
	}

	bool contains(Subspace const &other) const
	{
		for (auto const &v : other.basis_)
			if (!contains(v))
				return false;
		return true;
	}

	/// Linear functionals vanishing on the subspace, as row vectors.
	Matrix annihilator() const { return kernel(basis_, ambient_); }

	Subspace operator+(Subspace const &other) const
	{
		Matrix g = basis_;
		g.insert(g.end(), other.basis_.begin(), other.basis_.end());
		return Subspace(std::move(g), ambient_);
	}

	Subspace intersect(Subspace const &other) const
	{
		Matrix eqs = annihilator();
		auto const b = other.annihilator();
		eqs.insert(eqs.end(), b.begin(), b.end());
		return Subspace(kernel(eqs, ambient_), ambient_);
	}

	bool operator==(Subspace const &other) const
	{
		return ambient_ == other.ambient_ && basis_ == other.basis_;
	}

  private:
	std::size_t ambient_ = 0;
	Matrix basis_;
	std::vector<std::size_t> pivots_;
};

} // namespace heightlab
