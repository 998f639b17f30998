#pragma once

// Brute-force p-adic height integrals by residue-class enumeration.
// Independent of the strata formula: only the chart geometry of each height kind is used.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "heightlab/geometry.hpp"

namespace heightlab::oracle {

/// One chart coordinate: ranges over Z_p (or pZ_p), integrand factor |a|^e with e = sum_a coeff_a s_a + shift.
struct ChartCoordinate {
	bool in_maximal_ideal = false;
	std::vector<long> coeff;
	long shift = 0;
};

/// The integrand on a chart is the product of its coordinate factors; the Jacobian is already folded in.
struct Chart {
	std::vector<ChartCoordinate> coords;
};

/// Charts of X(Z_p) by the first coordinate of the primitive representative that is a unit.
inline std::vector<Chart> height_charts(CompactificationModel const &m)
{
	std::size_t const b = m.boundary_size();
	std::vector<Chart> out;
	if (m.height == "projective") {
		// (w : x_1 : ... : x_n); on chart j the affine point is (x_i / w) and H = 1/|w|.
		std::size_t const n = m.n;
		Chart open;
		open.coords.assign(n, ChartCoordinate{false, std::vector<long>(b, 0), 0});
		out.push_back(open);
		for (std::size_t j = 1; j <= n; ++j) {
			Chart c;
			std::vector<long> s_coeff(b, 0);
			s_coeff[0] = 1;
			c.coords.push_back({true, s_coeff, -static_cast<long>(n + 1)});
			for (std::size_t i = 1; i <= n; ++i)
				if (i != j)
					c.coords.push_back({i < j, std::vector<long>(b, 0), 0});
			out.push_back(c);
		}
		return out;
	}
	if (m.height == "blowup_p2") {
		// (w : x : y) blown up at (0:0:1); H_D1 = max(|w|,|x|)/|w|, H_E = max(|w|,|x|,|y|)/max(|w|,|x|).
		auto coord = [&](bool maximal, long s1, long s2, long shift) {
			return ChartCoordinate{maximal, {s1, s2}, shift};
		};
		out.push_back({{coord(false, 0, 0, 0), coord(false, 0, 0, 0)}});    // w = 1
		out.push_back({{coord(true, 1, 0, -3), coord(false, 0, 0, 0)}});    // x = 1: |w|^{s1-3}
		out.push_back({{coord(false, 1, 0, -3), coord(true, 0, 1, -2)}});   // y = 1, |x| >= |w|: w = e u, x = e
		out.push_back({{coord(true, 0, 0, 0), coord(true, 0, 1, -2)}});     // y = 1, |x| < |w|: w = e, x = e u
		return out;
	}
	throw PreconditionError("no chart description for height kind '" + m.height + "'");
}

namespace detail {

inline unsigned long ipow(unsigned long p, unsigned k)
{
	unsigned long r = 1;
	while (k--)
		r *= p;
	return r;
}

inline unsigned valuation_below(unsigned long t, unsigned long p, unsigned k)
{
	unsigned v = 0;
	while (v < k && t % p == 0) {
		t /= p;
		++v;
	}
	return v;
}

} // namespace detail

/**
 * int over the chart domain of prod |a_i|^{e_i} da, enumerating residues mod p^k of every coordinate whose
 * exponent is nonzero. A class t != 0 mod p^k has constant |t| and weight p^{-k}|t|^e; the class 0 mod p^k
 * is closed by self-similarity, contributing p^{-k(1+e)} I(e) with I(e) = int_{Z_p} |x|^e dx.
 */
inline Rational chart_integral(Chart const &c, unsigned long p, std::vector<long> const &s, unsigned k)
{
	Rational const P(static_cast<long>(p));
	unsigned long const pk = detail::ipow(p, k);
	std::vector<long> exps;
	std::vector<bool> maximal;
	Rational volume = 1;
	for (auto const &x : c.coords) {
		long e = x.shift;
		for (std::size_t a = 0; a < s.size(); ++a)
			e += x.coeff[a] * s[a];
		if (e <= -1)
			throw PreconditionError("chart integrand |a|^" + std::to_string(e) + " is not integrable");
		if (e == 0) {
			if (x.in_maximal_ideal)
				volume /= P;
			continue;
		}
		exps.push_back(e);
		maximal.push_back(x.in_maximal_ideal);
	}
	std::size_t const r = exps.size();
	if (r == 0)
		return volume;

	// Valuation of each residue class, capped at k (the class 0 mod p^k).
	std::vector<unsigned> val(pk);
	for (unsigned long t = 0; t < pk; ++t)
		val[t] = detail::valuation_below(t, p, k);

	auto weight = [&](std::size_t i, unsigned v, Rational const &closure) -> Rational {
		if (v == k)
			return rational_pow(P, -static_cast<long>(k) * (1 + exps[i])) * closure;
		return rational_pow(P, -static_cast<long>(k) - static_cast<long>(v) * exps[i]);
	};

	std::vector<Rational> closure(r);
	for (std::size_t i = 0; i < r; ++i) {
		Rational partial = 0;
		for (unsigned long t = 1; t < pk; ++t)
			partial += rational_pow(P, -static_cast<long>(k) - static_cast<long>(val[t]) * exps[i]);
		closure[i] = partial / (1 - rational_pow(P, -static_cast<long>(k) * (1 + exps[i])));
	}

	// Walk every tuple of residues and tally valuation vectors (flattened base k+1).
	std::vector<unsigned long> tally(detail::ipow(k + 1, static_cast<unsigned>(r)), 0);
	std::vector<unsigned long> t(r, 0);
	while (true) {
		std::size_t slot = 0;
		bool admissible = true;
		for (std::size_t i = r; i-- > 0;) {
			unsigned const v = val[t[i]];
			if (maximal[i] && v == 0)
				admissible = false;
			slot = slot * (k + 1) + v;
		}
		if (admissible)
			++tally[slot];
		std::size_t i = 0;
		while (i < r && ++t[i] == pk)
			t[i++] = 0;
		if (i == r)
			break;
	}

	Rational total = 0;
	for (std::size_t slot = 0; slot < tally.size(); ++slot) {
		if (tally[slot] == 0)
			continue;
		Rational term = static_cast<long>(tally[slot]);
		std::size_t rest = slot;
		for (std::size_t i = 0; i < r; ++i) {
			term *= weight(i, static_cast<unsigned>(rest % (k + 1)), closure[i]);
			rest /= k + 1;
		}
		total += term;
	}
	return volume * total;
}

/// int_{G(Q_p)} H(s; g)^{-1} dg with vol(G(Z_p)) = 1, for integer s, valid at every prime.
inline Rational residue_integral(CompactificationModel const &m, unsigned long p, std::vector<long> const &s,
                                 unsigned depth)
{
	if (s.size() != m.boundary_size())
		throw PreconditionError("s must have one entry per boundary component");
	Rational total = 0;
	for (auto const &c : height_charts(m))
		total += chart_integral(c, p, s, depth);
	return total;
}

/// (1/p^m) sum_{a in (Z/p^m)^*} exp(2 pi i a / p^m), rounded to the lattice p^{-m} Z.
/// For m = 0 the character is trivial on Z_p and the sum runs over (Z/p)^*.
inline Rational unit_character_sum(unsigned long p, unsigned m)
{
	if (m == 0)
		return Rational(static_cast<long>(p - 1), static_cast<long>(p));
	unsigned long const pm = detail::ipow(p, m);
	std::complex<long double> sum = 0;
	for (unsigned long a = 1; a <= pm; ++a) {
		if (a % p == 0)
			continue;
		long double const angle = 2 * std::numbers::pi_v<long double> * static_cast<long double>(a % pm) /
		                          static_cast<long double>(pm);
		sum += std::polar(1.0L, angle);
	}
	Rational r(std::lround(sum.real()), static_cast<long>(pm));
	r.canonicalize();
	return r;
}

} // namespace heightlab::oracle
