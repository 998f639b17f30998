#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "heightlab/error.hpp"

namespace heightlab {

using Rational = mpq_class;
using Integer = mpz_class;

/// Coordinates in a fixed basis; used for elements of g and of g*.
using Vector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q". The result is canonicalized.
inline Rational parse_rational(std::string_view text)
{
	std::string s(text);
	auto const first = s.find_first_not_of(" \t");
	auto const last = s.find_last_not_of(" \t");
	if (first == std::string::npos)
		throw ParseError("empty rational literal");
	s = s.substr(first, last - first + 1);
	Rational r;
	if (r.set_str(s, 10) != 0)
		throw ParseError("malformed rational literal '" + s + "'");
	if (r.get_den() == 0)
		throw ParseError("zero denominator in '" + s + "'");
	r.canonicalize();
	return r;
}

inline std::string to_string(Rational const &r)
{
	return r.get_str(10);
}

inline Vector zero_vector(std::size_t n)
{
	return Vector(n, Rational(0));
}

inline Vector unit_vector(std::size_t n, std::size_t i)
{
	Vector v = zero_vector(n);
	v[i] = 1;
	return v;
}

inline bool is_zero(Vector const &v)
{
	for (auto const &x : v)
		if (x != 0)
			return false;
	return true;
}

inline Vector operator+(Vector const &a, Vector const &b)
{
	Vector r(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		r[i] = a[i] + b[i];
	return r;
}

inline Vector operator-(Vector const &a, Vector const &b)
{
	Vector r(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		r[i] = a[i] - b[i];
	return r;
}

inline Vector operator-(Vector const &a)
{
	Vector r(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		r[i] = -a[i];
	return r;
}

inline Vector operator*(Rational const &c, Vector const &a)
{
	Vector r(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		r[i] = c * a[i];
	return r;
}

inline Vector &operator+=(Vector &a, Vector const &b)
{
	for (std::size_t i = 0; i < a.size(); ++i)
		a[i] += b[i];
	return a;
}

inline Rational dot(Vector const &a, Vector const &b)
{
	Rational s = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		s += a[i] * b[i];
	return s;
}

/// p-adic valuation of a nonzero rational.
inline long valuation(Rational const &r, unsigned long p)
{
	if (r == 0)
		throw PreconditionError("valuation of zero");
	long v = 0;
	Integer num = abs(r.get_num());
	Integer den = r.get_den();
	while (mpz_divisible_ui_p(num.get_mpz_t(), p)) {
		num /= p;
		++v;
	}
	while (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
		den /= p;
		--v;
	}
	return v;
}

/// Exact p^e for a possibly negative exponent.
inline Rational rational_pow(Rational const &base, long e)
{
	Rational r = 1;
	Rational b = e >= 0 ? base : Rational(1) / base;
	unsigned long k = e >= 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
	while (k) {
		if (k & 1)
			r *= b;
		b *= b;
		k >>= 1;
	}
	return r;
}

inline bool is_integer(Rational const &r)
{
	return r.get_den() == 1;
}

/// Small random rationals: numerator in [-max_num, max_num], denominator in [1, max_den].
class RationalSampler {
  public:
	explicit RationalSampler(std::uint64_t seed, long max_num = 9, long max_den = 4)
	    : rng_(seed), num_(-max_num, max_num), den_(1, max_den)
	{
	}

	Rational operator()()
	{
		Rational r(num_(rng_), den_(rng_));
		r.canonicalize();
		return r;
	}

	Rational integer()
	{
		return Rational(num_(rng_));
	}

	Vector vector(std::size_t n)
	{
		Vector v(n);
		for (auto &x : v)
			x = (*this)();
		return v;
	}

	Vector integer_vector(std::size_t n)
	{
		Vector v(n);
		for (auto &x : v)
			x = integer();
		return v;
	}

	std::mt19937_64 &engine() { return rng_; }

  private:
	std::mt19937_64 rng_;
	std::uniform_int_distribution<long> num_;
	std::uniform_int_distribution<long> den_;
};

} // namespace heightlab
