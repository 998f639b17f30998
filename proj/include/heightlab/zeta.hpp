#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "heightlab/geometry.hpp"

namespace heightlab {

inline bool is_prime(unsigned long n)
{
	if (n < 2)
		return false;
	for (unsigned long d = 2; d * d <= n; ++d)
		if (n % d == 0)
			return false;
	return true;
}

inline std::vector<unsigned long> primes_up_to(unsigned long bound)
{
	std::vector<bool> composite(bound + 1, false);
	std::vector<unsigned long> out;
	for (unsigned long i = 2; i <= bound; ++i) {
		if (composite[i])
			continue;
		out.push_back(i);
		for (unsigned long j = i * i; j <= bound; j += i)
			composite[j] = true;
	}
	return out;
}

/// Exact when every s_a is an integer; otherwise only the floating value is set.
struct LocalFactorValue {
	std::optional<Rational> exact;
	long double value = 0;
	unsigned long q = 0;
	std::vector<Rational> s;
};

namespace detail {

inline void check_local_args(CompactificationModel const &m, unsigned long q, std::vector<Rational> const &s)
{
	if (!is_prime(q))
		throw PreconditionError(std::to_string(q) + " is not prime");
	if (m.is_bad(q))
		throw PreconditionError(std::to_string(q) + " is a bad prime for " + m.name +
		                        "; use the shipped bad-prime factor");
	if (s.size() != m.boundary_size())
		throw PreconditionError("s must have one entry per boundary component");
	for (std::size_t a = 0; a < s.size(); ++a)
		if (s[a] <= m.kappa[a] - 1)
			throw PreconditionError("s(" + m.boundary[a] + ") = " + to_string(s[a]) +
			                        " is outside the convergence domain s > kappa - 1 = " +
			                        std::to_string(m.kappa[a] - 1));
}

inline bool all_integer(std::vector<Rational> const &s)
{
	for (auto const &x : s)
		if (!is_integer(x))
			return false;
	return true;
}

/// q^{-t} for t = s_a - kappa_a + 1 > 0, exact for integer t.
inline Rational q_pow_neg(unsigned long q, Rational const &t)
{
	return rational_pow(Rational(static_cast<long>(q)), -t.get_num().get_si());
}

inline long double q_pow_neg_float(unsigned long q, Rational const &t)
{
	return std::pow(static_cast<long double>(q), -static_cast<long double>(t.get_d()));
}

} // namespace detail

/// q^{-n} sum_A |D_A^0(F_q)| prod_{a in A} (q - 1)/(q^{s_a - kappa_a + 1} - 1).
inline LocalFactorValue local_height_integral(CompactificationModel const &m, unsigned long q,
                                              std::vector<Rational> const &s)
{
	detail::check_local_args(m, q, s);
	LocalFactorValue out;
	out.q = q;
	out.s = s;
	Integer const Q = static_cast<long>(q);
	std::vector<Rational> t;
	for (std::size_t a = 0; a < s.size(); ++a)
		t.push_back(s[a] - m.kappa[a] + 1);
	if (detail::all_integer(s)) {
		Rational sum = 0;
		for (auto const &[A, poly] : m.strata) {
			Rational term = evaluate(poly, Q);
			for (auto a : A) {
				Rational const x = detail::q_pow_neg(q, t[a]);
				term *= Rational(Q - 1) * x / (1 - x);
			}
			sum += term;
		}
		out.exact = sum / rational_pow(Rational(Q), static_cast<long>(m.n));
		out.value = static_cast<long double>(out.exact->get_d());
	} else {
		long double sum = 0;
		long double const ql = static_cast<long double>(q);
		for (auto const &[A, poly] : m.strata) {
			long double term = static_cast<long double>(evaluate(poly, Q).get_d());
			for (auto a : A) {
				long double const x = detail::q_pow_neg_float(q, t[a]);
				term *= (ql - 1) * x / (1 - x);
			}
			sum += term;
		}
		out.value = sum / std::pow(ql, static_cast<long double>(m.n));
	}
	return out;
}

inline LocalFactorValue local_height_integral(CompactificationModel const &m, unsigned long q)
{
	return local_height_integral(m, q, m.kappa_class());
}

/// int_{Z_p^*} psi(p^{-m} u) du with vol(Z_p) = 1.
inline Rational twisted_unit_integral(unsigned long p, unsigned long m)
{
	Rational const P(static_cast<long>(p));
	if (m == 0)
		return 1 - 1 / P;
	if (m == 1)
		return -1 / P;
	return 0;
}

/**
 * Local factor of the height integral against psi(f), f with boundary pole orders d_a.
 *
 *   open orbit                 1
 *   D_a^0 off E(f)            (c_a - e_a) q^{-(n-1)} sum_{m>=1} q^{-m t_a} J(m d_a)
 *   D_a^0 on E(f), deeper     untwisted terms (psi replaced by 1)
 *
 * with t_a = 1 + s_a - kappa_a, c_a = |D_a^0(F_q)|, e_a = |D_a^0 cap E(f)|.
 */
inline LocalFactorValue twisted_local_factor(CompactificationModel const &m, RationalFunctionDivisor const &f,
                                             unsigned long p, std::vector<Rational> const &s)
{
	detail::check_local_args(m, p, s);
	if (f.d.size() != m.boundary_size())
		throw PreconditionError("twist datum does not match the boundary of " + m.name);
	LocalFactorValue out;
	out.q = p;
	out.s = s;
	Integer const Q = static_cast<long>(p);
	std::vector<Rational> t;
	for (std::size_t a = 0; a < s.size(); ++a)
		t.push_back(s[a] - m.kappa[a] + 1);

	// Generic over exact / floating evaluation of x_a = q^{-t_a}.
	auto assemble = [&](auto const &x, auto zero) {
		using T = decltype(zero);
		auto conv = [](Rational const &r) {
			if constexpr (std::is_same_v<T, Rational>)
				return r;
			else
				return static_cast<long double>(r.get_d());
		};
		T const q = conv(Rational(Q));
		T const qn = conv(rational_pow(Rational(Q), static_cast<long>(m.n)));
		T sum = 1;
		for (auto const &[A, poly] : m.strata) {
			if (A.empty())
				continue;
			T const count = conv(Rational(evaluate(poly, Q)));
			if (A.size() >= 2) {
				T term = count / qn;
				for (auto a : A)
					term *= (q - 1) * x[a] / (1 - x[a]);
				sum += term;
				continue;
			}
			std::size_t const a = A[0];
			T const on_zero = conv(Rational(evaluate(f.zero_meets[a], Q)));
			T const untwisted = (q - 1) * x[a] / (1 - x[a]) / qn;
			// sum_{m>=1} x^m J(m d): J vanishes once m d >= 2.
			T series;
			if (f.d[a] == 0)
				series = (1 - 1 / q) * x[a] / (1 - x[a]);
			else if (f.d[a] == 1)
				series = -x[a] / q;
			else
				series = 0;
			sum += (count - on_zero) * series * q / qn + on_zero * untwisted;
		}
		return sum;
	};

	if (detail::all_integer(s)) {
		std::vector<Rational> x;
		for (auto const &ta : t)
			x.push_back(detail::q_pow_neg(p, ta));
		out.exact = assemble(x, Rational(0));
		out.value = static_cast<long double>(out.exact->get_d());
	} else {
		std::vector<long double> x;
		for (auto const &ta : t)
			x.push_back(detail::q_pow_neg_float(p, ta));
		out.value = assemble(x, static_cast<long double>(0));
	}
	return out;
}

/// (1 - 1/p)^{#A} I_p(kappa), using the shipped exact factor at bad primes.
inline Rational regularized_local_factor(CompactificationModel const &m, unsigned long p)
{
	Rational const reg = rational_pow(1 - Rational(1, static_cast<long>(p)), static_cast<long>(m.boundary_size()));
	if (m.is_bad(p)) {
		auto it = m.bad_factors.find(p);
		if (it == m.bad_factors.end())
			throw PreconditionError("model " + m.name + " ships no local factor for the bad prime " +
			                        std::to_string(p));
		return reg * it->second;
	}
	return reg * *local_height_integral(m, p).exact;
}

/// (1 - 1/p)^{|A_0(f)|} times the twisted factor at s = kappa (good primes only).
inline Rational regularized_twisted_factor(CompactificationModel const &m, RationalFunctionDivisor const &f,
                                           unsigned long p)
{
	auto const a0 = twist_pole_set(m, f);
	Rational const reg = rational_pow(1 - Rational(1, static_cast<long>(p)), static_cast<long>(a0.size()));
	return reg * *twisted_local_factor(m, f, p, m.kappa_class()).exact;
}

// ---------------------------------------------------------------------------
// Archimedean density

/// H_infinity(kappa; x) at an affine point x of G(R) = R^n.
inline double archimedean_height(CompactificationModel const &m, std::vector<double> const &x)
{
	if (m.height == "projective") {
		double mx = 1;
		for (double v : x)
			mx = std::max(mx, std::abs(v));
		return std::pow(mx, static_cast<double>(m.n + 1));
	}
	if (m.height == "blowup_p2") {
		double const a = std::max(1.0, std::abs(x.at(0)));
		double const b = std::max(a, std::abs(x.at(1)));
		return b * b * a;
	}
	throw PreconditionError("no archimedean height evaluator for kind '" + m.height + "'");
}

/**
 * int_{R^n} H_infinity(kappa; x)^{-1} dx by nested adaptive Gauss-Kronrod.
 * The integrand is even in every coordinate, so only the positive orthant is integrated; each
 * 1-d integral is split where the max-norm can switch branch (at 1 and at the outer coordinates).
 */
inline double archimedean_density(CompactificationModel const &m, double rel_tol = 1e-8)
{
	using boost::math::quadrature::gauss_kronrod;
	std::size_t const n = m.n;
	std::vector<double> x(n, 0.0);
	double const inner_tol = rel_tol * 1e-3;
	double outer_error = 0;

	std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
		if (k == n)
			return 1.0 / archimedean_height(m, x);
		std::vector<double> cuts{0.0, 1.0};
		for (std::size_t j = 0; j < k; ++j)
			cuts.push_back(x[j]);
		std::sort(cuts.begin(), cuts.end());
		cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
		cuts.push_back(std::numeric_limits<double>::infinity());
		double total = 0;
		for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
			double const lo = cuts[c], hi = cuts[c + 1];
			if (hi <= lo)
				continue;
			double err = 0, l1 = 0;
			auto f = [&](double v) {
				double const saved = x[k];
				x[k] = v;
				double const r = level(k + 1);
				x[k] = saved;
				return r;
			};
			double const piece = gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, inner_tol, &err, &l1);
			if (k == 0)
				outer_error += err;
			total += piece;
		}
		return total;
	};
	double const orthant = level(0);
	if (!(outer_error <= rel_tol * std::abs(orthant)))
		throw Error("archimedean quadrature did not reach the requested tolerance (relative error estimate " +
		            std::to_string(outer_error / std::abs(orthant)) + ")");
	return std::ldexp(orthant, static_cast<int>(n));
}

// ---------------------------------------------------------------------------
// Euler product

struct EulerEstimate {
	std::string model;
	double tau = 0;
	std::size_t pole_order = 0;
	unsigned long truncation_prime = 0;
	double archimedean_density = 0;
	double tail_heuristic = 0;
	double fitted_c = 0;  // max over p in (P/2, P] of |factor - 1| p^2
	std::vector<std::pair<unsigned long, Rational>> factors_sample;
};

/// Kahan-compensated sum of log factors, always in ascending prime order.
class CompensatedLogProduct {
  public:
	void multiply(long double factor_minus_one)
	{
		long double const y = std::log1p(factor_minus_one) - carry_;
		long double const t = sum_ + y;
		carry_ = (t - sum_) - y;
		sum_ = t;
	}
	long double log() const { return sum_; }
	long double value() const { return std::exp(sum_); }

  private:
	long double sum_ = 0, carry_ = 0;
};

/// Per-prime factors computed in parallel, combined sequentially so the result is worker-count independent.
inline std::vector<Rational> parallel_factors(std::vector<unsigned long> const &primes,
                                              std::function<Rational(unsigned long)> const &factor, unsigned threads)
{
	std::vector<Rational> out(primes.size());
	threads = std::max(1u, threads);
	std::vector<std::thread> pool;
	std::vector<std::exception_ptr> errors(threads);
	for (unsigned w = 0; w < threads; ++w)
		pool.emplace_back([&, w] {
			try {
				for (std::size_t i = w; i < primes.size(); i += threads)
					out[i] = factor(primes[i]);
			} catch (...) {
				errors[w] = std::current_exception();
			}
		});
	for (auto &t : pool)
		t.join();
	for (auto const &e : errors)
		if (e)
			std::rethrow_exception(e);
	return out;
}

inline EulerEstimate euler_leading_constant(CompactificationModel const &m, unsigned long prime_bound,
                                            unsigned threads = 1, double arch = -1)
{
	if (prime_bound < 100)
		throw PreconditionError("prime bound " + std::to_string(prime_bound) + " is too small (need P >= 100)");
	EulerEstimate est;
	est.model = m.name;
	est.pole_order = m.boundary_size();
	est.truncation_prime = prime_bound;
	est.archimedean_density = arch >= 0 ? arch : archimedean_density(m);
	auto const primes = primes_up_to(prime_bound);
	auto const factors = parallel_factors(
	    primes, [&](unsigned long p) { return regularized_local_factor(m, p); }, threads);
	CompensatedLogProduct prod;
	double c = 0;
	for (std::size_t i = 0; i < primes.size(); ++i) {
		Rational const dev = factors[i] - 1;
		prod.multiply(static_cast<long double>(dev.get_d()));
		if (2 * primes[i] > prime_bound) {
			double const p = static_cast<double>(primes[i]);
			c = std::max(c, std::abs(dev.get_d()) * p * p);
		}
		if (i < 8)
			est.factors_sample.emplace_back(primes[i], factors[i]);
	}
	est.fitted_c = c;
	est.tau = static_cast<double>(static_cast<long double>(est.archimedean_density) * prod.value());
	// sum_{p > P} C/p^2 is about C/(P log P); relative error of the product.
	double const P = static_cast<double>(prime_bound);
	est.tail_heuristic = c / (P * std::log(P));
	return est;
}

/// Leading coefficient of N(B) ~ c(-K) tau / (b-1)! B log(B)^{b-1}, with c(-K) = prod 1/kappa_a.
inline double predicted_coefficient(CompactificationModel const &m, EulerEstimate const &est)
{
	auto const abc = abc_invariants(m, m.kappa_class());
	double fact = 1;
	for (std::size_t i = 2; i < abc.b; ++i)
		fact *= static_cast<double>(i);
	return abc.c.get_d() * est.tau / fact;
}

/// Partial products prod_{p <= x, p good} of the given per-prime factor, one entry per prime.
inline std::vector<std::pair<unsigned long, double>> partial_products(CompactificationModel const &m,
                                                                      unsigned long bound,
                                                                      std::function<Rational(unsigned long)> const &f)
{
	std::vector<std::pair<unsigned long, double>> out;
	CompensatedLogProduct prod;
	for (auto p : primes_up_to(bound)) {
		if (m.is_bad(p))
			continue;
		prod.multiply(static_cast<long double>(Rational(f(p) - 1).get_d()));
		out.emplace_back(p, static_cast<double>(prod.value()));
	}
	return out;
}

} // namespace heightlab
