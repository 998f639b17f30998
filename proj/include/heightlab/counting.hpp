#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <vector>

#include "heightlab/geometry.hpp"

namespace heightlab {

/// Primitive integer coordinates (w, x_1, ..., x_n) of the point (x_1/w, ..., x_n/w) of G, w > 0.
using RationalPoint = std::vector<long>;

using u128 = unsigned __int128;

namespace detail {

inline u128 upow(u128 b, unsigned e)
{
	u128 r = 1;
	while (e--)
		r *= b;
	return r;
}

/// floor(B^{1/k}).
inline unsigned long long iroot(unsigned long long B, unsigned k)
{
	if (k == 1 || B < 2)
		return B;
	auto r = static_cast<unsigned long long>(std::pow(static_cast<long double>(B), 1.0L / k));
	while (r > 0 && upow(r, k) > B)
		--r;
	while (upow(r + 1, k) <= B)
		++r;
	return r;
}

inline unsigned long long uabs(long x)
{
	return x < 0 ? static_cast<unsigned long long>(-(x + 1)) + 1 : static_cast<unsigned long long>(x);
}

inline std::string u128_string(u128 v)
{
	if (v == 0)
		return "0";
	std::string s;
	while (v) {
		s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
		v /= 10;
	}
	return {s.rbegin(), s.rend()};
}

inline void check_point(CompactificationModel const &m, RationalPoint const &pt)
{
	if (pt.size() != m.n + 1)
		throw PreconditionError("point has " + std::to_string(pt.size()) + " coordinates, model " + m.name +
		                        " needs " + std::to_string(m.n + 1));
	if (pt[0] == 0)
		throw PreconditionError("w = 0: boundary point, not in G");
	if (pt[0] < 0)
		throw PreconditionError("primitive points are normalized with w > 0");
	unsigned long long g = 0;
	for (long c : pt)
		g = std::gcd(g, uabs(c));
	if (g != 1)
		throw PreconditionError("coordinates are not coprime");
}

} // namespace detail

/// Anticanonical height of a primitive point, without checks.
inline u128 height_value(CompactificationModel const &m, RationalPoint const &pt)
{
	if (m.height == "projective") {
		unsigned long long mx = 0;
		for (long c : pt)
			mx = std::max(mx, detail::uabs(c));
		return detail::upow(mx, static_cast<unsigned>(m.n + 1));
	}
	if (m.height == "blowup_p2") {
		unsigned long long const w = detail::uabs(pt[0]), x = detail::uabs(pt[1]), y = detail::uabs(pt[2]);
		unsigned long long const a = std::max(w, x), b = std::max(a, y);
		return u128(b) * b * (a / std::gcd(w, x));
	}
	throw PreconditionError("no height evaluator for kind '" + m.height + "'");
}

/**
 * P^n: max_j |x_j|^{n+1}.
 * Blow-up of P^2 at (0:0:1): max(|w|,|x|,|y|)^2 max(|w|,|x|) / gcd(w, x), the product of the heights
 * of the strict transform of {w = 0} (cubed) and of the exceptional curve (squared).
 */
inline Integer height(CompactificationModel const &m, RationalPoint const &pt)
{
	detail::check_point(m, pt);
	return Integer(detail::u128_string(height_value(m, pt)));
}

/// Primitive coordinates of an affine rational point.
inline RationalPoint primitive_point(Vector const &affine)
{
	Integer w = 1;
	for (auto const &c : affine)
		w = lcm(w, Integer(c.get_den()));
	RationalPoint pt{w.get_si()};
	if (!w.fits_slong_p())
		throw PreconditionError("denominator too large");
	for (auto const &c : affine) {
		Integer const x = c.get_num() * (w / c.get_den());
		if (!x.fits_slong_p())
			throw PreconditionError("numerator too large");
		pt.push_back(x.get_si());
	}
	return pt;
}

inline Vector affine_point(RationalPoint const &pt)
{
	Vector v;
	for (std::size_t i = 1; i < pt.size(); ++i)
		v.emplace_back(Rational(pt[i], pt[0]));
	for (auto &c : v)
		c.canonicalize();
	return v;
}

/// gamma . pt for gamma in G(Z); the common denominator w is unchanged and primitivity is preserved.
inline RationalPoint translate(CompactificationModel const &m, std::vector<long> const &gamma, RationalPoint pt)
{
	if (gamma.size() != m.n)
		throw PreconditionError("translation has the wrong dimension");
	long const w = pt[0];
	if (m.group == "heisenberg") {
		// (a, b, c)(x, y, z) = (a + x, b + y, c + z + a y)
		pt[3] += gamma[2] * w + gamma[0] * pt[2];
		pt[1] += gamma[0] * w;
		pt[2] += gamma[1] * w;
		return pt;
	}
	if (m.group != "additive")
		throw PreconditionError("unknown group law '" + m.group + "'");
	for (std::size_t i = 0; i < gamma.size(); ++i)
		pt[i + 1] += gamma[i] * w;
	return pt;
}

// ---------------------------------------------------------------------------
// Enumeration

struct CountSample {
	unsigned long long B = 0;
	unsigned long long N = 0;
};

struct CountOptions {
	unsigned threads = 1;
	unsigned partitions = 64;
	unsigned long long tuple_budget = 2'000'000'000ULL;  // swept (w, x_1, ..., x_{n-1}) tuples
	std::string checkpoint;  // "model,B,partition,count" lines; resumes when present
};

namespace detail {

/// Smallest prime factor table up to n.
inline std::vector<unsigned> spf_table(unsigned long long n)
{
	std::vector<unsigned> spf(n + 1, 0);
	for (unsigned long long i = 2; i <= n; ++i)
		if (spf[i] == 0)
			for (unsigned long long j = i; j <= n; j += i)
				if (spf[j] == 0)
					spf[j] = static_cast<unsigned>(i);
	return spf;
}

/// #{y in [-Y, Y] : gcd(y, g) = 1} by inclusion-exclusion over the prime factors of g.
inline unsigned long long coprime_in_range(std::vector<unsigned long long> const &primes, unsigned long long Y)
{
	long long total = 0;
	std::size_t const k = primes.size();
	for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
		unsigned long long d = 1;
		int bits = 0;
		for (std::size_t i = 0; i < k; ++i)
			if (mask >> i & 1) {
				d *= primes[i];
				++bits;
			}
		long long const c = static_cast<long long>(2 * (Y / d) + 1);  // multiples of d, zero included
		total += bits % 2 ? -c : c;
	}
	return static_cast<unsigned long long>(total);
}

} // namespace detail

/**
 * Exact N(B) for each B: sweep the outer coordinates (w, x_1, ..., x_{n-1}) and count the last coordinate
 * in closed form. Partitions are residue classes of w, summed in index order.
 */
inline std::vector<CountSample> enumerate_points(CompactificationModel const &m, std::vector<unsigned long long> Bs,
                                                 CountOptions const &opt = {})
{
	std::sort(Bs.begin(), Bs.end());
	Bs.erase(std::unique(Bs.begin(), Bs.end()), Bs.end());
	std::vector<CountSample> out;
	for (auto B : Bs)
		out.push_back({B, 0});
	if (Bs.empty() || Bs.back() == 0)
		return out;
	std::size_t const n = m.n;
	bool const projective = m.height == "projective";
	if (!projective && m.height != "blowup_p2")
		throw PreconditionError("no enumeration plan for height kind '" + m.height + "'");

	// Per-B bound: P^n needs max <= B^{1/(n+1)}; the blow-up height is at least max(|w|,|x|,|y|)^2.
	std::vector<unsigned long long> bound;
	for (auto B : Bs)
		bound.push_back(projective ? detail::iroot(B, static_cast<unsigned>(n + 1)) : detail::iroot(B, 2));
	unsigned long long const W = bound.back();
	long double tuples = static_cast<long double>(W);
	for (std::size_t i = 1; i < n; ++i)
		tuples *= 2.0L * static_cast<long double>(W) + 1;
	if (tuples > static_cast<long double>(opt.tuple_budget))
		throw BudgetError("B = " + std::to_string(Bs.back()) + " needs about " +
		                  std::to_string(static_cast<unsigned long long>(tuples)) +
		                  " swept tuples, over the budget of " + std::to_string(opt.tuple_budget));

	unsigned const parts = std::max(1u, opt.partitions);
	std::vector<std::vector<unsigned long long>> counts(parts, std::vector<unsigned long long>(Bs.size(), 0));
	std::vector<bool> done(parts, false);

	std::mutex io;
	if (!opt.checkpoint.empty()) {
		std::map<std::pair<unsigned long long, unsigned>, unsigned long long> seen;
		std::ifstream in(opt.checkpoint);
		std::string line;
		while (std::getline(in, line)) {
			std::stringstream ss(line);
			std::string model, b, part, c;
			if (!std::getline(ss, model, ',') || !std::getline(ss, b, ',') || !std::getline(ss, part, ',') ||
			    !std::getline(ss, c))
				continue;
			if (model != m.name)
				continue;
			seen[{std::stoull(b), static_cast<unsigned>(std::stoul(part))}] = std::stoull(c);
		}
		for (unsigned p = 0; p < parts; ++p) {
			bool all = true;
			for (std::size_t i = 0; i < Bs.size() && all; ++i) {
				auto it = seen.find({Bs[i], p});
				if (it == seen.end())
					all = false;
				else
					counts[p][i] = it->second;
			}
			done[p] = all;
			if (!all)
				std::fill(counts[p].begin(), counts[p].end(), 0);
		}
	}

	auto const spf = detail::spf_table(W);
	auto run_partition = [&](unsigned part) {
		auto &mine = counts[part];
		std::vector<long> outer(n, 0);
		std::vector<unsigned long long> primes;
		for (unsigned long long w = 1 + part; w <= W; w += parts) {
			outer[0] = static_cast<long>(w);
			for (std::size_t i = 1; i < n; ++i)
				outer[i] = -static_cast<long>(W);
			while (true) {
				unsigned long long g = 0, mx = 0;
				for (long c : outer) {
					g = std::gcd(g, detail::uabs(c));
					mx = std::max(mx, detail::uabs(c));
				}
				primes.clear();
				for (unsigned long long r = g; r > 1;) {
					unsigned const p = spf[r];
					primes.push_back(p);
					while (r % p == 0)
						r /= p;
				}
				for (std::size_t i = 0; i < Bs.size(); ++i) {
					unsigned long long Y;
					if (projective) {
						if (mx > bound[i])
							continue;
						Y = bound[i];
					} else {
						unsigned long long const h = mx / g;
						if (u128(mx) * mx * h > Bs[i])
							continue;
						Y = detail::iroot(Bs[i] / h, 2);
					}
					mine[i] += detail::coprime_in_range(primes, Y);
				}
				std::size_t k = 1;
				while (k < n && outer[k] == static_cast<long>(W))
					outer[k++] = -static_cast<long>(W);
				if (k == n)
					break;
				++outer[k];
			}
		}
		if (!opt.checkpoint.empty()) {
			std::lock_guard lock(io);
			std::ofstream ck(opt.checkpoint, std::ios::app);
			for (std::size_t i = 0; i < Bs.size(); ++i)
				ck << m.name << "," << Bs[i] << "," << part << "," << mine[i] << "\n";
		}
	};

	std::atomic<unsigned> next{0};
	std::vector<std::thread> pool;
	std::vector<std::exception_ptr> errors(std::max(1u, opt.threads));
	for (unsigned t = 0; t < std::max(1u, opt.threads); ++t)
		pool.emplace_back([&, t] {
			try {
				for (unsigned p; (p = next++) < parts;)
					if (!done[p])
						run_partition(p);
			} catch (...) {
				errors[t] = std::current_exception();
			}
		});
	for (auto &th : pool)
		th.join();
	for (auto const &e : errors)
		if (e)
			std::rethrow_exception(e);

	for (unsigned p = 0; p < parts; ++p)
		for (std::size_t i = 0; i < Bs.size(); ++i)
			out[i].N += counts[p][i];
	return out;
}

inline unsigned long long enumerate_points(CompactificationModel const &m, unsigned long long B,
                                           CountOptions const &opt = {})
{
	return enumerate_points(m, std::vector<unsigned long long>{B}, opt).front().N;
}

/// `per_decade` log-spaced sample heights from 10^lo_exp up to max_B, max_B included.
inline std::vector<unsigned long long> log_spaced_bounds(unsigned long long max_B, unsigned per_decade,
                                                         double lo_exp = 2)
{
	std::vector<unsigned long long> out;
	double const hi = std::log10(static_cast<double>(max_B));
	for (unsigned k = 0;; ++k) {
		double const e = lo_exp + static_cast<double>(k) / std::max(1u, per_decade);
		if (e >= hi - 1e-9)
			break;
		out.push_back(static_cast<unsigned long long>(std::llround(std::pow(10.0, e))));
	}
	out.push_back(max_B);
	return out;
}

// ---------------------------------------------------------------------------
// Fit

struct CountReport {
	std::string model;
	std::vector<CountSample> samples;
	std::size_t b = 1;
	std::vector<double> coefficients;  // N/B ~ sum_j c_j log(B)^j
	double fitted = 0;
	double predicted = 0;
	double deviation = 0;
};

/// Least squares of N(B)/B against sum_{j<b} c_j log(B)^j; for b = 1 the mean of N/B over the top half.
inline CountReport fit_and_compare(std::vector<CountSample> const &samples, std::size_t b, double predicted)
{
	if (b == 0)
		throw PreconditionError("pole order b must be at least 1");
	if (samples.size() < std::max<std::size_t>(3, b + 1))
		throw PreconditionError("fit needs at least " + std::to_string(std::max<std::size_t>(3, b + 1)) +
		                        " samples, got " + std::to_string(samples.size()));
	unsigned long long lo = samples.front().B, hi = samples.front().B;
	for (auto const &s : samples) {
		lo = std::min(lo, s.B);
		hi = std::max(hi, s.B);
	}
	if (lo == 0 || static_cast<double>(hi) < 100.0 * static_cast<double>(lo))
		throw PreconditionError("fit samples must span at least two decades of B");

	CountReport r;
	r.samples = samples;
	r.b = b;
	r.predicted = predicted;
	std::vector<CountSample> sorted = samples;
	std::sort(sorted.begin(), sorted.end(), [](auto const &x, auto const &y) { return x.B < y.B; });
	if (b == 1) {
		std::size_t const top = (sorted.size() + 1) / 2;
		long double s = 0;
		for (std::size_t i = sorted.size() - top; i < sorted.size(); ++i)
			s += static_cast<long double>(sorted[i].N) / static_cast<long double>(sorted[i].B);
		r.coefficients = {static_cast<double>(s / static_cast<long double>(top))};
	} else {
		// Normal equations in long double; b is tiny.
		std::vector<std::vector<long double>> a(b, std::vector<long double>(b + 1, 0));
		for (auto const &s : sorted) {
			long double const L = std::log(static_cast<long double>(s.B));
			long double const y = static_cast<long double>(s.N) / static_cast<long double>(s.B);
			std::vector<long double> phi(b);
			for (std::size_t j = 0; j < b; ++j)
				phi[j] = std::pow(L, static_cast<long double>(j));
			for (std::size_t i = 0; i < b; ++i) {
				for (std::size_t j = 0; j < b; ++j)
					a[i][j] += phi[i] * phi[j];
				a[i][b] += phi[i] * y;
			}
		}
		for (std::size_t c = 0; c < b; ++c) {
			std::size_t piv = c;
			for (std::size_t i = c + 1; i < b; ++i)
				if (std::abs(a[i][c]) > std::abs(a[piv][c]))
					piv = i;
			std::swap(a[c], a[piv]);
			if (std::abs(a[c][c]) < 1e-300L)
				throw PreconditionError("ill-conditioned fit");
			for (std::size_t i = 0; i < b; ++i) {
				if (i == c)
					continue;
				long double const f = a[i][c] / a[c][c];
				for (std::size_t j = c; j <= b; ++j)
					a[i][j] -= f * a[c][j];
			}
		}
		for (std::size_t j = 0; j < b; ++j)
			r.coefficients.push_back(static_cast<double>(a[j][b] / a[j][j]));
	}
	r.fitted = r.coefficients.back();
	r.deviation = predicted != 0 ? std::abs(r.fitted / predicted - 1) : std::numeric_limits<double>::infinity();
	return r;
}

/// CSV with columns B,N,N_over_prediction where the prediction is c B log(B)^{b-1}.
inline void write_count_csv(std::ostream &os, std::vector<CountSample> const &samples, std::size_t b,
                            double predicted)
{
	os << "B,N,N_over_prediction\n";
	for (auto const &s : samples) {
		double const B = static_cast<double>(s.B);
		double const pred = predicted * B * std::pow(std::log(B), static_cast<double>(b - 1));
		char buf[64];
		std::snprintf(buf, sizeof buf, "%.9f", pred > 0 ? static_cast<double>(s.N) / pred : 0.0);
		os << s.B << "," << s.N << "," << buf << "\n";
	}
}

// ---------------------------------------------------------------------------
// Left translation

/// All points of height <= B, each listed once.
inline std::vector<RationalPoint> points_up_to(CompactificationModel const &m, unsigned long long B)
{
	std::vector<RationalPoint> out;
	if (B == 0)
		return out;
	bool const projective = m.height == "projective";
	unsigned long long const W =
	    projective ? detail::iroot(B, static_cast<unsigned>(m.n + 1)) : detail::iroot(B, 2);
	long const L = static_cast<long>(W);
	RationalPoint pt(m.n + 1, 0);
	for (long w = 1; w <= L; ++w) {
		pt[0] = w;
		std::fill(pt.begin() + 1, pt.end(), -L);
		while (true) {
			unsigned long long g = 0;
			for (long c : pt)
				g = std::gcd(g, detail::uabs(c));
			if (g == 1 && height_value(m, pt) <= B)
				out.push_back(pt);
			std::size_t k = 1;
			while (k <= m.n && pt[k] == L)
				pt[k++] = -L;
			if (k > m.n)
				break;
			++pt[k];
		}
	}
	return out;
}

struct TranslationCheck {
	unsigned long long B = 0;
	std::vector<long> gamma;
	unsigned long long N = 0;
	unsigned long long N_translated = 0;  // #{pt : H(gamma . pt) <= B}
	bool injective = true;
	double ratio() const { return N ? static_cast<double>(N_translated) / static_cast<double>(N) : 0.0; }
};

/**
 * N_gamma(B) counted independently of the ball: every primitive point whose numerators fit the
 * box that gamma^{-1} can reach is translated and measured.
 */
inline TranslationCheck translation_check(CompactificationModel const &m, unsigned long long B,
                                          std::vector<long> const &gamma)
{
	TranslationCheck r;
	r.B = B;
	r.gamma = gamma;
	auto const ball = points_up_to(m, B);
	r.N = ball.size();
	std::vector<RationalPoint> images;
	for (auto const &pt : ball)
		images.push_back(translate(m, gamma, pt));
	std::sort(images.begin(), images.end());
	r.injective = std::adjacent_find(images.begin(), images.end()) == images.end();

	bool const projective = m.height == "projective";
	unsigned long long const W =
	    projective ? detail::iroot(B, static_cast<unsigned>(m.n + 1)) : detail::iroot(B, 2);
	long reach = 1;
	for (long c : gamma)
		reach += std::abs(c);
	if (m.group == "heisenberg")
		reach += std::abs(gamma.at(0)) * (1 + std::abs(gamma.at(1)));
	long const L = static_cast<long>(W) * reach;
	RationalPoint pt(m.n + 1, 0);
	for (long w = 1; w <= static_cast<long>(W); ++w) {
		pt[0] = w;
		std::fill(pt.begin() + 1, pt.end(), -L);
		while (true) {
			unsigned long long g = 0;
			for (long c : pt)
				g = std::gcd(g, detail::uabs(c));
			if (g == 1 && height_value(m, translate(m, gamma, pt)) <= B)
				++r.N_translated;
			std::size_t k = 1;
			while (k <= m.n && pt[k] == L)
				pt[k++] = -L;
			if (k > m.n)
				break;
			++pt[k];
		}
	}
	return r;
}

} // namespace heightlab
