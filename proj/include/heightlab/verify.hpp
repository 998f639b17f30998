#pragma once

// Property suites shared by `heightlab verify` and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "heightlab/counting.hpp"
#include "heightlab/enveloping.hpp"
#include "heightlab/group_law.hpp"
#include "heightlab/oracle/residue_integral.hpp"
#include "heightlab/zeta.hpp"

namespace heightlab::verify {

struct CheckResult {
	std::string name;
	bool passed = true;
	std::string detail;
};

/// Collects checks; `fail_fast` stops the suite at the first mismatch.
class Suite {
  public:
	explicit Suite(std::string name, bool fail_fast = false) : name_(std::move(name)), fail_fast_(fail_fast) {}

	bool stopped() const { return fail_fast_ && !passed(); }

	void record(std::string check, bool ok, std::string detail = "")
	{
		if (stopped())
			return;
		checks_.push_back({std::move(check), ok, std::move(detail)});
	}

	bool passed() const
	{
		return std::all_of(checks_.begin(), checks_.end(), [](auto const &c) { return c.passed; });
	}

	std::string const &name() const { return name_; }
	std::vector<CheckResult> const &checks() const { return checks_; }

	json to_json() const
	{
		json c = json::array();
		for (auto const &r : checks_)
			c.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
		return {{"suite", name_}, {"passed", passed()}, {"checks", c}};
	}

  private:
	std::string name_;
	bool fail_fast_;
	std::vector<CheckResult> checks_;
};

inline std::vector<std::string> shipped_algebra_names()
{
	return {"abelian1", "abelian2", "abelian3", "abelian4", "h3", "n3", "k4"};
}

inline std::vector<std::string> shipped_model_names()
{
	return {"p1", "p2", "p3", "heis_p3", "heis_center_p1", "blowup_p2"};
}

// ---------------------------------------------------------------------------
// Lie algebra side

inline void pfaffian_identities(Suite &s, std::string const &name, NilpotentLieAlgebra const &g, int samples,
                                std::uint64_t seed)
{
	RationalSampler rng(seed);
	auto const basis = default_strong_basis(g);
	int bad = 0;
	for (int t = 0; t < samples && !bad; ++t) {
		Vector const ell = rng.vector(g.dim());
		auto const st = d_vector(g, ell, basis);
		Rational const pf = pfaffian(g, ell, st, basis);
		if (pf * pf != determinant(stratum_block(g, ell, st, basis)))
			++bad;
		Vector const moved = coadjoint_act(g, rng.vector(g.dim()), ell);
		if (pfaffian(g, moved, basis) != pf)
			++bad;
	}
	s.record("pfaffian:" + name, bad == 0, std::to_string(samples) + " functionals, Pf^2 = det and Ad*-invariance");
}

inline void polarization_certificate(Suite &s, std::string const &name, NilpotentLieAlgebra const &g, int samples,
                                     std::uint64_t seed)
{
	RationalSampler rng(seed);
	auto const basis = default_strong_basis(g);
	int bad = 0;
	for (int t = 0; t < samples && !bad; ++t) {
		Vector const ell = rng.vector(g.dim());
		auto const m = vergne_polarization(g, ell, basis);
		std::size_t const r = radical(g, ell).dim();
		if (!g.is_subalgebra(m.space()) || !is_isotropic(g, ell, m.space()) || 2 * m.dim() != r + g.dim())
			++bad;
	}
	s.record("polarization:" + name, bad == 0, std::to_string(samples) + " functionals, subalgebra, isotropic, dimension");
}

inline void heisenberg_polarization(Suite &s)
{
	auto const g = NilpotentLieAlgebra::load("h3");
	auto const m = vergne_polarization(g, Vector{1, 0, 0}, default_strong_basis(g));
	Subspace const zy(Matrix{g.basis_vector(*g.index_of("Z")), g.basis_vector(*g.index_of("Y"))}, 3);
	s.record("polarization:h3-generic", m.space() == zy, "Vergne output for l(Z) != 0 is <Z, Y>");
}

inline void bch_against_matrices(Suite &s, std::string const &name, NilpotentLieAlgebra const &g,
                                 MatrixRep const &rep, int samples, std::uint64_t seed)
{
	RationalSampler rng(seed);
	int bad = 0;
	for (int t = 0; t < samples && !bad; ++t) {
		Vector const x = rng.vector(g.dim()), y = rng.vector(g.dim());
		Matrix const prod = multiply(rep.exp(x), rep.exp(y));
		if (rep.log(prod) != bch(g, x, y))
			++bad;
	}
	s.record("bch:" + name, bad == 0, std::to_string(samples) + " pairs, bch = log(exp x exp y)");
}

inline void bch_symbolic(Suite &s)
{
	s.record("bch:degree-2", format_bch_degree(2) == "1/2[X,Y]", format_bch_degree(2));
	s.record("bch:degree-3", format_bch_degree(3) == "1/12[X,[X,Y]] - 1/12[Y,[X,Y]]", format_bch_degree(3));
}

/// The least scalar is universal; `expected` pins it when a reference value is known.
inline void universal_scalar_check(Suite &s, std::string const &name, NilpotentLieAlgebra const &g,
                                   std::optional<long> expected = std::nullopt)
{
	long const a = universal_scalar(g);
	bool ok = is_universal_scalar(g, a) && (!expected || a == *expected);
	std::string detail = "least a = " + std::to_string(a);
	if (expected)
		detail += ", expected " + std::to_string(*expected);
	s.record("universal-scalar:" + name, ok, detail);
}

inline void enveloping_suite(Suite &s, std::string const &name, NilpotentLieAlgebra const &g, int words,
                             int functionals, int orbit_points, std::uint64_t seed)
{
	RationalSampler rng(seed);
	std::uniform_int_distribution<std::size_t> letter(0, g.dim() - 1), len(0, 6);
	int bad = 0;
	for (int t = 0; t < words && !bad; ++t) {
		Word w(len(rng.engine()));
		for (auto &x : w)
			x = letter(rng.engine());
		if (!(normal_form(g, w, RewriteStrategy::leftmost) == normal_form(g, w, RewriteStrategy::rightmost)))
			++bad;
	}
	s.record("pbw-confluence:" + name, bad == 0, std::to_string(words) + " random words, two strategies");

	auto const invariants = load_invariants(name);
	bool central = true;
	for (auto const &p : invariants)
		central = central && is_central(g, symmetrize(g, p));
	s.record("central-symmetrization:" + name, central,
	         std::to_string(invariants.size()) + " invariants, exact commutators with every generator");

	bad = 0;
	for (int t = 0; t < functionals && !bad; ++t) {
		Vector const ell = rng.vector(g.dim());
		for (auto const &p : invariants) {
			try {
				auto const base = scalar_eigenvalue(g, p, ell, seed + static_cast<std::uint64_t>(t));
				for (int k = 0; k < orbit_points && !bad; ++k) {
					Vector const moved = coadjoint_act(g, rng.vector(g.dim()), ell);
					if (!(scalar_eigenvalue(g, p, moved, seed) == base))
						++bad;
				}
			} catch (PreconditionError const &) {
				++bad;
			}
		}
	}
	s.record("scalar-eigenvalue:" + name, bad == 0,
	         std::to_string(functionals) + " functionals x " + std::to_string(orbit_points) + " orbit points");
}

inline void cross_section(Suite &s, std::string const &name, NilpotentLieAlgebra const &g, int functionals,
                          int actions, std::uint64_t seed)
{
	RationalSampler rng(seed);
	auto const basis = default_strong_basis(g);
	int bad = 0;
	for (int t = 0; t < functionals && !bad; ++t) {
		Vector const ell = rng.vector(g.dim());
		Vector const rep = orbit_representative(g, ell, basis);
		if (orbit_representative(g, rep, basis) != rep)
			++bad;
		for (int k = 0; k < actions && !bad; ++k)
			if (orbit_representative(g, coadjoint_act(g, rng.vector(g.dim()), ell), basis) != rep)
				++bad;
	}
	s.record("cross-section:" + name, bad == 0,
	         std::to_string(functionals) + " functionals x " + std::to_string(actions) + " group actions");
}

inline void invariant_files(Suite &s, std::string const &name, NilpotentLieAlgebra const &g)
{
	bool ok = true;
	for (auto const &p : load_invariants(name))
		ok = ok && is_ad_invariant(g, p);
	s.record("invariants:" + name, ok, "shipped polynomials are exactly Ad*-invariant");
}

// ---------------------------------------------------------------------------
// Geometry and zeta side

inline std::vector<std::vector<long>> s_grid(CompactificationModel const &m)
{
	std::vector<std::vector<long>> out{{}};
	for (auto k : m.kappa) {
		std::vector<std::vector<long>> next;
		for (auto const &prefix : out)
			for (long d = 0; d <= 2; ++d) {
				auto v = prefix;
				v.push_back(k + d);
				next.push_back(v);
			}
		out = std::move(next);
	}
	return out;
}

inline void local_oracle(Suite &s, CompactificationModel const &m, std::vector<unsigned long> const &primes,
                         unsigned depth)
{
	int cases = 0, bad = 0;
	std::string first;
	for (auto p : primes)
		for (auto const &sv : s_grid(m)) {
			std::vector<Rational> sr(sv.begin(), sv.end());
			Rational const formula = *local_height_integral(m, p, sr).exact;
			Rational const brute = oracle::residue_integral(m, p, sv, depth);
			++cases;
			if (formula != brute) {
				++bad;
				if (first.empty())
					first = "p=" + std::to_string(p) + ": " + to_string(formula) + " vs " + to_string(brute);
			}
		}
	s.record("local-oracle:" + m.name, bad == 0,
	         std::to_string(cases) + " (p, s) cases, exact" + (first.empty() ? "" : "; first mismatch " + first));
}

inline void bad_factor_oracle(Suite &s, CompactificationModel const &m)
{
	std::vector<long> const kappa(m.kappa.begin(), m.kappa.end());
	bool ok = true;
	for (auto p : m.bad_primes) {
		auto it = m.bad_factors.find(p);
		ok = ok && it != m.bad_factors.end() && it->second == oracle::residue_integral(m, p, kappa, 4);
	}
	s.record("bad-factors:" + m.name, ok, "shipped factors equal the depth p^4 residue-class integral");
}

inline void unit_character_sums(Suite &s, unsigned long max_p, unsigned max_m)
{
	int bad = 0, cases = 0;
	for (auto p : primes_up_to(max_p))
		for (unsigned m = 0; m <= max_m; ++m, ++cases)
			if (twisted_unit_integral(p, m) != oracle::unit_character_sum(p, m))
				++bad;
	s.record("unit-character-sums", bad == 0, std::to_string(cases) + " (p, m) cases, exact");
}

struct TwistedProductStats {
	double cauchy = 0;      // max_{x in [lo, hi]} |P(x) - P(hi)|
	double drift = 0;       // max_{x in [100, hi]} |R(x)/R(hi) - 1| for R = U/D
	double growth = 0;      // U(hi) / U(100)
};

inline TwistedProductStats twisted_product_stats(CompactificationModel const &m, RationalFunctionDivisor const &f,
                                                 unsigned long hi = 1000, unsigned long lo = 900)
{
	TwistedProductStats st;
	auto const tw = partial_products(m, hi, [&](unsigned long p) { return regularized_twisted_factor(m, f, p); });
	double const end = tw.back().second;
	for (auto const &[p, v] : tw)
		if (p >= lo)
			st.cauchy = std::max(st.cauchy, std::abs(v - end));

	// U(x) = prod I_p(kappa), D(x) = prod (1 - 1/p)^{-#A}.
	auto const U = partial_products(m, hi, [&](unsigned long p) { return *local_height_integral(m, p).exact; });
	auto const D = partial_products(m, hi, [&](unsigned long p) {
		return rational_pow(1 - Rational(1, static_cast<long>(p)), -static_cast<long>(m.boundary_size()));
	});
	double const ratio_end = U.back().second / D.back().second;
	double u100 = 0;
	for (std::size_t i = 0; i < U.size(); ++i) {
		if (U[i].first < 100)
			continue;
		if (u100 == 0)
			u100 = U[i].second;
		st.drift = std::max(st.drift, std::abs(U[i].second / D[i].second / ratio_end - 1));
	}
	st.growth = U.back().second / u100;
	return st;
}

inline void twisted_products(Suite &s, CompactificationModel const &m)
{
	for (auto const &f : m.twists) {
		auto const st = twisted_product_stats(m, f);
		s.record("twisted-cauchy:" + m.name + ":" + f.name, st.cauchy <= 1e-4,
		         "max |P(x) - P(1000)| over x in [900, 1000] = " + std::to_string(st.cauchy));
	}
	if (m.twists.empty())
		return;
	auto const st = twisted_product_stats(m, m.twists.front());
	s.record("untwisted-divergence:" + m.name, st.drift <= 0.05 && st.growth > 1,
	         "U/D drift over [100, 1000] = " + std::to_string(st.drift) +
	             ", U(1000)/U(100) = " + std::to_string(st.growth));
}

inline void model_validation(Suite &s, CompactificationModel const &m)
{
	auto const r = validate_model(m);
	std::string detail;
	for (auto const &v : r.violations)
		detail += v + "; ";
	s.record("model:" + m.name, r.ok(), detail.empty() ? "kappa >= 2, open orbit, total point count" : detail);
	bool drop = true;
	for (auto const &f : m.twists)
		drop = drop && twist_pole_set(m, f).size() < m.boundary_size();
	s.record("pole-drop:" + m.name, drop, "|A_0(f)| < #A for every shipped twist");
}

// ---------------------------------------------------------------------------
// Counting side

struct FitTrend {
	std::vector<unsigned long long> tops;
	std::vector<double> deviations;
	CountReport final_fit;
	bool monotone() const
	{
		for (std::size_t i = 1; i < deviations.size(); ++i)
			if (deviations[i] > deviations[i - 1])
				return false;
		return true;
	}
};

/// Counts once up to max_B and fits each prefix of samples ending at the given tops.
inline FitTrend count_and_fit(CompactificationModel const &m, unsigned long long max_B, unsigned per_decade,
                              double predicted, std::vector<unsigned long long> tops, CountOptions const &opt = {})
{
	auto const abc = abc_invariants(m, m.kappa_class());
	auto const samples = enumerate_points(m, log_spaced_bounds(max_B, per_decade), opt);
	FitTrend tr;
	tr.tops = tops;
	for (auto top : tops) {
		std::vector<CountSample> sub;
		for (auto const &x : samples)
			if (x.B <= top)
				sub.push_back(x);
		auto fit = fit_and_compare(sub, abc.b, predicted);
		tr.deviations.push_back(fit.deviation);
		tr.final_fit = fit;
	}
	return tr;
}

inline void small_counts(Suite &s)
{
	auto const p1 = CompactificationModel::load("p1");
	s.record("count:p1-small", enumerate_points(p1, 4) == 7 && enumerate_points(p1, 1) == 3 &&
	                               enumerate_points(p1, 0) == 0,
	         "N(4) = 7, N(1) = 3, N(0) = 0");
	bool same = true;
	for (auto const &name : {"p1", "p2", "blowup_p2"}) {
		auto const m = CompactificationModel::load(name);
		same = same && enumerate_points(m, 5000) == points_up_to(m, 5000).size();
	}
	s.record("count:closed-form-fibers", same, "fiber formula equals explicit ball enumeration at B = 5000");
}

inline void translation_bijection(Suite &s, unsigned long long B)
{
	auto const p1 = CompactificationModel::load("p1");
	bool ok = true;
	for (long c : {1L, -1L, 2L, 3L, -5L}) {
		auto const r = translation_check(p1, B, {c});
		ok = ok && r.injective && r.N_translated == r.N;
	}
	s.record("left-translation:p1", ok, "N_gamma(B) = N(B) for 5 integral translations at B = " + std::to_string(B));
}

} // namespace heightlab::verify
