// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>

#include "fixtures.hpp"
#include "heightlab/heightlab.hpp"

using namespace heightlab;

namespace {

constexpr std::uint64_t seed = 42;

std::string first_failure(verify::Suite const &s)
{
	for (auto const &c : s.checks())
		if (!c.passed)
			return c.name + ": " + c.detail;
	return "";
}

std::string fmt(char const *f, double x)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, f, x);
	return buf;
}

struct Outcome {
	bool passed;
	std::string detail;
};

Outcome from_suite(verify::Suite const &s, std::string const &summary)
{
	if (s.passed())
		return {true, summary + " (" + std::to_string(s.checks().size()) + " checks)"};
	return {false, first_failure(s)};
}

template <class F>
void each_algebra(F &&fn)
{
	for (auto const &name : fixtures::shipped_algebras())
		fn(name, NilpotentLieAlgebra::load(name));
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome local_oracle()
{
	verify::Suite s("c1");
	for (auto const *name : {"p1", "p2", "p3", "blowup_p2"})
		verify::local_oracle(s, CompactificationModel::load(name), {5, 7, 11}, 3);
	return from_suite(s, "formula equals residue-class integral at depth p^3, exact");
}

Outcome b_one()
{
	CountOptions opt;
	opt.threads = workers();
	std::string detail;
	bool ok = true;
	for (auto const &[name, max_B, tol] : {std::tuple{"p1", 100000000ULL, 0.02}, std::tuple{"p2", 1000000ULL, 0.05}}) {
		auto const m = CompactificationModel::load(name);
		auto const est = euler_leading_constant(m, 100000, workers());
		double const predicted = predicted_coefficient(m, est);
		auto const tr = verify::count_and_fit(m, max_B, 4, predicted, {max_B}, opt);
		double const dev = tr.final_fit.deviation;
		ok = ok && dev <= tol;
		detail += std::string(name) + " tau " + fmt("%.6f", est.tau) + ", fitted " + fmt("%.6f", tr.final_fit.fitted) +
		          " vs " + fmt("%.6f", predicted) + " dev " + fmt("%.2e", dev) + " (tol " + fmt("%.0f", tol * 100) +
		          "%)";
		if (std::string(name) == "p1")
			detail += "; ";
	}
	return {ok, detail};
}

Outcome b_two()
{
	auto const m = CompactificationModel::load("blowup_p2");
	auto const est = euler_leading_constant(m, 100000, workers());
	double const predicted = predicted_coefficient(m, est);
	CountOptions opt;
	opt.threads = workers();
	auto const tr = verify::count_and_fit(m, 1000000, 4, predicted, {10000, 100000, 1000000}, opt);
	std::string trend;
	for (std::size_t i = 0; i < tr.tops.size(); ++i)
		trend += (i ? " -> " : "") + fmt("%.2f%%", tr.deviations[i] * 100);
	bool const ok = tr.final_fit.deviation <= 0.10 && tr.monotone();
	return {ok, "fitted " + fmt("%.5f", tr.final_fit.fitted) + " vs " + fmt("%.5f", predicted) +
	                ", deviation by top B 1e4/1e5/1e6: " + trend + (tr.monotone() ? " (monotone)" : " (not monotone)")};
}

Outcome pfaffians()
{
	verify::Suite s("c4");
	each_algebra([&](auto const &name, auto const &g) { verify::pfaffian_identities(s, name, g, 200, seed); });
	return from_suite(s, "Pf^2 = det and Ad*-invariance, 200 functionals per algebra");
}

Outcome polarizations()
{
	verify::Suite s("c5");
	each_algebra([&](auto const &name, auto const &g) { verify::polarization_certificate(s, name, g, 200, seed); });
	verify::heisenberg_polarization(s);
	return from_suite(s, "subalgebra, isotropic, maximal dimension; h3 generic gives <Z, Y>");
}

Outcome bch_suite()
{
	verify::Suite s("c6");
	each_algebra([&](auto const &name, auto const &g) {
		verify::bch_against_matrices(s, name, g, MatrixRep::load(g, name), 200, seed);
	});
	auto const n4 = fixtures::n4();
	verify::bch_against_matrices(s, "n4", n4, fixtures::n4_rep(n4), 200, seed);
	verify::bch_symbolic(s);
	verify::universal_scalar_check(s, "n4", n4, 6);
	return from_suite(s, "matrix oracle on 200 pairs, degree-3 pattern, universal scalar 6 for n4");
}

Outcome twisted()
{
	verify::Suite s("c7");
	verify::unit_character_sums(s, 13, 4);
	for (auto const &name : verify::shipped_model_names())
		verify::twisted_products(s, CompactificationModel::load(name));
	return from_suite(s, "character sums exact for p <= 13, m <= 4; twisted products Cauchy, untwisted drift <= 5%");
}

Outcome enveloping()
{
	verify::Suite s("c8");
	each_algebra([&](auto const &name, auto const &g) { verify::enveloping_suite(s, name, g, 100, 50, 20, seed); });
	return from_suite(s, "PBW confluence, central symmetrizations, orbit-constant eigenvalues");
}

Outcome cross_sections()
{
	verify::Suite s("c9");
	each_algebra([&](auto const &name, auto const &g) { verify::cross_section(s, name, g, 50, 100, seed); });
	return from_suite(s, "representative constant on 100 actions and idempotent, 50 functionals per algebra");
}

} // namespace

int main()
{
	std::vector<std::pair<char const *, std::function<Outcome()>>> const criteria{
	    {"local-formula oracle", local_oracle},      {"count vs prediction, b = 1", b_one},
	    {"count vs prediction, b = 2", b_two},       {"Pfaffian identities", pfaffians},
	    {"polarization certificate", polarizations}, {"BCH oracle", bch_suite},
	    {"twisted character sums", twisted},         {"enveloping algebra", enveloping},
	    {"cross-section uniqueness", cross_sections},
	};
	int failed = 0;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		auto const t0 = std::chrono::steady_clock::now();
		Outcome r;
		try {
			r = criteria[i].second();
		} catch (std::exception const &e) {
			r = {false, std::string("exception: ") + e.what()};
		}
		double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		std::printf("criterion %zu %s  %s: %s [%.1fs]\n", i + 1, r.passed ? "PASS" : "FAIL", criteria[i].first,
		            r.detail.c_str(), secs);
		std::fflush(stdout);
		failed += !r.passed;
	}
	return failed ? 1 : 0;
}
