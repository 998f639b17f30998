// heightlab command-line driver. Every subcommand prints one JSON report (or CSV for counts).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "heightlab/heightlab.hpp"

using namespace heightlab;

namespace {

constexpr int schema_version = 1;

struct Options {
	std::string target;
	std::string model, algebra, ell, s, twist;
	unsigned long p = 0;
	unsigned long prime_bound = 100000;
	unsigned long long max_B = 1000000;
	unsigned shells = 4;
	std::uint64_t seed = 42;
	unsigned threads = 1;
	std::string out, format = "json";
	unsigned long long budget = 2'000'000'000ULL;
	std::string checkpoint;
};

json report(std::string const &kind)
{
	return {{"schema", "heightlab." + kind}, {"schema_version", schema_version}};
}

void emit(Options const &o, std::string const &text)
{
	if (o.out.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream f(o.out);
	if (!f)
		throw ParseError("cannot write '" + o.out + "'");
	f << text;
}

void emit(Options const &o, json const &j)
{
	if (o.format != "json")
		throw PreconditionError("format '" + o.format + "' is only available for count reports");
	emit(o, j.dump(2) + "\n");
}

std::string const &pick(std::string const &flag, std::string const &target, char const *what)
{
	if (!flag.empty())
		return flag;
	if (target.empty())
		throw ParseError(std::string("no ") + what + " given (positional target or --" + what + ")");
	return target;
}

NilpotentLieAlgebra algebra_of(Options const &o) { return NilpotentLieAlgebra::load(pick(o.algebra, o.target, "algebra")); }
CompactificationModel model_of(Options const &o) { return CompactificationModel::load(pick(o.model, o.target, "model")); }

std::vector<Rational> rational_list(std::string const &text)
{
	std::vector<Rational> out;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ','))
		out.push_back(parse_rational(item));
	return out;
}

Vector ell_of(Options const &o, NilpotentLieAlgebra const &g)
{
	if (o.ell.empty())
		throw ParseError("--ell is required");
	Vector v = rational_list(o.ell);
	if (v.size() != g.dim())
		throw ParseError("--ell has " + std::to_string(v.size()) + " entries, algebra has dimension " +
		                 std::to_string(g.dim()));
	return v;
}

std::vector<Rational> s_of(Options const &o, CompactificationModel const &m)
{
	if (o.s.empty())
		return m.kappa_class();
	auto s = rational_list(o.s);
	if (s.size() == 1 && m.boundary_size() > 1)
		s.assign(m.boundary_size(), s.front());
	return s;
}

json matrix_json(Matrix const &m)
{
	json a = json::array();
	for (auto const &row : m)
		a.push_back(to_json(row));
	return a;
}

json strings(std::vector<Rational> const &v) { return to_json(Vector(v)); }

std::vector<Polynomial> invariants_or_empty(std::string const &name)
{
	try {
		return load_invariants(name);
	} catch (ParseError const &) {
		return {};
	}
}

// ---------------------------------------------------------------------------

void algebra_info(Options const &o)
{
	auto const g = algebra_of(o);
	json r = report("algebra.info");
	r["algebra"] = pick(o.algebra, o.target, "algebra");
	r["structure"] = g.to_json();
	r["nilpotency_class"] = g.nilpotency_class();
	r["abelian"] = g.is_abelian();
	r["center"] = matrix_json(g.center().basis());
	json series = json::array();
	for (auto const &s : g.ascending_central_series())
		series.push_back(s.dim());
	r["ascending_central_series_dims"] = series;
	r["strong_malcev_basis"] = matrix_json(default_strong_basis(g).vectors);
	try {
		r["universal_scalar"] = universal_scalar(g);
	} catch (PreconditionError const &e) {
		r["universal_scalar"] = nullptr;
		r["universal_scalar_error"] = e.what();
	}
	if (!g.is_abelian() && g.center().dim() == 1) {
		auto const q = kirillov_quadruple(g);
		r["kirillov_quadruple"] = {{"Z", to_json(q.Z)}, {"Y", to_json(q.Y)}, {"X", to_json(q.X)},
		                           {"g0", matrix_json(q.g0.generators())}};
	}
	emit(o, r);
}

void orbit_analyze(Options const &o)
{
	auto const g = algebra_of(o);
	auto const basis = default_strong_basis(g);
	Vector const ell = ell_of(o, g);
	auto const st = d_vector(g, ell, basis);
	json r = report("orbit.analyze");
	r["algebra"] = pick(o.algebra, o.target, "algebra");
	r["ell"] = to_json(ell);
	r["d"] = st.d;
	r["jump_indices"] = st.I;
	r["orbit_dim"] = orbit_dim(g, ell);
	Rational const pf = pfaffian(g, ell, st, basis);
	r["pfaffian"] = to_string(pf);
	r["representative"] = to_json(orbit_representative(g, ell, basis));
	r["radical"] = matrix_json(radical(g, ell).basis());
	auto const polys = invariants_or_empty(pick(o.algebra, o.target, "algebra"));
	if (!polys.empty()) {
		json vals = json::array();
		for (auto const &p : polys)
			vals.push_back(to_string(p.evaluate(ell)));
		r["invariants"] = vals;
		r["orbit_norm"] = to_string(orbit_norm(g, ell, polys, "", o.seed).value);
	}
	if (o.p) {
		if (!is_prime(o.p))
			throw PreconditionError("--p " + std::to_string(o.p) + " is not prime");
		r["p"] = o.p;
		r["multiplicity_bound"] = to_string(multiplicity_bound(pf, o.p));
	}
	emit(o, r);
}

void polarize(Options const &o)
{
	auto const g = algebra_of(o);
	Vector const ell = ell_of(o, g);
	auto const m = vergne_polarization(g, ell, default_strong_basis(g));
	std::size_t const rad = radical(g, ell).dim();
	json r = report("polarize");
	r["algebra"] = pick(o.algebra, o.target, "algebra");
	r["ell"] = to_json(ell);
	r["polarization"] = matrix_json(m.generators());
	r["dim"] = m.dim();
	r["radical_dim"] = rad;
	r["is_ideal"] = m.is_ideal();
	r["certificate"] = {{"subalgebra", g.is_subalgebra(m.space())},
	                    {"isotropic", is_isotropic(g, ell, m.space())},
	                    {"maximal_dimension", 2 * m.dim() == rad + g.dim()}};
	emit(o, r);
}

void envelope(Options const &o, bool central)
{
	auto const g = algebra_of(o);
	auto const name = pick(o.algebra, o.target, "algebra");
	auto const polys = load_invariants(name);
	json r = report(central ? "envelope.central" : "envelope.sym");
	r["algebra"] = name;
	json items = json::array();
	if (!central) {
		for (auto const &p : polys) {
			auto const u = symmetrize(g, p);
			items.push_back({{"polynomial", p.str(g.labels())},
			                 {"symmetrized", u.str(g.labels())},
			                 {"pbw_terms", u.to_json()},
			                 {"central", is_central(g, u)}});
		}
	} else {
		Vector const ell = ell_of(o, g);
		r["ell"] = to_json(ell);
		for (auto const &p : polys) {
			auto const ev = scalar_eigenvalue(g, p, ell, o.seed);
			json re = json::object(), im = json::object();
			for (auto const &[k, c] : ev.re)
				re[std::to_string(k)] = to_string(c);
			for (auto const &[k, c] : ev.im)
				im[std::to_string(k)] = to_string(c);
			auto const v = ev.value();
			items.push_back({{"polynomial", p.str(g.labels())},
			                 {"real_by_power_of_2pi", re},
			                 {"imag_by_power_of_2pi", im},
			                 {"value", {v.real(), v.imag()}}});
		}
	}
	r["invariants"] = items;
	emit(o, r);
}

json local_value_json(LocalFactorValue const &v)
{
	json j = {{"q", v.q}, {"s", strings(v.s)}};
	if (v.exact)
		j["exact"] = to_string(*v.exact);
	j["value"] = static_cast<double>(v.value);
	return j;
}

void zeta_local(Options const &o, bool twisted)
{
	auto const m = model_of(o);
	if (!o.p)
		throw ParseError("--p is required");
	auto const s = s_of(o, m);
	json r = report(twisted ? "zeta.twist" : "zeta.local");
	r["model"] = m.name;
	if (twisted) {
		if (m.twists.empty())
			throw PreconditionError("model " + m.name + " ships no twist data");
		auto const &f = o.twist.empty() ? m.twists.front() : m.twist(o.twist);
		json poles = json::array();
		for (auto a : twist_pole_set(m, f))
			poles.push_back(m.boundary[a]);
		r["twist"] = f.name;
		r["pole_set"] = poles;
		r["factor"] = local_value_json(twisted_local_factor(m, f, o.p, s));
	} else {
		r["factor"] = local_value_json(local_height_integral(m, o.p, s));
	}
	emit(o, r);
}

EulerEstimate estimate(Options const &o, CompactificationModel const &m)
{
	return euler_leading_constant(m, o.prime_bound, o.threads);
}

void zeta_predict(Options const &o)
{
	auto const m = model_of(o);
	auto const est = estimate(o, m);
	auto const abc = abc_invariants(m, m.kappa_class());
	json r = report("zeta.predict");
	r["model"] = m.name;
	r["s"] = strings(m.kappa_class());
	r["P"] = est.truncation_prime;
	r["tau"] = est.tau;
	r["pole_order"] = est.pole_order;
	r["a"] = to_string(abc.a);
	r["c"] = to_string(abc.c);
	r["arch_density"] = est.archimedean_density;
	json sample = json::array();
	for (auto const &[p, v] : est.factors_sample)
		sample.push_back({{"p", p}, {"factor", to_string(v)}});
	r["factors_sample"] = sample;
	r["tail_heuristic"] = est.tail_heuristic;
	r["predicted_coefficient"] = predicted_coefficient(m, est);
	emit(o, r);
}

CountOptions count_options(Options const &o)
{
	CountOptions c;
	c.threads = o.threads;
	c.tuple_budget = o.budget;
	c.checkpoint = o.checkpoint;
	return c;
}

json samples_json(std::vector<CountSample> const &samples)
{
	json a = json::array();
	for (auto const &s : samples)
		a.push_back({{"B", s.B}, {"N", s.N}});
	return a;
}

void count(Options const &o, bool fit)
{
	auto const m = model_of(o);
	if (o.format != "json" && o.format != "csv")
		throw ParseError("unknown format '" + o.format + "'");
	auto const samples = enumerate_points(m, log_spaced_bounds(o.max_B, o.shells), count_options(o));
	std::size_t const b = abc_invariants(m, m.kappa_class()).b;
	double predicted = 0;
	if (fit)
		predicted = predicted_coefficient(m, estimate(o, m));
	if (o.format == "csv") {
		std::ostringstream os;
		write_count_csv(os, samples, b, predicted);
		emit(o, os.str());
		return;
	}
	json r = report(fit ? "count.fit" : "count.run");
	r["model"] = m.name;
	r["max_B"] = o.max_B;
	r["samples"] = samples_json(samples);
	if (fit) {
		auto const rep = fit_and_compare(samples, b, predicted);
		r["pole_order"] = b;
		r["P"] = o.prime_bound;
		r["coefficients"] = rep.coefficients;
		r["fitted"] = rep.fitted;
		r["predicted"] = rep.predicted;
		r["deviation"] = rep.deviation;
	}
	emit(o, r);
}

// ---------------------------------------------------------------------------
// verify

std::vector<std::string> const suite_names{"lie", "group", "coadjoint", "enveloping", "zeta", "counting", "all"};

void run_suite(verify::Suite &s, std::string const &which, std::uint64_t seed)
{
	bool const all = which == "all";
	auto const algebras = verify::shipped_algebra_names();
	auto each_algebra = [&](auto &&fn) {
		for (auto const &name : algebras) {
			if (s.stopped())
				return;
			fn(name, NilpotentLieAlgebra::load(name));
		}
	};
	if (all || which == "lie") {
		each_algebra([&](std::string const &name, NilpotentLieAlgebra const &g) {
			auto const basis = default_strong_basis(g);
			bool ideals = true;
			for (std::size_t k = 1; k <= g.dim(); ++k)
				ideals = ideals && g.is_ideal(basis.prefix(k));
			s.record("strong-malcev:" + name, ideals, "every prefix of the default basis is an ideal");
		});
	}
	if (all || which == "group") {
		verify::bch_symbolic(s);
		each_algebra([&](std::string const &name, NilpotentLieAlgebra const &g) {
			verify::bch_against_matrices(s, name, g, MatrixRep::load(g, name), 200, seed);
			std::optional<long> expected;
			if (g.is_abelian())
				expected = 1;
			else if (name == "h3")
				expected = 2;
			verify::universal_scalar_check(s, name, g, expected);
		});
	}
	if (all || which == "coadjoint") {
		verify::heisenberg_polarization(s);
		each_algebra([&](std::string const &name, NilpotentLieAlgebra const &g) {
			verify::pfaffian_identities(s, name, g, 200, seed);
			verify::polarization_certificate(s, name, g, 200, seed);
			verify::cross_section(s, name, g, 50, 100, seed);
			verify::invariant_files(s, name, g);
		});
	}
	if (all || which == "enveloping") {
		each_algebra([&](std::string const &name, NilpotentLieAlgebra const &g) {
			verify::enveloping_suite(s, name, g, 100, 50, 20, seed);
		});
	}
	if (all || which == "zeta") {
		for (auto const &name : verify::shipped_model_names()) {
			auto const m = CompactificationModel::load(name);
			verify::model_validation(s, m);
			if (m.height == "projective" || m.height == "blowup_p2")
				if (m.group == "additive")
					verify::local_oracle(s, m, {5, 7, 11}, 3);
			verify::bad_factor_oracle(s, m);
			verify::twisted_products(s, m);
		}
		verify::unit_character_sums(s, 13, 4);
	}
	if (all || which == "counting") {
		verify::small_counts(s);
		verify::translation_bijection(s, 2000);
	}
}

int verify_cmd(Options const &o)
{
	std::string const which = o.target.empty() ? "all" : o.target;
	if (std::find(suite_names.begin(), suite_names.end(), which) == suite_names.end())
		throw ParseError("unknown suite '" + which + "'");
	verify::Suite s(which, true);
	run_suite(s, which, o.seed);
	json r = report("verify");
	r["seed"] = o.seed;
	r.update(s.to_json());
	emit(o, r);
	if (!s.passed()) {
		for (auto const &c : s.checks())
			if (!c.passed)
				std::cerr << "heightlab: check " << c.name << " failed: " << c.detail << "\n";
		return 1;
	}
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"heightlab: nilpotent Lie algebras, height zeta functions and point counts"};
	app.require_subcommand(1);
	Options o;

	auto common = [&](CLI::App *c) {
		c->add_option("target", o.target, "algebra, model or suite name (or a JSON path)");
		c->add_option("--model", o.model, "compactification model name or path");
		c->add_option("--algebra", o.algebra, "algebra name or path");
		c->add_option("--seed", o.seed, "seed for every sampled check");
		c->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
		c->add_option("--out", o.out, "write the report here instead of stdout");
		c->add_option("--format", o.format, "json or csv (csv for counts only)");
	};
	auto lie_opts = [&](CLI::App *c) {
		common(c);
		c->add_option("--ell", o.ell, "functional as comma-separated rationals");
		c->add_option("--p", o.p, "prime for the multiplicity bound");
	};
	auto zeta_opts = [&](CLI::App *c) {
		common(c);
		c->add_option("--p", o.p, "residue field size q");
		c->add_option("--s", o.s, "comma-separated s, one per boundary component (default kappa)");
		c->add_option("--twist", o.twist, "twist datum name (default: first shipped)");
		c->add_option("--prime-bound", o.prime_bound, "Euler product truncation P");
	};
	auto count_opts = [&](CLI::App *c) {
		common(c);
		c->add_option("--max-B", o.max_B, "largest height bound")->check(CLI::PositiveNumber);
		c->add_option("--shells", o.shells, "sample heights per decade")->check(CLI::PositiveNumber);
		c->add_option("--prime-bound", o.prime_bound, "Euler product truncation P for the prediction");
		c->add_option("--budget", o.budget, "maximum number of swept tuples");
		c->add_option("--checkpoint", o.checkpoint, "resume file for partition counts");
	};

	std::function<int()> action;
	auto leaf = [&](CLI::App *parent, std::string const &name, std::string const &help, auto opts,
	                std::function<int()> fn) {
		auto *c = parent->add_subcommand(name, help);
		opts(c);
		c->callback([&action, fn] { action = fn; });
		return c;
	};
	auto returning = [](auto fn) { return std::function<int()>([fn] { fn(); return 0; }); };

	auto *alg = app.add_subcommand("algebra", "structure of a nilpotent Lie algebra");
	alg->require_subcommand(1);
	leaf(alg, "info", "basis, brackets, central series, Malcev basis, universal scalar", lie_opts,
	     returning([&] { algebra_info(o); }));

	auto *orb = app.add_subcommand("orbit", "coadjoint orbits");
	orb->require_subcommand(1);
	leaf(orb, "analyze", "d-vector, Pfaffian and cross-section point of --ell", lie_opts,
	     returning([&] { orbit_analyze(o); }));

	leaf(&app, "polarize", "Vergne polarization at --ell with its certificate", lie_opts,
	     returning([&] { polarize(o); }));

	auto *env = app.add_subcommand("envelope", "universal enveloping algebra");
	env->require_subcommand(1);
	leaf(env, "sym", "symmetrize the shipped invariants and test centrality", lie_opts,
	     returning([&] { envelope(o, false); }));
	leaf(env, "central", "scalar eigenvalues of the shipped invariants at --ell", lie_opts,
	     returning([&] { envelope(o, true); }));

	auto *zeta = app.add_subcommand("zeta", "local height integrals and Euler products");
	zeta->require_subcommand(1);
	leaf(zeta, "local", "local height integral at --p, --s", zeta_opts, returning([&] { zeta_local(o, false); }));
	leaf(zeta, "twist", "twisted local factor at --p, --s", zeta_opts, returning([&] { zeta_local(o, true); }));
	leaf(zeta, "predict", "leading constant tau and predicted count coefficient", zeta_opts,
	     returning([&] { zeta_predict(o); }));

	auto *cnt = app.add_subcommand("count", "rational points of bounded height");
	cnt->require_subcommand(1);
	leaf(cnt, "run", "N(B) at log-spaced heights up to --max-B", count_opts, returning([&] { count(o, false); }));
	leaf(cnt, "fit", "fit N(B) and compare with the Euler product prediction", count_opts,
	     returning([&] { count(o, true); }));

	leaf(&app, "verify", "property suites: lie, group, coadjoint, enveloping, zeta, counting, all", common,
	     [&] { return verify_cmd(o); });

	try {
		app.parse(argc, argv);
	} catch (CLI::ParseError const &e) {
		int const rc = app.exit(e);
		return rc == 0 ? 0 : 1;
	}
	try {
		return action();
	} catch (Error const &e) {
		std::cerr << "heightlab: " << e.what() << "\n";
		return e.exit_code();
	} catch (std::exception const &e) {
		std::cerr << "heightlab: " << e.what() << "\n";
		return 1;
	}
}
