#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "heightlab/io.hpp"

namespace heightlab {

/// Integer polynomial in q, ascending coefficients.
using IntPoly = std::vector<long>;

inline IntPoly trimmed(IntPoly p)
{
	while (!p.empty() && p.back() == 0)
		p.pop_back();
	return p;
}

inline IntPoly operator+(IntPoly const &a, IntPoly const &b)
{
	IntPoly r(std::max(a.size(), b.size()), 0);
	for (std::size_t i = 0; i < a.size(); ++i)
		r[i] += a[i];
	for (std::size_t i = 0; i < b.size(); ++i)
		r[i] += b[i];
	return trimmed(r);
}

inline Integer evaluate(IntPoly const &p, Integer const &q)
{
	Integer v = 0;
	for (auto it = p.rbegin(); it != p.rend(); ++it)
		v = v * q + *it;
	return v;
}

inline std::string poly_string(IntPoly const &p)
{
	IntPoly const t = trimmed(p);
	if (t.empty())
		return "0";
	std::string out;
	for (std::size_t i = t.size(); i-- > 0;) {
		if (t[i] == 0)
			continue;
		long const c = t[i];
		if (!out.empty())
			out += c < 0 ? " - " : " + ";
		else if (c < 0)
			out += "-";
		long const a = c < 0 ? -c : c;
		if (i == 0 || a != 1)
			out += std::to_string(a);
		if (i >= 1)
			out += "q";
		if (i >= 2)
			out += "^" + std::to_string(i);
	}
	return out;
}

/// Subset of the boundary index set, kept sorted.
using BoundarySet = std::vector<std::size_t>;

/// Pole data of a rational function f on X: div(f) = E(f) - sum d_a D_a, plus the counts
/// |D_a^0 cap E(f)| (as polynomials in q) needed for the deeper-strata bound.
struct RationalFunctionDivisor {
	std::string name;
	std::vector<long> d;
	bool has_zero_component = true;
	std::vector<IntPoly> zero_meets;  // per boundary component
};

struct CompactificationModel {
	std::string name;
	std::size_t n = 0;
	std::vector<std::string> boundary;
	std::vector<long> kappa;
	std::map<BoundarySet, IntPoly> strata;
	IntPoly total;
	std::string height;
	std::string group = "additive";  // law on the affine coordinates of G
	std::vector<unsigned long> bad_primes;
	std::map<unsigned long, Rational> bad_factors;  // exact local integral at s = kappa
	std::vector<RationalFunctionDivisor> twists;
	std::optional<std::vector<Rational>> restricted_class;  // class of a restricted divisor, if shipped

	std::size_t boundary_size() const { return boundary.size(); }

	bool is_bad(unsigned long p) const
	{
		return std::find(bad_primes.begin(), bad_primes.end(), p) != bad_primes.end();
	}

	std::size_t boundary_index(std::string const &label) const
	{
		auto it = std::find(boundary.begin(), boundary.end(), label);
		if (it == boundary.end())
			throw ParseError("model " + name + ": unknown boundary component '" + label + "'");
		return static_cast<std::size_t>(it - boundary.begin());
	}

	std::string set_label(BoundarySet const &s) const
	{
		std::string out;
		for (auto i : s) {
			if (!out.empty())
				out += ",";
			out += boundary[i];
		}
		return out;
	}

	RationalFunctionDivisor const &twist(std::string const &tname) const
	{
		for (auto const &t : twists)
			if (t.name == tname)
				return t;
		throw ParseError("model " + name + " has no twist datum '" + tname + "'");
	}

	std::vector<Rational> kappa_class() const
	{
		std::vector<Rational> l;
		for (auto k : kappa)
			l.emplace_back(k);
		return l;
	}

	static CompactificationModel from_json(json const &j);
	static CompactificationModel load(std::string const &name);
	json to_json() const;
};

struct ValidationReport {
	std::vector<std::string> violations;
	bool ok() const { return violations.empty(); }
};

/// kappa_a >= 2, strata(empty) = q^n, and the strata sum to the total point count, as identities in q.
inline ValidationReport validate_model(CompactificationModel const &m)
{
	ValidationReport r;
	for (std::size_t a = 0; a < m.kappa.size(); ++a)
		if (m.kappa[a] < 2)
			r.violations.push_back("kappa_at_least_2: kappa(" + m.boundary[a] + ") = " + std::to_string(m.kappa[a]));
	IntPoly qn(m.n + 1, 0);
	qn[m.n] = 1;
	auto it = m.strata.find({});
	if (it == m.strata.end() || trimmed(it->second) != qn)
		r.violations.push_back("open_orbit_count: strata at the empty set must be q^" + std::to_string(m.n) +
		                       (it == m.strata.end() ? " (missing)" : ", got " + poly_string(it->second)));
	IntPoly sum;
	for (auto const &[s, p] : m.strata)
		sum = sum + p;
	if (trimmed(sum) != trimmed(m.total))
		r.violations.push_back("total_point_count: strata sum to " + poly_string(sum) + " but the total is " +
		                       poly_string(m.total));
	for (auto const &t : m.twists) {
		if (t.d.size() != m.boundary_size() || t.zero_meets.size() != m.boundary_size())
			r.violations.push_back("twist_shape: twist '" + t.name + "' needs one entry per boundary component");
		for (auto x : t.d)
			if (x < 0)
				r.violations.push_back("twist_poles_nonnegative: twist '" + t.name + "' has d < 0");
	}
	return r;
}

inline CompactificationModel CompactificationModel::from_json(json const &j)
{
	CompactificationModel m;
	try {
		m.name = j.at("name").get<std::string>();
		m.n = j.at("dim").get<std::size_t>();
		m.boundary = j.at("boundary").get<std::vector<std::string>>();
		m.kappa.assign(m.boundary.size(), 0);
		for (auto const &[label, k] : j.at("kappa").items())
			m.kappa[m.boundary_index(label)] = k.get<long>();
		for (auto const &[key, poly] : j.at("strata").items()) {
			BoundarySet s;
			std::stringstream ss(key);
			std::string part;
			while (std::getline(ss, part, ','))
				if (!part.empty())
					s.push_back(m.boundary_index(part));
			std::sort(s.begin(), s.end());
			m.strata[s] = trimmed(poly.get<IntPoly>());
		}
		m.total = trimmed(j.at("total").get<IntPoly>());
		m.height = j.at("height").get<std::string>();
		m.group = j.value("group", std::string("additive"));
		m.bad_primes = j.value("bad_primes", std::vector<unsigned long>{});
		if (j.contains("bad_factors"))
			for (auto const &[p, v] : j.at("bad_factors").items())
				m.bad_factors[std::stoul(p)] = rational_from_json(v);
		for (auto const &t : j.value("twists", json::array())) {
			RationalFunctionDivisor f;
			f.name = t.at("name").get<std::string>();
			f.d.assign(m.boundary.size(), 0);
			f.zero_meets.assign(m.boundary.size(), IntPoly{});
			for (auto const &[label, v] : t.at("d").items())
				f.d[m.boundary_index(label)] = v.get<long>();
			if (t.contains("zero_meets"))
				for (auto const &[label, v] : t.at("zero_meets").items())
					f.zero_meets[m.boundary_index(label)] = trimmed(v.get<IntPoly>());
			f.has_zero_component = t.value("has_zero_component", true);
			m.twists.push_back(std::move(f));
		}
		if (j.contains("restricted_class")) {
			std::vector<Rational> l(m.boundary.size());
			for (auto const &[label, v] : j.at("restricted_class").items())
				l[m.boundary_index(label)] = rational_from_json(v);
			m.restricted_class = l;
		}
	} catch (json::exception const &e) {
		throw ParseError(std::string("model file: ") + e.what());
	} catch (std::invalid_argument const &) {
		throw ParseError("model file: bad prime key in bad_factors");
	}
	return m;
}

inline json CompactificationModel::to_json() const
{
	json j;
	j["name"] = name;
	j["dim"] = n;
	j["boundary"] = boundary;
	json k = json::object();
	for (std::size_t a = 0; a < boundary.size(); ++a)
		k[boundary[a]] = kappa[a];
	j["kappa"] = k;
	json s = json::object();
	for (auto const &[set, p] : strata)
		s[set_label(set)] = p;
	j["strata"] = s;
	j["total"] = total;
	j["height"] = height;
	j["group"] = group;
	j["bad_primes"] = bad_primes;
	json bf = json::object();
	for (auto const &[p, v] : bad_factors)
		bf[std::to_string(p)] = to_string(v);
	j["bad_factors"] = bf;
	return j;
}

/// Loads and validates; a model failing validation is rejected with every violated invariant named.
inline CompactificationModel CompactificationModel::load(std::string const &name)
{
	auto m = from_json(read_json_file(resolve_data_file(name, "models")));
	auto const r = validate_model(m);
	if (!r.ok()) {
		std::string msg = "model " + m.name + " is invalid:";
		for (auto const &v : r.violations)
			msg += " [" + v + "]";
		throw ValidationError(msg);
	}
	return m;
}

using DivisorClass = std::vector<Rational>;

struct AbcInvariants {
	Rational a;
	std::size_t b = 0;
	BoundarySet C;
	Rational c;
};

/// a = max kappa_a / l_a, b = #{a : kappa_a = a l_a}, C the complement, c = prod_{a not in C} 1/l_a.
inline AbcInvariants abc_invariants(CompactificationModel const &m, DivisorClass const &l)
{
	if (l.size() != m.boundary_size())
		throw PreconditionError("divisor class has " + std::to_string(l.size()) + " coordinates, model has " +
		                        std::to_string(m.boundary_size()) + " boundary components");
	for (std::size_t i = 0; i < l.size(); ++i)
		if (l[i] <= 0)
			throw PreconditionError("abc invariants need l_a > 0 (l(" + m.boundary[i] + ") = " + to_string(l[i]) + ")");
	AbcInvariants r;
	r.a = 0;
	for (std::size_t i = 0; i < l.size(); ++i)
		r.a = std::max(r.a, Rational(Rational(m.kappa[i]) / l[i]));
	r.c = 1;
	for (std::size_t i = 0; i < l.size(); ++i) {
		if (r.a * l[i] == m.kappa[i]) {
			++r.b;
			r.c /= l[i];
		} else {
			r.C.push_back(i);
		}
	}
	return r;
}

/// (a, b) ordered lexicographically.
inline bool abc_less(AbcInvariants const &x, AbcInvariants const &y)
{
	return x.a != y.a ? x.a < y.a : x.b < y.b;
}

/// A_0(f) = {a : d_a(f) = 0}.
inline BoundarySet twist_pole_set(CompactificationModel const &m, RationalFunctionDivisor const &f)
{
	if (f.d.size() != m.boundary_size())
		throw PreconditionError("twist datum does not match the boundary of " + m.name);
	BoundarySet s;
	for (std::size_t a = 0; a < f.d.size(); ++a)
		if (f.d[a] == 0)
			s.push_back(a);
	return s;
}

/// d = 0: the character is trivial on the boundary and no pole drops.
inline bool is_degenerate_twist(RationalFunctionDivisor const &f)
{
	return std::all_of(f.d.begin(), f.d.end(), [](long x) { return x == 0; });
}

} // namespace heightlab
