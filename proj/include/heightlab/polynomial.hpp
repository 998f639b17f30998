#pragma once

#include <map>
#include <string>
#include <vector>

#include "heightlab/io.hpp"
#include "heightlab/linalg.hpp"

namespace heightlab {

using Exponents = std::vector<unsigned>;

/// Sparse polynomial in n commuting variables with exact coefficients; no zero terms stored.
/// Read as an element of S(g) = F[g*] when the variables are the coordinates l_i = l(X_i).
class Polynomial {
  public:
	Polynomial() = default;
	explicit Polynomial(std::size_t vars) : vars_(vars) {}

	static Polynomial constant(std::size_t vars, Rational const &c)
	{
		Polynomial p(vars);
		p.add_term(Exponents(vars, 0), c);
		return p;
	}

	static Polynomial variable(std::size_t vars, std::size_t i)
	{
		Exponents e(vars, 0);
		e.at(i) = 1;
		Polynomial p(vars);
		p.add_term(e, 1);
		return p;
	}

	/// Linear form sum_i c_i l_i.
	static Polynomial linear(Vector const &c)
	{
		Polynomial p(c.size());
		for (std::size_t i = 0; i < c.size(); ++i)
			if (c[i] != 0)
				p.add_term(unit_exponent(c.size(), i), c[i]);
		return p;
	}

	std::size_t vars() const { return vars_; }
	std::map<Exponents, Rational> const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	void add_term(Exponents const &e, Rational const &c)
	{
		if (e.size() != vars_)
			throw PreconditionError("monomial has the wrong number of variables");
		if (c == 0)
			return;
		auto [it, fresh] = terms_.emplace(e, c);
		if (!fresh) {
			it->second += c;
			if (it->second == 0)
				terms_.erase(it);
		}
	}

	unsigned degree() const
	{
		unsigned d = 0;
		for (auto const &[e, c] : terms_)
			d = std::max(d, total_degree(e));
		return d;
	}

	Rational evaluate(Vector const &x) const
	{
		if (x.size() != vars_)
			throw PreconditionError("polynomial evaluated at a point of the wrong dimension");
		Rational s = 0;
		for (auto const &[e, c] : terms_) {
			Rational t = c;
			for (std::size_t i = 0; i < vars_; ++i)
				if (e[i])
					t *= rational_pow(x[i], e[i]);
			s += t;
		}
		return s;
	}

	Polynomial &operator+=(Polynomial const &o)
	{
		check_vars(o);
		for (auto const &[e, c] : o.terms_)
			add_term(e, c);
		return *this;
	}

	friend Polynomial operator+(Polynomial a, Polynomial const &b) { return a += b; }

	friend Polynomial operator-(Polynomial a, Polynomial const &b)
	{
		a.check_vars(b);
		for (auto const &[e, c] : b.terms_)
			a.add_term(e, -c);
		return a;
	}

	friend Polynomial operator*(Rational const &s, Polynomial const &p)
	{
		Polynomial r(p.vars_);
		for (auto const &[e, c] : p.terms_)
			r.add_term(e, s * c);
		return r;
	}

	friend Polynomial operator*(Polynomial const &a, Polynomial const &b)
	{
		a.check_vars(b);
		Polynomial r(a.vars_);
		for (auto const &[ea, ca] : a.terms_)
			for (auto const &[eb, cb] : b.terms_) {
				Exponents e(a.vars_);
				for (std::size_t i = 0; i < a.vars_; ++i)
					e[i] = ea[i] + eb[i];
				r.add_term(e, ca * cb);
			}
		return r;
	}

	bool operator==(Polynomial const &o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

	/// Q(l) = P(M l): each variable x_i is replaced by the linear form sum_j M[i][j] l_j.
	Polynomial substitute_linear(Matrix const &m) const
	{
		std::vector<Polynomial> forms;
		for (std::size_t i = 0; i < vars_; ++i)
			forms.push_back(linear(m.at(i)));
		std::size_t const out_vars = m.empty() ? 0 : m[0].size();
		Polynomial r(out_vars);
		for (auto const &[e, c] : terms_) {
			Polynomial t = constant(out_vars, c);
			for (std::size_t i = 0; i < vars_; ++i)
				for (unsigned k = 0; k < e[i]; ++k)
					t = t * forms[i];
			r += t;
		}
		return r;
	}

	json to_json() const
	{
		json terms = json::array();
		for (auto const &[e, c] : terms_)
			terms.push_back({e, to_string(c)});
		return terms;
	}

	/// A polynomial is a list of [exponent-vector, "coeff"] pairs.
	static Polynomial from_json(std::size_t vars, json const &j)
	{
		Polynomial p(vars);
		try {
			for (auto const &term : j) {
				auto e = term.at(0).get<Exponents>();
				if (e.size() != vars)
					throw ParseError("monomial " + term.dump() + " does not have " + std::to_string(vars) +
					                 " exponents");
				p.add_term(e, rational_from_json(term.at(1)));
			}
		} catch (json::exception const &ex) {
			throw ParseError(std::string("polynomial: ") + ex.what());
		}
		return p;
	}

	std::string str(std::vector<std::string> const &names) const
	{
		if (terms_.empty())
			return "0";
		std::string out;
		for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
			auto const &[e, c] = *it;
			std::string mono;
			for (std::size_t i = 0; i < vars_; ++i) {
				if (!e[i])
					continue;
				if (!mono.empty())
					mono += "*";
				mono += names.at(i);
				if (e[i] > 1)
					mono += "^" + std::to_string(e[i]);
			}
			Rational const mag = abs(c);
			if (out.empty())
				out += c < 0 ? "-" : "";
			else
				out += c < 0 ? " - " : " + ";
			if (mono.empty())
				out += to_string(mag);
			else if (mag == 1)
				out += mono;
			else
				out += to_string(mag) + "*" + mono;
		}
		return out;
	}

	static unsigned total_degree(Exponents const &e)
	{
		unsigned d = 0;
		for (auto x : e)
			d += x;
		return d;
	}

	static Exponents unit_exponent(std::size_t vars, std::size_t i)
	{
		Exponents e(vars, 0);
		e[i] = 1;
		return e;
	}

  private:
	void check_vars(Polynomial const &o) const
	{
		if (o.vars_ != vars_)
			throw PreconditionError("polynomials in different numbers of variables");
	}

	std::size_t vars_ = 0;
	std::map<Exponents, Rational> terms_;
};

/// Orbit-separating invariants shipped per algebra: {"vars": n, "polys": [poly, ...]}.
inline std::vector<Polynomial> invariants_from_json(json const &j)
{
	try {
		std::size_t const n = j.at("vars").get<std::size_t>();
		std::vector<Polynomial> out;
		for (auto const &p : j.at("polys"))
			out.push_back(Polynomial::from_json(n, p));
		return out;
	} catch (json::exception const &e) {
		throw ParseError(std::string("invariant file: ") + e.what());
	}
}

inline std::vector<Polynomial> load_invariants(std::string const &name)
{
	return invariants_from_json(read_json_file(resolve_data_file(name, "invariants")));
}

} // namespace heightlab
