#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "heightlab/coadjoint.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

/// Element of U(g) as sum c_e X_1^e1 ... X_n^en in the fixed PBW order.
class EnvelopingElement {
  public:
	EnvelopingElement() = default;
	explicit EnvelopingElement(std::size_t dim) : dim_(dim) {}

	static EnvelopingElement one(std::size_t dim)
	{
		EnvelopingElement a(dim);
		a.add_term(Exponents(dim, 0), 1);
		return a;
	}

	static EnvelopingElement generator(std::size_t dim, std::size_t i)
	{
		EnvelopingElement a(dim);
		a.add_term(Polynomial::unit_exponent(dim, i), 1);
		return a;
	}

	/// Image of a vector of g in U(g).
	static EnvelopingElement from_vector(Vector const &x)
	{
		EnvelopingElement a(x.size());
		for (std::size_t i = 0; i < x.size(); ++i)
			a.add_term(Polynomial::unit_exponent(x.size(), i), x[i]);
		return a;
	}

	std::size_t dim() const { return dim_; }
	std::map<Exponents, Rational> const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	void add_term(Exponents const &e, Rational const &c)
	{
		if (c == 0)
			return;
		auto [it, fresh] = terms_.emplace(e, c);
		if (!fresh) {
			it->second += c;
			if (it->second == 0)
				terms_.erase(it);
		}
	}

	EnvelopingElement &operator+=(EnvelopingElement const &o)
	{
		for (auto const &[e, c] : o.terms_)
			add_term(e, c);
		return *this;
	}

	friend EnvelopingElement operator+(EnvelopingElement a, EnvelopingElement const &b) { return a += b; }

	friend EnvelopingElement operator-(EnvelopingElement a, EnvelopingElement const &b)
	{
		for (auto const &[e, c] : b.terms_)
			a.add_term(e, -c);
		return a;
	}

	friend EnvelopingElement operator*(Rational const &s, EnvelopingElement const &a)
	{
		EnvelopingElement r(a.dim_);
		for (auto const &[e, c] : a.terms_)
			r.add_term(e, s * c);
		return r;
	}

	bool operator==(EnvelopingElement const &o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

	std::string str(std::vector<std::string> const &names) const
	{
		Polynomial p(dim_);
		for (auto const &[e, c] : terms_)
			p.add_term(e, c);
		return p.str(names);
	}

	json to_json() const
	{
		json out = json::array();
		for (auto const &[e, c] : terms_)
			out.push_back({e, to_string(c)});
		return out;
	}

  private:
	std::size_t dim_ = 0;
	std::map<Exponents, Rational> terms_;
};

using Word = std::vector<std::size_t>;

enum class RewriteStrategy { leftmost, rightmost };

inline Exponents word_exponents(Word const &w, std::size_t n)
{
	Exponents e(n, 0);
	for (auto x : w)
		++e[x];
	return e;
}

inline Word exponent_word(Exponents const &e)
{
	Word w;
	for (std::size_t i = 0; i < e.size(); ++i)
		w.insert(w.end(), e[i], i);
	return w;
}

/// PBW normal form of a linear combination of words, rewriting X_j X_i -> X_i X_j + [X_j, X_i] for j > i.
/// Every rewrite either sorts a pair or shortens the word, so the loop terminates.
inline EnvelopingElement normal_form(NilpotentLieAlgebra const &g, std::map<Word, Rational> pending,
                                     RewriteStrategy strategy = RewriteStrategy::leftmost)
{
	std::size_t const n = g.dim();
	EnvelopingElement out(n);
	while (!pending.empty()) {
		// Longest words first so that shorter bracket terms merge before they are processed.
		auto it = std::prev(pending.end());
		for (auto jt = pending.begin(); jt != pending.end(); ++jt)
			if (jt->first.size() > it->first.size())
				it = jt;
		Word const w = it->first;
		Rational const c = it->second;
		pending.erase(it);
		if (c == 0)
			continue;
		std::size_t pos = w.size();
		if (strategy == RewriteStrategy::leftmost) {
			for (std::size_t k = 0; k + 1 < w.size(); ++k)
				if (w[k] > w[k + 1]) {
					pos = k;
					break;
				}
		} else {
			for (std::size_t k = w.size(); k-- > 1;)
				if (w[k - 1] > w[k]) {
					pos = k - 1;
					break;
				}
		}
		if (pos == w.size()) {
			out.add_term(word_exponents(w, n), c);
			continue;
		}
		Word swapped = w;
		std::swap(swapped[pos], swapped[pos + 1]);
		pending[swapped] += c;
		Vector const br = g.bracket_basis(w[pos], w[pos + 1]);
		for (std::size_t k = 0; k < n; ++k) {
			if (br[k] == 0)
				continue;
			Word shorter(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
			shorter.push_back(k);
			shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 2), w.end());
			pending[shorter] += c * br[k];
		}
	}
	return out;
}

inline EnvelopingElement normal_form(NilpotentLieAlgebra const &g, Word const &w,
                                     RewriteStrategy strategy = RewriteStrategy::leftmost)
{
	return normal_form(g, std::map<Word, Rational>{{w, Rational(1)}}, strategy);
}

inline EnvelopingElement pbw_multiply(NilpotentLieAlgebra const &g, EnvelopingElement const &a,
                                      EnvelopingElement const &b)
{
	if (a.dim() != g.dim() || b.dim() != g.dim())
		throw PreconditionError("pbw_multiply: elements of a different algebra");
	std::map<Word, Rational> words;
	for (auto const &[ea, ca] : a.terms()) {
		Word const wa = exponent_word(ea);
		for (auto const &[eb, cb] : b.terms()) {
			Word w = wa;
			Word const wb = exponent_word(eb);
			w.insert(w.end(), wb.begin(), wb.end());
			words[w] += ca * cb;
		}
	}
	return normal_form(g, std::move(words));
}

/// Y_1...Y_r -> (1/r!) sum over permutations, extended linearly; output in PBW normal form.
inline EnvelopingElement symmetrize(NilpotentLieAlgebra const &g, Polynomial const &p)
{
	if (p.vars() != g.dim())
		throw PreconditionError("symmetrize: polynomial has the wrong number of variables");
	std::map<Word, Rational> words;
	for (auto const &[e, c] : p.terms()) {
		Word w = exponent_word(e);
		// Every distinct arrangement occurs equally often among the r! permutations.
		std::vector<Word> arrangements;
		do
			arrangements.push_back(w);
		while (std::next_permutation(w.begin(), w.end()));
		Rational const share = c / static_cast<long>(arrangements.size());
		for (auto &a : arrangements)
			words[a] += share;
	}
	return normal_form(g, std::move(words));
}

inline bool is_central(NilpotentLieAlgebra const &g, EnvelopingElement const &a)
{
	for (std::size_t i = 0; i < g.dim(); ++i) {
		auto const x = EnvelopingElement::generator(g.dim(), i);
		if (!(pbw_multiply(g, a, x) == pbw_multiply(g, x, a)))
			return false;
	}
	return true;
}

/// Ad(exp x) extended to U(g) as an algebra automorphism.
inline EnvelopingElement adjoint_transport(NilpotentLieAlgebra const &g, Vector const &x, EnvelopingElement const &a)
{
	std::size_t const n = g.dim();
	Matrix const ad_exp = matrix_exp(g.ad(x));
	std::vector<EnvelopingElement> images;
	for (std::size_t i = 0; i < n; ++i) {
		Vector col(n);
		for (std::size_t k = 0; k < n; ++k)
			col[k] = ad_exp[k][i];
		images.push_back(EnvelopingElement::from_vector(col));
	}
	EnvelopingElement out(n);
	for (auto const &[e, c] : a.terms()) {
		EnvelopingElement t = EnvelopingElement::one(n);
		for (std::size_t i = 0; i < n; ++i)
			for (unsigned k = 0; k < e[i]; ++k)
				t = pbw_multiply(g, t, images[i]);
		out += c * t;
	}
	return out;
}

/// P(2 pi i l) kept exactly as polynomials in (2 pi): value = sum_r (re[r] + i im[r]) (2 pi)^r.
struct ScalarEigenvalue {
	std::map<unsigned, Rational> re, im;

	std::complex<double> value() const
	{
		long double const two_pi = 2.0L * std::numbers::pi_v<long double>;
		long double a = 0, b = 0;
		for (auto const &[r, c] : re)
			a += static_cast<long double>(c.get_d()) * std::pow(two_pi, static_cast<long double>(r));
		for (auto const &[r, c] : im)
			b += static_cast<long double>(c.get_d()) * std::pow(two_pi, static_cast<long double>(r));
		return {static_cast<double>(a), static_cast<double>(b)};
	}

	bool operator==(ScalarEigenvalue const &o) const { return re == o.re && im == o.im; }
};

/// Evaluates P(2 pi i l) after checking that P is constant on 20 sampled orbit points.
inline ScalarEigenvalue scalar_eigenvalue(NilpotentLieAlgebra const &g, Polynomial const &p, Vector const &ell,
                                          std::uint64_t seed = 0)
{
	check_orbit_constant(g, {p}, ell, seed, 20);
	ScalarEigenvalue out;
	for (auto const &[e, c] : p.terms()) {
		unsigned const r = Polynomial::total_degree(e);
		Rational t = c;
		for (std::size_t i = 0; i < e.size(); ++i)
			if (e[i])
				t *= rational_pow(ell[i], e[i]);
		// i^r cycles through 1, i, -1, -i
		switch (r % 4) {
		case 0: out.re[r] += t; break;
		case 1: out.im[r] += t; break;
		case 2: out.re[r] -= t; break;
		default: out.im[r] -= t; break;
		}
	}
	for (auto *m : {&out.re, &out.im})
		std::erase_if(*m, [](auto const &kv) { return kv.second == 0; });
	return out;
}

} // namespace heightlab
