#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "heightlab/error.hpp"
#include "heightlab/rational.hpp"

#ifndef HEIGHTLAB_DEFAULT_DATA_DIR
#define HEIGHTLAB_DEFAULT_DATA_DIR "data"
#endif

namespace heightlab {

using json = nlohmann::json;

/// Data root: $HEIGHTLAB_DATA if set, otherwise the directory baked in at build time.
inline std::filesystem::path data_root()
{
	if (char const *env = std::getenv("HEIGHTLAB_DATA"); env && *env)
		return env;
	return HEIGHTLAB_DEFAULT_DATA_DIR;
}

/// Resolves a user path. Existing paths win; otherwise the name is looked up
/// under data_root()/category and data_root().
inline std::filesystem::path resolve_data_file(std::string const &name, std::string const &category)
{
	namespace fs = std::filesystem;
	fs::path p(name);
	if (fs::exists(p))
		return p;
	for (fs::path const &cand : {data_root() / category / p, data_root() / p}) {
		if (fs::exists(cand))
			return cand;
		fs::path with_ext = cand;
		with_ext += ".json";
		if (fs::exists(with_ext))
			return with_ext;
	}
	throw ParseError("cannot find " + category + " file '" + name + "'");
}

inline json read_json_file(std::filesystem::path const &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError("cannot open '" + path.string() + "'");
	try {
		return json::parse(in);
	} catch (json::parse_error const &e) {
		throw ParseError(path.string() + ": " + e.what());
	}
}

inline Rational rational_from_json(json const &j)
{
	if (j.is_string())
		return parse_rational(j.get<std::string>());
	if (j.is_number_integer())
		return Rational(j.get<long>());
	throw ParseError("expected a rational string \"p/q\", got " + j.dump());
}

inline json to_json(Vector const &v)
{
	json a = json::array();
	for (auto const &x : v)
		a.push_back(to_string(x));
	return a;
}

} // namespace heightlab
