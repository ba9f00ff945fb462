#include "lipfree_cli/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lipfree::cli {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& value) { write_text(path, value.dump(2) + "\n"); }

namespace {

const json& field(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return doc.at(key);
}

std::string string_field(const json& doc, const char* key, const std::string& where) {
  const auto& v = field(doc, key, where);
  if (!v.is_string()) throw InputError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

Rational rational_from_string(const std::string& text, const std::string& where) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw InputError(where + ": bad number '" + text + "': " + e.what());
  }
}

}  // namespace

template <Scalar S>
S parse_scalar(const json& value, const std::string& where) {
  if (value.is_string()) return ScalarTraits<S>::from_rational(rational_from_string(value.get<std::string>(), where));
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return ScalarTraits<S>::from_rational(Rational(value.get<unsigned long>()));
    return ScalarTraits<S>::from_rational(Rational(value.get<long>()));
  }
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if constexpr (ScalarTraits<S>::is_exact) {
      throw InputError(where + ": non-integral JSON number " + format_double(d) +
                       " in exact mode; write it as a \"p/q\" string");
    } else {
      if (!std::isfinite(d)) throw InputError(where + ": non-finite number");
      return d;
    }
  }
  throw InputError(where + ": expected a number or a \"p/q\" string");
}

template <Scalar S>
json scalar_json(const S& value) {
  if constexpr (ScalarTraits<S>::is_exact) {
    return format_rational(value);
  } else {
    return value;
  }
}

template <Scalar S>
RawSpace<S> parse_raw_space(const json& doc) {
  RawSpace<S> raw;
  raw.name = string_field(doc, "name", "space");
  const std::string where = "space '" + raw.name + "'";
  raw.base = string_field(doc, "base", where);
  const auto& points = field(doc, "points", where);
  if (!points.is_array()) throw InputError(where + ": 'points' must be an array");
  for (const auto& p : points) {
    if (!p.is_string()) throw InputError(where + ": point labels must be strings");
    raw.labels.push_back(p.get<std::string>());
  }
  const auto& matrix = field(doc, "matrix", where);
  if (!matrix.is_array()) throw InputError(where + ": 'matrix' must be an array of rows");
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (!matrix[i].is_array()) throw InputError(where + ": matrix row " + std::to_string(i) + " is not an array");
    std::vector<S> row;
    for (std::size_t j = 0; j < matrix[i].size(); ++j) {
      row.push_back(parse_scalar<S>(matrix[i][j], where + " matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    }
    raw.matrix.push_back(std::move(row));
  }
  return raw;
}

template <Scalar S>
json space_json(const MetricSpace<S>& space) {
  json matrix = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(scalar_json(space.distance(i, j)));
    matrix.push_back(std::move(row));
  }
  return json{{"name", space.name()}, {"base", space.base_label()}, {"points", space.labels()}, {"matrix", matrix}};
}

template <Scalar S>
Molecule<S> parse_molecule(const json& doc, const SpacePtr<S>& space) {
  const std::string name = string_field(doc, "space", "molecule");
  if (name != space->name()) {
    throw InputError("molecule refers to space '" + name + "' but the space is '" + space->name() + "'");
  }
  const auto& terms = field(doc, "terms", "molecule");
  if (!terms.is_array()) throw InputError("molecule: 'terms' must be an array");
  std::vector<std::pair<std::string, S>> parsed;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "molecule term " + std::to_string(i);
    parsed.emplace_back(string_field(terms[i], "point", where), parse_scalar<S>(field(terms[i], "coeff", where), where));
  }
  return canonicalize(space, parsed);
}

template <Scalar S>
json molecule_json(const Molecule<S>& mu) {
  json terms = json::array();
  for (const auto& [point, coeff] : mu.terms()) {
    terms.push_back({{"point", mu.space()->label(point)}, {"coeff", scalar_json(coeff)}});
  }
  return json{{"space", mu.space()->name()}, {"terms", terms}};
}

template <Scalar S>
PointMap<S> parse_map(const json& doc, const SpacePtr<S>& domain, const SpacePtr<S>& codomain) {
  const auto dom = string_field(doc, "domain", "map");
  const auto cod = string_field(doc, "codomain", "map");
  if (dom != domain->name() || cod != codomain->name()) {
    throw InputError("map is " + dom + " -> " + cod + " but the spaces are " + domain->name() + " -> " +
                     codomain->name());
  }
  const auto& assignment = field(doc, "assignment", "map");
  if (!assignment.is_object()) throw InputError("map: 'assignment' must be an object");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [from, to] : assignment.items()) {
    if (!to.is_string()) throw InputError("map: image of '" + from + "' must be a label");
    pairs.emplace_back(from, to.template get<std::string>());
  }
  return PointMap<S>::from_labels(domain, codomain, pairs);
}

template <Scalar S>
json map_json(const PointMap<S>& f) {
  json assignment = json::object();
  for (std::size_t x = 0; x < f.domain()->size(); ++x) {
    assignment[f.domain()->label(x)] = f.codomain()->label(f(x));
  }
  return json{{"domain", f.domain()->name()}, {"codomain", f.codomain()->name()}, {"assignment", assignment}};
}

#define LIPFREE_CLI_INSTANTIATE(S)                                                    \
  template S parse_scalar<S>(const json&, const std::string&);                        \
  template json scalar_json<S>(const S&);                                             \
  template RawSpace<S> parse_raw_space<S>(const json&);                               \
  template json space_json<S>(const MetricSpace<S>&);                                 \
  template Molecule<S> parse_molecule<S>(const json&, const SpacePtr<S>&);            \
  template json molecule_json<S>(const Molecule<S>&);                                 \
  template PointMap<S> parse_map<S>(const json&, const SpacePtr<S>&, const SpacePtr<S>&); \
  template json map_json<S>(const PointMap<S>&);

LIPFREE_CLI_INSTANTIATE(Rational)
LIPFREE_CLI_INSTANTIATE(double)

#undef LIPFREE_CLI_INSTANTIATE

}  // namespace lipfree::cli
