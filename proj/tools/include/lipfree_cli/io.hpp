#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lipfree/molecule.hpp"
#include "lipfree/point_map.hpp"

namespace lipfree::cli {

using json = nlohmann::json;

/// Unreadable file, malformed JSON or a schema violation (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& value);
void write_text(const std::filesystem::path& path, const std::string& text);

/// A JSON number or a "p/q" string. Exact mode refuses non-integral JSON
/// numbers: binary fractions would silently stand in for the intended value.
template <Scalar S>
S parse_scalar(const json& value, const std::string& where);

/// "p/q" string in exact mode, a number in floating mode.
template <Scalar S>
json scalar_json(const S& value);

/// {"name", "base", "points", "matrix"}; the result still needs validate_space.
template <Scalar S>
RawSpace<S> parse_raw_space(const json& doc);

template <Scalar S>
json space_json(const MetricSpace<S>& space);

/// {"space", "terms": [{"point", "coeff"}]}. The space name must match.
template <Scalar S>
Molecule<S> parse_molecule(const json& doc, const SpacePtr<S>& space);

template <Scalar S>
json molecule_json(const Molecule<S>& mu);

/// {"domain", "codomain", "assignment": {label: label}}.
template <Scalar S>
PointMap<S> parse_map(const json& doc, const SpacePtr<S>& domain, const SpacePtr<S>& codomain);

template <Scalar S>
json map_json(const PointMap<S>& f);

}  // namespace lipfree::cli
