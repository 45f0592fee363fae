#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "stressmat/arrangement.hpp"
#include "stressmat/gadget.hpp"
#include "stressmat/sign_matroid.hpp"
#include "stressmat/stress_kernel.hpp"

/// JSON file formats. Rationals are always "num/den" strings; keys keep
/// insertion order so every dump is byte-stable.
namespace stressmat::io {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
/// Accepts "num/den", an integer string, or a JSON integer. Throws Parse.
Rational rational_from_json(const Json& j);

/// {"vertices":[{"id","x","y"}],"edges":[[u,v]]}
Json to_json(const Framework& f);
Framework framework_from_json(const Json& j);

/// {"edges_order":[[u,v]],"values":[...]}
Json stress_to_json(const Graph& g, const Stress& s);
/// Edge order must match g exactly. Throws LengthMismatch, Parse.
Stress stress_from_json(const Json& j, const Graph& g);

/// {"dimension":d,"stresses":[stress files]}
Json basis_to_json(const Graph& g, const StressBasis& b);
StressBasis basis_from_json(const Json& j, const Graph& g);

/// {"edge_order","circuits"[,"covectors"],"sha"}; the hash covers the
/// compact dump of edge_order and circuits.
Json to_json(const StressMatroid& m);
StressMatroid matroid_from_json(const Json& j);
std::string matroid_sha(const StressMatroid& m);

/// {"lines":[{"a","b","c"}]}
Json to_json(const LineArrangement& l);
LineArrangement arrangement_from_json(const Json& j);

/// Line labels are 1-based.
Json to_json(const ArrangementType& t);

/// Framework fields plus "n", "labels" (role -> id), "line_of" (line label ->
/// edge indices), "line_order" (gadget line -> input line, 1-based), "frame".
Json to_json(const GadgetLayout& g);
GadgetLayout layout_from_json(const Json& j);

Json to_json(const GadgetReport& r);
Json to_json(const InvarianceReport& r);
Json to_json(const HarmonicGadget& h);

Json read_file(const std::filesystem::path& path);
/// Pretty dump with two-space indent and a trailing newline.
std::string dump(const Json& j);
void write_file(const std::filesystem::path& path, const Json& j);

}  // namespace stressmat::io
