#pragma once

#include <string>

#include <json.hpp>

#include "caloronkit/kmodel.hpp"

namespace caloronkit {

using json = nlohmann::json;

json grid_to_json(const Grid& g);
GridPtr grid_from_json(const json& j);

json form_to_json(const MatrixForm& f);
MatrixForm form_from_json(const json& j);

json map_to_json(const GroupMap& g);
GroupMap map_from_json(const json& j);

json pair_to_json(const ConnectionPair& p);
ConnectionPair pair_from_json(const json& j);

json framed_to_json(const FramedConnection& f);
FramedConnection framed_from_json(const json& j);

json graded_to_json(const GradedForm& f);
GradedForm graded_from_json(const json& j);

json report_to_json(const EquivalenceReport& r);

/// Atomic file write (temp + rename).
void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);

/// Compact grid descriptor: tokens joined by "x"; a token is a circle sample
/// count, "i<N>[:a:b]" for an interval, or "sph<P>:<T>:<F>" for a 3-sphere
/// chart; a trailing "s1" on the last circle marks it distinguished
/// (e.g. "32x32x64s1"). A string containing ".json" is read as a descriptor
/// file instead.
GridPtr parse_grid_spec(const std::string& spec);

}  // namespace caloronkit
