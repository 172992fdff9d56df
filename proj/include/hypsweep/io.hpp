#pragma once

// JSON and CSV serialization. Loading is strict: unknown keys, wrong types
// and wrong sizes are rejected with InvalidInput, and every triangulation
// is verified on the way in.
//
//   triangulation  {"darts": 3F, "twin": [...], "marking": {"rank": 2g, "classes": [[...], ...]}}
//                  ("marking" is optional; classes holds one row per dart)
//   flip path      {"start": <triangulation>, "moves": [edge ids]}
//   realization    {"triangulation": <object or path>, "basepoint": [x0, x1, x2, x3],
//                   "holonomy": {"<edge id>": [[4 reals] x 4], ...}}

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>
#include "hypsweep/coned_surface.hpp"
#include "hypsweep/fixtures.hpp"
#include "hypsweep/isoperimetric.hpp"
#include "hypsweep/triangulation.hpp"

namespace hypsweep::io {

using nlohmann::json;

json read_json_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);
/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

json to_json(const tri::OneVertexTriangulation& t);
tri::OneVertexTriangulation triangulation_from_json(const json& j);
/// Only the raw map; used to report verify() failures instead of throwing.
tri::CombMap comb_map_from_json(const json& j);

json to_json(const tri::FlipPath& p);
tri::FlipPath flip_path_from_json(const json& j);

json to_json(const fixtures::Realization& r);
/// A string "triangulation" is a path resolved against base_dir.
fixtures::Realization realization_from_json(const json& j, const std::filesystem::path& base_dir = {});

json to_json(const surf::AreaProfile& p);
std::string to_csv(const surf::AreaProfile& p);

/// Keys: r, fraction, nodes, seed, max_iters, max_outer, initial_step,
/// penalty, penalty_growth, volume_tolerance, grad_tolerance, noise,
/// initial_z. Missing keys keep their defaults.
void apply_config_json(const json& j, iso::IsoperimetricProblem& p, iso::OptimizerConfig& cfg);

std::string to_csv(const std::vector<iso::PlaneRow>& rows);
std::string to_csv(const std::vector<iso::CapRow>& rows);
std::string profile_csv(const iso::ProfileCurve& c);
std::string trace_csv(const std::vector<iso::IterationRecord>& trace);

}  // namespace hypsweep::io
