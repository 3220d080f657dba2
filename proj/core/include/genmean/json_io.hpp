#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "genmean/bounds.hpp"
#include "genmean/counterexamples.hpp"
#include "genmean/densities.hpp"
#include "genmean/measure_space.hpp"

namespace genmean {

// Interchange documents keep insertion order so identical inputs render
// byte-identically.
using ordered_json = nlohmann::ordered_json;

// Space: {"atoms": [labels], "weights": [positive reals]}.
ordered_json space_to_json(const MeasureSpace& space);
MeasureSpacePtr space_from_json(const nlohmann::json& doc);

// Function: {"space": <space doc or file path>, "arity": k,
//            "values": [row-major reals]}.
ordered_json function_to_json(const GridFunction& f);
GridFunction function_from_json(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir);

// Density: function document plus {"normalized": bool}.
ordered_json density_to_json(const SymmetricDensity& density);
SymmetricDensity density_from_json(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir);

ordered_json report_to_json(const Cond27Report& report);
ordered_json trace_to_json(const ConvergenceTrace& trace);
ordered_json bound_table_to_json(const BoundTable& table);
ordered_json bound_check_to_json(const BoundCheckReport& report);

// Throws Errc::InvalidArgument on unreadable files or malformed JSON.
nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const ordered_json& doc, const std::filesystem::path& path);

MeasureSpacePtr load_space(const std::filesystem::path& path);
GridFunction load_function(const std::filesystem::path& path);
SymmetricDensity load_density(const std::filesystem::path& path);

}  // namespace genmean
