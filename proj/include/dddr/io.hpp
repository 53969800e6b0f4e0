#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dddr/model.hpp"

namespace dddr {

/// Named-field document for an instance and its demand model.
nlohmann::json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& doc);

void write_problem(const std::filesystem::path& path, const Problem& problem);
Problem read_problem(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace dddr
