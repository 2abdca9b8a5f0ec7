#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace aigiqa::util {

using Json = nlohmann::json;

class JsonlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Calls `visit(line_number, record)` for every non-blank line. Line numbers are
// 1-based. A malformed line raises JsonlError naming the file and line.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(std::size_t, const Json&)>& visit);

// Writes `records` one per line, replacing the file atomically (write to a
// sibling temp file, then rename).
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records);

// Reads a whole JSON document.
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& document);

}  // namespace aigiqa::util
