#include "aigiqa/util/jsonl.hpp"

#include <fstream>
#include <sstream>

namespace aigiqa::util {

void read_jsonl(const std::filesystem::path& path,
                const std::function<void(std::size_t, const Json&)>& visit) {
  std::ifstream in(path);
  if (!in) throw JsonlError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw JsonlError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    visit(line_no, record);
  }
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records) {
  std::ostringstream buffer;
  for (const auto& record : records) buffer << record.dump() << '\n';

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw JsonlError("cannot write " + tmp.string());
    out << buffer.str();
    if (!out.flush()) throw JsonlError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonlError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw JsonlError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& document) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw JsonlError("cannot write " + tmp.string());
    out << document.dump(2) << '\n';
    if (!out.flush()) throw JsonlError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace aigiqa::util
