#pragma once

// Shared fixtures for the unit suites.

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "andkit/types.hpp"

namespace andkit::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(std::filesystem::temp_directory_path() /
              ("andkit-test-" + std::to_string(::getpid()) + "-" + tag)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Citation with the given byline and optional metadata.
inline CitationPtr citation(const std::string& paper_id, std::vector<std::string> names,
                            std::string title = {}, std::string venue = {},
                            std::optional<int> year = {}, std::string affiliation = {}) {
  auto c = std::make_shared<CitationRecord>();
  c->paper_id = paper_id;
  c->doi = "10.1/" + paper_id;
  c->title = std::move(title);
  c->venue = std::move(venue);
  c->year = year;
  for (auto& n : names) c->authors.push_back({std::move(n), affiliation});
  return c;
}

/// Claim on the first byline slot.
inline LinkedClaim claim(const std::string& author_id, const std::string& cfn, CitationPtr c,
                         int position = 1) {
  return LinkedClaim{c->doi, author_id, cfn, std::move(c), position};
}

}  // namespace andkit::testing
