#pragma once

// Streaming readers for the line-delimited registry and corpus files.
//
// Registry line: {"author_id": str, "cfn": str, "dois": [str, ...]}
// Corpus line:   {"doi": str, "paper_id": str|int, "title": str,
//                 "abstract": str, "venue": str, "year": int|null,
//                 "authors": [{"name": str, "affiliation": str}, ...]}
//
// Malformed lines are counted per category and skipped; only an unreadable
// file is fatal.

#include <array>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "andkit/error.hpp"
#include "andkit/types.hpp"
#include "andkit/util.hpp"

namespace andkit {

enum class IngestError : std::size_t {
  malformed_json = 0,
  missing_field,
  invalid_value,
  duplicate_key,
};

inline constexpr std::size_t kIngestErrorKinds = 4;

inline const char* ingest_error_name(IngestError e) {
  switch (e) {
    case IngestError::malformed_json: return "malformed_json";
    case IngestError::missing_field: return "missing_field";
    case IngestError::invalid_value: return "invalid_value";
    case IngestError::duplicate_key: return "duplicate_key";
  }
  return "unknown";
}

struct IngestCounters {
  std::size_t lines = 0;
  std::size_t blank = 0;
  std::size_t accepted = 0;
  std::array<std::size_t, kIngestErrorKinds> errors{};
  // Up to `kSampleLimit` "line N: message" strings for diagnostics.
  std::vector<std::string> samples;
  static constexpr std::size_t kSampleLimit = 20;

  std::size_t error_total() const {
    std::size_t t = 0;
    for (auto e : errors) t += e;
    return t;
  }
};

struct IngestReport {
  std::string source;
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<std::pair<std::string, std::size_t>> by_category;
  std::vector<std::string> samples;
};

inline IngestReport ingest_report(const IngestCounters& c,
                                  std::string source = {}) {
  IngestReport r;
  r.source = std::move(source);
  r.lines = c.lines;
  r.accepted = c.accepted;
  r.rejected = c.error_total();
  for (std::size_t i = 0; i < kIngestErrorKinds; ++i) {
    r.by_category.emplace_back(ingest_error_name(static_cast<IngestError>(i)),
                               c.errors[i]);
  }
  r.samples = c.samples;
  return r;
}

inline nlohmann::ordered_json to_json(const IngestReport& r) {
  nlohmann::ordered_json j;
  j["source"] = r.source;
  j["lines"] = r.lines;
  j["accepted"] = r.accepted;
  j["rejected"] = r.rejected;
  auto& cats = j["errors"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : r.by_category) cats[name] = n;
  j["samples"] = r.samples;
  return j;
}

/// Trim + lowercase. DOIs are case-insensitive exact join keys.
inline std::string normalize_doi(std::string_view doi) {
  return ascii_lower(trim_view(doi));
}

namespace detail {

struct LineFailure {
  IngestError kind;
  std::string message;
};

using json = nlohmann::json;

inline const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw LineFailure{IngestError::missing_field, key};
  return *it;
}

inline std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) {
    throw LineFailure{IngestError::invalid_value,
                      std::string(key) + " is not a string"};
  }
  return v.get<std::string>();
}

inline std::string optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw LineFailure{IngestError::invalid_value,
                      std::string(key) + " is not a string"};
  }
  return it->get<std::string>();
}

inline json parse_object(const std::string& line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw LineFailure{IngestError::malformed_json, "not a JSON object"};
  }
  return j;
}

}  // namespace detail

/// Parses one registry line. Throws detail::LineFailure.
inline AuthorRecord parse_author_line(const std::string& line) {
  using detail::LineFailure;
  const auto j = detail::parse_object(line);
  AuthorRecord r;
  r.author_id = trim(detail::require_string(j, "author_id"));
  if (r.author_id.empty()) {
    throw LineFailure{IngestError::invalid_value, "empty author_id"};
  }
  r.cfn = detail::require_string(j, "cfn");
  if (trim_view(r.cfn).empty()) {
    throw LineFailure{IngestError::invalid_value, "empty cfn"};
  }
  const auto& dois = detail::require(j, "dois");
  if (!dois.is_array()) {
    throw LineFailure{IngestError::invalid_value, "dois is not an array"};
  }
  std::unordered_set<std::string> seen;
  for (const auto& d : dois) {
    if (!d.is_string()) {
      throw LineFailure{IngestError::invalid_value, "doi is not a string"};
    }
    auto norm = normalize_doi(d.get<std::string>());
    if (norm.empty()) {
      throw LineFailure{IngestError::invalid_value, "empty doi"};
    }
    if (seen.insert(norm).second) r.claimed_dois.push_back(std::move(norm));
  }
  return r;
}

/// Parses one corpus line. Throws detail::LineFailure.
inline CitationRecord parse_citation_line(const std::string& line) {
  using detail::LineFailure;
  const auto j = detail::parse_object(line);
  CitationRecord r;
  r.doi = normalize_doi(detail::require_string(j, "doi"));
  if (r.doi.empty()) throw LineFailure{IngestError::invalid_value, "empty doi"};

  const auto& pid = detail::require(j, "paper_id");
  if (pid.is_string()) {
    r.paper_id = trim(pid.get<std::string>());
  } else if (pid.is_number_integer()) {
    r.paper_id = std::to_string(pid.get<long long>());
  } else {
    throw LineFailure{IngestError::invalid_value, "paper_id type"};
  }
  if (r.paper_id.empty()) {
    throw LineFailure{IngestError::invalid_value, "empty paper_id"};
  }

  r.title = detail::optional_string(j, "title");
  r.abstract = detail::optional_string(j, "abstract");
  r.venue = detail::optional_string(j, "venue");

  if (auto it = j.find("year"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw LineFailure{IngestError::invalid_value, "year is not an integer"};
    }
    r.year = it->get<int>();
  }

  const auto& authors = detail::require(j, "authors");
  if (!authors.is_array()) {
    throw LineFailure{IngestError::invalid_value, "authors is not an array"};
  }
  if (authors.empty()) {
    throw LineFailure{IngestError::invalid_value, "empty authors list"};
  }
  for (const auto& a : authors) {
    if (!a.is_object()) {
      throw LineFailure{IngestError::invalid_value, "author is not an object"};
    }
    AuthorSlot slot;
    slot.name = detail::require_string(a, "name");
    if (trim_view(slot.name).empty()) {
      throw LineFailure{IngestError::invalid_value, "empty author name"};
    }
    slot.affiliation = detail::optional_string(a, "affiliation");
    r.authors.push_back(std::move(slot));
  }
  return r;
}

inline nlohmann::ordered_json to_json(const AuthorRecord& r) {
  nlohmann::ordered_json j;
  j["author_id"] = r.author_id;
  j["cfn"] = r.cfn;
  j["dois"] = r.claimed_dois;
  return j;
}

inline nlohmann::ordered_json to_json(const CitationRecord& r) {
  nlohmann::ordered_json j;
  j["doi"] = r.doi;
  j["paper_id"] = r.paper_id;
  j["title"] = r.title;
  j["abstract"] = r.abstract;
  j["venue"] = r.venue;
  if (r.year) {
    j["year"] = *r.year;
  } else {
    j["year"] = nullptr;
  }
  auto& authors = j["authors"] = nlohmann::ordered_json::array();
  for (const auto& a : r.authors) {
    authors.push_back({{"name", a.name}, {"affiliation", a.affiliation}});
  }
  return j;
}

inline void write_line(std::ostream& os, const AuthorRecord& r) {
  os << to_json(r).dump() << '\n';
}

inline void write_line(std::ostream& os, const CitationRecord& r) {
  os << to_json(r).dump() << '\n';
}

/// Single-consumer line reader. Holds one line in memory at a time plus the
/// set of keys seen so far for duplicate rejection.
template <class Record>
class RecordReader {
 public:
  using ParseFn = Record (*)(const std::string&);
  using KeyFn = const std::string& (*)(const Record&);

  RecordReader(const std::string& path, ParseFn parse, KeyFn key)
      : path_(path), in_(path), parse_(parse), key_(key) {
    if (!in_) {
      throw Error(ErrorCategory::io, "cannot open " + path);
    }
  }

  /// Next valid record, or nullopt at end of file.
  std::optional<Record> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++counters_.lines;
      if (trim_view(line).empty()) {
        ++counters_.blank;
        continue;
      }
      try {
        Record r = parse_(line);
        if (!seen_.insert(key_(r)).second) {
          throw detail::LineFailure{IngestError::duplicate_key,
                                    "duplicate key " + key_(r)};
        }
        ++counters_.accepted;
        return r;
      } catch (const detail::LineFailure& f) {
        ++counters_.errors[static_cast<std::size_t>(f.kind)];
        if (counters_.samples.size() < IngestCounters::kSampleLimit) {
          counters_.samples.push_back("line " +
                                      std::to_string(counters_.lines) + ": " +
                                      ingest_error_name(f.kind) + ": " +
                                      f.message);
        }
      }
    }
    if (in_.bad()) throw Error(ErrorCategory::io, "read failure on " + path_);
    return std::nullopt;
  }

  template <class Fn>
  void for_each(Fn&& fn) {
    while (auto r = next()) fn(std::move(*r));
  }

  const IngestCounters& counters() const { return counters_; }
  IngestReport report() const { return ingest_report(counters_, path_); }

 private:
  std::string path_;
  std::ifstream in_;
  ParseFn parse_;
  KeyFn key_;
  IngestCounters counters_;
  std::unordered_set<std::string> seen_;
};

inline RecordReader<AuthorRecord> read_author_registry(const std::string& path) {
  return RecordReader<AuthorRecord>(
      path, &parse_author_line,
      [](const AuthorRecord& r) -> const std::string& { return r.author_id; });
}

inline RecordReader<CitationRecord> read_citation_corpus(
    const std::string& path) {
  return RecordReader<CitationRecord>(
      path, &parse_citation_line,
      [](const CitationRecord& r) -> const std::string& { return r.doi; });
}

inline std::vector<AuthorRecord> load_author_registry(
    const std::string& path, IngestReport* report = nullptr) {
  auto reader = read_author_registry(path);
  std::vector<AuthorRecord> out;
  reader.for_each([&](AuthorRecord r) { out.push_back(std::move(r)); });
  if (report) *report = reader.report();
  return out;
}

}  // namespace andkit
