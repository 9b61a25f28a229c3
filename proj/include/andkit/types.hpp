#pragma once

// Core record types shared by every pipeline stage.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace andkit {

/// One registry author: persistent id, credible full name (CFN) and the DOIs
/// the author claimed.
struct AuthorRecord {
  std::string author_id;
  std::string cfn;
  std::vector<std::string> claimed_dois;

  bool operator==(const AuthorRecord&) const = default;
};

/// One byline entry of a citation.
struct AuthorSlot {
  std::string name;
  std::string affiliation;

  bool operator==(const AuthorSlot&) const = default;
};

/// One paper of the citation corpus. Author positions are 1-based indices
/// into `authors`.
struct CitationRecord {
  std::string doi;
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::string venue;
  std::optional<int> year;
  std::vector<AuthorSlot> authors;

  bool operator==(const CitationRecord&) const = default;
};

using CitationPtr = std::shared_ptr<const CitationRecord>;

/// A registry claim joined to a citation. position == 0 means the claimed
/// author could not be located in the byline.
struct LinkedClaim {
  std::string doi;
  std::string author_id;
  std::string cfn;
  CitationPtr citation;
  int position = 0;

  /// Byline slot of the claimed author. Requires position >= 1.
  const AuthorSlot& slot() const { return citation->authors.at(position - 1); }
};

inline bool same_claim(const LinkedClaim& a, const LinkedClaim& b) {
  return a.doi == b.doi && a.author_id == b.author_id && a.cfn == b.cfn &&
         a.position == b.position &&
         (a.citation == b.citation ||
          (a.citation && b.citation && *a.citation == *b.citation));
}

}  // namespace andkit
