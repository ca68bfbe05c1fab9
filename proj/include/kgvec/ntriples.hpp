#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgvec {

/// One parsed statement before interning. IRIs are stored without angle
/// brackets; blank nodes keep their `_:` label.
struct RawTriple {
  std::string subject;
  std::string predicate;
  std::string object;

  friend bool operator==(const RawTriple&, const RawTriple&) = default;
};

struct ParseStats {
  std::uint64_t lines = 0;
  std::uint64_t blank_or_comment = 0;
  std::uint64_t triples = 0;
  std::uint64_t literals = 0;
  std::uint64_t malformed = 0;

  std::string to_json() const;
};

enum class LineKind { Triple, Literal, Malformed, BlankOrComment };

/// Classifies a single N-Triples line; fills `out` only for LineKind::Triple.
LineKind parse_ntriples_line(std::string_view line, RawTriple& out);

using RawTripleSink = std::function<void(RawTriple&&)>;

/// Streams every URI-object triple of `in` into `sink`. Literal and malformed
/// lines are counted and skipped.
ParseStats parse_ntriples(std::istream& in, const RawTripleSink& sink);

struct ParsedGraph {
  std::vector<RawTriple> triples;
  ParseStats stats;
};

ParsedGraph parse_ntriples(std::istream& in);

/// Reads a plain or gzip-compressed (magic 0x1F 0x8B) N-Triples file.
/// Throws Error(Io) when the file cannot be opened or read.
ParseStats parse_ntriples_file(const std::string& path, const RawTripleSink& sink);
ParsedGraph parse_ntriples_file(const std::string& path);

bool is_gzip_file(const std::string& path);

}  // namespace kgvec
