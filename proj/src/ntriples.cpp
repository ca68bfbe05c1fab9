#include "kgvec/ntriples.hpp"

#include <zlib.h>

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "kgvec/error.hpp"

namespace kgvec {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void skip_space(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
}

bool parse_iri(std::string_view line, std::size_t& pos, std::string& out) {
  if (pos >= line.size() || line[pos] != '<') return false;
  const std::size_t close = line.find('>', pos + 1);
  if (close == std::string_view::npos) return false;
  const std::string_view body = line.substr(pos + 1, close - pos - 1);
  if (body.empty()) return false;
  for (char c : body) {
    if (is_space(c) || c == '<' || c == '"') return false;
  }
  out.assign(body);
  pos = close + 1;
  return true;
}

bool parse_blank(std::string_view line, std::size_t& pos, std::string& out) {
  if (line.substr(pos, 2) != "_:") return false;
  std::size_t end = pos + 2;
  while (end < line.size() && !is_space(line[end])) ++end;
  // A label directly followed by the terminating dot ("_:b1.") is not allowed to swallow the dot.
  if (end > pos + 2 && line[end - 1] == '.') --end;
  if (end == pos + 2) return false;
  out.assign(line.substr(pos, end - pos));
  pos = end;
  return true;
}

bool parse_node(std::string_view line, std::size_t& pos, std::string& out) {
  return parse_iri(line, pos, out) || parse_blank(line, pos, out);
}

bool skip_literal(std::string_view line, std::size_t& pos) {
  if (pos >= line.size() || line[pos] != '"') return false;
  std::size_t i = pos + 1;
  for (; i < line.size(); ++i) {
    if (line[i] == '\\') {
      ++i;
    } else if (line[i] == '"') {
      break;
    }
  }
  if (i >= line.size()) return false;
  pos = i + 1;
  if (pos < line.size() && line[pos] == '@') {
    std::size_t end = pos + 1;
    while (end < line.size() && (std::isalnum(static_cast<unsigned char>(line[end])) || line[end] == '-'))
      ++end;
    if (end == pos + 1) return false;
    pos = end;
  } else if (line.substr(pos, 2) == "^^") {
    pos += 2;
    std::string datatype;
    if (!parse_iri(line, pos, datatype)) return false;
  }
  return true;
}

bool parse_terminator(std::string_view line, std::size_t pos) {
  skip_space(line, pos);
  if (pos >= line.size() || line[pos] != '.') return false;
  ++pos;
  skip_space(line, pos);
  return pos == line.size() || line[pos] == '#';
}

class GzLineReader {
 public:
  explicit GzLineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw Error(ErrorCode::Io, "cannot open " + path);
    gzbuffer(file_, 1 << 18);
  }
  GzLineReader(const GzLineReader&) = delete;
  GzLineReader& operator=(const GzLineReader&) = delete;
  ~GzLineReader() { gzclose(file_); }

  bool getline(std::string& line) {
    line.clear();
    for (;;) {
      if (pos_ == len_) {
        const int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
        if (n < 0) {
          int errnum = 0;
          throw Error(ErrorCode::Io, std::string("gzip read failed: ") + gzerror(file_, &errnum));
        }
        if (n == 0) return !line.empty();
        pos_ = 0;
        len_ = static_cast<std::size_t>(n);
      }
      const char* begin = buffer_.data() + pos_;
      const char* nl = static_cast<const char*>(std::memchr(begin, '\n', len_ - pos_));
      if (nl != nullptr) {
        line.append(begin, nl);
        pos_ += static_cast<std::size_t>(nl - begin) + 1;
        return true;
      }
      line.append(begin, len_ - pos_);
      pos_ = len_;
    }
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buffer_{};
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
};

void account(ParseStats& stats, LineKind kind) {
  ++stats.lines;
  switch (kind) {
    case LineKind::Triple: ++stats.triples; break;
    case LineKind::Literal: ++stats.literals; break;
    case LineKind::Malformed: ++stats.malformed; break;
    case LineKind::BlankOrComment: ++stats.blank_or_comment; break;
  }
}

}  // namespace

LineKind parse_ntriples_line(std::string_view line, RawTriple& out) {
  std::size_t pos = 0;
  skip_space(line, pos);
  if (pos == line.size() || line[pos] == '#') return LineKind::BlankOrComment;

  if (!parse_node(line, pos, out.subject)) return LineKind::Malformed;
  skip_space(line, pos);
  if (!parse_iri(line, pos, out.predicate)) return LineKind::Malformed;
  skip_space(line, pos);
  if (pos < line.size() && line[pos] == '"') {
    if (!skip_literal(line, pos) || !parse_terminator(line, pos)) return LineKind::Malformed;
    return LineKind::Literal;
  }
  if (!parse_node(line, pos, out.object)) return LineKind::Malformed;
  if (!parse_terminator(line, pos)) return LineKind::Malformed;
  return LineKind::Triple;
}

ParseStats parse_ntriples(std::istream& in, const RawTripleSink& sink) {
  ParseStats stats;
  std::string line;
  RawTriple triple;
  while (std::getline(in, line)) {
    const LineKind kind = parse_ntriples_line(line, triple);
    account(stats, kind);
    if (kind == LineKind::Triple) sink(std::move(triple));
  }
  if (in.bad()) throw Error(ErrorCode::Io, "stream read failed");
  return stats;
}

ParsedGraph parse_ntriples(std::istream& in) {
  ParsedGraph graph;
  graph.stats = parse_ntriples(in, [&](RawTriple&& t) { graph.triples.push_back(std::move(t)); });
  return graph;
}

bool is_gzip_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  return in.gcount() == 2 && magic[0] == 0x1F && magic[1] == 0x8B;
}

ParseStats parse_ntriples_file(const std::string& path, const RawTripleSink& sink) {
  if (!is_gzip_file(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return parse_ntriples(in, sink);
  }
  GzLineReader reader(path);
  ParseStats stats;
  std::string line;
  RawTriple triple;
  while (reader.getline(line)) {
    const LineKind kind = parse_ntriples_line(line, triple);
    account(stats, kind);
    if (kind == LineKind::Triple) sink(std::move(triple));
  }
  return stats;
}

ParsedGraph parse_ntriples_file(const std::string& path) {
  ParsedGraph graph;
  graph.stats =
      parse_ntriples_file(path, [&](RawTriple&& t) { graph.triples.push_back(std::move(t)); });
  return graph;
}

std::string ParseStats::to_json() const {
  nlohmann::ordered_json j;
  j["lines"] = lines;
  j["blank_or_comment"] = blank_or_comment;
  j["triples"] = triples;
  j["literals"] = literals;
  j["malformed"] = malformed;
  return j.dump();
}

}  // namespace kgvec
