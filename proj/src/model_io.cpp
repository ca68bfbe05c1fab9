#include "kgvec/model_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kgvec/error.hpp"

namespace kgvec {
namespace {

constexpr std::array<char, 8> kBinaryMagic = {'K', 'G', 'V', 'V', 'E', 'C', '\0', '\1'};

static_assert(std::endian::native == std::endian::little, "binary sidecar assumes little-endian host");

Error format_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::Format, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error(ErrorCode::Format, "truncated binary model");
  return value;
}

}  // namespace

VectorTable align(const Embeddings& embeddings, const Vocabulary& vocab) {
  VectorTable table;
  table.vectors = RowMatrix<float>::Zero(static_cast<Eigen::Index>(vocab.size()), embeddings.dim());
  table.present.assign(vocab.size(), 0);
  for (Eigen::Index r = 0; r < embeddings.size(); ++r) {
    if (auto id = vocab.id(embeddings.tokens[static_cast<std::size_t>(r)])) {
      table.vectors.row(*id) = embeddings.vectors.row(r);
      table.present[*id] = 1;
    }
  }
  return table;
}

void save_model(const Embeddings& embeddings, std::ostream& out) {
  out << embeddings.size() << ' ' << embeddings.dim() << '\n';
  std::array<char, 64> buf{};
  std::string line;
  for (Eigen::Index r = 0; r < embeddings.size(); ++r) {
    line = embeddings.tokens[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < embeddings.dim(); ++c) {
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), embeddings.vectors(r, c));
      line.push_back(' ');
      line.append(buf.data(), res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

void save_model(const Embeddings& embeddings, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  save_model(embeddings, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

Embeddings load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw format_error(1, "missing header");
  long long rows = -1;
  long long dim = -1;
  {
    std::istringstream header(line);
    if (!(header >> rows >> dim) || rows < 0 || dim < 1) throw format_error(1, "bad header '" + line + "'");
  }

  Embeddings model;
  model.tokens.reserve(static_cast<std::size_t>(rows));
  model.vectors.resize(rows, dim);
  for (long long r = 0; r < rows; ++r) {
    const std::size_t line_no = static_cast<std::size_t>(r) + 2;
    if (!std::getline(in, line)) throw format_error(line_no, "expected " + std::to_string(rows) + " rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end && *p == ' ') ++p;
    const char* token_end = static_cast<const char*>(std::memchr(p, ' ', static_cast<std::size_t>(end - p)));
    if (token_end == nullptr || token_end == p) throw format_error(line_no, "missing vector values");
    model.tokens.emplace_back(p, token_end);
    p = token_end;
    long long c = 0;
    for (;;) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float value = 0;
      auto res = std::from_chars(p, end, value);
      if (res.ec != std::errc()) throw format_error(line_no, "bad number");
      if (c >= dim) throw format_error(line_no, "row has more than " + std::to_string(dim) + " values");
      model.vectors(r, c++) = value;
      p = res.ptr;
    }
    if (c != dim)
      throw format_error(line_no, "row has " + std::to_string(c) + " values, expected " + std::to_string(dim));
  }
  return model;
}

Embeddings load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return load_model(in);
}

void save_model_binary(const Embeddings& embeddings, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(kBinaryMagic.data(), kBinaryMagic.size());
  write_pod(out, static_cast<std::uint64_t>(embeddings.size()));
  write_pod(out, static_cast<std::uint64_t>(embeddings.dim()));
  for (Eigen::Index r = 0; r < embeddings.size(); ++r) {
    const std::string& uri = embeddings.tokens[static_cast<std::size_t>(r)];
    write_pod(out, static_cast<std::uint32_t>(uri.size()));
    out.write(uri.data(), static_cast<std::streamsize>(uri.size()));
    out.write(reinterpret_cast<const char*>(embeddings.vectors.row(r).data()),
              static_cast<std::streamsize>(sizeof(float) * static_cast<std::size_t>(embeddings.dim())));
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

Embeddings load_model_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kBinaryMagic) throw Error(ErrorCode::Format, "not a binary model: " + path);
  const auto rows = read_pod<std::uint64_t>(in);
  const auto dim = read_pod<std::uint64_t>(in);
  if (dim == 0) throw Error(ErrorCode::Format, "zero dimensionality");
  Embeddings model;
  model.vectors.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (std::uint64_t r = 0; r < rows; ++r) {
    const auto len = read_pod<std::uint32_t>(in);
    std::string uri(len, '\0');
    in.read(uri.data(), len);
    in.read(reinterpret_cast<char*>(model.vectors.row(static_cast<Eigen::Index>(r)).data()),
            static_cast<std::streamsize>(sizeof(float) * dim));
    if (!in) throw Error(ErrorCode::Format, "truncated binary model at row " + std::to_string(r));
    model.tokens.push_back(std::move(uri));
  }
  return model;
}

}  // namespace kgvec
