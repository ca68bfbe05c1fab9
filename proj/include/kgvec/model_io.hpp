#pragma once

#include <iosfwd>
#include <string>

#include "kgvec/embedding_model.hpp"

namespace kgvec {

// Text interchange format shared with the word2vec family:
//   line 1: "<vocab-size> <dimensionality>"
//   then:   "<uri> <f1> ... <fd>"
void save_model(const Embeddings& embeddings, std::ostream& out);
void save_model(const Embeddings& embeddings, const std::string& path);
/// Throws Error(Format) naming the offending line on malformed input.
Embeddings load_model(std::istream& in);
Embeddings load_model(const std::string& path);

// Binary sidecar: "KGVVEC\0\1", u64 rows, u64 dim, then per row a u32 URI
// length, the URI bytes and dim little-endian float32 values.
void save_model_binary(const Embeddings& embeddings, const std::string& path);
Embeddings load_model_binary(const std::string& path);

}  // namespace kgvec
