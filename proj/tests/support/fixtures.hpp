#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgvec/embedding_model.hpp"
#include "kgvec/graph_index.hpp"
#include "kgvec/ntriples.hpp"
#include "kgvec/vocabulary.hpp"

namespace kgvec::testing {

inline std::string iri(const std::string& local) { return "http://ex.org/" + local; }

inline RawTriple raw(const std::string& s, const std::string& p, const std::string& o) {
  return {iri(s), iri(p), iri(o)};
}

inline std::string to_ntriples(const std::vector<RawTriple>& triples) {
  std::ostringstream out;
  for (const auto& t : triples) out << '<' << t.subject << "> <" << t.predicate << "> <" << t.object << "> .\n";
  return out.str();
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("kgvec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream out(file(name), std::ios::binary);
    out << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline VectorTable random_table(std::size_t rows, Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<float> normal(0.0f, 1.0f);
  RowMatrix<float> m(static_cast<Eigen::Index>(rows), dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return VectorTable::all_present(std::move(m));
}

}  // namespace kgvec::testing
