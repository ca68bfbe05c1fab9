#include "kgvec/neural_scorer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "kgvec/error.hpp"

namespace kgvec {
namespace {

constexpr std::array<char, 8> kMagic = {'K', 'G', 'V', 'S', 'C', 'O', 'R', 'E'};
constexpr std::uint8_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "scorer files assume a little-endian host");

template <typename M>
void write_row_major(std::ostream& out, const M& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const float v = m(r, c);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

template <typename M>
void read_row_major(std::istream& in, M& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      float v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      m(r, c) = v;
    }
  if (!in) throw Error(ErrorCode::Format, "truncated scorer file");
}

}  // namespace

ScorerTrainResult train_neural_scorer(const VectorTable& vectors, std::span<const Triple> positives,
                                      const NegativeGenerator& negatives, const ScorerTrainConfig& config) {
  if (positives.empty()) throw Error(ErrorCode::EmptyCorpus, "scorer needs training triples");
  if (config.epochs < 1) throw Error(ErrorCode::InvalidConfig, "scorer epochs must be at least 1");
  if (config.batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch size must be at least 1");

  const Eigen::Index d = vectors.dim();
  Rng init_rng(derive_seed(config.seed, "scorer-init"));
  Rng rng(derive_seed(config.seed, "scorer-train"));
  ScorerParams<float> params = glorot_init<float>(d, d, init_rng);
  AdamState<float> adam(params, config.adam);
  ScorerParams<float> grad;

  std::vector<std::uint32_t> order(positives.size());
  std::iota(order.begin(), order.end(), 0u);
  std::vector<Triple> batch;
  Eigen::VectorXf labels;
  ScorerTrainResult result;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0;
    std::size_t examples = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::size_t count = stop - start;
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(positives[order[i]]);
      for (std::size_t i = start; i < stop; ++i)
        batch.push_back(negatives.make(positives[order[i]], config.strategy, rng));
      labels.resize(static_cast<Eigen::Index>(2 * count));
      labels.head(static_cast<Eigen::Index>(count)).setOnes();
      labels.tail(static_cast<Eigen::Index>(count)).setZero();

      const float loss = scorer_gradient(params, gather_sequences<float>(vectors, batch), labels, grad);
      if (!std::isfinite(loss))
        throw Error(ErrorCode::NumericalDivergence, "non-finite scorer loss in epoch " + std::to_string(epoch));
      adam.step(params, grad);
      epoch_loss += static_cast<double>(loss) * static_cast<double>(2 * count);
      examples += 2 * count;
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(examples));
  }
  if (!params.all_finite()) throw Error(ErrorCode::NumericalDivergence, "non-finite scorer weights");
  result.scorer.params = std::move(params);
  return result;
}

void save_scorer(const NeuralScorer& scorer, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kVersion));
  const auto d = static_cast<std::uint32_t>(scorer.params.input_dim());
  const auto h = static_cast<std::uint32_t>(scorer.params.hidden());
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  const auto& p = scorer.params;
  write_row_major(out, p.gates_w);
  write_row_major(out, p.gates_b);
  write_row_major(out, p.dense_w);
  write_row_major(out, p.dense_b);
  write_row_major(out, p.out_w);
  write_row_major(out, p.out_b);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

NeuralScorer load_scorer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(ErrorCode::Format, "not a scorer file: " + path);
  const int version = in.get();
  if (version != kVersion) throw Error(ErrorCode::Format, "unsupported scorer version " + std::to_string(version));
  std::uint32_t d = 0;
  std::uint32_t h = 0;
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || d == 0 || h == 0) throw Error(ErrorCode::Format, "bad scorer dimensions");
  NeuralScorer scorer{ScorerParams<float>::zeros(d, h)};
  auto& p = scorer.params;
  read_row_major(in, p.gates_w);
  read_row_major(in, p.gates_b);
  read_row_major(in, p.dense_w);
  read_row_major(in, p.dense_b);
  read_row_major(in, p.out_w);
  read_row_major(in, p.out_b);
  return scorer;
}

std::string scorer_summary_json(const NeuralScorer& scorer) {
  const auto& p = scorer.params;
  nlohmann::ordered_json j;
  j["dim"] = p.input_dim();
  j["hidden"] = p.hidden();
  auto describe = [](const auto& m) {
    return nlohmann::ordered_json{{"shape", {m.rows(), m.cols()}}, {"norm", m.norm()}};
  };
  j["tensors"]["gates_w"] = describe(p.gates_w);
  j["tensors"]["gates_b"] = describe(p.gates_b);
  j["tensors"]["dense_w"] = describe(p.dense_w);
  j["tensors"]["dense_b"] = describe(p.dense_b);
  j["tensors"]["out_w"] = describe(p.out_w);
  j["tensors"]["out_b"] = describe(p.out_b);
  return j.dump(2);
}

}  // namespace kgvec
