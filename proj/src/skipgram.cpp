#include "kgvec/skipgram.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace kgvec {

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> frequencies, double power) {
  if (frequencies.empty()) throw Error(ErrorCode::EmptyCorpus, "negative sampler needs a nonempty vocabulary");
  cumulative_.reserve(frequencies.size());
  double total = 0;
  for (std::uint64_t f : frequencies) {
    total += std::pow(static_cast<double>(f), power);
    cumulative_.push_back(total);
  }
  if (!(total > 0)) throw Error(ErrorCode::InvalidConfig, "negative sampler weights sum to zero");
}

void TrainConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidConfig, "dimensionality must be at least 1");
  if (negative < 1) throw Error(ErrorCode::InvalidConfig, "negative samples must be at least 1");
  if (epochs < 1) throw Error(ErrorCode::InvalidConfig, "epochs must be at least 1");
  if (!(learning_rate > 0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be positive");
  if (min_learning_rate < 0 || min_learning_rate > learning_rate)
    throw Error(ErrorCode::InvalidConfig, "learning-rate floor must lie in [0, learning rate]");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be at least 1");
}

namespace {

constexpr std::uint64_t kRateUpdateInterval = 1024;  // triples between learning-rate refreshes

}  // namespace

template <typename Scalar>
TrainResult<Scalar> train(std::span<const Triple> corpus, const Vocabulary& vocab, const TrainConfig& config) {
  config.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no encoded triples to train on");

  Rng init_rng(derive_seed(config.seed, "skipgram-init"));
  std::vector<std::string> tokens(vocab.uris().begin(), vocab.uris().end());
  TrainResult<Scalar> result{EmbeddingModel<Scalar>::initialized(std::move(tokens), config.dim, init_rng), {}, {}, 0};
  const NegativeSampler sampler(vocab.frequencies(), config.unigram_power);

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), corpus.size());
  const std::uint64_t total_triples = static_cast<std::uint64_t>(config.epochs) * corpus.size();
  std::atomic<std::uint64_t> processed{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  // Per-worker, per-epoch loss sums; reduced after join.
  std::vector<std::vector<double>> loss_sums(workers, std::vector<double>(config.epochs, 0.0));
  std::vector<std::vector<std::uint64_t>> pair_counts(workers, std::vector<std::uint64_t>(config.epochs, 0));

  auto run_worker = [&](std::size_t w) {
    try {
      const std::size_t begin = corpus.size() * w / workers;
      const std::size_t end = corpus.size() * (w + 1) / workers;
      Rng rng(derive_seed(derive_seed(config.seed, "skipgram-worker"), w));
      std::vector<std::uint32_t> order(end - begin);
      std::iota(order.begin(), order.end(), static_cast<std::uint32_t>(begin));
      Vector<Scalar> delta(config.dim);
      std::vector<Scalar> coeffs(static_cast<std::size_t>(config.negative) + 1);
      std::vector<TokenId> negatives(static_cast<std::size_t>(config.negative));
      Scalar lr = static_cast<Scalar>(config.learning_rate);
      std::uint64_t since_update = 0;

      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0;
        std::uint64_t pairs = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
          if (since_update == kRateUpdateInterval) {
            const std::uint64_t done = processed.fetch_add(since_update, std::memory_order_relaxed) + since_update;
            since_update = 0;
            const double progress = static_cast<double>(done) / static_cast<double>(total_triples);
            lr = static_cast<Scalar>(
                std::max(config.learning_rate * (1.0 - progress), config.min_learning_rate));
            if (stop.load(std::memory_order_relaxed)) return;
          }
          for (const auto& [center, context] : context_pairs(corpus[order[i]])) {
            sampler.draw(rng, negatives, context);
            try {
              epoch_loss += static_cast<double>(
                  detail::sgd_pair(result.model, center, context, negatives, lr, delta, std::span<Scalar>(coeffs)));
            } catch (const Error& e) {
              throw Error(e.code(), std::string(e.what()) + " (epoch " + std::to_string(epoch) + ", triple " +
                                        std::to_string(order[i]) + ")");
            }
            ++pairs;
          }
          ++since_update;
        }
        loss_sums[w][static_cast<std::size_t>(epoch)] = epoch_loss;
        pair_counts[w][static_cast<std::size_t>(epoch)] = pairs;
      }
      processed.fetch_add(since_update, std::memory_order_relaxed);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop.store(true);
    }
  };

  const auto start = std::chrono::steady_clock::now();
  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run_worker, w);
  }
  result.stats.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (failure) std::rethrow_exception(failure);

  result.stats.triples_processed = total_triples;
  result.epoch_losses.assign(static_cast<std::size_t>(config.epochs), 0.0);
  for (int e = 0; e < config.epochs; ++e) {
    double sum = 0;
    std::uint64_t pairs = 0;
    for (std::size_t w = 0; w < workers; ++w) {
      sum += loss_sums[w][static_cast<std::size_t>(e)];
      pairs += pair_counts[w][static_cast<std::size_t>(e)];
    }
    result.steps += pairs;
    result.epoch_losses[static_cast<std::size_t>(e)] = pairs ? sum / static_cast<double>(pairs) : 0.0;
  }
  if (!result.model.all_finite()) throw Error(ErrorCode::NumericalDivergence, "non-finite values after training");
  return result;
}

template TrainResult<float> train<float>(std::span<const Triple>, const Vocabulary&, const TrainConfig&);
template TrainResult<double> train<double>(std::span<const Triple>, const Vocabulary&, const TrainConfig&);

}  // namespace kgvec
