#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "concentra/rng.hpp"

namespace concentra {

/// Worker-pool size used by the chunked reductions below. Set once by the
/// CLI (--threads / CONCENTRA_THREADS); defaults to the hardware count.
int worker_threads();
void set_worker_threads(int threads);

/// Splits `total` items into fixed-size chunks, runs `work` on each chunk
/// with its own substream, and folds the partials in chunk order. The chunk
/// layout depends only on (total, chunk_size), never on the thread count, so
/// results are bit-identical no matter how the chunks are scheduled.
///
/// work(chunk_index, count, stream) -> Partial
/// merge(accumulator, partial)
template <class Partial, class Work, class Merge>
Partial chunked_reduce(std::size_t total, std::size_t chunk_size, const RngStream& rng,
                       Work work, Merge merge) {
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunks = total == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<std::optional<Partial>> partials(chunks);

  const int threads =
      std::max(1, std::min<int>(worker_threads(), static_cast<int>(chunks == 0 ? 1 : chunks)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  auto body = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      const std::size_t begin = c * chunk_size;
      const std::size_t count = std::min(chunk_size, total - begin);
      RngStream stream = rng.substream(c);
      try {
        partials[c].emplace(work(c, count, stream));
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  Partial acc{};
  for (std::size_t c = 0; c < chunks; ++c) merge(acc, std::move(*partials[c]));
  return acc;
}

/// Default chunk size for sample-level parallelism.
inline constexpr std::size_t kSampleChunk = 1 << 16;

}  // namespace concentra
