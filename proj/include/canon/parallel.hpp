#pragma once
// Deterministic fork-join. Work is cut into fixed chunks; workers claim
// chunks from a shared counter, but results are always combined strictly in
// chunk order, so every output (including failure points) is byte-identical
// across thread counts. Searches additionally skip chunks that lie beyond
// the earliest hit found so far — such chunks can never affect the answer.

#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include <canon/bigint.hpp>
#include <canon/errors.hpp>

namespace canon {

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

template <class R>
struct ChunkOutcome {
  std::uint64_t work = 0;       // units consumed up to (and including) the hit
  std::optional<R> hit;
};

namespace detail {

// Runs fn over all chunk indices, recording results and the first exception
// per chunk. `best` (when non-null) lets workers skip chunks beyond the
// earliest hit signalled so far.
template <class Slot, class Fn>
void drive_chunks(std::size_t chunk_count, unsigned threads, std::vector<Slot>& slots,
                  std::vector<std::exception_ptr>& errors, std::atomic<std::size_t>* best,
                  Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunk_count || abort.load()) return;
      if (best && c > best->load()) continue;
      try {
        slots[c] = fn(c);
      } catch (...) {
        errors[c] = std::current_exception();
        abort.store(true);
        return;
      }
    }
  };
  if (threads <= 1 || chunk_count <= 1) {
    worker();
    return;
  }
  unsigned n = threads < chunk_count ? threads : static_cast<unsigned>(chunk_count);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace detail

// First-hit search. fn(chunk) must scan its chunk sequentially and stop at
// its first hit. Reduction replays the sequential semantics: chunks in
// ascending order, accumulating work; a SizeError fires if the accumulated
// work would pass `work_cap` with no hit found earlier.
template <class R, class Fn>
std::optional<R> search_chunks(std::size_t chunk_count, unsigned threads, std::uint64_t work_cap,
                               const char* what, Fn&& fn, std::uint64_t* work_out = nullptr) {
  std::vector<std::optional<ChunkOutcome<R>>> slots(chunk_count);
  std::vector<std::exception_ptr> errors(chunk_count);
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  detail::drive_chunks(chunk_count, threads, slots, errors,
                       &best, [&](std::size_t c) {
                         auto out = fn(c);
                         if (out.hit) {
                           std::size_t prev = best.load();
                           while (c < prev && !best.compare_exchange_weak(prev, c)) {
                           }
                         }
                         return out;
                       });
  std::uint64_t used = 0;
  for (std::size_t c = 0; c < chunk_count; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
    if (!slots[c]) break;  // skipped: only possible beyond the first hit
    std::uint64_t w = slots[c]->work;
    if (w > work_cap || used > work_cap - w)
      throw SizeError(what, (BigInt(used) + w).str(), work_cap);
    used += w;
    if (slots[c]->hit) {
      if (work_out) *work_out = used;
      return std::move(slots[c]->hit);
    }
  }
  if (work_out) *work_out = used;
  return std::nullopt;
}

// Full map: every chunk runs; fold the results yourself in index order.
template <class R, class Fn>
std::vector<R> map_chunks(std::size_t chunk_count, unsigned threads, Fn&& fn) {
  std::vector<std::optional<R>> slots(chunk_count);
  std::vector<std::exception_ptr> errors(chunk_count);
  detail::drive_chunks(chunk_count, threads, slots, errors, nullptr, std::forward<Fn>(fn));
  std::vector<R> out;
  out.reserve(chunk_count);
  for (std::size_t c = 0; c < chunk_count; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
    out.push_back(std::move(*slots[c]));
  }
  return out;
}

}  // namespace canon
