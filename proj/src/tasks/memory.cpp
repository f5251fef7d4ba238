// Copyright 2026 The Bento Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bento/memory.hpp"

#include <sys/mman.h>

#include <atomic>
#include <thread>

#include "bento/error.hpp"
#include "bento/tasks.hpp"
#include "bento/util.hpp"

namespace bento::memory {

Buffer::Buffer(std::uint64_t bytes) {
  if (bytes == 0 || bytes % kWordBytes != 0) {
    raise(ErrorCode::kSizeNotWordAligned,
          std::to_string(bytes) + " bytes is not a positive multiple of " + std::to_string(kWordBytes));
  }
  void* p = ::mmap(nullptr, bytes, PROT_READ | PROT_WRITE, MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
  if (p == MAP_FAILED) raise(ErrorCode::kAllocationFailed, "mmap of " + std::to_string(bytes) + " bytes");
  data_ = static_cast<std::uint64_t*>(p);
  count_ = bytes / kWordBytes;
  mapped_ = bytes;
}

Buffer::~Buffer() {
  if (data_ != nullptr) ::munmap(data_, mapped_);
}

Buffer::Buffer(Buffer&& other) noexcept
    : data_(std::exchange(other.data_, nullptr)),
      count_(std::exchange(other.count_, 0)),
      mapped_(std::exchange(other.mapped_, 0)) {}

Buffer& Buffer::operator=(Buffer&& other) noexcept {
  if (this != &other) {
    if (data_ != nullptr) ::munmap(data_, mapped_);
    data_ = std::exchange(other.data_, nullptr);
    count_ = std::exchange(other.count_, 0);
    mapped_ = std::exchange(other.mapped_, 0);
  }
  return *this;
}

void fill_pattern(std::span<std::uint64_t> words, std::uint64_t seed) noexcept {
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = pattern_word(seed, i);
}

Region sequential_region(std::uint64_t word_count, unsigned threads, unsigned worker) noexcept {
  const std::uint64_t per = word_count / threads;
  const std::uint64_t extra = word_count % threads;
  const std::uint64_t begin = worker * per + std::min<std::uint64_t>(worker, extra);
  return {begin, begin + per + (worker < extra ? 1 : 0)};
}

namespace {

constexpr std::uint64_t kChunk = 4096;

// Runs `body(count)` in chunks until the access budget or the deadline.
template <typename Body>
std::uint64_t drive(const MemoryParams& p, std::int64_t start, Body&& body) {
  if (p.accesses_per_worker != 0) {
    body(p.accesses_per_worker);
    return p.accesses_per_worker;
  }
  const std::int64_t deadline = start + p.duration_ns;
  std::uint64_t done = 0;
  do {
    body(kChunk);
    done += kChunk;
  } while (now_ns() < deadline);
  return done;
}

WorkerResult run_worker(const MemoryParams& p, std::span<std::uint64_t> words, unsigned w,
                        const std::atomic<bool>& go) {
  WorkerResult r;
  r.pinned = pin_current_thread(w);
  while (!go.load(std::memory_order_acquire)) {
  }
  const std::int64_t start = now_ns();
  std::uint64_t* const base = words.data();
  const std::uint64_t fill = mix64(p.seed);
  std::uint64_t acc = 0;

  if (p.pattern == Pattern::kSequential) {
    const Region region = sequential_region(words.size(), p.threads, w);
    std::uint64_t pos = region.begin;
    if (region.begin == region.end) {
      r.elapsed_ns = now_ns() - start;
      return r;
    }
    if (p.op == Op::kRead) {
      r.accesses = drive(p, start, [&](std::uint64_t n) {
        for (std::uint64_t k = 0; k < n; ++k) {
          acc ^= base[pos];
          if (++pos == region.end) pos = region.begin;
        }
      });
    } else {
      r.accesses = drive(p, start, [&](std::uint64_t n) {
        for (std::uint64_t k = 0; k < n; ++k) {
          base[pos] = fill ^ (pos * 0x9E3779B97F4A7C15ULL);
          if (++pos == region.end) pos = region.begin;
        }
      });
    }
  } else {
    IndexStream stream(p.seed, w, words.size());
    if (p.op == Op::kRead) {
      r.accesses = drive(p, start, [&](std::uint64_t n) {
        for (std::uint64_t k = 0; k < n; ++k) acc ^= base[stream.next()];
      });
    } else {
      r.accesses = drive(p, start, [&](std::uint64_t n) {
        for (std::uint64_t k = 0; k < n; ++k) {
          const std::uint64_t i = stream.next();
          reinterpret_cast<volatile std::uint64_t*>(base)[i] = fill ^ (i * 0x9E3779B97F4A7C15ULL);
        }
      });
    }
  }
  r.elapsed_ns = now_ns() - start;
  r.checksum = acc;
  return r;
}

}  // namespace

MemoryOutcome run_memory(const MemoryParams& params, Buffer& buffer) {
  if (params.threads == 0) raise(ErrorCode::kInvalidParameter, "threads must be >= 1");
  if (params.object_size % kWordBytes != 0) {
    raise(ErrorCode::kSizeNotWordAligned, std::to_string(params.object_size) + " bytes");
  }
  auto words = buffer.words();
  if (words.size() * kWordBytes != params.object_size) {
    raise(ErrorCode::kInvalidParameter, "buffer size does not match object_size");
  }

  MemoryOutcome out;
  out.workers.resize(params.threads);
  std::atomic<bool> go{false};
  std::vector<std::thread> threads;
  threads.reserve(params.threads);
  for (unsigned w = 0; w < params.threads; ++w) {
    threads.emplace_back([&, w] { out.workers[w] = run_worker(params, words, w, go); });
  }
  const std::int64_t start = now_ns();
  go.store(true, std::memory_order_release);
  for (auto& t : threads) t.join();
  out.elapsed_ns = now_ns() - start;
  for (const auto& w : out.workers) {
    out.accesses_completed += w.accesses;
    out.checksum ^= w.checksum;
  }
  return out;
}

MemoryOutcome run_memory(const MemoryParams& params) {
  Buffer buffer(params.object_size);
  if (params.op == Op::kRead) fill_pattern(buffer.words(), params.seed);
  return run_memory(params, buffer);
}

}  // namespace bento::memory

namespace bento::tasks {

namespace {

class MemoryTask final : public Task {
 public:
  void prepare(TaskContext&, std::span<const TestCase>) override {}

  void run(TaskContext&, const TestCase& t, SampleRecorder& out) override {
    memory::MemoryParams p;
    p.op = t.get_string("operation") == "write" ? memory::Op::kWrite : memory::Op::kRead;
    p.object_size = static_cast<std::uint64_t>(t.get_int("object_size"));
    p.pattern = t.get_string("pattern") == "random" ? memory::Pattern::kRandom
                                                    : memory::Pattern::kSequential;
    p.threads = static_cast<unsigned>(t.get_int("threads"));
    p.duration_ns = t.get_int("duration_ms") * 1'000'000;
    p.seed = static_cast<std::uint64_t>(t.get_int("seed"));
    p.accesses_per_worker = static_cast<std::uint64_t>(t.get_int("accesses", 0));

    const auto outcome = memory::run_memory(p);
    bool all_pinned = true;
    for (std::size_t w = 0; w < outcome.workers.size(); ++w) {
      const auto& r = outcome.workers[w];
      out.record("accesses_done", static_cast<double>(r.accesses), "accesses");
      out.record("bytes_done", static_cast<double>(r.accesses * memory::kWordBytes), "bytes");
      all_pinned = all_pinned && r.pinned;
    }
    out.record(kElapsedMetric, static_cast<double>(outcome.elapsed_ns), "ns");
    out.meta()["checksum"] = hex64(outcome.checksum);
    out.meta()["pinned"] = all_pinned;
    out.meta()["word_bytes"] = memory::kWordBytes;
  }

  void clean(TaskContext&) override {}
};

}  // namespace

TaskDescriptor memory_descriptor() {
  TaskDescriptor d;
  d.name = "memory";
  d.summary = "random/sequential 8-byte read/write throughput over a buffer";
  d.schema = ParameterSchema({
      ParameterSpec::enumeration("operation", {"read", "write"}, "read"),
      ParameterSpec::size("object_size", memory::kWordBytes, 1ULL << 40, "16KB")
          .describe("buffer size; 16KB, 4MB and 1GB target L1, LLC and DRAM"),
      ParameterSpec::enumeration("pattern", {"random", "sequential"}, "sequential"),
      ParameterSpec::integer("threads", 1, 4096, 1),
      ParameterSpec::integer("duration_ms", 1, 3'600'000, 500),
      ParameterSpec::integer("accesses", 1, INT64_MAX)
          .describe("fixed access count per worker instead of duration_ms"),
      ParameterSpec::integer("seed", 0, INT64_MAX, 42),
  });
  d.metrics = {
      {"throughput", MetricClass::kRate, "accesses_done", "accesses/s", 1.0, "accesses per second"},
      {"bandwidth", MetricClass::kRate, "bytes_done", "GiB/s", 1.0 / (1ULL << 30),
       "bytes accessed per second, binary gigabytes"},
  };
  d.factory = [] { return std::make_unique<MemoryTask>(); };
  return d;
}

}  // namespace bento::tasks
