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

#include "bento/storage.hpp"

#include <fcntl.h>
#include <linux/aio_abi.h>
#include <sys/statvfs.h>
#include <sys/syscall.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "bento/error.hpp"
#include "bento/tasks.hpp"
#include "bento/util.hpp"

namespace fs = std::filesystem;

namespace bento::storage {

namespace {

int io_setup(unsigned nr, aio_context_t* ctx) { return static_cast<int>(::syscall(SYS_io_setup, nr, ctx)); }
int io_destroy(aio_context_t ctx) { return static_cast<int>(::syscall(SYS_io_destroy, ctx)); }
int io_submit(aio_context_t ctx, long n, iocb** cbs) {
  return static_cast<int>(::syscall(SYS_io_submit, ctx, n, cbs));
}
int io_getevents(aio_context_t ctx, long min_nr, long nr, io_event* events) {
  return static_cast<int>(::syscall(SYS_io_getevents, ctx, min_nr, nr, events, nullptr));
}

std::string errno_text(int err) { return std::strerror(err); }

void store_le(std::byte* out, std::uint64_t v, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::byte>(v >> (8 * i));
}

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t bytes)
      : data(static_cast<std::byte*>(std::aligned_alloc(kAlignment, bytes))) {
    if (data == nullptr) raise(ErrorCode::kAllocationFailed, std::to_string(bytes) + " byte I/O buffer");
  }
  ~AlignedBuffer() { std::free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  std::byte* data;
};

// Picks the next offset for one worker, for either pattern.
class Cursor {
 public:
  Cursor(const StorageParams& p, unsigned worker)
      : random_(p.seed, worker, p.file_size, p.access_size),
        is_random_(p.pattern == Pattern::kRandom),
        range_(sequential_blocks(p.file_size / p.access_size, p.threads, worker)),
        block_(range_.begin),
        access_size_(p.access_size) {}

  bool idle() const noexcept { return !is_random_ && range_.begin == range_.end; }

  std::uint64_t next() noexcept {
    if (is_random_) return random_.next();
    const std::uint64_t off = block_ * access_size_;
    if (++block_ == range_.end) block_ = range_.begin;
    return off;
  }

 private:
  OffsetStream random_;
  bool is_random_;
  BlockRange range_;
  std::uint64_t block_;
  std::uint64_t access_size_;
};

struct Shared {
  const StorageParams& params;
  int fd;
  std::int64_t deadline_ns;
  std::vector<std::byte> pattern;
};

bool more(const Shared& s, std::uint64_t submitted) {
  if (s.params.ops_per_worker != 0) return submitted < s.params.ops_per_worker;
  return now_ns() < s.deadline_ns;
}

void kernel_worker(const Shared& s, unsigned w, std::vector<IoOpRecord>& log) {
  const StorageParams& p = s.params;
  Cursor cursor(p, w);
  if (cursor.idle()) return;
  aio_context_t ctx = 0;
  if (io_setup(p.queue_depth, &ctx) < 0) raise(ErrorCode::kIo, "io_setup: " + errno_text(errno));

  struct Slot {
    iocb cb{};
    std::int64_t submit_ns = 0;
  };
  AlignedBuffer buffers(p.access_size * p.queue_depth);
  std::vector<Slot> slots(p.queue_depth);
  std::vector<unsigned> free_slots;
  for (unsigned i = 0; i < p.queue_depth; ++i) {
    free_slots.push_back(p.queue_depth - 1 - i);
    if (p.io_type == IoType::kWrite) {
      std::memcpy(buffers.data + i * p.access_size, s.pattern.data(), p.access_size);
    }
  }
  std::vector<io_event> events(p.queue_depth);
  const auto opcode = p.io_type == IoType::kRead ? IOCB_CMD_PREAD : IOCB_CMD_PWRITE;

  std::uint64_t submitted = 0;
  unsigned inflight = 0;
  int failure = 0;
  for (;;) {
    while (failure == 0 && inflight < p.queue_depth && more(s, submitted)) {
      const unsigned id = free_slots.back();
      Slot& slot = slots[id];
      slot.cb = iocb{};
      slot.cb.aio_data = id;
      slot.cb.aio_lio_opcode = static_cast<std::uint16_t>(opcode);
      slot.cb.aio_fildes = static_cast<std::uint32_t>(s.fd);
      slot.cb.aio_buf = reinterpret_cast<std::uint64_t>(buffers.data + id * p.access_size);
      slot.cb.aio_nbytes = p.access_size;
      slot.cb.aio_offset = static_cast<std::int64_t>(cursor.next());
      iocb* cbp = &slot.cb;
      slot.submit_ns = now_ns();
      const int rc = io_submit(ctx, 1, &cbp);
      if (rc != 1) {
        failure = rc < 0 ? errno : EAGAIN;
        break;
      }
      free_slots.pop_back();
      ++inflight;
      ++submitted;
    }
    if (inflight == 0) break;
    const int n = io_getevents(ctx, 1, inflight, events.data());
    const std::int64_t done = now_ns();
    if (n < 0) {
      if (errno == EINTR) continue;
      failure = errno;
      break;
    }
    for (int i = 0; i < n; ++i) {
      const auto id = static_cast<unsigned>(events[i].data);
      const Slot& slot = slots[id];
      log.push_back({slot.submit_ns, done, static_cast<std::uint64_t>(slot.cb.aio_offset),
                     static_cast<std::uint32_t>(p.access_size), w, events[i].res});
      free_slots.push_back(id);
      --inflight;
    }
  }
  io_destroy(ctx);
  if (failure != 0) raise(ErrorCode::kIo, "io_submit: " + errno_text(failure));
}

void pool_worker(const Shared& s, unsigned w, std::vector<IoOpRecord>& log) {
  const StorageParams& p = s.params;
  Cursor cursor(p, w);
  if (cursor.idle()) return;
  std::mutex mu;
  std::uint64_t submitted = 0;
  std::vector<std::thread> helpers;
  for (unsigned h = 0; h < p.queue_depth; ++h) {
    helpers.emplace_back([&] {
      AlignedBuffer buf(p.access_size);
      if (p.io_type == IoType::kWrite) std::memcpy(buf.data, s.pattern.data(), p.access_size);
      for (;;) {
        std::uint64_t off;
        {
          std::lock_guard lock(mu);
          if (!more(s, submitted)) return;
          ++submitted;
          off = cursor.next();
        }
        const std::int64_t start = now_ns();
        const auto n = p.io_type == IoType::kRead
                           ? ::pread(s.fd, buf.data, p.access_size, static_cast<off_t>(off))
                           : ::pwrite(s.fd, buf.data, p.access_size, static_cast<off_t>(off));
        const std::int64_t done = now_ns();
        std::lock_guard lock(mu);
        log.push_back({start, done, off, static_cast<std::uint32_t>(p.access_size), w,
                       n < 0 ? -static_cast<std::int64_t>(errno) : n});
      }
    });
  }
  for (auto& t : helpers) t.join();
}

bool kernel_aio_available(unsigned depth) {
  aio_context_t ctx = 0;
  if (io_setup(depth, &ctx) < 0) return false;
  io_destroy(ctx);
  return true;
}

int open_target(const fs::path& path, IoType type, bool direct) {
  int flags = (type == IoType::kRead ? O_RDONLY : O_WRONLY) | O_CLOEXEC;
  if (direct) flags |= O_DIRECT;
  return ::open(path.c_str(), flags);
}

}  // namespace

std::string_view to_string(Engine engine) noexcept {
  switch (engine) {
    case Engine::kAuto: return "auto";
    case Engine::kKernelAio: return "kernel_aio";
    case Engine::kThreadPool: return "thread_pool";
  }
  return "unknown";
}

std::uint64_t default_file_size(const fs::path& dir) {
  constexpr std::uint64_t kFloor = 64ULL << 20;
  constexpr std::uint64_t kCeiling = 4ULL << 30;
  struct statvfs st {};
  std::uint64_t quarter = kFloor;
  if (::statvfs(dir.c_str(), &st) == 0) {
    quarter = static_cast<std::uint64_t>(st.f_bavail) * st.f_frsize / 4;
  }
  const std::uint64_t size = std::min(kCeiling, std::max(kFloor, quarter));
  return size / kAlignment * kAlignment;
}

void prepare_file(const fs::path& path, std::uint64_t file_size, std::uint64_t seed) {
  if (file_size == 0) raise(ErrorCode::kInvalidParameter, "file_size must be positive");
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    raise(ec == std::errc::permission_denied ? ErrorCode::kPermissionDenied : ErrorCode::kIo,
          dir.string() + ": " + ec.message());
  }
  struct statvfs st {};
  if (::statvfs(dir.c_str(), &st) == 0) {
    std::uint64_t avail = static_cast<std::uint64_t>(st.f_bavail) * st.f_frsize;
    const auto existing = fs::file_size(path, ec);
    if (!ec) avail += existing;
    if (avail < file_size) {
      raise(ErrorCode::kInsufficientSpace, path.string() + " needs " + format_size(file_size) +
                                               ", " + format_size(avail) + " free");
    }
  }
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    const int err = errno;
    raise(err == EACCES || err == EPERM || err == EROFS ? ErrorCode::kPermissionDenied
                                                        : ErrorCode::kIo,
          path.string() + ": " + errno_text(err));
  }
  constexpr std::size_t kChunk = 1 << 20;
  std::vector<std::byte> chunk(kChunk);
  Xorshift64Star rng(seed);
  std::uint64_t written = 0;
  int err = 0;
  while (written < file_size && err == 0) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, file_size - written));
    for (std::size_t i = 0; i < n; i += 8) store_le(chunk.data() + i, rng.next(), std::min<std::size_t>(8, n - i));
    std::size_t off = 0;
    while (off < n) {
      const auto w = ::write(fd, chunk.data() + off, n - off);
      if (w < 0) {
        if (errno == EINTR) continue;
        err = errno;
        break;
      }
      off += static_cast<std::size_t>(w);
    }
    written += off;
  }
  if (err == 0 && ::fsync(fd) != 0) err = errno;
  ::close(fd);
  if (err != 0) {
    raise(err == ENOSPC ? ErrorCode::kInsufficientSpace : ErrorCode::kIo,
          path.string() + ": " + errno_text(err));
  }
}

BlockRange sequential_blocks(std::uint64_t blocks, unsigned threads, unsigned worker) noexcept {
  const std::uint64_t per = blocks / threads;
  const std::uint64_t extra = blocks % threads;
  const std::uint64_t begin = worker * per + std::min<std::uint64_t>(worker, extra);
  return {begin, begin + per + (worker < extra ? 1 : 0)};
}

std::vector<std::byte> write_block(std::uint64_t seed, std::uint64_t access_size) {
  std::vector<std::byte> out(access_size);
  Xorshift64Star rng(mix64(seed ^ 0x7772697465ULL));
  for (std::size_t i = 0; i < out.size(); i += 8) {
    store_le(out.data() + i, rng.next(), std::min<std::size_t>(8, out.size() - i));
  }
  return out;
}

StorageOutcome run_storage(const StorageParams& p) {
  if (p.threads == 0 || p.queue_depth == 0) {
    raise(ErrorCode::kInvalidParameter, "threads and queue_depth must be >= 1");
  }
  if (p.access_size == 0 || p.access_size % kAlignment != 0) {
    raise(ErrorCode::kInvalidParameter,
          "access_size " + std::to_string(p.access_size) + " is not a multiple of " +
              std::to_string(kAlignment));
  }
  if (p.access_size > p.file_size) {
    raise(ErrorCode::kAccessSizeExceedsFile,
          format_size(p.access_size) + " access on a " + format_size(p.file_size) + " file");
  }
  std::error_code ec;
  const auto actual = fs::file_size(p.file, ec);
  if (ec || actual < p.file_size) {
    raise(ErrorCode::kInvalidParameter, p.file.string() + " is missing or smaller than file_size");
  }

  StorageOutcome out;
  out.direct = p.direct_io;
  int fd = open_target(p.file, p.io_type, p.direct_io);
  if (fd < 0 && p.direct_io && errno == EINVAL) {
    out.direct = false;
    fd = open_target(p.file, p.io_type, false);
  }
  if (fd < 0) {
    const int err = errno;
    raise(err == EACCES || err == EPERM ? ErrorCode::kPermissionDenied : ErrorCode::kIo,
          p.file.string() + ": " + errno_text(err));
  }

  out.engine = p.engine;
  if (out.engine == Engine::kAuto) {
    out.engine = kernel_aio_available(p.queue_depth) ? Engine::kKernelAio : Engine::kThreadPool;
  }

  std::vector<std::vector<IoOpRecord>> logs(p.threads);
  std::vector<std::exception_ptr> errors(p.threads);
  std::atomic<bool> go{false};
  Shared shared{p, fd, 0, p.io_type == IoType::kWrite ? write_block(p.seed, p.access_size)
                                                      : std::vector<std::byte>{}};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < p.threads; ++w) {
    workers.emplace_back([&, w] {
      while (!go.load(std::memory_order_acquire)) std::this_thread::yield();
      try {
        if (out.engine == Engine::kKernelAio) {
          kernel_worker(shared, w, logs[w]);
        } else {
          pool_worker(shared, w, logs[w]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  const std::int64_t start = now_ns();
  shared.deadline_ns = start + p.duration_ns;
  go.store(true, std::memory_order_release);
  for (auto& t : workers) t.join();
  if (p.io_type == IoType::kWrite) ::fsync(fd);
  ::close(fd);
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::int64_t last = start;
  for (auto& log : logs) {
    for (const auto& op : log) {
      if (op.result != static_cast<std::int64_t>(op.size)) {
        raise(ErrorCode::kIo, "operation at offset " + std::to_string(op.offset) + " returned " +
                                  (op.result < 0 ? errno_text(static_cast<int>(-op.result))
                                                 : std::to_string(op.result) + " bytes"));
      }
      out.bytes_done += op.size;
      last = std::max(last, op.complete_ns);
    }
    out.ops.insert(out.ops.end(), log.begin(), log.end());
  }
  out.elapsed_ns = last - start;
  return out;
}

}  // namespace bento::storage

namespace bento::tasks {

namespace {

using namespace bento::storage;

struct FilePlan {
  fs::path path;
  std::uint64_t size = 0;
  std::uint64_t seed = 0;
};

class StorageTask final : public Task {
 public:
  void prepare(TaskContext& ctx, std::span<const TestCase> tests) override {
    std::map<fs::path, FilePlan> unique;
    for (const auto& t : tests) {
      FilePlan plan = plan_for(ctx, t);
      plans_[t.test_id] = plan;
      unique.emplace(plan.path, plan);
    }
    for (const auto& [path, plan] : unique) {
      ctx.log("writing " + format_size(plan.size) + " to " + path.string());
      prepare_file(path, plan.size, plan.seed);
    }
  }

  void run(TaskContext& ctx, const TestCase& t, SampleRecorder& out) override {
    auto it = plans_.find(t.test_id);
    const FilePlan plan = it != plans_.end() ? it->second : plan_for(ctx, t);

    StorageParams p;
    p.io_type = t.get_string("io_type") == "write" ? IoType::kWrite : IoType::kRead;
    p.access_size = static_cast<std::uint64_t>(t.get_int("access_size"));
    p.pattern = t.get_string("pattern") == "sequential" ? Pattern::kSequential : Pattern::kRandom;
    p.queue_depth = static_cast<unsigned>(t.get_int("queue_depth"));
    p.threads = static_cast<unsigned>(t.get_int("threads"));
    p.file_size = plan.size;
    p.file = plan.path;
    p.duration_ns = t.get_int("duration_ms") * 1'000'000;
    p.direct_io = t.get_string("direct_io") == "true";
    p.seed = plan.seed;
    p.ops_per_worker = static_cast<std::uint64_t>(t.get_int("ops", 0));
    const std::string engine = t.get_string("engine");
    p.engine = engine == "kernel_aio"    ? Engine::kKernelAio
               : engine == "thread_pool" ? Engine::kThreadPool
                                         : Engine::kAuto;

    const StorageOutcome outcome = run_storage(p);
    write_op_log(ctx.test_dir(t.test_id) / "oplog.csv", outcome);

    std::vector<std::uint64_t> per_worker(p.threads, 0);
    std::vector<TimedValue> latency;
    latency.reserve(outcome.ops.size());
    for (const auto& op : outcome.ops) {
      per_worker[op.worker] += op.size;
      latency.push_back({static_cast<double>(op.complete_ns - op.submit_ns), op.complete_ns});
    }
    for (auto bytes : per_worker) out.record("bytes_done", static_cast<double>(bytes), "bytes");
    out.record(kElapsedMetric, static_cast<double>(outcome.elapsed_ns), "ns");
    out.record_series("latency", "ns", latency);
    out.meta()["engine"] = std::string(to_string(outcome.engine));
    out.meta()["direct_io"] = outcome.direct;
    out.meta()["direct_io_requested"] = p.direct_io;
    out.meta()["file"] = plan.path.string();
    out.meta()["file_size"] = plan.size;
    out.meta()["ops_completed"] = outcome.ops.size();
  }

  void clean(TaskContext&) override {}

 private:
  static FilePlan plan_for(const TaskContext& ctx, const TestCase& t) {
    FilePlan plan;
    const bool external = t.has("target_path");
    const fs::path dir = external ? fs::path(t.get_string("target_path")) : ctx.task_dir() / "data";
    fs::create_directories(dir);
    plan.size = t.has("file_size") ? static_cast<std::uint64_t>(t.get_int("file_size"))
                                   : default_file_size(dir);
    plan.seed = static_cast<std::uint64_t>(t.get_int("seed"));
    plan.path = dir / ("bento-storage-" + std::to_string(plan.seed) + "-" +
                       std::to_string(plan.size) + ".dat");
    if (external) ctx.register_artifact(plan.path);
    return plan;
  }

  static void write_op_log(const fs::path& path, const StorageOutcome& outcome) {
    fs::create_directories(path.parent_path());
    std::ofstream log(path);
    log << "worker,offset,size,submit_ns,complete_ns,result\n";
    for (const auto& op : outcome.ops) {
      log << op.worker << ',' << op.offset << ',' << op.size << ',' << op.submit_ns << ','
          << op.complete_ns << ',' << op.result << '\n';
    }
  }

  std::map<std::uint64_t, FilePlan> plans_;
};

}  // namespace

TaskDescriptor storage_descriptor() {
  TaskDescriptor d;
  d.name = "storage";
  d.summary = "asynchronous file I/O throughput and latency";
  d.schema = ParameterSchema({
      ParameterSpec::enumeration("io_type", {"read", "write"}, "read"),
      ParameterSpec::size("access_size", 8 * 1024, 4 * 1024 * 1024, "8KB"),
      ParameterSpec::enumeration("pattern", {"random", "sequential"}, "random"),
      ParameterSpec::integer("queue_depth", 1, 256, 1),
      ParameterSpec::integer("threads", 1, 1024, 1),
      ParameterSpec::size("file_size", kAlignment, 1ULL << 50)
          .describe("defaults to min(4GB, max(64MB, 25% of free space))"),
      ParameterSpec::string("target_path").describe("directory on the device under test"),
      ParameterSpec::integer("duration_ms", 1, 3'600'000, 1000),
      ParameterSpec::enumeration("direct_io", {"true", "false"}, "true"),
      ParameterSpec::integer("ops", 1, INT64_MAX)
          .describe("fixed operation count per worker instead of duration_ms"),
      ParameterSpec::enumeration("engine", {"auto", "kernel_aio", "thread_pool"}, "auto"),
      ParameterSpec::integer("seed", 0, INT64_MAX, 42),
  });
  d.metrics = {
      {"throughput", MetricClass::kRate, "bytes_done", "MiB/s", 1.0 / (1 << 20),
       "bytes transferred per second, binary megabytes"},
      {"avg_latency", MetricClass::kDistribution, "latency", "ns", 1.0,
       "per-operation completion minus submit"},
      {"p99", MetricClass::kDistribution, "latency", "ns", 1.0, "per-operation latency"},
  };
  d.factory = [] { return std::make_unique<StorageTask>(); };
  return d;
}

}  // namespace bento::tasks
