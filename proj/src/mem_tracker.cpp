#include "radar/mem_tracker.hpp"

#include <malloc.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <new>

namespace {

std::atomic<size_t> g_live{0};
std::atomic<size_t> g_base{0};
std::atomic<size_t> g_peak{0};

inline void on_alloc(void* p) {
  if (!p) return;
  size_t sz = malloc_usable_size(p);
  size_t live = g_live.fetch_add(sz, std::memory_order_relaxed) + sz;
  size_t peak = g_peak.load(std::memory_order_relaxed);
  while (live > peak &&
         !g_peak.compare_exchange_weak(peak, live, std::memory_order_relaxed)) {
  }
}

inline void on_free(void* p) {
  if (!p) return;
  g_live.fetch_sub(malloc_usable_size(p), std::memory_order_relaxed);
}

void* alloc_or_throw(size_t n) {
  void* p = std::malloc(n ? n : 1);
  if (!p) throw std::bad_alloc();
  on_alloc(p);
  return p;
}

void* alloc_aligned(size_t n, size_t align) {
  void* p = nullptr;
  if (posix_memalign(&p, align, n ? n : align) != 0) return nullptr;
  on_alloc(p);
  return p;
}

}  // namespace

namespace radar::memtrack {

size_t live_bytes() { return g_live.load(std::memory_order_relaxed); }

void begin_scope() {
  size_t live = g_live.load(std::memory_order_relaxed);
  g_base.store(live, std::memory_order_relaxed);
  g_peak.store(live, std::memory_order_relaxed);
}

size_t scope_peak_delta() {
  size_t peak = g_peak.load(std::memory_order_relaxed);
  size_t base = g_base.load(std::memory_order_relaxed);
  return peak > base ? peak - base : 0;
}

size_t current_rss() {
  FILE* f = std::fopen("/proc/self/statm", "r");
  if (!f) return 0;
  long total = 0, resident = 0;
  int got = std::fscanf(f, "%ld %ld", &total, &resident);
  std::fclose(f);
  if (got != 2) return 0;
  return static_cast<size_t>(resident) * static_cast<size_t>(sysconf(_SC_PAGESIZE));
}

}  // namespace radar::memtrack

void* operator new(size_t n) { return alloc_or_throw(n); }
void* operator new[](size_t n) { return alloc_or_throw(n); }

void* operator new(size_t n, const std::nothrow_t&) noexcept {
  void* p = std::malloc(n ? n : 1);
  on_alloc(p);
  return p;
}
void* operator new[](size_t n, const std::nothrow_t&) noexcept {
  void* p = std::malloc(n ? n : 1);
  on_alloc(p);
  return p;
}

void* operator new(size_t n, std::align_val_t align) {
  void* p = alloc_aligned(n, static_cast<size_t>(align));
  if (!p) throw std::bad_alloc();
  return p;
}
void* operator new[](size_t n, std::align_val_t align) {
  void* p = alloc_aligned(n, static_cast<size_t>(align));
  if (!p) throw std::bad_alloc();
  return p;
}
void* operator new(size_t n, std::align_val_t align, const std::nothrow_t&) noexcept {
  return alloc_aligned(n, static_cast<size_t>(align));
}
void* operator new[](size_t n, std::align_val_t align, const std::nothrow_t&) noexcept {
  return alloc_aligned(n, static_cast<size_t>(align));
}

void operator delete(void* p) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete[](void* p) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete(void* p, size_t) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete[](void* p, size_t) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete(void* p, const std::nothrow_t&) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete[](void* p, const std::nothrow_t&) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete(void* p, std::align_val_t) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete[](void* p, std::align_val_t) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete(void* p, size_t, std::align_val_t) noexcept {
  on_free(p);
  std::free(p);
}
void operator delete[](void* p, size_t, std::align_val_t) noexcept {
  on_free(p);
  std::free(p);
}
