#pragma once

#include <cstddef>

// Allocator-level memory accounting. The library overrides the global
// operator new/delete and keeps a live-byte counter (malloc_usable_size per
// block), so peak measurements see exactly what the process asked for,
// including short-lived spikes that RSS sampling would miss. RSS is exposed
// alongside as a cross-check.
namespace radar::memtrack {

// bytes currently live through operator new
size_t live_bytes();

// starts a measurement scope; scopes do not nest
void begin_scope();

// highest live_bytes observed since begin_scope(), minus the baseline
size_t scope_peak_delta();

// resident set size of the process, bytes (0 when /proc is unavailable)
size_t current_rss();

}  // namespace radar::memtrack
