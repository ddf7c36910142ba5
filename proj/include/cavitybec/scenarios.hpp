#pragma once

// Figure reproductions and solver reports built from a resolved RunConfig.

#include "cavitybec/config.hpp"
#include "cavitybec/output.hpp"
#include "cavitybec/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace cavitybec {

/// f(0), ..., f(n-1) computed on worker threads; results keep index order.
/// The first exception thrown by any call is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& f, unsigned threads = 0) {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Scenario implied by the ordering of the edge lengths. Throws
/// ValidationError for orderings no scenario covers (L1 > L2 and so on).
Scenario infer_scenario(const CavityGeometry& g);

/// Temperatures between lo and hi inclusive.
std::vector<double> sweep_grid(double lo, double hi, int points, SweepScale scale);

/// Reference value of the three-dimensional critical temperature for the
/// fig4 presets.
std::optional<double> reference_tc(const std::string& preset);

Table run_fig1(const RunConfig& c);
Table run_fig2(const RunConfig& c);
Table run_fig3(const RunConfig& c);
Table run_fig4(const RunConfig& c);
Table run_tc(const RunConfig& c);
Table run_count(const RunConfig& c);
Table run_classify(const RunConfig& c);

/// Dispatch on c.subcommand.
Table run(const RunConfig& c);

}  // namespace cavitybec
