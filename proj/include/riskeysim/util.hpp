#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace riskeysim {

// Raised for malformed configs / presets; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Runs fn(begin, end) over [0, n) split into fixed-size blocks.
// Block boundaries depend only on n, never on the thread count, so any
// value written per index is identical for 1 and N threads.
void parallel_for_blocks(std::int64_t n, int n_threads, std::int64_t block,
                         const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace riskeysim
