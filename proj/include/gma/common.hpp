#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gma {

/// Raised when an iterative factorization fails to converge or a result is
/// numerically unusable. Everything else (shape mismatches, bad arguments,
/// malformed input) throws std::invalid_argument.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string &msg) {
    if (!cond)
        throw std::invalid_argument(msg);
}

inline std::string shape_str(std::size_t rows, std::size_t cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

// Per-thread count of data-matrix entries read by sketch application and the
// leverage-score core lookup. Solvers snapshot it around the stage that
// touches A, so reports can certify claims like "exactly s_c*s_r entries".
inline std::uint64_t &entry_touch_counter() {
    thread_local std::uint64_t count = 0;
    return count;
}

inline void reset_entry_touches() { entry_touch_counter() = 0; }
inline std::uint64_t entry_touches() { return entry_touch_counter(); }
inline void count_entry_touches(std::uint64_t n) { entry_touch_counter() += n; }

} // namespace gma
