#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace expanders {

using mult_t = std::uint64_t;
using vid_t = std::uint32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exit-code classes used by the CLI: 1 verification failure, 2 usage or
// malformed input, 3 resource limits (overflow, caps, non-convergence).
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int code) : std::runtime_error(what), code_(code) {}
  int exit_code() const { return code_; }

 private:
  int code_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error(w, 2) {}
};
struct NonRegular : Error {
  explicit NonRegular(const std::string& w) : Error("NonRegular: " + w, 2) {}
};
struct DegreeMismatch : Error {
  explicit DegreeMismatch(const std::string& w) : Error("DegreeMismatch: " + w, 2) {}
};
struct HypothesisViolation : Error {
  explicit HypothesisViolation(const std::string& w) : Error("HypothesisViolation: " + w, 2) {}
};
struct ParseError : Error {
  ParseError(std::size_t line, const std::string& w)
      : Error("parse error at line " + std::to_string(line) + ": " + w, 2), line(line) {}
  std::size_t line;
};
struct Overflow : Error {
  explicit Overflow(const std::string& w) : Error("Overflow: " + w, 3) {}
};
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& w) : Error("CapExceeded: " + w, 3) {}
};
struct TooLarge : Error {
  explicit TooLarge(const std::string& w) : Error("TooLarge: " + w, 3) {}
};
struct NoConvergence : Error {
  NoConvergence(std::size_t iters, double res)
      : Error("NoConvergence after " + std::to_string(iters) + " matvecs, residual " +
                  std::to_string(res),
              3),
        iterations(iters),
        residual(res) {}
  std::size_t iterations;
  double residual;
};
struct PrecisionFailure : Error {
  explicit PrecisionFailure(const std::string& w) : Error("PrecisionFailure: " + w, 3) {}
};
struct NotFound : Error {
  explicit NotFound(const std::string& w) : Error("NotFound: " + w, 3) {}
};

inline mult_t checked_add(mult_t a, mult_t b, const char* ctx = "multiplicity") {
  mult_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow(ctx);
  return r;
}

inline mult_t checked_mul(mult_t a, mult_t b, const char* ctx = "multiplicity") {
  mult_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow(ctx);
  return r;
}

inline mult_t checked_pow(mult_t base, std::uint64_t e, const char* ctx = "power") {
  mult_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = checked_mul(r, base, ctx);
  return r;
}

// Worker count from EXPANDERS_THREADS, defaulting to hardware concurrency.
inline unsigned thread_count() {
  if (const char* s = std::getenv("EXPANDERS_THREADS")) {
    long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

// Static contiguous partition of [0, n); fn(begin, end) writes only to
// per-index outputs, so results do not depend on the worker count.
template <class Fn>
void parallel_blocks(std::size_t n, Fn&& fn, std::size_t min_block = 256) {
  unsigned T = thread_count();
  if (T <= 1 || n < 2 * min_block) {
    fn(std::size_t{0}, n);
    return;
  }
  T = static_cast<unsigned>(std::min<std::size_t>(T, n / min_block));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(T);
  pool.reserve(T);
  for (unsigned w = 0; w < T; ++w) {
    std::size_t b = n * w / T, e = n * (w + 1) / T;
    pool.emplace_back([&fn, &errs, w, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& ep : errs)
    if (ep) std::rethrow_exception(ep);
}

}  // namespace expanders
