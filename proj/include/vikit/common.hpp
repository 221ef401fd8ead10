#ifndef VIKIT_COMMON_HPP
#define VIKIT_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace vikit {

inline constexpr const char* kVersion = "0.1.0";

// A point in R^n. Plain vector keeps the library dependency free; all
// routines here are desk scale (n small, grids up to ~10^5 points).
using Point = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Raised by the expression parser; pos is a 1-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

inline void require_same_dim(const Point& u, const Point& v, const char* where) {
  if (u.size() != v.size())
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
}

// Summation is always left to right in index order so results are
// bit-for-bit reproducible across calls.
inline double dot(const Point& u, const Point& v) {
  require_same_dim(u, v, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

inline Point sub(const Point& u, const Point& v) {
  require_same_dim(u, v, "sub");
  Point r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - v[i];
  return r;
}

inline Point add(const Point& u, const Point& v) {
  require_same_dim(u, v, "add");
  Point r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] + v[i];
  return r;
}

inline Point scale(double c, const Point& u) {
  Point r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = c * u[i];
  return r;
}

inline double norm2(const Point& u) { return dot(u, u); }

inline double norm(const Point& u) { return std::sqrt(norm2(u)); }

inline double distance(const Point& u, const Point& v) { return norm(sub(u, v)); }

inline bool all_finite(const Point& u) {
  for (double x : u)
    if (!std::isfinite(x)) return false;
  return true;
}

// Deterministic RNG. We draw bits from mt19937_64 and map to doubles
// ourselves because std::uniform_real_distribution is implementation
// defined and would break cross-platform reproducibility of reports.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1], used where a zero draw would degenerate
  double unit_pos() { return 1.0 - unit(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Gaussian elimination with partial pivoting on an augmented n x (n+1)
// system stored row major. Returns false when a pivot falls below the
// singularity cutoff instead of dividing through the noise.
inline bool solve_linear(std::vector<double>& aug, int n, std::vector<double>& out) {
  const int cols = n + 1;
  double scale_max = 0.0;
  for (int i = 0; i < n * cols; ++i) scale_max = std::max(scale_max, std::fabs(aug[i]));
  const double cutoff = 1e-13 * std::max(scale_max, 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(aug[r * cols + col]) > std::fabs(aug[piv * cols + col])) piv = r;
    if (std::fabs(aug[piv * cols + col]) <= cutoff) return false;
    if (piv != col)
      for (int c = col; c < cols; ++c) std::swap(aug[piv * cols + c], aug[col * cols + c]);
    const double d = aug[col * cols + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = aug[r * cols + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < cols; ++c) aug[r * cols + c] -= f * aug[col * cols + c];
    }
  }
  out.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = aug[r * cols + n];
    for (int c = r + 1; c < n; ++c) s -= aug[r * cols + c] * out[c];
    out[r] = s / aug[r * cols + r];
  }
  return true;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view s) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace vikit

#endif
