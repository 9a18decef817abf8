#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace egk {

using cplx = std::complex<double>;

inline double wrap_phase(double p) {
  constexpr double pi = std::numbers::pi;
  if (p > -pi && p <= pi) return p;
  p = std::remainder(p, 2 * pi);
  if (p <= -pi) p += 2 * pi;
  return p;
}

// Complex number as log|w| + i arg w. log_mod = -inf is zero.
struct LogComplex {
  double log_mod = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  LogComplex() = default;
  LogComplex(double lm, double ph) : log_mod(lm), phase(wrap_phase(ph)) {}

  static LogComplex zero() { return {}; }
  static LogComplex one() { return {0.0, 0.0}; }

  static LogComplex from_complex(cplx w) {
    if (w == cplx(0.0, 0.0)) return {};
    return {std::log(std::abs(w)), std::arg(w)};
  }
  static LogComplex from_real(double x) { return from_complex(cplx(x, 0.0)); }
  // e^{w} without evaluating it
  static LogComplex exp(cplx w) { return {w.real(), w.imag()}; }

  bool is_zero() const { return std::isinf(log_mod) && log_mod < 0; }

  cplx to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_mod), phase);
  }
  double modulus() const { return is_zero() ? 0.0 : std::exp(log_mod); }
  double real() const { return to_complex().real(); }

  LogComplex conj() const { return is_zero() ? *this : LogComplex(log_mod, -phase); }

  LogComplex& operator*=(const LogComplex& o) {
    if (is_zero() || o.is_zero()) return *this = LogComplex{};
    log_mod += o.log_mod;
    phase = wrap_phase(phase + o.phase);
    return *this;
  }
  LogComplex& operator/=(const LogComplex& o) {
    if (is_zero()) return *this;
    log_mod -= o.log_mod;
    phase = wrap_phase(phase - o.phase);
    return *this;
  }
  // Rescale both operands by the larger modulus, add, and restore.
  LogComplex& operator+=(const LogComplex& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const double m = std::max(log_mod, o.log_mod);
    cplx s = std::polar(std::exp(log_mod - m), phase) + std::polar(std::exp(o.log_mod - m), o.phase);
    LogComplex r = from_complex(s);
    if (!r.is_zero()) r.log_mod += m;
    return *this = r;
  }
  LogComplex operator-() const { return is_zero() ? *this : LogComplex(log_mod, phase + std::numbers::pi); }
  LogComplex& operator-=(const LogComplex& o) { return *this += -o; }

  LogComplex pow(double p) const {
    if (is_zero()) return p > 0 ? *this : LogComplex(std::numeric_limits<double>::infinity(), 0.0);
    return {p * log_mod, p * phase};
  }
  LogComplex sqrt() const { return pow(0.5); }
};

inline LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
inline LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }
inline LogComplex operator+(LogComplex a, const LogComplex& b) { return a += b; }
inline LogComplex operator-(LogComplex a, const LogComplex& b) { return a -= b; }

// Sum of many terms: keeps a running scale and only re-normalizes when needed.
class LogSum {
 public:
  void add(const LogComplex& t) {
    if (t.is_zero()) return;
    if (t.log_mod > scale_) {
      acc_ *= std::exp(scale_ - t.log_mod);
      scale_ = t.log_mod;
    }
    acc_ += std::polar(std::exp(t.log_mod - scale_), t.phase);
  }
  void add(cplx v, double log_scale) { add(LogComplex::from_complex(v) * LogComplex(log_scale, 0.0)); }
  LogComplex value() const {
    LogComplex r = LogComplex::from_complex(acc_);
    if (!r.is_zero()) r.log_mod += scale_;
    return r;
  }
  // Largest term magnitude seen, for cancellation diagnostics.
  double max_log_mod() const { return scale_; }

 private:
  cplx acc_{0.0, 0.0};
  double scale_ = -std::numeric_limits<double>::infinity();
};

}  // namespace egk
