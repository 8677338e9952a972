#include "sudler/double_double.hpp"

#include <array>
#include <cstdio>
#include <limits>

#include "sudler/errors.hpp"

namespace sudler::dd {

namespace {

// 1/k! for k = 0..40 as double-doubles.
const std::array<DoubleDouble, 41>& inv_fact() {
  static const std::array<DoubleDouble, 41> table = [] {
    std::array<DoubleDouble, 41> t{};
    t[0] = 1.0;
    for (int k = 1; k <= 40; ++k) t[k] = t[k - 1] / static_cast<double>(k);
    return t;
  }();
  return table;
}

// sin/cos of k*pi/64 for k = 0..32, built once by a long Taylor series.
struct PiTable {
  std::array<DoubleDouble, 33> sin_tab;
  std::array<DoubleDouble, 33> cos_tab;

  PiTable() {
    for (int k = 0; k <= 32; ++k) {
      DoubleDouble x = pi * (static_cast<double>(k) / 64.0);
      DoubleDouble x2 = x * x;
      DoubleDouble s = x, c = 1.0;
      DoubleDouble ts = x, tc = 1.0;
      for (int i = 1; i < 40; ++i) {
        ts = -ts * x2 / static_cast<double>((2 * i) * (2 * i + 1));
        tc = -tc * x2 / static_cast<double>((2 * i - 1) * (2 * i));
        s += ts;
        c += tc;
      }
      sin_tab[k] = s;
      cos_tab[k] = c;
    }
    sin_tab[0] = 0.0;
    cos_tab[0] = 1.0;
    cos_tab[32] = 0.0;
    sin_tab[32] = 1.0;
  }
};

const PiTable& pi_table() {
  static const PiTable table;
  return table;
}

// sin and cos of pi*z for |z| <= 1/128.
void sincos_small(const DoubleDouble& z, DoubleDouble& s, DoubleDouble& c) {
  DoubleDouble x = pi * z;
  DoubleDouble x2 = x * x;
  // Horner in x^2; x^15/15! < 2^-140 relative at |x| <= pi/128.
  const auto& f = inv_fact();
  DoubleDouble ps = f[13];
  for (int k = 11; k >= 1; k -= 2) ps = (k / 2 % 2 ? -f[k] : f[k]) + x2 * ps;
  s = x * ps;
  DoubleDouble pc = -f[14];
  for (int k = 12; k >= 0; k -= 2) pc = (k / 2 % 2 ? -f[k] : f[k]) + x2 * pc;
  c = pc;
}

}  // namespace

DoubleDouble from_u64(unsigned long long v) {
  double hi = static_cast<double>(v);
  // hi may have rounded up past v; the difference is exact in a signed 64-bit.
  long long diff;
  if (hi >= 18446744073709551616.0) {
    diff = static_cast<long long>(v - 18446744073709549568ull) - 2048;
  } else {
    diff = static_cast<long long>(v - static_cast<unsigned long long>(hi));
  }
  return dd_detail::quick_two_sum(hi, static_cast<double>(diff));
}

DoubleDouble from_i64(long long v) {
  if (v < 0) return -from_u64(static_cast<unsigned long long>(-(v + 1)) + 1ull);
  return from_u64(static_cast<unsigned long long>(v));
}

DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi < 0.0) throw DomainError("sqrt of a negative double-double");
  if (a.hi == 0.0) return 0.0;
  double x = std::sqrt(a.hi);
  DoubleDouble xx = dd_detail::two_prod(x, x);
  DoubleDouble r = a - xx;
  return dd_detail::quick_two_sum(x, r.hi / (2.0 * x));
}

DoubleDouble exp(const DoubleDouble& a) {
  if (a.hi > 709.0) return std::numeric_limits<double>::infinity();
  if (a.hi < -745.0) return 0.0;
  double k = std::nearbyint(a.hi / ln2.hi);
  DoubleDouble r = a - ln2 * k;
  r = ldexp(r, -10);
  // expm1(r) by Taylor to r^8; |r| < 3.4e-4.
  const auto& f = inv_fact();
  DoubleDouble s = f[8];
  for (int i = 7; i >= 1; --i) s = f[i] + r * s;
  s = s * r;
  for (int i = 0; i < 10; ++i) s = s * 2.0 + s * s;
  return ldexp(s + 1.0, static_cast<int>(k));
}

namespace {

// One Newton step on exp from the double logarithm.
DoubleDouble log_newton(const DoubleDouble& a) {
  DoubleDouble x = std::log(a.hi);
  return x + a * exp(-x) - 1.0;
}

// log(1 + j/128), j = 0..128.
const std::array<DoubleDouble, 129>& log_table() {
  static const std::array<DoubleDouble, 129> table = [] {
    std::array<DoubleDouble, 129> t{};
    for (int j = 0; j <= 128; ++j) t[j] = log_newton(1.0 + j / 128.0);
    t[0] = 0.0;
    return t;
  }();
  return table;
}

// 1/(2k+1) for the atanh series.
const std::array<DoubleDouble, 6>& odd_inverses() {
  static const std::array<DoubleDouble, 6> table = [] {
    std::array<DoubleDouble, 6> t{};
    for (int k = 0; k < 6; ++k) t[k] = DoubleDouble(1.0) / static_cast<double>(2 * k + 1);
    return t;
  }();
  return table;
}

}  // namespace

DoubleDouble log(const DoubleDouble& a) {
  if (!(a.hi > 0.0)) throw DomainError("log of a non-positive double-double");
  if (std::isinf(a.hi)) return a;
  // a = 2^e m with m in [1, 2), m = c (1 + small) with c = 1 + j/128, and
  // log(m/c) = 2 atanh((m - c)/(m + c)) with |u| <= 1/512.
  int e = std::ilogb(a.hi);
  DoubleDouble m = ldexp(a, -e);
  int j = static_cast<int>(std::nearbyint((m.hi - 1.0) * 128.0));
  if (j < 0) j = 0;
  if (j > 128) j = 128;
  double c = 1.0 + j / 128.0;
  DoubleDouble u = (m - c) / (m + c);
  DoubleDouble u2 = u * u;
  const auto& inv = odd_inverses();
  DoubleDouble series = inv[5];
  for (int k = 4; k >= 0; --k) series = inv[k] + u2 * series;
  return ln2 * static_cast<double>(e) + log_table()[j] + 2.0 * (u * series);
}

std::pair<DoubleDouble, DoubleDouble> sincos_pi_reduced(const DoubleDouble& y) {
  const PiTable& tab = pi_table();
  int k = static_cast<int>(std::nearbyint(y.hi * 64.0));
  if (k < 0) k = 0;
  if (k > 32) k = 32;
  DoubleDouble z = y - static_cast<double>(k) / 64.0;
  DoubleDouble sz, cz;
  sincos_small(z, sz, cz);
  if (k == 0) return {sz, cz};
  DoubleDouble s = tab.sin_tab[k] * cz + tab.cos_tab[k] * sz;
  DoubleDouble c = tab.cos_tab[k] * cz - tab.sin_tab[k] * sz;
  return {s, c};
}

DoubleDouble sin_pi_reduced(const DoubleDouble& y) { return sincos_pi_reduced(y).first; }

namespace {

// x - 2*round(x/2) in [-1, 1].
DoubleDouble reduce_mod2(const DoubleDouble& x) {
  double n = std::nearbyint(x.hi / 2.0);
  DoubleDouble r = x - 2.0 * n;
  // A second pass catches the case where lo pushed r just outside [-1, 1].
  if (r.hi > 1.0) r = r - 2.0;
  if (r.hi < -1.0) r = r + 2.0;
  return r;
}

}  // namespace

DoubleDouble sin_pi(const DoubleDouble& x) {
  DoubleDouble r = reduce_mod2(x);
  bool neg = r.hi < 0.0;
  if (neg) r = -r;
  if (r.hi > 0.5) r = 1.0 - r;
  DoubleDouble s = sin_pi_reduced(r);
  return neg ? -s : s;
}

DoubleDouble cos_pi(const DoubleDouble& x) {
  DoubleDouble r = abs(reduce_mod2(x));
  if (r.hi <= 0.5) return sincos_pi_reduced(r).second;
  return -sincos_pi_reduced(1.0 - r).second;
}

DoubleDouble cot_pi(const DoubleDouble& x) {
  double n = std::nearbyint(x.hi);
  DoubleDouble r = x - n;
  bool neg = r.hi < 0.0;
  if (neg) r = -r;
  if (r.hi == 0.0) throw DomainError("cot(pi x) at an integer x");
  auto [s, c] = sincos_pi_reduced(r);
  DoubleDouble v = c / s;
  return neg ? -v : v;
}

DoubleDouble sin(const DoubleDouble& x) { return sin_pi(x / pi); }
DoubleDouble cos(const DoubleDouble& x) { return cos_pi(x / pi); }
DoubleDouble cot(const DoubleDouble& x) { return cot_pi(x / pi); }

std::string to_string(const DoubleDouble& a, int digits) {
  if (digits < 1) digits = 1;
  if (digits > 34) digits = 34;
  if (std::isnan(a.hi)) return "nan";
  if (std::isinf(a.hi)) return a.hi > 0 ? "inf" : "-inf";
  std::string out;
  DoubleDouble v = a;
  if (v.hi < 0.0) {
    out.push_back('-');
    v = -v;
  }
  if (v.hi == 0.0) {
    out += "0";
    return out;
  }
  int e = static_cast<int>(std::floor(std::log10(v.hi)));
  // Scale into [1, 10) with exact powers of ten as far as they go.
  auto pow10 = [](int n) {
    DoubleDouble r = 1.0, b = 10.0;
    unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
    while (m) {
      if (m & 1u) r *= b;
      b *= b;
      m >>= 1;
    }
    return r;
  };
  DoubleDouble m = e >= 0 ? v / pow10(e) : v * pow10(-e);
  if (m.hi >= 10.0) {
    m = m / 10.0;
    ++e;
  } else if (m.hi < 1.0) {
    m = m * 10.0;
    --e;
  }
  std::string ds;
  for (int i = 0; i <= digits; ++i) {
    int d = static_cast<int>(std::floor(m.hi));
    // hi can sit exactly on an integer while lo is negative.
    if ((m - static_cast<double>(d)).hi < 0.0) --d;
    if (d < 0) d = 0;
    if (d > 9) d = 9;
    ds.push_back(static_cast<char>('0' + d));
    m = (m - static_cast<double>(d)) * 10.0;
  }
  // Round on the guard digit.
  bool up = ds.back() >= '5';
  ds.pop_back();
  if (up) {
    int i = digits - 1;
    while (i >= 0 && ds[i] == '9') ds[i--] = '0';
    if (i >= 0) {
      ++ds[i];
    } else {
      ds.insert(ds.begin(), '1');
      ds.pop_back();
      ++e;
    }
  }
  if (e >= -5 && e < digits) {
    if (e >= 0) {
      out += ds.substr(0, e + 1);
      std::string frac = ds.substr(e + 1);
      if (!frac.empty()) out += "." + frac;
    } else {
      out += "0." + std::string(-e - 1, '0') + ds;
    }
  } else {
    out += ds.substr(0, 1);
    if (digits > 1) out += "." + ds.substr(1);
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%+03d", e);
    out += buf;
  }
  return out;
}

}  // namespace sudler::dd
