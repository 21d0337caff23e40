#include "tantra/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace tantra {

namespace {

using int128 = __int128;

constexpr std::int64_t kInt64Max = INT64_MAX;

std::int64_t pow10_i64(int n) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

std::int64_t checked_narrow(int128 v, const char* what) {
  if (v > int128(kInt64Max) || v < -int128(kInt64Max)) {
    fail(Err::InvalidDecimal, std::string("decimal overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Decimal::Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {
  if (scale < 0 || scale > kMaxScale) {
    fail(Err::InvalidDecimal, "scale " + std::to_string(scale) + " outside [0," +
                                  std::to_string(kMaxScale) + "]");
  }
  normalize();
}

void Decimal::normalize() {
  if (mantissa_ == 0) {
    scale_ = 0;
    return;
  }
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
}

Decimal Decimal::parse(std::string_view text) {
  if (text.empty()) fail(Err::InvalidDecimal, "empty decimal literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::int64_t mantissa = 0;
  int scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) fail(Err::InvalidDecimal, "second '.' in \"" + std::string(text) + "\"");
      if (!seen_digit) {
        fail(Err::InvalidDecimal, "no digits before '.' in \"" + std::string(text) + "\"");
      }
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') {
      fail(Err::InvalidDecimal, "unexpected character '" + std::string(1, c) + "' in \"" +
                                    std::string(text) + "\"");
    }
    seen_digit = true;
    if (mantissa > (kInt64Max - 9) / 10) {
      fail(Err::InvalidDecimal, "too many digits in \"" + std::string(text) + "\"");
    }
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point) ++scale;
  }
  if (!seen_digit) fail(Err::InvalidDecimal, "no digits in \"" + std::string(text) + "\"");
  if (seen_point && scale == 0) {
    fail(Err::InvalidDecimal, "trailing '.' in \"" + std::string(text) + "\"");
  }
  if (scale > kMaxScale) {
    fail(Err::InvalidDecimal, "more than " + std::to_string(kMaxScale) +
                                  " fractional digits in \"" + std::string(text) + "\"");
  }
  return Decimal(negative ? -mantissa : mantissa, scale);
}

Decimal Decimal::from_double(double d) {
  if (!std::isfinite(d)) fail(Err::InvalidDecimal, "non-finite value");
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  if (ec != std::errc()) fail(Err::InvalidDecimal, "unrepresentable value");
  std::string_view repr(buf, static_cast<std::size_t>(p - buf));
  // Shortest repr may use exponent notation; expand through a fixed format.
  if (repr.find('e') != std::string_view::npos || repr.find('E') != std::string_view::npos) {
    int n = std::snprintf(buf, sizeof(buf), "%.12f", d);
    repr = std::string_view(buf, static_cast<std::size_t>(n));
  }
  // Clip to kMaxScale fractional digits with half-even rounding.
  auto dot = repr.find('.');
  if (dot != std::string_view::npos && repr.size() - dot - 1 > kMaxScale) {
    double scaled = d * static_cast<double>(pow10_i64(kMaxScale));
    double rounded = std::nearbyint(scaled);
    return Decimal(static_cast<std::int64_t>(rounded), kMaxScale);
  }
  return parse(repr);
}

std::string Decimal::to_string() const {
  std::int64_t m = mantissa_;
  bool negative = m < 0;
  std::string digits = std::to_string(negative ? -m : m);
  if (scale_ == 0) return (negative ? "-" : "") + digits;
  if (static_cast<int>(digits.size()) <= scale_) {
    digits.insert(0, static_cast<std::size_t>(scale_) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(scale_), ".");
  return (negative ? "-" : "") + digits;
}

double Decimal::to_double() const {
  return static_cast<double>(mantissa_) / static_cast<double>(pow10_i64(scale_));
}

Decimal Decimal::operator+(const Decimal& rhs) const {
  int scale = std::max(scale_, rhs.scale_);
  int128 a = int128(mantissa_) * pow10_i64(scale - scale_);
  int128 b = int128(rhs.mantissa_) * pow10_i64(scale - rhs.scale_);
  return Decimal(checked_narrow(a + b, "addition"), scale);
}

Decimal Decimal::operator-(const Decimal& rhs) const { return *this + (-rhs); }

Decimal Decimal::operator*(const Decimal& rhs) const {
  int128 m = int128(mantissa_) * int128(rhs.mantissa_);
  int scale = scale_ + rhs.scale_;
  while (scale > kMaxScale && m % 10 == 0) {
    m /= 10;
    --scale;
  }
  if (scale > kMaxScale) fail(Err::InvalidDecimal, "product needs more than 12 fractional digits");
  return Decimal(checked_narrow(m, "multiplication"), scale);
}

std::strong_ordering Decimal::operator<=>(const Decimal& rhs) const {
  int scale = std::max(scale_, rhs.scale_);
  int128 a = int128(mantissa_) * pow10_i64(scale - scale_);
  int128 b = int128(rhs.mantissa_) * pow10_i64(scale - rhs.scale_);
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Date::valid(int y, int m, int d) {
  if (y < 1 || y > 9999 || m < 1 || m > 12 || d < 1) return false;
  static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days[m - 1];
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && leap) max_day = 29;
  return d <= max_day;
}

Date Date::parse(std::string_view text) {
  auto bad = [&]() -> Date {
    fail(Err::InvalidDate, "expected YYYY-MM-DD, got \"" + std::string(text) + "\"");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return bad();
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (text[i] < '0' || text[i] > '9') return bad();
  }
  auto num = [&](std::size_t off, std::size_t len) {
    int v = 0;
    for (std::size_t i = off; i < off + len; ++i) v = v * 10 + (text[i] - '0');
    return v;
  };
  int y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!valid(y, m, d)) {
    fail(Err::InvalidDate, "no such calendar date: \"" + std::string(text) + "\"");
  }
  return Date{y, m, d};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string attr_to_display(const AttrValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return x.to_string();
        }
      },
      v);
}

Decimal ratio_to_decimal(__int128 num, __int128 den, int scale) {
  if (den <= 0) fail(Err::InvalidArgument, "ratio denominator must be positive");
  if (num < 0) fail(Err::InvalidArgument, "ratio numerator must be non-negative");
  if (scale < 0 || scale > Decimal::kMaxScale) {
    fail(Err::InvalidDecimal, "ratio scale " + std::to_string(scale) + " outside [0," +
                                  std::to_string(Decimal::kMaxScale) + "]");
  }
  int128 mantissa = num / den;
  int128 rem = num % den;
  for (int i = 0; i < scale; ++i) {
    rem *= 10;
    mantissa = mantissa * 10 + rem / den;
    rem %= den;
  }
  int128 twice = rem * 2;
  if (twice > den || (twice == den && mantissa % 2 != 0)) ++mantissa;
  return Decimal(checked_narrow(mantissa, "ratio_to_decimal"), scale);
}

std::partial_ordering attr_compare(const AttrValue& a, const AttrValue& b) {
  // Integer/decimal cross-compare.
  auto as_decimal = [](const AttrValue& v) -> const Decimal* {
    return std::get_if<Decimal>(&v);
  };
  auto as_int = [](const AttrValue& v) -> const std::int64_t* {
    return std::get_if<std::int64_t>(&v);
  };
  if ((as_decimal(a) || as_int(a)) && (as_decimal(b) || as_int(b))) {
    Decimal da = as_decimal(a) ? *as_decimal(a) : Decimal(*as_int(a));
    Decimal db = as_decimal(b) ? *as_decimal(b) : Decimal(*as_int(b));
    auto c = da <=> db;
    if (c == std::strong_ordering::less) return std::partial_ordering::less;
    if (c == std::strong_ordering::greater) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  if (a.index() != b.index()) return std::partial_ordering::unordered;
  return std::visit(
      [&b](const auto& x) -> std::partial_ordering {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if (x < y) return std::partial_ordering::less;
        if (y < x) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
      },
      a);
}

}  // namespace tantra
