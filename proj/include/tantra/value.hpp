#pragma once

#include <cstdint>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "tantra/errors.hpp"

namespace tantra {

// Exact decimal scalar: value = mantissa * 10^-scale, scale in [0, 12].
// Always normalized (no trailing zero digits in the fraction; zero has
// scale 0), so equal values have equal representations and to_string()
// is canonical. Addition, subtraction and comparison are exact; there is
// no floating-point rounding anywhere on this path.
class Decimal {
 public:
  static constexpr int kMaxScale = 12;

  Decimal() = default;
  explicit Decimal(std::int64_t whole) : mantissa_(whole) {}
  Decimal(std::int64_t mantissa, int scale);

  // Accepts [+-]digits[.digits], up to kMaxScale fractional digits.
  static Decimal parse(std::string_view text);
  // Goes through the shortest round-trip decimal representation of d,
  // rounding half-even past kMaxScale digits. Binding/report use only.
  static Decimal from_double(double d);

  std::int64_t mantissa() const { return mantissa_; }
  int scale() const { return scale_; }
  bool is_zero() const { return mantissa_ == 0; }
  bool is_negative() const { return mantissa_ < 0; }

  std::string to_string() const;
  double to_double() const;

  Decimal operator+(const Decimal& rhs) const;
  Decimal operator-(const Decimal& rhs) const;
  Decimal operator*(const Decimal& rhs) const;
  Decimal operator-() const { return Decimal(-mantissa_, scale_); }
  Decimal abs() const { return mantissa_ < 0 ? -*this : *this; }

  bool operator==(const Decimal& rhs) const {
    return mantissa_ == rhs.mantissa_ && scale_ == rhs.scale_;
  }
  std::strong_ordering operator<=>(const Decimal& rhs) const;

 private:
  void normalize();

  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

// Calendar date, ISO 8601 (YYYY-MM-DD) only.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static Date parse(std::string_view text);
  static bool valid(int y, int m, int d);
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
};

// The scalar attribute value universe: string, integer, decimal, boolean, date.
using AttrValue = std::variant<std::string, std::int64_t, Decimal, bool, Date>;
using AttrMap = std::map<std::string, AttrValue>;

std::string attr_to_display(const AttrValue& v);

// num/den rounded half-even to the given scale. num >= 0, den > 0; the
// intermediate arithmetic never leaves __int128, so the result is exact
// up to the final rounding step.
Decimal ratio_to_decimal(__int128 num, __int128 den, int scale);

// Numeric-aware comparison used by query predicates. Integer and decimal
// cross-compare by value; other type pairs only compare within their own
// alternative. Returns unordered for incomparable pairs.
std::partial_ordering attr_compare(const AttrValue& a, const AttrValue& b);

}  // namespace tantra
