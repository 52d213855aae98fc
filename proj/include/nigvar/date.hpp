// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "nigvar/error.hpp"

namespace nigvar {

/// Proleptic Gregorian calendar date, ISO-8601 text form YYYY-MM-DD.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;

  /// Days since 1970-01-01 (civil-from-days algorithm of H. Hinnant).
  std::int64_t serial() const noexcept {
    const int y = year - (month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const auto mp = static_cast<unsigned>(month + (month > 2 ? -3 : 9));
    const unsigned doy = (153 * mp + 2) / 5 + static_cast<unsigned>(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
  }

  static Date from_serial(std::int64_t z) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    const auto y = static_cast<int>(static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2 ? 1 : 0));
    return {y, static_cast<int>(m), static_cast<int>(d)};
  }

  /// 0 = Monday ... 6 = Sunday.
  int weekday() const noexcept {
    const std::int64_t s = serial();
    return static_cast<int>(((s % 7) + 7 + 3) % 7);
  }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  static Date parse(std::string_view text) {
    auto fail = [&] { return DataError("invalid ISO-8601 date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw fail();
    Date d;
    auto field = [&](std::size_t pos, std::size_t len, int& out) {
      const char* first = text.data() + pos;
      const auto [ptr, ec] = std::from_chars(first, first + len, out);
      if (ec != std::errc{} || ptr != first + len) throw fail();
    };
    field(0, 4, d.year);
    field(5, 2, d.month);
    field(8, 2, d.day);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) throw fail();
    if (from_serial(d.serial()) != d) throw fail();
    return d;
  }
};

}  // namespace nigvar
