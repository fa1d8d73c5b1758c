#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trendforest/errors.hpp"

namespace trendforest {

/// Calendar day. Ordering is the natural chronological one.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const;
    std::string to_string() const;  // ISO-8601, YYYY-MM-DD

    /// Strict ISO-8601 parse (exactly YYYY-MM-DD); nullopt on malformed or
    /// non-existent dates.
    static std::optional<Date> parse(std::string_view text);
};

/// One daily bar. Invariants: low <= open,close <= high; prices > 0; volume >= 0.
struct OhlcvBar {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    double volume = 0;

    bool operator==(const OhlcvBar&) const = default;
};

/// Daily price history, bars in strictly increasing date order.
struct OhlcvSeries {
    std::string symbol;
    std::vector<OhlcvBar> bars;

    std::size_t size() const { return bars.size(); }
    bool operator==(const OhlcvSeries&) const = default;
};

struct Violation {
    enum class Kind {
        NonPositivePrice,
        PriceOutOfRange,   // open/close outside [low, high] or high < low
        NegativeVolume,
        OutOfOrderDate,    // bar date not strictly after its predecessor
    };
    Kind kind;
    std::size_t bar_index;
    std::string detail;
};

std::string_view to_string(Violation::Kind kind);

/// Parses the documented CSV dialect: header `Date,Open,High,Low,Close,Volume`
/// (extra columns such as Adj Close are ignored), ISO dates, `.` decimals.
/// Bars are sorted by date after parsing. Throws MalformedRow / DuplicateDate /
/// EmptyInput.
OhlcvSeries parse_csv(std::istream& input, std::string symbol = {});
OhlcvSeries parse_csv(std::string_view text, std::string symbol = {});

/// Inverse of parse_csv on valid series (value round-trip, not byte identity
/// with arbitrary third-party exports).
std::string serialize(const OhlcvSeries& series);

/// Reports every bar/ordering invariant violation; empty means clean.
std::vector<Violation> validate(const OhlcvSeries& series);

/// Plain HTTP(S is out of scope) GET of `url`; a literal `{symbol}` in the URL
/// is substituted. Returns the raw body for parse_csv, never parses itself.
/// Throws NetworkError / NonSuccessStatus.
std::string fetch_remote(const std::string& url, const std::string& symbol);

}  // namespace trendforest
