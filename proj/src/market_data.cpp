#include "trendforest/market_data.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <sstream>

#include <httplib.h>

#include "trendforest/text.hpp"

namespace trendforest {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

bool Date::valid() const {
    return year >= 1 && month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
    Date date{static_cast<int>(*parse_int(y)), static_cast<int>(*parse_int(m)),
              static_cast<int>(*parse_int(d))};
    if (!date.valid()) return std::nullopt;
    return date;
}

std::string_view to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::NonPositivePrice: return "NonPositivePrice";
        case Violation::Kind::PriceOutOfRange: return "PriceOutOfRange";
        case Violation::Kind::NegativeVolume: return "NegativeVolume";
        case Violation::Kind::OutOfOrderDate: return "OutOfOrderDate";
    }
    return "?";
}

namespace {

// Checks one bar's internal invariants; returns an error message or empty.
std::string bar_problem(const OhlcvBar& b) {
    if (b.open <= 0 || b.high <= 0 || b.low <= 0 || b.close <= 0) return "non-positive price";
    if (b.volume < 0) return "negative volume";
    if (b.high < b.low) return "high < low";
    if (b.open < b.low || b.open > b.high) return "open outside [low,high]";
    if (b.close < b.low || b.close > b.high) return "close outside [low,high]";
    return {};
}

constexpr std::array<std::string_view, 6> kColumns = {"Date", "Open", "High",
                                                      "Low",  "Close", "Volume"};

}  // namespace

OhlcvSeries parse_csv(std::istream& input, std::string symbol) {
    std::string line;
    int line_no = 0;

    // Header: locate the six required columns by name, ignore the rest.
    std::array<int, 6> col{};
    col.fill(-1);
    if (!std::getline(input, line)) throw EmptyInput{};
    ++line_no;
    {
        auto fields = split(trim(line), ',');
        for (std::size_t i = 0; i < fields.size(); ++i) {
            auto name = trim(fields[i]);
            for (std::size_t c = 0; c < kColumns.size(); ++c)
                if (name == kColumns[c]) col[c] = static_cast<int>(i);
        }
        for (std::size_t c = 0; c < kColumns.size(); ++c)
            if (col[c] < 0)
                throw MalformedRow(line_no,
                                   "header is missing column '" + std::string(kColumns[c]) + "'");
    }

    OhlcvSeries series;
    series.symbol = std::move(symbol);
    while (std::getline(input, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty()) continue;
        auto fields = split(text, ',');
        auto field = [&](int c) -> std::string_view {
            if (col[c] >= static_cast<int>(fields.size()))
                throw MalformedRow(line_no, "missing field '" + std::string(kColumns[c]) + "'");
            return trim(fields[col[c]]);
        };

        auto date = Date::parse(field(0));
        if (!date) throw MalformedRow(line_no, "bad date '" + std::string(field(0)) + "'");
        OhlcvBar bar;
        bar.date = *date;
        double* slots[5] = {&bar.open, &bar.high, &bar.low, &bar.close, &bar.volume};
        for (int c = 1; c <= 5; ++c) {
            auto value = parse_double(field(c));
            if (!value)
                throw MalformedRow(line_no, "bad number '" + std::string(field(c)) + "' in '" +
                                                std::string(kColumns[c]) + "'");
            *slots[c - 1] = *value;
        }
        if (auto problem = bar_problem(bar); !problem.empty())
            throw MalformedRow(line_no, problem);
        series.bars.push_back(bar);
    }
    if (series.bars.empty()) throw EmptyInput{};

    std::stable_sort(series.bars.begin(), series.bars.end(),
                     [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.bars.size(); ++i)
        if (series.bars[i].date == series.bars[i - 1].date)
            throw DuplicateDate(series.bars[i].date.to_string());
    return series;
}

OhlcvSeries parse_csv(std::string_view text, std::string symbol) {
    std::istringstream stream{std::string(text)};
    return parse_csv(stream, std::move(symbol));
}

std::string serialize(const OhlcvSeries& series) {
    std::string out = "Date,Open,High,Low,Close,Volume\n";
    for (const auto& b : series.bars) {
        out += b.date.to_string();
        for (double v : {b.open, b.high, b.low, b.close, b.volume}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<Violation> validate(const OhlcvSeries& series) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < series.bars.size(); ++i) {
        const auto& b = series.bars[i];
        if (b.open <= 0 || b.high <= 0 || b.low <= 0 || b.close <= 0)
            out.push_back({Violation::Kind::NonPositivePrice, i, "price <= 0"});
        if (b.volume < 0) out.push_back({Violation::Kind::NegativeVolume, i, "volume < 0"});
        if (b.high < b.low || b.open < b.low || b.open > b.high || b.close < b.low ||
            b.close > b.high)
            out.push_back({Violation::Kind::PriceOutOfRange, i, "open/close outside [low,high]"});
        if (i > 0 && !(series.bars[i - 1].date < b.date))
            out.push_back({Violation::Kind::OutOfOrderDate, i,
                           "date " + b.date.to_string() + " not after predecessor"});
    }
    return out;
}

std::string fetch_remote(const std::string& url, const std::string& symbol) {
    std::string resolved = url;
    if (auto pos = resolved.find("{symbol}"); pos != std::string::npos)
        resolved.replace(pos, 8, symbol);

    auto scheme_end = resolved.find("://");
    if (scheme_end == std::string::npos) throw NetworkError("URL has no scheme: " + resolved);
    auto path_start = resolved.find('/', scheme_end + 3);
    std::string origin =
        path_start == std::string::npos ? resolved : resolved.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : resolved.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);
    auto res = client.Get(path);
    if (!res) throw NetworkError(httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) throw NonSuccessStatus(res->status);
    return res->body;
}

}  // namespace trendforest
