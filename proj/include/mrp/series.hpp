#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrp/error.hpp"

namespace mrp {

using Date = std::chrono::year_month_day;

enum class Frequency { daily, monthly };

constexpr int periods_per_year(Frequency f) noexcept
{
    return f == Frequency::daily ? 252 : 12;
}

inline const char* frequency_name(Frequency f) noexcept
{
    return f == Frequency::daily ? "daily" : "monthly";
}

inline std::optional<Frequency> parse_frequency(std::string_view text)
{
    if (text == "daily" || text == "d") return Frequency::daily;
    if (text == "monthly" || text == "m") return Frequency::monthly;
    return std::nullopt;
}

/// Number of observations in a calendar horizon, e.g. 2 years of daily data = 504.
inline std::size_t years_to_periods(double years, Frequency f)
{
    if (!(years > 0.0) || !std::isfinite(years))
        throw Error(Errc::invalid_argument, "horizon in years must be positive");
    return static_cast<std::size_t>(std::llround(years * periods_per_year(f)));
}

// ---------------------------------------------------------------------------
// Dates

/// Parses YYYY-MM-DD. Returns nullopt on anything else, including invalid days.
inline std::optional<Date> parse_iso_date(std::string_view text)
{
    auto field = [&](std::size_t pos, std::size_t len, int& out) {
        if (pos + len > text.size()) return false;
        const char* first = text.data() + pos;
        const char* last = first + len;
        auto [ptr, ec] = std::from_chars(first, last, out);
        return ec == std::errc{} && ptr == last;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline std::string format_iso_date(const Date& date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

/// MM/DD/YY, the layout of the summary report tables.
inline std::string format_short_date(const Date& date)
{
    char buf[16];
    const int yy = ((static_cast<int>(date.year()) % 100) + 100) % 100;
    std::snprintf(buf, sizeof buf, "%02u/%02u/%02d", static_cast<unsigned>(date.month()),
                  static_cast<unsigned>(date.day()), yy);
    return buf;
}

// ---------------------------------------------------------------------------

struct Observation {
    Date date;
    double ret;
};

/// Dated periodic returns for one strategy. Returns are decimal fractions per
/// period and are taken to be excess returns already.
///
/// Invariants (checked on construction): dates strictly increasing, every
/// return finite.
class ReturnSeries {
public:
    ReturnSeries() = default;

    ReturnSeries(std::string label, Frequency frequency, std::vector<Date> dates,
                 std::vector<double> returns)
        : label_(std::move(label)), frequency_(frequency), dates_(std::move(dates)),
          returns_(std::move(returns))
    {
        if (dates_.size() != returns_.size())
            throw Error(Errc::invalid_argument, "dates and returns differ in length");
        for (std::size_t i = 0; i < returns_.size(); ++i) {
            if (!std::isfinite(returns_[i]))
                throw Error(Errc::invalid_argument,
                            "non-finite return at " + format_iso_date(dates_[i]));
            if (i > 0 && !(std::chrono::sys_days{dates_[i - 1]} < std::chrono::sys_days{dates_[i]}))
                throw Error(Errc::date_order_error,
                            "dates not strictly increasing at " + format_iso_date(dates_[i]));
        }
    }

    /// Series without calendar information; dates are consecutive days from 2000-01-01.
    static ReturnSeries from_returns(std::vector<double> returns,
                                     Frequency frequency = Frequency::daily,
                                     std::string label = "series")
    {
        std::vector<Date> dates;
        dates.reserve(returns.size());
        const std::chrono::sys_days origin{Date{std::chrono::year{2000}, std::chrono::January,
                                                std::chrono::day{1}}};
        for (std::size_t i = 0; i < returns.size(); ++i)
            dates.emplace_back(origin + std::chrono::days{static_cast<long>(i)});
        return ReturnSeries(std::move(label), frequency, std::move(dates), std::move(returns));
    }

    const std::string& label() const noexcept { return label_; }
    Frequency frequency() const noexcept { return frequency_; }
    int periods_per_year() const noexcept { return mrp::periods_per_year(frequency_); }
    std::size_t size() const noexcept { return returns_.size(); }
    bool empty() const noexcept { return returns_.empty(); }

    std::span<const double> returns() const noexcept { return returns_; }
    std::span<const Date> dates() const noexcept { return dates_; }
    const Date& date(std::size_t i) const { return dates_.at(i); }
    double operator[](std::size_t i) const { return returns_[i]; }

    /// Observations [first, first + count).
    ReturnSeries slice(std::size_t first, std::size_t count) const
    {
        if (first > size() || count > size() - first)
            throw Error(Errc::invalid_argument, "slice out of range");
        return ReturnSeries(label_, frequency_,
                            std::vector<Date>(dates_.begin() + first, dates_.begin() + first + count),
                            std::vector<double>(returns_.begin() + first,
                                                returns_.begin() + first + count));
    }

    /// Trailing window of the last `count` observations.
    ReturnSeries tail(std::size_t count) const
    {
        if (count > size())
            throw Error(Errc::infeasible, "lookback of " + std::to_string(count) +
                                              " periods exceeds series length " +
                                              std::to_string(size()));
        return slice(size() - count, count);
    }

    /// Returns in reverse order. Dates keep their order so the invariant holds;
    /// date i of the result is date i of the input.
    ReturnSeries reversed() const
    {
        std::vector<double> r(returns_.rbegin(), returns_.rend());
        return ReturnSeries(label_, frequency_, dates_, std::move(r));
    }

    ReturnSeries scaled(double factor) const
    {
        std::vector<double> r(returns_);
        for (double& x : r) x *= factor;
        return ReturnSeries(label_, frequency_, dates_, std::move(r));
    }

    ReturnSeries with_label(std::string label) const
    {
        ReturnSeries copy = *this;
        copy.label_ = std::move(label);
        return copy;
    }

private:
    std::string label_;
    Frequency frequency_ = Frequency::daily;
    std::vector<Date> dates_;
    std::vector<double> returns_;
};

/// Strategy minus benchmark on the common dates, the input to an information ratio.
inline ReturnSeries active_returns(const ReturnSeries& strategy, const ReturnSeries& benchmark)
{
    using std::chrono::sys_days;
    std::vector<Date> dates;
    std::vector<double> diff;
    std::size_t i = 0, j = 0;
    while (i < strategy.size() && j < benchmark.size()) {
        const sys_days a{strategy.date(i)}, b{benchmark.date(j)};
        if (a < b) {
            ++i;
        } else if (b < a) {
            ++j;
        } else {
            dates.push_back(strategy.date(i));
            diff.push_back(strategy[i] - benchmark[j]);
            ++i;
            ++j;
        }
    }
    if (dates.empty())
        throw Error(Errc::date_mismatch, "strategy and benchmark share no dates");
    return ReturnSeries(strategy.label() + "-" + benchmark.label(), strategy.frequency(),
                        std::move(dates), std::move(diff));
}

} // namespace mrp
