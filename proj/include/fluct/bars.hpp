#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fluct {

struct Bar {
    int64_t timestamp_ms = 0;  // UTC epoch milliseconds, bar open time
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    double volume = 0;       // quote-currency value traded during the bar
    int64_t trade_count = 0;
};

// Column map for one CSV layout. Indices are 0-based positions in the row.
struct BarFormat {
    int timestamp = 0;
    int open = 1;
    int high = 2;
    int low = 3;
    int close = 4;
    int volume = 5;
    int trade_count = 6;
    bool timestamp_seconds = false;  // true: column holds epoch seconds
    bool has_header = true;

    // timestamp,open,high,low,close,volume,trade_count
    static BarFormat standard();
    // Binance kline export: quote volume in column 7, trade count in column 8.
    static BarFormat binance_kline();
};

struct BarSeries {
    std::string label;
    std::vector<Bar> bars;
    int64_t interval_ms = 0;                 // inferred bar spacing
    std::vector<int64_t> missing_timestamps; // grid points absent between first and last bar

    size_t size() const { return bars.size(); }
};

// Parses and validates a bar CSV. Rows are sorted by timestamp; duplicate
// timestamps, inverted high/low, or negative volume/count raise with the
// offending row.  Gaps are recorded, never filled.
BarSeries parse_bars(const std::string& path, const BarFormat& format = BarFormat::standard(),
                     const std::string& label = "");

// interval = smallest positive timestamp difference; gaps must be multiples of it
int64_t infer_interval_ms(const std::vector<Bar>& bars);

}  // namespace fluct
