#include "fluct/bars.hpp"

#include <algorithm>
#include <stdexcept>

#include "fluct/csv.hpp"

namespace fluct {

BarFormat BarFormat::standard() { return BarFormat{}; }

BarFormat BarFormat::binance_kline() {
    BarFormat f;
    f.timestamp = 0;
    f.open = 1;
    f.high = 2;
    f.low = 3;
    f.close = 4;
    f.volume = 7;       // quote asset volume
    f.trade_count = 8;
    f.has_header = false;
    return f;
}

int64_t infer_interval_ms(const std::vector<Bar>& bars) {
    int64_t best = 0;
    for (size_t i = 1; i < bars.size(); ++i) {
        int64_t d = bars[i].timestamp_ms - bars[i - 1].timestamp_ms;
        if (d > 0 && (best == 0 || d < best)) best = d;
    }
    return best;
}

BarSeries parse_bars(const std::string& path, const BarFormat& format, const std::string& label) {
    auto lines = read_lines(path);
    BarSeries series;
    series.label = label.empty() ? path : label;

    int max_col = std::max({format.timestamp, format.open, format.high, format.low,
                            format.close, format.volume, format.trade_count});
    size_t first_row = format.has_header ? 1 : 0;
    for (size_t li = first_row; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        auto fields = csv_split(lines[li]);
        std::string ctx = path + ":" + std::to_string(li + 1);
        if (static_cast<int>(fields.size()) <= max_col)
            throw std::runtime_error(ctx + ": expected at least " + std::to_string(max_col + 1) +
                                     " columns, got " + std::to_string(fields.size()));
        Bar b;
        b.timestamp_ms = parse_int(fields[format.timestamp], ctx);
        if (format.timestamp_seconds) b.timestamp_ms *= 1000;
        b.open = parse_double(fields[format.open], ctx);
        b.high = parse_double(fields[format.high], ctx);
        b.low = parse_double(fields[format.low], ctx);
        b.close = parse_double(fields[format.close], ctx);
        b.volume = parse_double(fields[format.volume], ctx);
        b.trade_count = parse_int(fields[format.trade_count], ctx);

        if (!(b.low <= std::min(b.open, b.close) && std::max(b.open, b.close) <= b.high))
            throw std::runtime_error(ctx + ": price bounds violated (low/open/close/high)");
        if (b.volume < 0) throw std::runtime_error(ctx + ": negative volume");
        if (b.trade_count < 0) throw std::runtime_error(ctx + ": negative trade count");
        series.bars.push_back(b);
    }

    std::stable_sort(series.bars.begin(), series.bars.end(),
                     [](const Bar& a, const Bar& b) { return a.timestamp_ms < b.timestamp_ms; });
    for (size_t i = 1; i < series.bars.size(); ++i)
        if (series.bars[i].timestamp_ms == series.bars[i - 1].timestamp_ms)
            throw std::runtime_error(path + ": duplicate timestamp " +
                                     std::to_string(series.bars[i].timestamp_ms));
    // No analysis can use a series whose interval cannot be inferred.
    if (series.bars.size() < 2)
        throw std::runtime_error(path + ": fewer than two bars");

    series.interval_ms = infer_interval_ms(series.bars);
    if (series.interval_ms > 0) {
        for (size_t i = 1; i < series.bars.size(); ++i) {
            int64_t gap = series.bars[i].timestamp_ms - series.bars[i - 1].timestamp_ms;
            if (gap % series.interval_ms != 0)
                throw std::runtime_error(path + ": timestamp " +
                                         std::to_string(series.bars[i].timestamp_ms) +
                                         " off the " + std::to_string(series.interval_ms) +
                                         " ms grid");
            for (int64_t t = series.bars[i - 1].timestamp_ms + series.interval_ms;
                 t < series.bars[i].timestamp_ms; t += series.interval_ms)
                series.missing_timestamps.push_back(t);
        }
    }
    return series;
}

}  // namespace fluct
