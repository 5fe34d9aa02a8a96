#include "fluct/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluct {

const char* group_name(LiquidityGroup g) {
    switch (g) {
        case LiquidityGroup::I: return "I";
        case LiquidityGroup::II: return "II";
        case LiquidityGroup::III: return "III";
    }
    return "?";
}

namespace {

// index of bar at exactly ts, or -1
ptrdiff_t find_bar(const std::vector<Bar>& bars, int64_t ts) {
    auto it = std::lower_bound(bars.begin(), bars.end(), ts,
                               [](const Bar& b, int64_t t) { return b.timestamp_ms < t; });
    if (it == bars.end() || it->timestamp_ms != ts) return -1;
    return it - bars.begin();
}

bool has_missing_inside(const std::vector<int64_t>& missing, int64_t lo, int64_t hi) {
    auto it = std::lower_bound(missing.begin(), missing.end(), lo + 1);
    return it != missing.end() && *it < hi;
}

void check_dt(const BarSeries& bars, int64_t dt_ms) {
    if (bars.interval_ms <= 0) throw std::invalid_argument("bar series has no resolvable interval");
    if (dt_ms <= 0 || dt_ms % bars.interval_ms != 0)
        throw std::invalid_argument("dt must be a positive multiple of the bar interval");
}

void fill_moments(const std::vector<double>& v, double& mean, double& stdev) {
    mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    stdev = std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

ReturnSeries log_returns(const BarSeries& bars, int64_t dt_ms) {
    check_dt(bars, dt_ms);
    if (bars.size() < 2) throw std::invalid_argument("need at least 2 bars for returns");

    ReturnSeries out;
    out.label = bars.label;
    out.dt_ms = dt_ms;
    const int64_t t0 = bars.bars.front().timestamp_ms;
    const int64_t t_last = bars.bars.back().timestamp_ms;

    for (int64_t tk = t0 + dt_ms; tk <= t_last; tk += dt_ms) {
        int64_t tk_prev = tk - dt_ms;
        ptrdiff_t i0 = find_bar(bars.bars, tk_prev);
        ptrdiff_t i1 = find_bar(bars.bars, tk);
        if (i0 < 0 || i1 < 0 ||
            has_missing_inside(bars.missing_timestamps, tk_prev, tk)) {
            ++out.dropped_gap_returns;
            continue;
        }
        double q0 = bars.bars[i0].close;
        double q1 = bars.bars[i1].close;
        if (q0 <= 0 || q1 <= 0)
            throw std::domain_error(bars.label + ": non-positive close price");
        out.timestamps.push_back(tk);
        out.values.push_back(std::log(q1) - std::log(q0));
    }
    return out;
}

VolumeSeries aggregate_volume(const BarSeries& bars, int64_t dt_ms) {
    check_dt(bars, dt_ms);
    VolumeSeries out;
    out.label = bars.label;
    out.dt_ms = dt_ms;
    if (bars.bars.empty()) return out;
    const int64_t t0 = bars.bars.front().timestamp_ms;
    const int64_t t_last = bars.bars.back().timestamp_ms;

    size_t i = 0;
    while (i < bars.size() && bars.bars[i].timestamp_ms <= t0) ++i;  // first bar has no window
    for (int64_t tk = t0 + dt_ms; tk <= t_last; tk += dt_ms) {
        double sum = 0;
        while (i < bars.size() && bars.bars[i].timestamp_ms <= tk) {
            sum += bars.bars[i].volume;
            ++i;
        }
        // windows dropped from the return grid are dropped here too, keeping
        // returns and volumes paired index by index
        int64_t tk_prev = tk - dt_ms;
        if (find_bar(bars.bars, tk_prev) < 0 || find_bar(bars.bars, tk) < 0 ||
            has_missing_inside(bars.missing_timestamps, tk_prev, tk))
            continue;
        out.timestamps.push_back(tk);
        out.values.push_back(sum);
    }
    return out;
}

void normalize(ReturnSeries& series) {
    if (series.values.empty()) throw std::invalid_argument("normalize: empty series");
    fill_moments(series.values, series.mean, series.stdev);
    if (series.stdev == 0) throw std::runtime_error(series.label + ": degenerate series (stdev 0)");
    series.normalized.resize(series.values.size());
    for (size_t i = 0; i < series.values.size(); ++i)
        series.normalized[i] = (series.values[i] - series.mean) / series.stdev;
}

void normalize(VolumeSeries& series) {
    if (series.values.empty()) throw std::invalid_argument("normalize: empty series");
    for (double v : series.values)
        if (v < 0) throw std::invalid_argument(series.label + ": negative volume");
    fill_moments(series.values, series.mean, series.stdev);
    if (series.stdev == 0) throw std::runtime_error(series.label + ": degenerate series (stdev 0)");
    series.normalized.resize(series.values.size());
    for (size_t i = 0; i < series.values.size(); ++i)
        series.normalized[i] = (series.values[i] - series.mean) / series.stdev;
}

AssetStats asset_stats(const BarSeries& bars, const ReturnSeries& returns,
                       std::optional<double> capitalization) {
    if (bars.bars.empty()) throw std::invalid_argument("asset_stats: empty bar series");
    AssetStats st;
    st.label = bars.label;
    st.capitalization = capitalization;

    // each bar covers one interval, so a series of B bars spans B intervals
    int64_t span_ms = bars.bars.back().timestamp_ms - bars.bars.front().timestamp_ms +
                      bars.interval_ms;
    long long trades = 0;
    double volume = 0;
    for (const Bar& b : bars.bars) {
        trades += b.trade_count;
        volume += b.volume;
    }
    if (trades <= 0) throw std::runtime_error(bars.label + ": zero total trades, no intertrade time");
    st.mean_intertrade_time_s = (static_cast<double>(span_ms) / 1000.0) / static_cast<double>(trades);
    st.mean_volume_per_min = volume / (static_cast<double>(span_ms) / 60000.0);

    size_t zeros = 0;
    for (double r : returns.values)
        if (r == 0.0) ++zeros;
    st.zero_return_fraction =
        returns.values.empty() ? 0.0 : static_cast<double>(zeros) / static_cast<double>(returns.size());

    // ties go to the higher-delta-t group (half-open [1,2) convention)
    double dt = st.mean_intertrade_time_s;
    st.group = dt < 1.0 ? LiquidityGroup::I : (dt < 2.0 ? LiquidityGroup::II : LiquidityGroup::III);
    return st;
}

std::vector<double> cumulative_returns(const ReturnSeries& returns) {
    std::vector<double> out(returns.values.size());
    double acc = 0;
    for (size_t i = 0; i < returns.values.size(); ++i) {
        acc += returns.values[i];
        out[i] = acc;
    }
    return out;
}

}  // namespace fluct
