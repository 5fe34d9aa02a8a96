#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluct/bars.hpp"

namespace fluct {

struct ReturnSeries {
    std::string label;
    int64_t dt_ms = 0;                  // sampling interval of the return grid
    std::vector<int64_t> timestamps;    // grid point closing each return interval
    std::vector<double> values;         // log-returns
    std::vector<double> normalized;     // filled by normalize()
    double mean = 0;
    double stdev = 0;                   // population convention (divide by N)
    size_t dropped_gap_returns = 0;

    size_t size() const { return values.size(); }
};

struct VolumeSeries {
    std::string label;
    int64_t dt_ms = 0;
    std::vector<int64_t> timestamps;
    std::vector<double> values;         // summed bar volume per grid interval
    std::vector<double> normalized;
    double mean = 0;
    double stdev = 0;

    size_t size() const { return values.size(); }
};

enum class LiquidityGroup { I, II, III };

struct AssetStats {
    std::string label;
    double mean_intertrade_time_s = 0;  // span seconds / total trades
    double zero_return_fraction = 0;
    double mean_volume_per_min = 0;
    std::optional<double> capitalization;
    LiquidityGroup group = LiquidityGroup::III;
};

const char* group_name(LiquidityGroup g);

// Log-returns of closes on the dt grid anchored at the first bar timestamp.
// dt_ms must be a positive multiple of the bar interval. A return whose
// interval touches a missing bar (endpoint or interior) is dropped and counted.
ReturnSeries log_returns(const BarSeries& bars, int64_t dt_ms);

// Bar volumes summed over the same half-open grid intervals (t_{k-1}, t_k]
// that the returns span, so returns and volumes pair index by index.
VolumeSeries aggregate_volume(const BarSeries& bars, int64_t dt_ms);

// Fills normalized = (x - mean) / stdev with the population stdev.
// Throws on stdev == 0.
void normalize(ReturnSeries& series);
void normalize(VolumeSeries& series);

AssetStats asset_stats(const BarSeries& bars, const ReturnSeries& returns,
                       std::optional<double> capitalization = std::nullopt);

// Prefix sums of the return values.
std::vector<double> cumulative_returns(const ReturnSeries& returns);

}  // namespace fluct
