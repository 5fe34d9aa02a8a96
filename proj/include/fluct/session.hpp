#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fluct/bars.hpp"

namespace fluct {

// Weekly trading calendar in UTC. A timestamp is in-session when it falls in
// some open interval and in no break. Minute-of-week is 0 at Monday 00:00.
//
// Spec file, one rule per line ('#' comments):
//   open SUN 22:00 - FRI 20:15
//   break daily 20:15 - 22:00
// An open rule with equal endpoints covers the whole week.
struct SessionSpec {
    struct Interval {
        int start_min = 0;  // minute of week, inclusive
        int end_min = 0;    // exclusive; start == end means full week; start > end wraps
    };
    struct DailyBreak {
        int start_min = 0;  // minute of day, inclusive
        int end_min = 0;    // exclusive
    };
    std::vector<Interval> open;
    std::vector<DailyBreak> breaks;

    bool contains(int64_t timestamp_ms) const;

    static SessionSpec parse_file(const std::string& path);
    static SessionSpec parse(const std::vector<std::string>& lines, const std::string& origin);
    static SessionSpec all_week();
};

struct AlignedPair {
    std::vector<int64_t> timestamps;
    std::vector<double> a_close;
    std::vector<double> b_close;
    double coverage_fraction = 0;  // kept / bars of a
};

// Intersects the two bar grids, keeping in-session timestamps only.
// Throws when the intersection is empty.
AlignedPair align_calendars(const BarSeries& a, const BarSeries& b, const SessionSpec& sessions);

// Log-returns of both legs over consecutive aligned timestamps.
void aligned_log_returns(const AlignedPair& pair, std::vector<double>& ra, std::vector<double>& rb);

}  // namespace fluct
