#include "fluct/session.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fluct/csv.hpp"

namespace fluct {

namespace {

constexpr int kMinutesPerWeek = 7 * 24 * 60;

int day_index(const std::string& s) {
    static const char* names[] = {"MON", "TUE", "WED", "THU", "FRI", "SAT", "SUN"};
    for (int i = 0; i < 7; ++i)
        if (s == names[i]) return i;
    throw std::runtime_error("unknown day name '" + s + "'");
}

int parse_hhmm(const std::string& s, const std::string& origin) {
    auto pos = s.find(':');
    if (pos == std::string::npos) throw std::runtime_error(origin + ": expected HH:MM, got '" + s + "'");
    int h = static_cast<int>(parse_int(s.substr(0, pos), origin));
    int m = static_cast<int>(parse_int(s.substr(pos + 1), origin));
    if (h < 0 || h > 24 || m < 0 || m > 59) throw std::runtime_error(origin + ": time out of range '" + s + "'");
    return h * 60 + m;
}

int minute_of_week(int64_t timestamp_ms) {
    int64_t minutes = timestamp_ms / 60000;
    // epoch day 0 (1970-01-01) is a Thursday; shift so Monday = 0
    int64_t mow = (minutes + 3LL * 24 * 60) % kMinutesPerWeek;
    if (mow < 0) mow += kMinutesPerWeek;
    return static_cast<int>(mow);
}

bool in_weekly(const SessionSpec::Interval& iv, int mow) {
    if (iv.start_min == iv.end_min) return true;  // full week
    if (iv.start_min < iv.end_min) return mow >= iv.start_min && mow < iv.end_min;
    return mow >= iv.start_min || mow < iv.end_min;  // wraps past Sunday midnight
}

}  // namespace

bool SessionSpec::contains(int64_t timestamp_ms) const {
    int mow = minute_of_week(timestamp_ms);
    bool inside = false;
    for (const auto& iv : open)
        if (in_weekly(iv, mow)) { inside = true; break; }
    if (!inside) return false;
    int mod = mow % (24 * 60);
    for (const auto& br : breaks)
        if (mod >= br.start_min && mod < br.end_min) return false;
    return true;
}

SessionSpec SessionSpec::all_week() {
    SessionSpec s;
    s.open.push_back({0, 0});
    return s;
}

SessionSpec SessionSpec::parse_file(const std::string& path) {
    return parse(read_lines(path), path);
}

SessionSpec SessionSpec::parse(const std::vector<std::string>& lines, const std::string& origin) {
    SessionSpec spec;
    for (size_t li = 0; li < lines.size(); ++li) {
        std::string line = lines[li];
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        std::string ctx = origin + ":" + std::to_string(li + 1);
        if (word == "open") {
            std::string d1, t1, dash, d2, t2;
            if (!(ss >> d1 >> t1 >> dash >> d2 >> t2) || dash != "-")
                throw std::runtime_error(ctx + ": expected 'open DAY HH:MM - DAY HH:MM'");
            Interval iv;
            iv.start_min = day_index(d1) * 24 * 60 + parse_hhmm(t1, ctx);
            iv.end_min = day_index(d2) * 24 * 60 + parse_hhmm(t2, ctx);
            spec.open.push_back(iv);
        } else if (word == "break") {
            std::string daily, t1, dash, t2;
            if (!(ss >> daily >> t1 >> dash >> t2) || daily != "daily" || dash != "-")
                throw std::runtime_error(ctx + ": expected 'break daily HH:MM - HH:MM'");
            DailyBreak br;
            br.start_min = parse_hhmm(t1, ctx);
            br.end_min = parse_hhmm(t2, ctx);
            if (br.end_min <= br.start_min) throw std::runtime_error(ctx + ": break must not wrap midnight");
            spec.breaks.push_back(br);
        } else {
            throw std::runtime_error(ctx + ": unknown rule '" + word + "'");
        }
    }
    if (spec.open.empty()) throw std::runtime_error(origin + ": no open intervals");
    return spec;
}

AlignedPair align_calendars(const BarSeries& a, const BarSeries& b, const SessionSpec& sessions) {
    AlignedPair out;
    size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        int64_t ta = a.bars[ia].timestamp_ms;
        int64_t tb = b.bars[ib].timestamp_ms;
        if (ta < tb) { ++ia; continue; }
        if (tb < ta) { ++ib; continue; }
        if (sessions.contains(ta)) {
            out.timestamps.push_back(ta);
            out.a_close.push_back(a.bars[ia].close);
            out.b_close.push_back(b.bars[ib].close);
        }
        ++ia;
        ++ib;
    }
    if (out.timestamps.empty())
        throw std::runtime_error("alignment of " + a.label + " and " + b.label +
                                 " produced no common in-session timestamps");
    out.coverage_fraction = a.size() == 0 ? 0.0
                                          : static_cast<double>(out.timestamps.size()) /
                                                static_cast<double>(a.size());
    return out;
}

void aligned_log_returns(const AlignedPair& pair, std::vector<double>& ra, std::vector<double>& rb) {
    ra.clear();
    rb.clear();
    for (size_t i = 1; i < pair.timestamps.size(); ++i) {
        if (pair.a_close[i] <= 0 || pair.a_close[i - 1] <= 0 || pair.b_close[i] <= 0 ||
            pair.b_close[i - 1] <= 0)
            throw std::domain_error("non-positive close in aligned pair");
        ra.push_back(std::log(pair.a_close[i]) - std::log(pair.a_close[i - 1]));
        rb.push_back(std::log(pair.b_close[i]) - std::log(pair.b_close[i - 1]));
    }
}

}  // namespace fluct
