#ifndef GRANCAST_TIMESERIES_HPP
#define GRANCAST_TIMESERIES_HPP

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace grancast {

/// Calendar month, the only time resolution the toolkit understands.
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    friend auto operator<=>(const YearMonth&, const YearMonth&) = default;

    YearMonth next() const {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }

    YearMonth prev() const {
        return month == 1 ? YearMonth{year - 1, 12} : YearMonth{year, month - 1};
    }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
        return buf;
    }

    /// Parses "YYYY-MM"; throws std::invalid_argument otherwise.
    static YearMonth parse(std::string_view text) {
        const auto fail = [&] {
            throw std::invalid_argument("expected YYYY-MM timestamp, got '" + std::string(text) + "'");
        };
        if (text.size() != 7 || text[4] != '-') fail();
        for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u})
            if (text[i] < '0' || text[i] > '9') fail();
        YearMonth ym;
        ym.year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
        ym.month = (text[5] - '0') * 10 + (text[6] - '0');
        if (ym.month < 1 || ym.month > 12) fail();
        return ym;
    }
};

struct TimePoint {
    YearMonth when;
    double value = 0.0;
};

/// Ordered monthly observations. Construction validates that timestamps are
/// strictly increasing with no month gaps and all values are finite.
class TimeSeries {
public:
    static TimeSeries from_points(std::vector<TimePoint> pts) {
        if (pts.empty()) throw std::invalid_argument("time series must contain at least one point");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!std::isfinite(pts[i].value))
                throw std::invalid_argument("non-finite value at " + pts[i].when.str());
            if (i > 0 && pts[i].when != pts[i - 1].when.next())
                throw std::invalid_argument("timestamps must be consecutive months: " +
                                            pts[i - 1].when.str() + " followed by " + pts[i].when.str());
        }
        TimeSeries s;
        s.points_ = std::move(pts);
        return s;
    }

    std::size_t size() const { return points_.size(); }
    const TimePoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<TimePoint>& points() const { return points_; }
    YearMonth first_month() const { return points_.front().when; }
    YearMonth last_month() const { return points_.back().when; }

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(points_.size());
        for (const auto& p : points_) v.push_back(p.value);
        return v;
    }

private:
    TimeSeries() = default;
    std::vector<TimePoint> points_;
};

namespace detail {

inline std::string format_value(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline bool parse_value(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

}  // namespace detail

/// Parses CSV content of the form `YYYY-MM,value` per line. An optional single
/// header line is detected by a non-numeric second field. Line numbers in
/// error messages are 1-based over the raw content.
inline TimeSeries parse_csv(std::string_view content, const std::string& source_name = "<string>") {
    std::vector<TimePoint> pts;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    const auto fail = [&](const std::string& msg) {
        throw std::runtime_error(source_name + ": line " + std::to_string(line_no) + ": " + msg);
    };
    while (pos <= content.size()) {
        if (pos == content.size()) break;
        std::size_t eol = content.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? content.substr(pos)
                                    : content.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? content.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (pos >= content.size()) break;  // trailing newline
            fail("empty line");
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos) fail("expected 'YYYY-MM,value'");
        const std::string_view stamp = line.substr(0, comma);
        const std::string_view field = line.substr(comma + 1);
        const auto is_stamp = [&] {
            try {
                YearMonth::parse(stamp);
                return true;
            } catch (const std::invalid_argument&) {
                return false;
            }
        };
        double value = 0.0;
        if (!detail::parse_value(field, value)) {
            // A lone header row has a non-numeric second field and no timestamp.
            if (line_no == 1 && pts.empty() && !is_stamp()) continue;
            fail("malformed value '" + std::string(field) + "'");
        }
        YearMonth ym;
        try {
            ym = YearMonth::parse(stamp);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        if (!std::isfinite(value)) fail("non-finite value");
        if (!pts.empty()) {
            if (ym <= pts.back().when) fail("timestamps must be strictly increasing");
            if (ym != pts.back().when.next()) fail("gap in monthly timestamps before " + ym.str());
        }
        pts.push_back({ym, value});
    }
    if (pts.empty()) throw std::runtime_error(source_name + ": no data rows");
    return TimeSeries::from_points(std::move(pts));
}

inline TimeSeries load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

/// Serializes with shortest round-trip formatting and LF line endings; no header.
inline std::string to_csv(const TimeSeries& series) {
    std::string out;
    for (const auto& p : series.points()) {
        out += p.when.str();
        out += ',';
        out += detail::format_value(p.value);
        out += '\n';
    }
    return out;
}

inline void write_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << to_csv(series);
}

struct SplitSpec {
    YearMonth train_end;  // inclusive
};

/// Splits into (train, test); train ends at `spec.train_end`. The test set is
/// required to be non-empty.
inline std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, SplitSpec spec) {
    if (spec.train_end < series.first_month() || spec.train_end >= series.last_month())
        throw std::invalid_argument("train_end " + spec.train_end.str() +
                                    " must lie strictly inside the series");
    std::vector<TimePoint> train, test;
    for (const auto& p : series.points())
        (p.when <= spec.train_end ? train : test).push_back(p);
    return {TimeSeries::from_points(std::move(train)), TimeSeries::from_points(std::move(test))};
}

/// Min-max scaling state. The default state is the identity transform.
struct ScalingState {
    double min = 0.0;
    double max = 1.0;

    bool degenerate() const { return max == min; }
};

inline ScalingState scale_fit(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("scale_fit: empty input");
    ScalingState st{values[0], values[0]};
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("scale_fit: non-finite value");
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    return st;
}

inline double scale_apply(const ScalingState& st, double x) {
    if (st.degenerate()) return 0.5;
    return (x - st.min) / (st.max - st.min);
}

inline double scale_invert(const ScalingState& st, double y) {
    return st.min + y * (st.max - st.min);
}

}  // namespace grancast

#endif
