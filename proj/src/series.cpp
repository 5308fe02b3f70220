#include "skynow/series.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "skynow/errors.hpp"

namespace skynow {

void IrradianceSeries::push(UtcSeconds t, double g, double dh, double dn, bool interp) {
    timestamp.push_back(t);
    ghi.push_back(g);
    dhi.push_back(dh);
    dni.push_back(dn);
    interpolated.push_back(interp ? 1 : 0);
}

void IrradianceSeries::check_monotone() const {
    for (std::size_t i = 1; i < timestamp.size(); ++i) {
        if (timestamp[i] <= timestamp[i - 1])
            throw DataError("series timestamps not strictly increasing near " +
                            format_iso8601(timestamp[i]));
    }
}

std::size_t IrradianceSeries::index_at(UtcSeconds t) const {
    auto it = std::lower_bound(timestamp.begin(), timestamp.end(), t);
    if (it == timestamp.end() || *it != t) return npos;
    return static_cast<std::size_t>(it - timestamp.begin());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& f) {
    if (f.empty()) return kMissing;
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (end == f.c_str()) throw DataError("bad numeric field: '" + f + "'");
    return v;
}

}  // namespace

IrradianceSeries read_series_csv(const std::string& path, const Site& site) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open series csv: " + path);
    IrradianceSeries s;
    s.site = site;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("timestamp", 0) == 0) continue;  // header row
        }
        const auto f = split_csv_line(line);
        if (f.size() < 2) throw DataError("short csv row in " + path + ": " + line);
        s.push(parse_iso8601(f[0]), parse_field(f[1]),
               f.size() > 2 ? parse_field(f[2]) : kMissing,
               f.size() > 3 ? parse_field(f[3]) : kMissing,
               f.size() > 5 && f[5] == "1");
    }
    s.check_monotone();
    if (s.size() >= 2) {
        // Native interval: the most common spacing.
        std::map<std::int64_t, std::size_t> freq;
        for (std::size_t i = 1; i < s.size(); ++i)
            ++freq[s.timestamp[i] - s.timestamp[i - 1]];
        std::int64_t best = 60;
        std::size_t best_n = 0;
        for (const auto& [dt, n] : freq)
            if (n > best_n) { best = dt; best_n = n; }
        s.native_interval_s = static_cast<int>(best);
    }
    return s;
}

MultiSensorSeries read_multisensor_csv(const std::string& path, const Site& site) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open series csv: " + path);
    MultiSensorSeries ms;
    ms.site = site;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("timestamp", 0) == 0) continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() < 2) throw DataError("short csv row in " + path + ": " + line);
        IrradianceSample r;
        r.timestamp = parse_iso8601(f[0]);
        r.ghi = parse_field(f[1]);
        r.dhi = f.size() > 2 ? parse_field(f[2]) : kMissing;
        r.dni = f.size() > 3 ? parse_field(f[3]) : kMissing;
        r.source = f.size() > 4 ? f[4] : "";
        ms.rows.push_back(std::move(r));
    }
    std::stable_sort(ms.rows.begin(), ms.rows.end(),
                     [](const IrradianceSample& a, const IrradianceSample& b) {
                         return a.timestamp != b.timestamp ? a.timestamp < b.timestamp
                                                           : a.source < b.source;
                     });
    return ms;
}

void write_series_csv(const std::string& path, const IrradianceSeries& s) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write series csv: " + path);
    out << "timestamp_utc,ghi,dhi,dni,sensor_id,interpolated,rejected_reason\n";
    char buf[64];
    auto num = [&buf](double v) -> std::string {
        if (is_missing(v)) return "";
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return buf;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_iso8601(s.timestamp[i]) << ',' << num(s.ghi[i]) << ','
            << num(s.dhi[i]) << ',' << num(s.dni[i]) << ",,"
            << (s.interpolated[i] ? '1' : '0') << ",\n";
    }
}

}  // namespace skynow
