#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "malle/int_util.hpp"

namespace malle {

// Cumulative counting function sampled on a fixed checkpoint grid.
struct CountSeries {
    std::string label;
    std::vector<u64> xs;      // strictly increasing
    std::vector<u64> counts;  // nondecreasing

    size_t size() const { return xs.size(); }

    u64 at(u64 x) const {
        for (size_t i = 0; i < xs.size(); ++i)
            if (xs[i] == x) return counts[i];
        throw std::out_of_range("no checkpoint at x=" + std::to_string(x));
    }
};

// Powers of 10 from `lo` up to and including `hi` (lo itself must be a power
// of 10; the default grid runs from 10^2).
inline std::vector<u64> pow10_checkpoints(u64 hi, u64 lo = 100) {
    std::vector<u64> xs;
    for (u64 x = lo; x <= hi; x *= 10) {
        xs.push_back(x);
        if (x > hi / 10) break;
    }
    return xs;
}

// Builds a cumulative series from an unsorted list of values (one entry per
// counted object).
inline CountSeries make_series(std::string label, std::vector<u64> values,
                               const std::vector<u64>& checkpoints) {
    std::sort(values.begin(), values.end());
    CountSeries s;
    s.label = std::move(label);
    s.xs = checkpoints;
    s.counts.reserve(checkpoints.size());
    for (u64 x : checkpoints) {
        auto it = std::upper_bound(values.begin(), values.end(), x);
        s.counts.push_back(static_cast<u64>(it - values.begin()));
    }
    return s;
}

inline void write_counts_csv(std::ostream& os, const CountSeries& s) {
    os << "x,count\n";
    for (size_t i = 0; i < s.xs.size(); ++i) os << s.xs[i] << "," << s.counts[i] << "\n";
}

inline void write_counts_csv(const std::string& path, const CountSeries& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    write_counts_csv(f, s);
}

inline CountSeries read_counts_csv(std::istream& is, std::string label = "csv") {
    CountSeries s;
    s.label = std::move(label);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("x,", 0) == 0) continue;  // header
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad counts CSV line: " + line);
        s.xs.push_back(std::stoull(line.substr(0, comma)));
        s.counts.push_back(std::stoull(line.substr(comma + 1)));
    }
    for (size_t i = 1; i < s.xs.size(); ++i)
        if (s.xs[i] <= s.xs[i - 1]) throw std::runtime_error("counts CSV not increasing in x");
    return s;
}

inline CountSeries read_counts_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    return read_counts_csv(f, path);
}

}  // namespace malle
