#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "malle/series.hpp"

namespace malle {

struct fit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerFit {
    double a = 0;    // exponent
    double c = 0;    // constant
    double rss = 0;  // residual sum of squares in log space
};

struct PowerLogFit {
    double a = 0;
    double beta = 0;  // exponent of log(x)
    double c = 0;
    double rss = 0;
};

enum class Model { POWER, POWERLOG };

struct FitReport {
    PowerFit power;
    PowerLogFit powerlog;
    Model preferred_model = Model::POWER;
    std::vector<double> doubling_ratios;  // implied 2^a from consecutive checkpoints
    double a_hat = 0, beta_hat = 0, c_hat = 0;
};

namespace detail {

// (x_i, Z_i) pairs with Z_i > 0 and x_i >= min_x.
inline std::vector<std::pair<double, double>> positive_points(const CountSeries& s, u64 min_x) {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < s.size(); ++i)
        if (s.counts[i] > 0 && s.xs[i] >= min_x)
            pts.push_back({static_cast<double>(s.xs[i]), static_cast<double>(s.counts[i])});
    return pts;
}

}  // namespace detail

// Least squares on log Z = log c + a log x.
inline PowerFit fit_power(const CountSeries& s, u64 min_x = 0) {
    auto pts = detail::positive_points(s, min_x);
    if (pts.size() < 3) throw fit_error("fit_power: need >= 3 positive checkpoints");
    long double su = 0, sv = 0, suu = 0, suv = 0;
    for (auto [x, z] : pts) {
        long double u = std::log((long double)x), v = std::log((long double)z);
        su += u; sv += v; suu += u * u; suv += u * v;
    }
    long double n = static_cast<long double>(pts.size());
    long double det = n * suu - su * su;
    if (std::abs((double)det) < 1e-12) throw fit_error("fit_power: degenerate checkpoint grid");
    long double a = (n * suv - su * sv) / det;
    long double logc = (sv - a * su) / n;
    long double rss = 0;
    for (auto [x, z] : pts) {
        long double r = std::log((long double)z) - (logc + a * std::log((long double)x));
        rss += r * r;
    }
    return {static_cast<double>(a), static_cast<double>(std::exp(logc)), static_cast<double>(rss)};
}

// Least squares on log Z = log c + a log x + beta log log x.
// Checkpoints below 3 are rejected so log log x stays defined and positive.
inline PowerLogFit fit_power_log(const CountSeries& s, u64 min_x = 3) {
    if (min_x < 3) min_x = 3;
    auto pts = detail::positive_points(s, min_x);
    if (pts.size() < 4) throw fit_error("fit_power_log: need >= 4 positive checkpoints");
    // normal equations for regressors (1, log x, log log x)
    long double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    long double rhs[3] = {0, 0, 0};
    for (auto [x, z] : pts) {
        long double u = std::log((long double)x);
        long double w = std::log(u);
        long double v = std::log((long double)z);
        long double row[3] = {1.0L, u, w};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
            rhs[i] += row[i] * v;
        }
    }
    long double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    long double scale = m[0][0] * m[1][1] * m[2][2];
    if (scale == 0 || std::abs((double)(det / scale)) < 1e-13)
        throw fit_error("fit_power_log: regressors are collinear (checkpoint grid too narrow)");
    auto solve = [&](int k) {
        long double mm[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mm[i][j] = (j == k) ? rhs[i] : m[i][j];
        long double dk = mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) -
                         mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
                         mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]);
        return dk / det;
    };
    long double logc = solve(0), a = solve(1), beta = solve(2);
    long double rss = 0;
    for (auto [x, z] : pts) {
        long double u = std::log((long double)x);
        long double r = std::log((long double)z) - (logc + a * u + beta * std::log(u));
        rss += r * r;
    }
    return {static_cast<double>(a), static_cast<double>(beta),
            static_cast<double>(std::exp(logc)), static_cast<double>(rss)};
}

// Model preference: the log factor must cut the RSS by at least 20% and carry
// a clearly positive exponent, otherwise the plain power law wins.
inline constexpr double kPowerlogRssMargin = 0.8;
inline constexpr double kPowerlogMinBeta = 0.4;

// Runs both fits. If min_x = 0, the lowest decade of the grid is dropped
// (boundary effects).
inline FitReport compare_models(const CountSeries& s, u64 min_x = 0) {
    if (min_x == 0 && !s.xs.empty()) min_x = s.xs.front() * 10;
    FitReport r;
    r.power = fit_power(s, min_x);
    r.powerlog = fit_power_log(s, min_x);
    bool prefer_log = r.powerlog.rss <= kPowerlogRssMargin * r.power.rss &&
                      r.powerlog.beta >= kPowerlogMinBeta;
    r.preferred_model = prefer_log ? Model::POWERLOG : Model::POWER;
    if (prefer_log) {
        r.a_hat = r.powerlog.a; r.beta_hat = r.powerlog.beta; r.c_hat = r.powerlog.c;
    } else {
        r.a_hat = r.power.a; r.beta_hat = 0; r.c_hat = r.power.c;
    }
    auto pts = detail::positive_points(s, min_x);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double num = std::log(pts[i + 1].second / pts[i].second);
        double den = std::log(pts[i + 1].first / pts[i].first);
        r.doubling_ratios.push_back(std::exp2(num / den));  // 2^(local slope)
    }
    return r;
}

struct SlopeDiagnostic {
    double slope = 0;
    double r2 = 0;
};

// Regresses Z/x^a on ln x: a positive slope with high r^2 flags the log
// factor on top of x^a.
inline SlopeDiagnostic log_slope_diagnostic(const CountSeries& s, double a, u64 min_x = 0) {
    if (min_x == 0 && !s.xs.empty()) min_x = s.xs.front() * 10;
    auto pts = detail::positive_points(s, min_x);
    if (pts.size() < 3) throw fit_error("log_slope_diagnostic: need >= 3 positive checkpoints");
    long double su = 0, sv = 0, suu = 0, suv = 0, svv = 0;
    for (auto [x, z] : pts) {
        long double u = std::log((long double)x);
        long double v = (long double)z / std::pow((long double)x, (long double)a);
        su += u; sv += v; suu += u * u; suv += u * v; svv += v * v;
    }
    long double n = static_cast<long double>(pts.size());
    long double det = n * suu - su * su;
    if (std::abs((double)det) < 1e-12) throw fit_error("log_slope_diagnostic: degenerate grid");
    long double slope = (n * suv - su * sv) / det;
    long double intercept = (sv - slope * su) / n;
    long double ssres = 0, sstot = 0, vbar = sv / n;
    for (auto [x, z] : pts) {
        long double u = std::log((long double)x);
        long double v = (long double)z / std::pow((long double)x, (long double)a);
        ssres += (v - (intercept + slope * u)) * (v - (intercept + slope * u));
        sstot += (v - vbar) * (v - vbar);
    }
    double r2 = sstot > 0 ? static_cast<double>(1.0L - ssres / sstot) : 0.0;
    return {static_cast<double>(slope), r2};
}

inline std::string model_name(Model m) { return m == Model::POWER ? "POWER" : "POWERLOG"; }

}  // namespace malle
