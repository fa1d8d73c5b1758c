#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trendforest/preprocess.hpp"

namespace trendforest {

inline constexpr int kNumFeatures = 6;

/// Column order of every feature matrix, model file and DOT label.
enum Feature : int { kRsi = 0, kStochK, kWilliamsR, kMacd, kProc, kObv };

/// Short names used in CSV headers, model files and DOT labels.
extern const std::array<std::string, kNumFeatures> kFeatureNames;
/// Long names used in trace output.
extern const std::array<std::string, kNumFeatures> kFeatureDisplayNames;

using FeatureVector = Eigen::Vector<double, kNumFeatures>;

/// How to treat a window whose high equals its low in %K / %R.
/// Midpoint keeps rows usable on near-constant stretches (50 / -50);
/// Strict raises FlatWindow.
enum class FlatWindowPolicy { Midpoint, Strict };

// Indicator streams are full-length vectors; entries before the first
// defined index are NaN.

/// Relative strength index over the trailing `period` one-day changes,
/// defined from index `period` on. Plain (unweighted) gain/loss averages.
/// Zero-loss windows map to 100, zero-gain to 0, fully flat to 50.
Eigen::VectorXd rsi(const Eigen::Ref<const Eigen::VectorXd>& closes, int period = 14);

/// Stochastic oscillator %K = 100*(C - L)/(H - L) over a trailing window of
/// `period` bars including the current one; defined from index period-1 on.
Eigen::VectorXd stochastic_k(const Eigen::Ref<const Eigen::VectorXd>& closes,
                             const Eigen::Ref<const Eigen::VectorXd>& highs,
                             const Eigen::Ref<const Eigen::VectorXd>& lows, int period = 14,
                             FlatWindowPolicy policy = FlatWindowPolicy::Midpoint);

/// Williams %R = -100*(H - C)/(H - L); equals %K - 100 on every window.
Eigen::VectorXd williams_r(const Eigen::Ref<const Eigen::VectorXd>& closes,
                           const Eigen::Ref<const Eigen::VectorXd>& highs,
                           const Eigen::Ref<const Eigen::VectorXd>& lows, int period = 14,
                           FlatWindowPolicy policy = FlatWindowPolicy::Midpoint);

/// Exponential moving average with multiplier 2/(n+1), seeded with the first
/// value of the series.
Eigen::VectorXd ema(const Eigen::Ref<const Eigen::VectorXd>& values, int n);

struct MacdResult {
    Eigen::VectorXd macd_line;    // EMA_12(close) - EMA_26(close)
    Eigen::VectorXd signal_line;  // EMA_9(macd_line); exported, not a model feature
};

/// Requires at least 26 + 9 observations.
MacdResult macd(const Eigen::Ref<const Eigen::VectorXd>& closes);

/// Price rate of change (C(t) - C(t-n)) / C(t-n), defined from index n on.
Eigen::VectorXd proc(const Eigen::Ref<const Eigen::VectorXd>& closes, int n);

/// On-balance volume with OBV(0) = 0; adds/subtracts volume on close
/// up/down moves, carries on ties.
Eigen::VectorXd obv(const Eigen::Ref<const Eigen::VectorXd>& closes,
                    const Eigen::Ref<const Eigen::VectorXd>& volumes);

struct IndicatorParams {
    int rsi_period = 14;
    int stoch_period = 14;
    int proc_window = 14;
    FlatWindowPolicy flat = FlatWindowPolicy::Midpoint;
};

/// Training table: one row per usable bar index, the six indicator values
/// plus a +/-1 direction label.
struct FeatureMatrix {
    Eigen::MatrixXd features;    // rows x 6, columns in Feature order
    Eigen::VectorXi labels;      // +1 / -1
    std::vector<int> bar_index;  // source bar index of each row
    int horizon_d = 0;

    Eigen::Index rows() const { return features.rows(); }
};

/// Inner-joins the six indicator streams with the labels on bar index and
/// drops warm-up rows (warm-up = max(26+9, rsi period, stoch period - 1,
/// proc window)). Throws NoUsableRows when nothing survives.
FeatureMatrix build_matrix(const SmoothedSeries& smoothed, const std::vector<LabeledRow>& labels,
                           const IndicatorParams& params);

/// CSV dump/load, header `index,rsi,stoch_k,williams_r,macd,proc,obv,label`.
/// Values round-trip exactly.
std::string to_csv(const FeatureMatrix& matrix);
FeatureMatrix matrix_from_csv(std::istream& input);

}  // namespace trendforest
