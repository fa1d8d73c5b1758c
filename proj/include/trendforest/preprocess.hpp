#pragma once

#include <vector>

#include <Eigen/Core>

#include "trendforest/market_data.hpp"

namespace trendforest {

/// All five channels of a series run through the exponential smoother
/// S_0 = Y_0, S_t = alpha*Y_t + (1-alpha)*S_{t-1}.
struct SmoothedSeries {
    double alpha = 1.0;
    Eigen::VectorXd open, high, low, close, volume;

    Eigen::Index size() const { return close.size(); }
};

/// Smooths one channel; strictly causal (S_t depends on Y_0..Y_t only).
Eigen::VectorXd smooth_channel(const Eigen::Ref<const Eigen::VectorXd>& values, double alpha);

/// Smooths all five channels with a common alpha in (0,1].
/// Throws EmptySeries / AlphaOutOfRange.
SmoothedSeries smooth(const OhlcvSeries& series, double alpha);

/// Direction of the close d bars ahead: +1 for a rise, -1 otherwise
/// (zero change counts as a fall so labels stay binary).
struct LabeledRow {
    int index;
    int label;  // +1 or -1
    int horizon_d;
};

/// One row per index i with i + d < length; throws HorizonTooLarge.
std::vector<LabeledRow> label(const Eigen::Ref<const Eigen::VectorXd>& closes, int horizon_d);

/// Convenience accessors for the raw channels of a series.
Eigen::VectorXd close_channel(const OhlcvSeries& series);

}  // namespace trendforest
