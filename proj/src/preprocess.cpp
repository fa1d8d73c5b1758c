#include "trendforest/preprocess.hpp"

namespace trendforest {

Eigen::VectorXd smooth_channel(const Eigen::Ref<const Eigen::VectorXd>& values, double alpha) {
    Eigen::VectorXd out(values.size());
    if (values.size() == 0) return out;
    out[0] = values[0];
    for (Eigen::Index t = 1; t < values.size(); ++t)
        out[t] = alpha * values[t] + (1.0 - alpha) * out[t - 1];
    return out;
}

SmoothedSeries smooth(const OhlcvSeries& series, double alpha) {
    if (series.bars.empty()) throw EmptySeries{};
    if (!(alpha > 0.0) || alpha > 1.0) throw AlphaOutOfRange(alpha);

    const auto n = static_cast<Eigen::Index>(series.bars.size());
    SmoothedSeries out;
    out.alpha = alpha;
    Eigen::VectorXd open(n), high(n), low(n), close(n), volume(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& b = series.bars[i];
        open[i] = b.open;
        high[i] = b.high;
        low[i] = b.low;
        close[i] = b.close;
        volume[i] = b.volume;
    }
    out.open = smooth_channel(open, alpha);
    out.high = smooth_channel(high, alpha);
    out.low = smooth_channel(low, alpha);
    out.close = smooth_channel(close, alpha);
    out.volume = smooth_channel(volume, alpha);
    return out;
}

std::vector<LabeledRow> label(const Eigen::Ref<const Eigen::VectorXd>& closes, int horizon_d) {
    const auto n = closes.size();
    if (horizon_d < 1 || horizon_d >= n) throw HorizonTooLarge(horizon_d, n);
    std::vector<LabeledRow> rows;
    rows.reserve(static_cast<std::size_t>(n - horizon_d));
    for (Eigen::Index i = 0; i + horizon_d < n; ++i)
        rows.push_back({static_cast<int>(i), closes[i + horizon_d] > closes[i] ? +1 : -1,
                        horizon_d});
    return rows;
}

Eigen::VectorXd close_channel(const OhlcvSeries& series) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(series.bars.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = series.bars[i].close;
    return out;
}

}  // namespace trendforest
