#include "trendforest/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>

#include "trendforest/text.hpp"

namespace trendforest {

const std::array<std::string, kNumFeatures> kFeatureNames = {"rsi",  "stoch_k", "williams_r",
                                                             "macd", "proc",    "obv"};
const std::array<std::string, kNumFeatures> kFeatureDisplayNames = {
    "RSI", "Stochastic Oscillator", "Williams", "MACD", "Price Rate Of Change",
    "On Balance Volume"};

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Sliding extrema over a trailing window of `period` entries, inclusive of
// the current one. Calls `emit(t, lo, hi)` for every t >= period - 1.
template <typename Emit>
void sliding_extrema(const Eigen::Ref<const Eigen::VectorXd>& lows,
                     const Eigen::Ref<const Eigen::VectorXd>& highs, int period, Emit emit) {
    std::deque<Eigen::Index> min_q, max_q;  // indices, values monotone
    for (Eigen::Index t = 0; t < lows.size(); ++t) {
        while (!min_q.empty() && lows[min_q.back()] >= lows[t]) min_q.pop_back();
        min_q.push_back(t);
        while (!max_q.empty() && highs[max_q.back()] <= highs[t]) max_q.pop_back();
        max_q.push_back(t);
        if (min_q.front() <= t - period) min_q.pop_front();
        if (max_q.front() <= t - period) max_q.pop_front();
        if (t >= period - 1) emit(t, lows[min_q.front()], highs[max_q.front()]);
    }
}

}  // namespace

Eigen::VectorXd rsi(const Eigen::Ref<const Eigen::VectorXd>& closes, int period) {
    const auto n = closes.size();
    if (period < 1 || n <= period)
        throw SeriesTooShort("rsi needs more than " + std::to_string(period) + " closes");

    // Prefix sums of gains and losses over the one-day changes.
    Eigen::VectorXd gain_sum(n), loss_sum(n);
    gain_sum[0] = loss_sum[0] = 0.0;
    for (Eigen::Index t = 1; t < n; ++t) {
        const double change = closes[t] - closes[t - 1];
        gain_sum[t] = gain_sum[t - 1] + std::max(change, 0.0);
        loss_sum[t] = loss_sum[t - 1] + std::max(-change, 0.0);
    }

    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, kNan);
    for (Eigen::Index t = period; t < n; ++t) {
        const double gain = gain_sum[t] - gain_sum[t - period];
        const double loss = loss_sum[t] - loss_sum[t - period];
        if (gain == 0.0 && loss == 0.0)
            out[t] = 50.0;  // fully flat window
        else if (loss == 0.0)
            out[t] = 100.0;
        else if (gain == 0.0)
            out[t] = 0.0;
        else
            out[t] = 100.0 - 100.0 / (1.0 + gain / loss);
    }
    return out;
}

Eigen::VectorXd stochastic_k(const Eigen::Ref<const Eigen::VectorXd>& closes,
                             const Eigen::Ref<const Eigen::VectorXd>& highs,
                             const Eigen::Ref<const Eigen::VectorXd>& lows, int period,
                             FlatWindowPolicy policy) {
    const auto n = closes.size();
    if (highs.size() != n || lows.size() != n)
        throw LengthMismatch("stochastic_k channels differ in length");
    if (period < 1 || n < period)
        throw SeriesTooShort("stochastic_k needs at least " + std::to_string(period) + " bars");

    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, kNan);
    sliding_extrema(lows, highs, period, [&](Eigen::Index t, double lo, double hi) {
        if (hi == lo) {
            if (policy == FlatWindowPolicy::Strict) throw FlatWindow(t);
            out[t] = 50.0;
        } else {
            out[t] = 100.0 * (closes[t] - lo) / (hi - lo);
        }
    });
    return out;
}

Eigen::VectorXd williams_r(const Eigen::Ref<const Eigen::VectorXd>& closes,
                           const Eigen::Ref<const Eigen::VectorXd>& highs,
                           const Eigen::Ref<const Eigen::VectorXd>& lows, int period,
                           FlatWindowPolicy policy) {
    const auto n = closes.size();
    if (highs.size() != n || lows.size() != n)
        throw LengthMismatch("williams_r channels differ in length");
    if (period < 1 || n < period)
        throw SeriesTooShort("williams_r needs at least " + std::to_string(period) + " bars");

    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, kNan);
    sliding_extrema(lows, highs, period, [&](Eigen::Index t, double lo, double hi) {
        if (hi == lo) {
            if (policy == FlatWindowPolicy::Strict) throw FlatWindow(t);
            out[t] = -50.0;
        } else {
            out[t] = -100.0 * (hi - closes[t]) / (hi - lo);
        }
    });
    return out;
}

Eigen::VectorXd ema(const Eigen::Ref<const Eigen::VectorXd>& values, int n) {
    const double k = 2.0 / (n + 1.0);
    return smooth_channel(values, k);
}

MacdResult macd(const Eigen::Ref<const Eigen::VectorXd>& closes) {
    if (closes.size() < 26 + 9)
        throw SeriesTooShort("macd needs at least 35 closes, got " +
                             std::to_string(closes.size()));
    MacdResult out;
    out.macd_line = ema(closes, 12) - ema(closes, 26);
    out.signal_line = ema(out.macd_line, 9);
    return out;
}

Eigen::VectorXd proc(const Eigen::Ref<const Eigen::VectorXd>& closes, int n) {
    if (n < 1 || closes.size() <= n)
        throw SeriesTooShort("proc needs more than " + std::to_string(n) + " closes");
    Eigen::VectorXd out = Eigen::VectorXd::Constant(closes.size(), kNan);
    for (Eigen::Index t = n; t < closes.size(); ++t)
        out[t] = (closes[t] - closes[t - n]) / closes[t - n];
    return out;
}

Eigen::VectorXd obv(const Eigen::Ref<const Eigen::VectorXd>& closes,
                    const Eigen::Ref<const Eigen::VectorXd>& volumes) {
    if (closes.size() != volumes.size()) throw LengthMismatch("obv closes vs volumes");
    if (closes.size() == 0) throw LengthMismatch("obv input is empty");
    Eigen::VectorXd out(closes.size());
    out[0] = 0.0;
    for (Eigen::Index t = 1; t < closes.size(); ++t) {
        if (closes[t] > closes[t - 1])
            out[t] = out[t - 1] + volumes[t];
        else if (closes[t] < closes[t - 1])
            out[t] = out[t - 1] - volumes[t];
        else
            out[t] = out[t - 1];
    }
    return out;
}

FeatureMatrix build_matrix(const SmoothedSeries& smoothed, const std::vector<LabeledRow>& labels,
                           const IndicatorParams& params) {
    const auto n = smoothed.size();
    const int warmup = std::max({26 + 9, params.rsi_period, params.stoch_period - 1,
                                 params.proc_window});
    if (n <= warmup) throw NoUsableRows{};

    const auto rsi_s = rsi(smoothed.close, params.rsi_period);
    const auto stoch_s =
        stochastic_k(smoothed.close, smoothed.high, smoothed.low, params.stoch_period, params.flat);
    const auto will_s =
        williams_r(smoothed.close, smoothed.high, smoothed.low, params.stoch_period, params.flat);
    const auto macd_s = macd(smoothed.close);
    const auto proc_s = proc(smoothed.close, params.proc_window);
    const auto obv_s = obv(smoothed.close, smoothed.volume);

    // Labels indexed by bar position for the inner join.
    std::vector<int> label_at(static_cast<std::size_t>(n), 0);
    int horizon = 0;
    for (const auto& row : labels) {
        if (row.index < 0 || row.index >= n) continue;
        label_at[static_cast<std::size_t>(row.index)] = row.label;
        horizon = row.horizon_d;
    }

    std::vector<int> usable;
    for (Eigen::Index i = warmup; i < n; ++i)
        if (label_at[static_cast<std::size_t>(i)] != 0) usable.push_back(static_cast<int>(i));
    if (usable.empty()) throw NoUsableRows{};

    FeatureMatrix matrix;
    matrix.horizon_d = horizon;
    matrix.features.resize(static_cast<Eigen::Index>(usable.size()), kNumFeatures);
    matrix.labels.resize(static_cast<Eigen::Index>(usable.size()));
    matrix.bar_index = usable;
    for (std::size_t r = 0; r < usable.size(); ++r) {
        const auto i = usable[r];
        matrix.features(static_cast<Eigen::Index>(r), kRsi) = rsi_s[i];
        matrix.features(static_cast<Eigen::Index>(r), kStochK) = stoch_s[i];
        matrix.features(static_cast<Eigen::Index>(r), kWilliamsR) = will_s[i];
        matrix.features(static_cast<Eigen::Index>(r), kMacd) = macd_s.macd_line[i];
        matrix.features(static_cast<Eigen::Index>(r), kProc) = proc_s[i];
        matrix.features(static_cast<Eigen::Index>(r), kObv) = obv_s[i];
        matrix.labels[static_cast<Eigen::Index>(r)] = label_at[static_cast<std::size_t>(i)];
    }
    if (!matrix.features.allFinite()) throw NoUsableRows{};
    return matrix;
}

std::string to_csv(const FeatureMatrix& matrix) {
    std::string out = "index,rsi,stoch_k,williams_r,macd,proc,obv,label\n";
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        out += std::to_string(matrix.bar_index[static_cast<std::size_t>(r)]);
        for (int c = 0; c < kNumFeatures; ++c) {
            out += ',';
            out += format_double(matrix.features(r, c));
        }
        out += ',';
        out += std::to_string(matrix.labels[r]);
        out += '\n';
    }
    return out;
}

FeatureMatrix matrix_from_csv(std::istream& input) {
    std::string line;
    int line_no = 0;
    if (!std::getline(input, line)) throw EmptyInput{};
    ++line_no;
    if (trim(line) != "index,rsi,stoch_k,williams_r,macd,proc,obv,label")
        throw MalformedRow(line_no, "unexpected feature matrix header");

    std::vector<int> indices;
    std::vector<std::array<double, kNumFeatures>> rows;
    std::vector<int> labels;
    while (std::getline(input, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty()) continue;
        auto fields = split(text, ',');
        if (fields.size() != 2 + kNumFeatures)
            throw MalformedRow(line_no, "expected 8 fields");
        auto index = parse_int(trim(fields[0]));
        if (!index) throw MalformedRow(line_no, "bad index");
        std::array<double, kNumFeatures> values{};
        for (int c = 0; c < kNumFeatures; ++c) {
            auto v = parse_double(trim(fields[static_cast<std::size_t>(c) + 1]));
            if (!v || !std::isfinite(*v)) throw MalformedRow(line_no, "bad feature value");
            values[static_cast<std::size_t>(c)] = *v;
        }
        auto lab = parse_int(trim(fields.back()));
        if (!lab || (*lab != 1 && *lab != -1)) throw MalformedRow(line_no, "label must be +1/-1");
        indices.push_back(static_cast<int>(*index));
        rows.push_back(values);
        labels.push_back(static_cast<int>(*lab));
    }
    if (rows.empty()) throw EmptyInput{};

    FeatureMatrix matrix;
    matrix.bar_index = std::move(indices);
    matrix.features.resize(static_cast<Eigen::Index>(rows.size()), kNumFeatures);
    matrix.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int c = 0; c < kNumFeatures; ++c)
            matrix.features(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
        matrix.labels[static_cast<Eigen::Index>(r)] = labels[r];
    }
    return matrix;
}

}  // namespace trendforest
