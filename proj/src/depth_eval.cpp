// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The NightForge Authors.

#include "nightforge/depth_eval.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nightforge/simd/kernels.hpp"

namespace nightforge {
namespace {

double median_of(std::vector<double> values) {
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), mid);
    return (lower + upper) / 2.0;
}

void check_same_dims(const DepthMap& pred, const DepthMap& gt) {
    if (pred.dims() != gt.dims() || pred.meters.channels() != 1 || gt.meters.channels() != 1) {
        throw Error(ErrorKind::DimMismatch, "prediction and ground truth must share H x W x 1");
    }
}

std::vector<std::uint8_t> evaluation_mask(const DepthMap& pred, const DepthMap& gt,
                                          const EvalConfig& cfg) {
    auto p = pred.meters.values();
    auto g = gt.meters.values();
    std::vector<std::uint8_t> mask(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const bool gt_ok = (gt.valid.empty() || gt.valid[i] != 0) && std::isfinite(g[i]) &&
                           g[i] >= cfg.min_depth && g[i] <= cfg.max_depth;
        mask[i] = gt_ok && std::isfinite(p[i]) ? 1 : 0;
    }
    return mask;
}

}  // namespace

std::string_view to_string(Alignment a) noexcept {
    return a == Alignment::median ? "median" : "none";
}

Alignment parse_alignment(std::string_view text) {
    if (text == "none") return Alignment::none;
    if (text == "median") return Alignment::median;
    throw Error(ErrorKind::InvalidConfig, "alignment must be none or median");
}

void EvalConfig::validate() const {
    if (!(min_depth > 0.0) || !(min_depth < max_depth) || !std::isfinite(max_depth)) {
        throw Error(ErrorKind::InvalidConfig, "need 0 < min_depth < max_depth");
    }
}

DepthMap align_median(const DepthMap& pred, const DepthMap& gt, std::span<const std::uint8_t> mask) {
    check_same_dims(pred, gt);
    if (mask.size() != gt.meters.size()) throw Error(ErrorKind::DimMismatch, "mask size differs from maps");
    std::vector<double> pv;
    std::vector<double> gv;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0) continue;
        pv.push_back(pred.meters.values()[i]);
        gv.push_back(gt.meters.values()[i]);
    }
    if (pv.empty()) throw Error(ErrorKind::EmptyMask, "median alignment over empty mask");
    const double pred_median = median_of(std::move(pv));
    const double gt_median = median_of(std::move(gv));
    if (pred_median == 0.0 || !std::isfinite(pred_median)) {
        throw Error(ErrorKind::ZeroMedian, "prediction median is zero");
    }
    const double ratio = gt_median / pred_median;
    DepthMap out = pred;
    for (float& v : out.meters.values()) v = static_cast<float>(static_cast<double>(v) * ratio);
    return out;
}

MetricsReport compute_metrics(const DepthMap& pred, const DepthMap& gt, const EvalConfig& cfg) {
    cfg.validate();
    check_same_dims(pred, gt);
    const std::vector<std::uint8_t> mask = evaluation_mask(pred, gt, cfg);

    const DepthMap* source = &pred;
    DepthMap aligned;
    if (cfg.alignment == Alignment::median) {
        aligned = align_median(pred, gt, mask);
        source = &aligned;
    }

    std::vector<double> p;
    std::vector<double> g;
    p.reserve(mask.size());
    g.reserve(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0) continue;
        double v = source->meters.values()[i];
        if (cfg.clamp_prediction) v = std::clamp(v, cfg.min_depth, cfg.max_depth);
        p.push_back(v);
        g.push_back(gt.meters.values()[i]);
    }
    if (p.empty()) throw Error(ErrorKind::EmptyMask, "no valid ground-truth pixels");

    const simd::DepthErrorSums sums = simd::active().depth_error_sums(p.data(), g.data(), p.size());
    double log_sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::log(p[i]) - std::log(g[i]);
        log_sq += d * d;
    }

    const double n = static_cast<double>(p.size());
    MetricsReport r;
    r.n_valid = p.size();
    r.abs_rel = sums.abs_rel / n;
    r.sq_rel = sums.sq_rel / n;
    r.rmse = std::sqrt(sums.sq / n);
    r.rmse_log = std::sqrt(log_sq / n);
    for (int k = 0; k < 3; ++k) r.delta[k] = static_cast<double>(sums.delta[k]) / n;
    return r;
}

MetricsReport aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw Error(ErrorKind::EmptyList, "nothing to aggregate");
    if (reports.size() == 1) return reports.front();
    double total = 0.0;
    double abs_rel = 0.0, sq_rel = 0.0, sq = 0.0, log_sq = 0.0;
    double delta[3] = {0.0, 0.0, 0.0};
    for (const auto& r : reports) {
        const double n = static_cast<double>(r.n_valid);
        total += n;
        abs_rel += r.abs_rel * n;
        sq_rel += r.sq_rel * n;
        sq += r.rmse * r.rmse * n;
        log_sq += r.rmse_log * r.rmse_log * n;
        for (int k = 0; k < 3; ++k) delta[k] += r.delta[k] * n;
    }
    MetricsReport out;
    for (const auto& r : reports) out.n_valid += r.n_valid;
    if (total == 0.0) return out;
    out.abs_rel = abs_rel / total;
    out.sq_rel = sq_rel / total;
    out.rmse = std::sqrt(sq / total);
    out.rmse_log = std::sqrt(log_sq / total);
    for (int k = 0; k < 3; ++k) out.delta[k] = delta[k] / total;
    return out;
}

}  // namespace nightforge
