#include "dsep/window.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "dsep/error.hpp"

namespace dsep {

namespace {

constexpr std::array<std::string_view, 11> kChannelNames{"va", "vb",  "vc", "vab", "vbc", "vca",
                                                         "ia", "ib", "ic", "v",   "i"};

}  // namespace

std::string_view channel_name(Channel c) noexcept {
    return kChannelNames[static_cast<std::size_t>(c)];
}

std::optional<Channel> parse_channel(std::string_view name) noexcept {
    for (std::size_t k = 0; k < kChannelNames.size(); ++k)
        if (kChannelNames[k] == name) return static_cast<Channel>(k);
    return std::nullopt;
}

bool is_voltage(Channel c) noexcept {
    switch (c) {
        case Channel::ia:
        case Channel::ib:
        case Channel::ic:
        case Channel::i: return false;
        default: return true;
    }
}

std::vector<Channel> required_channels(ConnectionKind conn) {
    switch (conn) {
        case ConnectionKind::SinglePhase: return {Channel::v, Channel::i};
        case ConnectionKind::GroundedWye:
            return {Channel::va, Channel::vb, Channel::vc, Channel::ia, Channel::ib, Channel::ic};
        case ConnectionKind::Delta:
            return {Channel::va,  Channel::vb,  Channel::vc,  Channel::vab, Channel::vbc,
                    Channel::vca, Channel::ia, Channel::ib, Channel::ic};
    }
    return {};
}

std::span<const double> SampledWindow::channel(Channel c) const {
    auto it = channels_.find(c);
    if (it == channels_.end())
        throw Error(ErrorCode::ChannelMismatch, "window has no channel '" + std::string(channel_name(c)) + "'");
    return it->second;
}

SampledWindow SampledWindow::slice(std::size_t first, std::size_t count) const {
    if (first + count > n_ || count < 3)
        throw Error(ErrorCode::WindowTooShort,
                    "slice [" + std::to_string(first) + ", +" + std::to_string(count) + ") of " +
                        std::to_string(n_) + " samples");
    ChannelMap out;
    for (const auto& [c, samples] : channels_)
        out.emplace(c, std::vector<double>(samples.begin() + static_cast<std::ptrdiff_t>(first),
                                           samples.begin() + static_cast<std::ptrdiff_t>(first + count)));
    return SampledWindow(dt_, time(first), count, std::move(out));
}

SampledWindow SampledWindow::scaled(double factor) const {
    ChannelMap out = channels_;
    for (auto& [c, samples] : out)
        for (double& s : samples) s *= factor;
    return SampledWindow(dt_, t0_, n_, std::move(out));
}

SampledWindow make_window(double dt, SampledWindow::ChannelMap channel_data, double t0) {
    if (!(std::isfinite(dt) && dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "sample interval must be > 0");
    if (channel_data.empty()) throw Error(ErrorCode::LengthMismatch, "window needs at least one channel");
    const std::size_t n = channel_data.begin()->second.size();
    for (const auto& [c, samples] : channel_data) {
        if (samples.size() != n)
            throw Error(ErrorCode::LengthMismatch, "channel '" + std::string(channel_name(c)) + "' has " +
                                                       std::to_string(samples.size()) + " samples, expected " +
                                                       std::to_string(n));
        if (!std::all_of(samples.begin(), samples.end(), [](double x) { return std::isfinite(x); }))
            throw Error(ErrorCode::NonFinite, "channel '" + std::string(channel_name(c)) + "' has non-finite samples");
    }
    if (n < 3) throw Error(ErrorCode::LengthMismatch, "window needs at least 3 samples, got " + std::to_string(n));
    return SampledWindow(dt, t0, n, std::move(channel_data));
}

SampledWindow make_window(double dt, const std::map<std::string, std::vector<double>>& channel_data, double t0) {
    SampledWindow::ChannelMap typed;
    for (const auto& [name, samples] : channel_data) {
        auto c = parse_channel(name);
        if (!c) throw Error(ErrorCode::UnknownChannel, "unknown channel '" + name + "'");
        typed.emplace(*c, samples);
    }
    return make_window(dt, std::move(typed), t0);
}

SampledWindow inject_noise(const SampledWindow& w, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw Error(ErrorCode::InvalidArgument, "noise fraction must lie in [0, 1)");
    SampledWindow::ChannelMap out = w.channels();
    if (fraction == 0.0) return make_window(w.dt(), std::move(out), w.t0());

    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& [c, samples] : out) {
        double peak = 0.0;
        for (double s : samples) peak = std::max(peak, std::abs(s));
        const double amplitude = fraction * peak;
        for (double& s : samples) s += amplitude * unit(engine);
    }
    return make_window(w.dt(), std::move(out), w.t0());
}

Phasor fundamental_phasor(std::span<const double> samples, double dt, double f0, double t0) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (n < 3) throw Error(ErrorCode::WindowTooShort, "phasor fit needs at least 3 samples");
    const double omega = 2.0 * std::numbers::pi * f0;
    Eigen::MatrixXd basis(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        basis(k, 0) = std::cos(omega * t);
        basis(k, 1) = std::sin(omega * t);
        basis(k, 2) = 1.0;
        rhs(k) = samples[static_cast<std::size_t>(k)];
    }
    const Eigen::Vector3d coef = basis.colPivHouseholderQr().solve(rhs);
    // a cos(wt) + b sin(wt) = sqrt(2) Re{X e^{jwt}} with X = (a - j b) / sqrt(2)
    return Phasor(coef(0) / std::numbers::sqrt2, -coef(1) / std::numbers::sqrt2);
}

}  // namespace dsep
